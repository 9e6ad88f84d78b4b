"""Smoothness indicators and nonlinear WENO weights."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .polynomials import CandidateSet, candidate_coefficients, cell_lengths

EPS = 1e-40
EPS_Z = 1e-40


class Family(enum.Enum):
    JS = "js"
    Z = "z"
    L = "l"
    ZL = "zl"


@dataclass(frozen=True)
class SmoothnessTriple:
    beta0: float
    beta1: float
    beta2: float
    family: Family

    def as_array(self) -> np.ndarray:
        return np.array([self.beta0, self.beta1, self.beta2])


@dataclass(frozen=True)
class LinearWeights:
    gamma: tuple[float, float, float]
    gamma_tilde: tuple[float, float, float]


@dataclass(frozen=True)
class WeightSet:
    omega: tuple[float, float, float]
    omega_tilde: tuple[float, float, float]


def linear_weights() -> LinearWeights:
    return LinearWeights((0.1, 0.6, 0.3), (0.3, 0.6, 0.1))


GAMMA = np.array(linear_weights().gamma)
GAMMA_TILDE = np.array(linear_weights().gamma_tilde)


# -- array kernels; candidate index on axis 0 ---------------------------------


def js_indicators(b, c, dx: float):
    """Jiang-Shu indicators from local coefficients.

    Integrating ``dx (p')**2 + dx**3 (p'')**2`` over the cell gives
    ``(b dx)**2 + 13/3 (c dx**2)**2``.
    """
    bh = b * dx
    ch = c * (dx * dx)
    return bh * bh + (13.0 / 3.0) * ch * ch


def length_indicators(b, c, dx: float):
    lengths = cell_lengths(b, c, dx)
    return lengths * lengths


def z_indicators(beta, eps: float = EPS_Z):
    tau = np.abs(beta[0] - beta[2])
    return 1.0 / (1.0 + tau / (beta + eps))


def weights_from_indicators(beta, gamma, eps: float = EPS):
    gamma = np.asarray(gamma, dtype=float).reshape((3,) + (1,) * (np.ndim(beta) - 1))
    alpha = gamma / (eps + beta) ** 2
    return alpha / alpha.sum(axis=0)


# -- scalar-level operations ---------------------------------------------------


def _coefficients(vbar, dx):
    v = np.asarray(vbar, dtype=float)
    if v.shape != (5,):
        raise ValueError(f"expected 5 cell averages, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("non-finite input")
    _, b, c = candidate_coefficients(v, dx)
    return b[:, 0], c[:, 0]


def beta_js(vbar, dx: float) -> SmoothnessTriple:
    b, c = _coefficients(vbar, dx)
    return SmoothnessTriple(*map(float, js_indicators(b, c, dx)), family=Family.JS)


def beta_length(cands: CandidateSet) -> SmoothnessTriple:
    b = np.array([p.b for p in cands])
    c = np.array([p.c for p in cands])
    return SmoothnessTriple(*map(float, length_indicators(b, c, cands.dx)), family=Family.L)


def z_transform(beta: SmoothnessTriple, eps: float = EPS_Z) -> SmoothnessTriple:
    z = z_indicators(beta.as_array(), eps)
    family = Family.ZL if beta.family in (Family.L, Family.ZL) else Family.Z
    return SmoothnessTriple(*map(float, z), family=family)


def nonlinear_weights(
    beta: SmoothnessTriple, gamma: LinearWeights | None = None, eps: float = EPS
) -> WeightSet:
    if eps <= 0:
        raise ValueError("eps must be positive")
    gamma = gamma or linear_weights()
    b = beta.as_array()
    omega = weights_from_indicators(b, gamma.gamma, eps)
    omega_tilde = weights_from_indicators(b, gamma.gamma_tilde, eps)
    return WeightSet(tuple(map(float, omega)), tuple(map(float, omega_tilde)))
