"""Interface values for the six ENO/WENO schemes."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .polynomials import CandidateSet, candidate_coefficients
from .stencil import classical_candidates, length_candidates
from .weights import (
    EPS,
    EPS_Z,
    GAMMA,
    GAMMA_TILDE,
    js_indicators,
    length_indicators,
    weights_from_indicators,
    z_indicators,
)


class SchemeId(enum.Enum):
    ENO3 = "eno3"
    ENO3L = "eno3-l"
    WENO5JS = "weno5-js"
    WENO5Z = "weno5-z"
    WENO5L = "weno5-l"
    WENO5ZL = "weno5-zl"

    @classmethod
    def parse(cls, name: "str | SchemeId") -> "SchemeId":
        if isinstance(name, SchemeId):
            return name
        key = name.strip().lower().replace("_", "-")
        for s in cls:
            if key in (s.value, s.name.lower()):
                return s
        valid = ", ".join(s.value for s in cls)
        raise ValueError(f"unknown scheme {name!r}; valid: {valid}")

    @property
    def is_eno(self) -> bool:
        return self in (SchemeId.ENO3, SchemeId.ENO3L)

    @property
    def column(self) -> str:
        return self.value.replace("-", "_")


# rows: candidate j; columns: weights on v[i-2+j], v[i-1+j], v[i+j]
RIGHT_FACE = np.array(
    [
        [1 / 3, -7 / 6, 11 / 6],
        [-1 / 6, 5 / 6, 1 / 3],
        [1 / 3, 5 / 6, -1 / 6],
    ]
)
LEFT_FACE = np.array(
    [
        [-1 / 6, 5 / 6, 1 / 3],
        [1 / 3, 5 / 6, -1 / 6],
        [11 / 6, -7 / 6, 1 / 3],
    ]
)

@dataclass
class InterfaceStates:
    """Per-cell face values: ``minus`` at the right face, ``plus`` at the left face."""

    minus: np.ndarray
    plus: np.ndarray


def face_values(v: np.ndarray):
    """Right- and left-face values of all three candidates.

    ``v`` holds averages along the last axis; returns two arrays of shape
    ``(3, ..., n-4)`` for cells ``2 .. n-3``.
    """
    n = v.shape[-1]
    s = [v[..., k : n - 4 + k] for k in range(5)]
    right = np.empty((3,) + s[0].shape)
    left = np.empty_like(right)
    for j in range(3):
        cr, cl = RIGHT_FACE[j], LEFT_FACE[j]
        right[j] = cr[0] * s[j] + cr[1] * s[j + 1] + cr[2] * s[j + 2]
        left[j] = cl[0] * s[j] + cl[1] * s[j + 1] + cl[2] * s[j + 2]
    return right, left


def candidate_face_values(cands: CandidateSet):
    """``(p_j(x_{i-1/2}), p_j(x_{i+1/2}))`` for ``j = 0, 1, 2``."""
    lo, hi = cands.faces
    return tuple((float(p(lo)), float(p(hi))) for p in cands)


_KERNEL_CODE = {s: k for k, s in enumerate(SchemeId)}


def reconstruct(
    scheme: SchemeId | str, field: np.ndarray, dx: float = 1.0, compiled: bool | None = None
) -> InterfaceStates:
    """Reconstruct face values from averages along the last axis of ``field``.

    The result covers cells ``2 .. n-3`` of the input, so a field padded with
    ``g >= 2`` ghost cells per side yields ``n_interior + 2 (g - 2)`` cells.
    ``dx`` only matters for the length-based schemes.  ``compiled`` selects
    the numba kernel (default when available) or the numpy reference path.
    """
    scheme = SchemeId.parse(scheme)
    v = np.asarray(field, dtype=float)
    if v.shape[-1] < 5:
        raise ValueError(f"need at least 5 cells along the last axis, got {v.shape[-1]}")
    if compiled is None:
        compiled = _kernels.AVAILABLE
    if compiled:
        rows = np.ascontiguousarray(v.reshape(-1, v.shape[-1]))
        minus, plus = _kernels.reconstruct_rows(rows, float(dx), _KERNEL_CODE[scheme])
        out_shape = v.shape[:-1] + (v.shape[-1] - 4,)
        return InterfaceStates(minus.reshape(out_shape), plus.reshape(out_shape))
    right, left = face_values(v)

    if scheme is SchemeId.ENO3:
        j = classical_candidates(v)[None]
        return InterfaceStates(
            np.take_along_axis(right, j, 0)[0], np.take_along_axis(left, j, 0)[0]
        )

    if scheme is SchemeId.ENO3L:
        _, b, c = candidate_coefficients(v, dx)
        j = length_candidates(b, c, dx)[0][None]
        return InterfaceStates(
            np.take_along_axis(right, j, 0)[0], np.take_along_axis(left, j, 0)[0]
        )

    beta = smoothness(scheme, v, dx)
    omega = weights_from_indicators(beta, GAMMA, EPS)
    omega_t = weights_from_indicators(beta, GAMMA_TILDE, EPS)
    minus = omega[0] * right[0] + omega[1] * right[1] + omega[2] * right[2]
    plus = omega_t[0] * left[0] + omega_t[1] * left[1] + omega_t[2] * left[2]
    return InterfaceStates(minus, plus)


def smoothness(scheme: SchemeId, v: np.ndarray, dx: float) -> np.ndarray:
    """Stacked indicators ``(3, ..., n-4)`` for a WENO scheme."""
    _, b, c = candidate_coefficients(v, dx)
    if scheme in (SchemeId.WENO5JS, SchemeId.WENO5Z):
        beta = js_indicators(b, c, dx)
    elif scheme in (SchemeId.WENO5L, SchemeId.WENO5ZL):
        beta = length_indicators(b, c, dx)
    else:
        raise ValueError(f"{scheme} has no smoothness indicators")
    if scheme in (SchemeId.WENO5Z, SchemeId.WENO5ZL):
        beta = z_indicators(beta, EPS_Z)
    return beta
