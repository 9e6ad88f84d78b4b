"""Third-order SSP Runge-Kutta stepping and step-size rules."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np


class NonFiniteStateError(FloatingPointError):
    def __init__(self, stage: int):
        self.stage = stage
        super().__init__(f"non-finite state after Runge-Kutta stage {stage}")


class DtRule(enum.Enum):
    CFL = "cfl"
    ACCURACY = "acc"


@dataclass(frozen=True)
class TimeControls:
    """``dt_rule=ACCURACY`` gives ``dt = cfl * dx**exponent`` (capped by the CFL rule)."""

    t_final: float
    cfl: float = 0.4
    dt_rule: DtRule = DtRule.CFL
    exponent: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.cfl <= 1.0:
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl}")
        if not self.t_final > 0.0:
            raise ValueError(f"t_final must be positive, got {self.t_final}")
        object.__setattr__(self, "dt_rule", DtRule(self.dt_rule))


def ssp_rk3_step(rhs: Callable[[np.ndarray], np.ndarray], u: np.ndarray, dt: float) -> np.ndarray:
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    u1 = u + dt * rhs(u)
    if not np.all(np.isfinite(u1)):
        raise NonFiniteStateError(1)
    u2 = 0.75 * u + 0.25 * u1 + 0.25 * dt * rhs(u1)
    if not np.all(np.isfinite(u2)):
        raise NonFiniteStateError(2)
    out = u / 3.0 + (2.0 / 3.0) * u2 + (2.0 / 3.0) * dt * rhs(u2)
    if not np.all(np.isfinite(out)):
        raise NonFiniteStateError(3)
    return out


# weights of the three stage operators in the composite update
# u_{n+1} = u_n + dt * (L0/6 + L1/6 + 2 L2/3)
STAGE_WEIGHTS = (1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0)


def compute_dt(alpha: float | tuple[float, ...], spacing: float | tuple[float, ...], controls: TimeControls) -> float:
    """Step size from the largest wave speed(s) and grid spacing(s).

    With several directions the CFL rule uses ``min(dx) / max(alpha)``.
    """
    alphas = np.atleast_1d(np.asarray(alpha, dtype=float))
    h = float(np.min(np.atleast_1d(spacing)))
    amax = float(np.max(alphas))
    cfl_dt = controls.cfl * h / amax if amax > 0 else np.inf
    if controls.dt_rule is DtRule.CFL:
        dt = cfl_dt
    else:
        dt = min(controls.cfl * h**controls.exponent, cfl_dt)
    return float(min(dt, controls.t_final))


def accuracy_exponent(scheme) -> float:
    """``5/3`` for the WENO schemes, ``1`` for ENO, so ``dt**3 ~ dx**order``."""
    from .reconstruction import SchemeId

    return 1.0 if SchemeId.parse(scheme).is_eno else 5.0 / 3.0


def integrate(
    rhs: Callable[[np.ndarray], np.ndarray],
    u0: np.ndarray,
    controls: TimeControls,
    dt_for: Callable[[np.ndarray], float],
    on_step: Callable[[float, float, np.ndarray], None] | None = None,
):
    """Advance ``u0`` to ``controls.t_final``; the last step lands exactly on it.

    Returns ``(u, t, steps)``.
    """
    u = np.array(u0, dtype=float)
    t = 0.0
    steps = 0
    while t < controls.t_final:
        remaining = controls.t_final - t
        dt = dt_for(u)
        last = dt >= remaining * (1.0 - 1e-12)
        if last:
            dt = remaining
        u = ssp_rk3_step(rhs, u, dt)
        t = controls.t_final if last else t + dt
        steps += 1
        if on_step is not None:
            on_step(t, dt, u)
    return u, t, steps
