"""Grids, ghost-cell boundary conditions and the 1D/2D time-marching drivers."""

from __future__ import annotations

import enum
import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .flux import Euler, FluxModel, semidiscrete_rhs, wave_speeds
from .reconstruction import SchemeId
from .timestep import STAGE_WEIGHTS, TimeControls, compute_dt, integrate

logger = logging.getLogger(__name__)

GHOST = 3


class BoundaryKind(enum.Enum):
    PERIODIC = "periodic"
    TRANSMISSIVE = "transmissive"
    REFLECTING = "reflecting"


@dataclass(frozen=True)
class Grid1D:
    n: int
    x_lo: float
    x_hi: float
    ghost: int = GHOST

    def __post_init__(self):
        if self.n < 1 or not self.x_hi > self.x_lo:
            raise ValueError(f"invalid grid n={self.n} on [{self.x_lo}, {self.x_hi}]")
        if self.ghost < GHOST:
            raise ValueError(f"need at least {GHOST} ghost cells")

    @property
    def dx(self) -> float:
        return (self.x_hi - self.x_lo) / self.n

    @property
    def spacing(self) -> tuple[float]:
        return (self.dx,)

    @property
    def edges(self) -> np.ndarray:
        return self.x_lo + self.dx * np.arange(self.n + 1)

    @property
    def centers(self) -> np.ndarray:
        return self.x_lo + self.dx * (np.arange(self.n) + 0.5)

    @property
    def cell_volume(self) -> float:
        return self.dx

    @property
    def shape(self) -> tuple[int]:
        return (self.n,)


@dataclass(frozen=True)
class Grid2D:
    nx: int
    ny: int
    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float
    ghost: int = GHOST

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1 or not (self.x_hi > self.x_lo and self.y_hi > self.y_lo):
            raise ValueError("invalid 2D grid")
        if self.ghost < GHOST:
            raise ValueError(f"need at least {GHOST} ghost cells")

    @property
    def dx(self) -> float:
        return (self.x_hi - self.x_lo) / self.nx

    @property
    def dy(self) -> float:
        return (self.y_hi - self.y_lo) / self.ny

    @property
    def spacing(self) -> tuple[float, float]:
        return (self.dx, self.dy)

    @property
    def x(self) -> np.ndarray:
        return self.x_lo + self.dx * (np.arange(self.nx) + 0.5)

    @property
    def y(self) -> np.ndarray:
        return self.y_lo + self.dy * (np.arange(self.ny) + 0.5)

    def mesh(self):
        """Cell-centre coordinates, each of shape ``(nx, ny)``."""
        return np.meshgrid(self.x, self.y, indexing="ij")

    @property
    def cell_volume(self) -> float:
        return self.dx * self.dy

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nx, self.ny)


def _ghost_block(u: np.ndarray, axis: int, side: int, kind: BoundaryKind, g: int, momentum: int | None):
    n = u.shape[axis]
    if n < g and kind is not BoundaryKind.TRANSMISSIVE:
        raise ValueError(f"{n} cells cannot fill {g} ghost cells")
    take = lambda idx: np.take(u, idx, axis=axis)  # noqa: E731
    if kind is BoundaryKind.PERIODIC:
        block = take(np.arange(n - g, n)) if side == 0 else take(np.arange(g))
    elif kind is BoundaryKind.TRANSMISSIVE:
        block = take(np.zeros(g, dtype=int)) if side == 0 else take(np.full(g, n - 1))
    else:
        # mirror: the ghost next to the wall copies the first interior cell
        block = take(np.arange(g)[::-1]) if side == 0 else take(np.arange(n - 1, n - 1 - g, -1))
        if momentum is not None:
            block[momentum] *= -1.0
    return block


def apply_bc(
    u: np.ndarray,
    kinds: BoundaryKind | Sequence[BoundaryKind],
    ghost: int = GHOST,
    momentum: Sequence[int | None] | None = None,
) -> np.ndarray:
    """Pad the interior states ``u`` of shape ``(ncomp, *spatial)`` with ghosts.

    ``kinds`` lists (low, high) per axis, e.g. ``(left, right)`` in 1D or
    ``(x_lo, x_hi, y_lo, y_hi)`` in 2D; a single kind applies everywhere.
    ``momentum[d]`` names the component negated at reflecting walls normal to
    axis ``d``.
    """
    ndim = u.ndim - 1
    if isinstance(kinds, BoundaryKind):
        kinds = (kinds,) * (2 * ndim)
    kinds = tuple(BoundaryKind(k) for k in kinds)
    if len(kinds) != 2 * ndim:
        raise ValueError(f"need {2 * ndim} boundary kinds, got {len(kinds)}")
    momentum = tuple(momentum) if momentum is not None else (None,) * ndim
    out = u
    for d in range(ndim):
        axis = d + 1
        lo = _ghost_block(out, axis, 0, kinds[2 * d], ghost, momentum[d])
        hi = _ghost_block(out, axis, 1, kinds[2 * d + 1], ghost, momentum[d])
        out = np.concatenate([lo, out, hi], axis=axis)
    return out


def _momentum_components(model: FluxModel, ndim: int):
    if model.ncomp == 1:
        return (None,) * ndim
    return tuple(1 + d for d in range(ndim))


@dataclass
class RunResult:
    grid: Grid1D | Grid2D
    u: np.ndarray
    t: float
    steps: int
    scheme: SchemeId
    initial_total: np.ndarray
    boundary_outflow: np.ndarray
    """Time integral of the net boundary outflow, per component."""
    wall_time: float
    min_density: float = np.nan
    min_pressure: float = np.nan
    history: list = field(default_factory=list)

    @property
    def final_total(self) -> np.ndarray:
        return self.u.reshape(self.u.shape[0], -1).sum(axis=1) * self.grid.cell_volume

    @property
    def conservation_defect(self) -> np.ndarray:
        """``final - initial + outflow``; zero up to roundoff for a conservative scheme."""
        return self.final_total - self.initial_total + self.boundary_outflow


def run(
    model: FluxModel,
    scheme: SchemeId | str,
    grid: Grid1D | Grid2D,
    bc: BoundaryKind | Sequence[BoundaryKind],
    ic: np.ndarray | Callable,
    controls: TimeControls,
    on_step: Callable[[float, np.ndarray], None] | None = None,
) -> RunResult:
    """March ``ic`` (interior states or ``ic(grid)``) to ``controls.t_final``.

    Every accepted state is checked for admissibility; a violation raises
    :class:`~arcweno.flux.InadmissibleStateError` annotated with the time.
    """
    scheme = SchemeId.parse(scheme)
    u0 = np.asarray(ic(grid) if callable(ic) else ic, dtype=float)
    if u0.shape != (model.ncomp,) + grid.shape:
        raise ValueError(f"initial state shape {u0.shape} does not match grid {grid.shape}")
    ndim = len(grid.shape)
    g = grid.ghost
    spacing = grid.spacing
    momentum = _momentum_components(model, ndim)
    stage_outflow: list[np.ndarray] = []

    def rhs(u):
        padded = apply_bc(u, bc, g, momentum)
        res = semidiscrete_rhs(model, scheme, padded, spacing, g)
        stage_outflow.append(res.boundary_flux)
        return res.rhs

    last = {"u": None, "alpha": None}

    def dt_for(u):
        # the accepted state was just summarised in accept(); reuse its speeds
        alpha = last["alpha"] if u is last["u"] else _summarise(model, u)[0]
        return compute_dt(alpha, spacing, controls)

    outflow = np.zeros(model.ncomp)
    mins = [np.inf, np.inf]
    t_now = [0.0]

    def accept(t, dt, u):
        nonlocal outflow
        stages = stage_outflow[-3:]
        outflow = outflow + dt * sum(w * b for w, b in zip(STAGE_WEIGHTS, stages))
        stage_outflow.clear()
        t_now[0] = t
        alpha, rho_min, p_min = _summarise(model, u)
        last["u"], last["alpha"] = u, alpha
        mins[0] = min(mins[0], rho_min)
        mins[1] = min(mins[1], p_min)
        if on_step is not None:
            on_step(t, u)

    _, mins[0], mins[1] = _summarise(model, u0)
    initial_total = u0.reshape(model.ncomp, -1).sum(axis=1) * grid.cell_volume
    start = time.perf_counter()
    try:
        u, t, steps = integrate(rhs, u0, controls, dt_for, accept)
    except Exception as exc:
        exc.args = (f"t={t_now[0]:.6g}: {exc}",) + exc.args[1:]
        raise
    wall = time.perf_counter() - start
    logger.info("%s on %s: %d steps to t=%g in %.2fs", scheme.value, grid.shape, steps, t, wall)
    return RunResult(grid, u, t, steps, scheme, initial_total, outflow, wall, mins[0], mins[1])


def _summarise(model: FluxModel, u: np.ndarray):
    """Wave speeds per direction and minimum density/pressure (NaN for scalar laws).

    Raises :class:`~arcweno.flux.InadmissibleStateError` for a bad state.
    """
    if isinstance(model, Euler) and _kernels.AVAILABLE:
        speeds, rho_min, p_min, finite = _kernels.euler_speeds(u.reshape(u.shape[0], -1), float(model.gamma))
        if not finite or not (rho_min > 0.0 and p_min > 0.0):
            model.check_admissible(u)
        return tuple(float(a) for a in speeds), float(rho_min), float(p_min)
    alpha = wave_speeds(model, u)
    if isinstance(model, Euler):
        return alpha, float(u[0].min()), float(model.pressure(u).min())
    return alpha, np.nan, np.nan


def run_1d(model, scheme, grid: Grid1D, bc, ic, controls, on_step=None) -> RunResult:
    if not isinstance(grid, Grid1D):
        raise TypeError("run_1d needs a Grid1D")
    return run(model, scheme, grid, bc, ic, controls, on_step)


def run_2d(scheme, grid: Grid2D, bc, ic, controls, model=None, on_step=None) -> RunResult:
    from .flux import Euler

    if not isinstance(grid, Grid2D):
        raise TypeError("run_2d needs a Grid2D")
    return run(model or Euler(1.4, 2), scheme, grid, bc, ic, controls, on_step)
