"""Benchmark problems: initial data and exact solutions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .flux import Burgers, Euler, FluxModel, LinearAdvection
from .solver import BoundaryKind, Grid1D, Grid2D

GAMMA = 1.4
BURGERS_BREAK_TIME = 2.0 / math.pi


# -- scalar problems -------------------------------------------------------------


def sin4_cell_averages(x_lo, x_hi):
    """Exact averages of ``sin(pi x)**4`` over ``[x_lo, x_hi]`` (elementwise)."""
    x_lo = np.asarray(x_lo, dtype=float)
    x_hi = np.asarray(x_hi, dtype=float)
    h = x_hi - x_lo
    xc = 0.5 * (x_lo + x_hi)
    # sin^4 = 3/8 - cos(2 pi x)/2 + cos(4 pi x)/8
    return (
        0.375
        - 0.5 * np.cos(2 * np.pi * xc) * np.sinc(h)
        + 0.125 * np.cos(4 * np.pi * xc) * np.sinc(2 * h)
    )


def ic_advection_sin4(grid: Grid1D) -> np.ndarray:
    return sin4_cell_averages(grid.edges[:-1], grid.edges[1:])[None]


def exact_advection_sin4(grid: Grid1D, t: float, speed: float = 1.0) -> np.ndarray:
    # sin^4(pi x) has period 1, so the shift needs no explicit wrapping
    return sin4_cell_averages(grid.edges[:-1] - speed * t, grid.edges[1:] - speed * t)[None]


def burgers_initial(x):
    return 1.0 + 0.5 * np.sin(np.pi * np.asarray(x, dtype=float))


def ic_burgers_smooth(grid: Grid1D) -> np.ndarray:
    return burgers_initial(grid.centers)[None]


def _burgers_foot(x: float, t: float) -> float:
    """Foot ``xi`` of the characteristic through ``(x, t)``: ``xi + t u0(xi) = x``."""
    lo, hi = x - 1.5 * t, x - 0.5 * t
    xi = x - t * burgers_initial(x - t)
    for _ in range(100):
        f = xi + t * burgers_initial(xi) - x
        if f > 0:
            hi = xi
        else:
            lo = xi
        if abs(f) <= 1e-15 * (1.0 + abs(x)) or hi - lo <= 1e-16 * (1.0 + abs(x)):
            return float(xi)
        df = 1.0 + 0.5 * math.pi * t * math.cos(math.pi * xi)
        step = xi - f / df if df > 0 else math.nan
        xi = step if lo < step < hi else 0.5 * (lo + hi)
    return float(xi)


def exact_burgers(x, t: float):
    """Smooth solution of ``u_t + (u^2/2)_x = 0`` from ``1 + sin(pi x)/2``.

    Solves ``u = 1 + sin(pi (x - u t))/2``; only defined up to the breaking time.
    """
    if t < 0 or t > BURGERS_BREAK_TIME * (1 + 1e-14):
        raise ValueError(f"smooth solution exists only for 0 <= t <= 2/pi, got t={t}")
    xs = np.asarray(x, dtype=float)
    if t == 0:
        return burgers_initial(xs)
    feet = np.array([_burgers_foot(float(xv), t) for xv in xs.ravel()]).reshape(xs.shape)
    out = burgers_initial(feet)
    return out if out.ndim else float(out)


def exact_burgers_points(grid: Grid1D, t: float) -> np.ndarray:
    return np.asarray(exact_burgers(grid.centers, t))[None]


# -- 1D Riemann problems -------------------------------------------------------------


def _riemann_tube(grid: Grid1D, left, right, gamma=GAMMA) -> np.ndarray:
    x = grid.centers
    is_left = x < 0.0
    prim = [np.where(is_left, l, r) for l, r in zip(left, right)]
    return Euler(gamma, 1).conserved(prim[0], [prim[1]], prim[2])


SOD = ((1.0, 0.0, 1.0), (0.125, 0.0, 0.1))
LAX = ((0.445, 0.698, 3.528), (0.5, 0.0, 0.571))


def ic_sod(grid: Grid1D, gamma: float = GAMMA) -> np.ndarray:
    return _riemann_tube(grid, *SOD, gamma)


def ic_lax(grid: Grid1D, gamma: float = GAMMA) -> np.ndarray:
    return _riemann_tube(grid, *LAX, gamma)


class VacuumError(ValueError):
    pass


def _pressure_function(p, rho, pk, gamma):
    """Toro's f_K(p) and its derivative for one side."""
    c = math.sqrt(gamma * pk / rho)
    if p > pk:
        a = 2.0 / ((gamma + 1.0) * rho)
        b = (gamma - 1.0) / (gamma + 1.0) * pk
        q = math.sqrt(a / (p + b))
        return (p - pk) * q, q * (1.0 - 0.5 * (p - pk) / (p + b))
    ratio = p / pk
    f = 2.0 * c / (gamma - 1.0) * (ratio ** ((gamma - 1.0) / (2.0 * gamma)) - 1.0)
    df = ratio ** (-(gamma + 1.0) / (2.0 * gamma)) / (rho * c)
    return f, df


def star_state(left, right, gamma: float = GAMMA, tol: float = 1e-12):
    """Pressure and velocity between the two nonlinear waves."""
    rl, ul, pl = left
    rr, ur, pr = right
    cl = math.sqrt(gamma * pl / rl)
    cr = math.sqrt(gamma * pr / rr)
    if 2.0 * (cl + cr) / (gamma - 1.0) <= ur - ul:
        raise VacuumError("initial data generate vacuum")
    du = ur - ul
    # two-rarefaction guess, always positive
    z = (gamma - 1.0) / (2.0 * gamma)
    p = ((cl + cr - 0.5 * (gamma - 1.0) * du) / (cl / pl**z + cr / pr**z)) ** (1.0 / z)
    for _ in range(100):
        fl, dfl = _pressure_function(p, rl, pl, gamma)
        fr, dfr = _pressure_function(p, rr, pr, gamma)
        new = p - (fl + fr + du) / (dfl + dfr)
        if new <= 0:
            new = 0.5 * p
        change = abs(new - p) / (0.5 * (new + p))
        p = new
        if change < tol:
            break
    fl, _ = _pressure_function(p, rl, pl, gamma)
    fr, _ = _pressure_function(p, rr, pr, gamma)
    u = 0.5 * (ul + ur) + 0.5 * (fr - fl)
    return p, u


def exact_riemann_euler(left, right, gamma: float, xi):
    """Exact solution ``(rho, u, p)`` sampled at similarity coordinates ``xi = x/t``.

    ``left``/``right`` are primitive triples ``(rho, u, p)``.
    """
    rl, ul, pl = map(float, left)
    rr, ur, pr = map(float, right)
    if min(rl, pl, rr, pr) <= 0:
        raise ValueError("states must have positive density and pressure")
    ps, us = star_state((rl, ul, pl), (rr, ur, pr), gamma)
    g = gamma
    gm = (g - 1.0) / (g + 1.0)
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    rho = np.empty_like(xi)
    vel = np.empty_like(xi)
    prs = np.empty_like(xi)

    def side(s, sign, r, u, p):
        # sign = +1 for the left wave, -1 for the right wave (mirrored formulas)
        c = math.sqrt(g * p / r)
        if ps > p:  # shock
            speed = u - sign * c * math.sqrt((g + 1) / (2 * g) * ps / p + (g - 1) / (2 * g))
            r_star = r * (ps / p + gm) / (gm * ps / p + 1.0)
            out = sign * (s - speed) < 0
            return np.where(out, r, r_star), np.where(out, u, us), np.where(out, p, ps)
        c_star = c * (ps / p) ** ((g - 1) / (2 * g))
        head = u - sign * c
        tail = us - sign * c_star
        r_star = r * (ps / p) ** (1.0 / g)
        fan_u = 2.0 / (g + 1) * (sign * c + (g - 1) / 2 * u + s)
        fan_c = sign * 2.0 / (g + 1) * (c + sign * (g - 1) / 2 * (u - s))
        fan_r = r * (fan_c / c) ** (2.0 / (g - 1))
        fan_p = p * (fan_c / c) ** (2.0 * g / (g - 1))
        before = sign * (s - head) < 0
        after = sign * (s - tail) >= 0
        r_out = np.where(before, r, np.where(after, r_star, fan_r))
        u_out = np.where(before, u, np.where(after, us, fan_u))
        p_out = np.where(before, p, np.where(after, ps, fan_p))
        return r_out, u_out, p_out

    with np.errstate(invalid="ignore"):
        lmask = xi < us
        rl_, ul_, pl_ = side(xi, 1.0, rl, ul, pl)
        rr_, ur_, pr_ = side(xi, -1.0, rr, ur, pr)
    rho = np.where(lmask, rl_, rr_)
    vel = np.where(lmask, ul_, ur_)
    prs = np.where(lmask, pl_, pr_)
    return rho, vel, prs


def exact_tube(left, right, grid: Grid1D, t: float, gamma: float = GAMMA) -> np.ndarray:
    """Exact primitives ``(rho, u, p)`` at the cell centres, interface at ``x = 0``."""
    rho, u, p = exact_riemann_euler(left, right, gamma, grid.centers / t)
    return np.stack([rho, u, p])


# -- 2D problems ---------------------------------------------------------------------

# quadrants 1..4 of the four-state Riemann problem, as (p, rho, u, v)
RIEMANN2D_QUADRANTS = (
    (1.5, 1.5, 0.0, 0.0),
    (0.3, 0.5323, 1.206, 0.0),
    (0.029, 0.138, 1.206, 1.206),
    (0.3, 0.5323, 0.0, 1.206),
)


def _from_primitive_2d(rho, u, v, p, gamma=GAMMA):
    return Euler(gamma, 2).conserved(rho, [u, v], p)


def ic_riemann2d(grid: Grid2D, quadrants=RIEMANN2D_QUADRANTS, gamma: float = GAMMA) -> np.ndarray:
    x, y = grid.mesh()
    right = x > 0.5
    top = y > 0.5
    index = np.where(top, np.where(right, 0, 1), np.where(right, 3, 2))
    q = np.asarray(quadrants, dtype=float)
    p, rho, u, v = (q[index, k] for k in range(4))
    return _from_primitive_2d(rho, u, v, p, gamma)


def ic_implosion(grid: Grid2D, gamma: float = GAMMA) -> np.ndarray:
    x, y = grid.mesh()
    inner = np.abs(x) + np.abs(y) < 0.15
    rho = np.where(inner, 0.125, 1.0)
    p = np.where(inner, 0.14, 1.0)
    return _from_primitive_2d(rho, 0.0 * x, 0.0 * x, p, gamma)


def ic_explosion(grid: Grid2D, gamma: float = GAMMA) -> np.ndarray:
    x, y = grid.mesh()
    inner = x * x + y * y < 0.4**2
    rho = np.where(inner, 1.0, 0.125)
    p = np.where(inner, 1.0, 0.1)
    return _from_primitive_2d(rho, 0.0 * x, 0.0 * x, p, gamma)


# -- registry --------------------------------------------------------------------------


@dataclass(frozen=True)
class ProblemSpec:
    id: str
    model: FluxModel
    domain: tuple[float, ...]
    boundary: tuple[BoundaryKind, ...]
    initial: Callable
    t_final: float
    default_n: int
    exact: Callable | None = None
    """``exact(grid, t)`` in the same representation as ``initial`` (averages or points)."""
    expected_rates: dict = field(default_factory=dict)
    smooth_exact: bool = False
    """True when ``exact`` is a smooth solution usable for convergence studies."""

    @property
    def ndim(self) -> int:
        return len(self.domain) // 2

    def grid(self, n: int | None = None):
        n = n or self.default_n
        if self.ndim == 1:
            return Grid1D(n, *self.domain)
        return Grid2D(n, n, *self.domain)


P, T, R = BoundaryKind.PERIODIC, BoundaryKind.TRANSMISSIVE, BoundaryKind.REFLECTING

PROBLEMS: dict[str, ProblemSpec] = {
    spec.id: spec
    for spec in (
        ProblemSpec(
            "advection-sin4", LinearAdvection(1.0), (-1.0, 1.0), (P, P),
            ic_advection_sin4, 0.55, 160, exact_advection_sin4,
            {"weno5-l": (4.7, 5.3), "weno5-zl": (4.7, 5.3), "eno3-l": (2.7, 3.4)},
            smooth_exact=True,
        ),
        ProblemSpec(
            "burgers-smooth", Burgers(), (-1.0, 1.0), (P, P),
            ic_burgers_smooth, BURGERS_BREAK_TIME, 160, exact_burgers_points,
            {"weno5-l": (4.6, 5.4), "eno3-l": (2.6, 3.3)},
            smooth_exact=True,
        ),
        ProblemSpec(
            "sod", Euler(GAMMA, 1), (-0.5, 0.5), (T, T), ic_sod, 0.2, 200,
            lambda grid, t: exact_tube(*SOD, grid, t),
        ),
        ProblemSpec(
            "lax", Euler(GAMMA, 1), (-0.5, 0.5), (T, T), ic_lax, 0.13, 200,
            lambda grid, t: exact_tube(*LAX, grid, t),
        ),
        ProblemSpec("riemann2d", Euler(GAMMA, 2), (0.0, 1.0, 0.0, 1.0), (T, T, T, T), ic_riemann2d, 0.3, 400),
        ProblemSpec("implosion", Euler(GAMMA, 2), (0.0, 0.3, 0.0, 0.3), (R, R, R, R), ic_implosion, 2.5, 400),
        ProblemSpec("explosion", Euler(GAMMA, 2), (0.0, 3.0, 0.0, 3.0), (R, T, R, T), ic_explosion, 3.2, 400),
    )
}


def get_problem(name: str) -> ProblemSpec:
    try:
        return PROBLEMS[name]
    except KeyError:
        raise ValueError(f"unknown problem {name!r}; valid: {', '.join(PROBLEMS)}") from None
