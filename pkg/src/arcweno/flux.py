"""Physical fluxes, global Lax-Friedrichs splitting and the semi-discrete operator.

States are arrays of shape ``(ncomp, *spatial)``; scalar laws use ``ncomp = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .reconstruction import _KERNEL_CODE, SchemeId, reconstruct


class InadmissibleStateError(ValueError):
    """Non-positive density or pressure (or a non-finite value) in some cell."""

    def __init__(self, index, quantity: str, value: float):
        self.index = index
        self.quantity = quantity
        self.value = value
        super().__init__(f"{quantity} = {value!r} at cell {index}")


class FluxModel:
    ncomp: int = 1
    ndim: int = 1
    names: tuple[str, ...] = ("u",)

    def flux(self, u: np.ndarray, axis: int = 0) -> np.ndarray:
        raise NotImplementedError

    def max_speed(self, u: np.ndarray, axis: int = 0) -> float:
        raise NotImplementedError

    def check_admissible(self, u: np.ndarray) -> None:
        bad = ~np.isfinite(u)
        if bad.any():
            idx = tuple(int(i) for i in np.argwhere(bad)[0])
            raise InadmissibleStateError(idx[1:], self.names[idx[0]], float(u[idx]))


@dataclass(frozen=True)
class LinearAdvection(FluxModel):
    speed: float = 1.0

    def flux(self, u, axis=0):
        return self.speed * u

    def max_speed(self, u, axis=0):
        return abs(self.speed)


@dataclass(frozen=True)
class Burgers(FluxModel):
    def flux(self, u, axis=0):
        return 0.5 * u * u

    def max_speed(self, u, axis=0):
        return float(np.max(np.abs(u)))


@dataclass(frozen=True)
class Euler(FluxModel):
    """Ideal-gas Euler equations in one or two dimensions.

    Conserved variables are ``(rho, m_x, E)`` or ``(rho, m_x, m_y, E)``.
    """

    gamma: float = 1.4
    ndim: int = 1

    @property
    def ncomp(self) -> int:
        return self.ndim + 2

    @property
    def names(self) -> tuple[str, ...]:
        return ("density", "momentum_x", "energy") if self.ndim == 1 else (
            "density", "momentum_x", "momentum_y", "energy")

    def pressure(self, u):
        rho = u[0]
        mom = u[1 : 1 + self.ndim]
        kinetic = 0.5 * np.sum(mom * mom, axis=0) / rho
        return (self.gamma - 1.0) * (u[-1] - kinetic)

    def primitives(self, u):
        """``(rho, velocity components..., p)`` stacked along axis 0."""
        rho = u[0]
        vel = u[1 : 1 + self.ndim] / rho
        return np.concatenate([rho[None], vel, self.pressure(u)[None]])

    def conserved(self, rho, vel, p):
        rho = np.asarray(rho, dtype=float)
        vel = [np.broadcast_to(np.asarray(v, dtype=float), rho.shape) for v in vel]
        if len(vel) != self.ndim:
            raise ValueError(f"expected {self.ndim} velocity components")
        kinetic = 0.5 * rho * sum(v * v for v in vel)
        energy = np.asarray(p, dtype=float) / (self.gamma - 1.0) + kinetic
        return np.stack([rho] + [rho * v for v in vel] + [np.broadcast_to(energy, rho.shape)])

    def flux(self, u, axis=0):
        rho = u[0]
        mn = u[1 + axis]
        un = mn / rho
        p = self.pressure(u)
        f = np.empty_like(u)
        f[0] = mn
        for k in range(self.ndim):
            f[1 + k] = un * u[1 + k]
        f[1 + axis] += p
        f[-1] = un * (u[-1] + p)
        return f

    def sound_speed(self, u):
        return np.sqrt(self.gamma * self.pressure(u) / u[0])

    def max_speed(self, u, axis=0):
        return float(np.max(np.abs(u[1 + axis] / u[0]) + self.sound_speed(u)))

    def check_admissible(self, u):
        super().check_admissible(u)
        for name, q in (("density", u[0]), ("pressure", self.pressure(u))):
            bad = ~(q > 0.0)
            if bad.any():
                idx = tuple(int(i) for i in np.argwhere(bad)[0])
                raise InadmissibleStateError(idx, name, float(q[idx]))


@dataclass
class SplitFlux:
    fplus: np.ndarray
    fminus: np.ndarray
    alpha: float


def lf_split(model: FluxModel, states: np.ndarray, axis: int = 0, alpha: float | None = None) -> SplitFlux:
    """Global Lax-Friedrichs splitting ``f = (f + a u)/2 + (f - a u)/2``.

    ``alpha`` defaults to the largest wave speed over ``states``.
    """
    if alpha is None:
        model.check_admissible(states)
        alpha = model.max_speed(states, axis)
    f = model.flux(states, axis)
    au = alpha * states
    return SplitFlux(0.5 * (f + au), 0.5 * (f - au), float(alpha))


def numerical_flux(scheme: SchemeId | str, split: SplitFlux, dx: float = 1.0) -> np.ndarray:
    """Interface fluxes along the last axis.

    Entry ``k`` is the flux between cells ``k + 2`` and ``k + 3`` of the padded
    input, so ``n`` cells yield ``n - 5`` interfaces.
    """
    fp = reconstruct(scheme, split.fplus, dx)
    fm = reconstruct(scheme, split.fminus, dx)
    return fp.minus[..., :-1] + fm.plus[..., 1:]


def lf_interface_flux(
    model: FluxModel, scheme: SchemeId | str, states: np.ndarray, axis: int, alpha: float, dx: float
) -> np.ndarray:
    """Split, reconstruct and combine in one pass; same layout as :func:`numerical_flux`."""
    scheme = SchemeId.parse(scheme)
    f = model.flux(states, axis)
    if not _kernels.AVAILABLE:
        au = alpha * states
        return numerical_flux(scheme, SplitFlux(0.5 * (f + au), 0.5 * (f - au), alpha), dx)
    n = states.shape[-1]
    rows = _kernels.split_flux_rows(
        np.ascontiguousarray(f.reshape(-1, n)),
        np.ascontiguousarray(states.reshape(-1, n)),
        float(alpha),
        float(dx),
        _KERNEL_CODE[scheme],
    )
    return rows.reshape(states.shape[:-1] + (n - 5,))


@dataclass
class RHSResult:
    rhs: np.ndarray
    boundary_flux: np.ndarray
    """Net outflow per component; ``d/dt sum(u) * cell_volume = -boundary_flux``."""


def semidiscrete_rhs(
    model: FluxModel,
    scheme: SchemeId | str,
    padded: np.ndarray,
    spacing: float | tuple[float, ...],
    ghost: int = 3,
    alpha: tuple[float, ...] | None = None,
) -> RHSResult:
    """``-(f_{i+1/2} - f_{i-1/2}) / dx`` summed over directions.

    ``padded`` carries ``ghost`` filled ghost cells on every side.  Wave speeds
    for the splitting are taken over the interior cells unless given.
    """
    if ghost < 3:
        raise ValueError("the 5-point reconstruction needs at least 3 ghost cells")
    spacing = (spacing,) if np.ndim(spacing) == 0 else tuple(spacing)
    g = ghost
    ndim = padded.ndim - 1
    if ndim not in (1, 2):
        raise ValueError(f"unsupported dimension {ndim}")
    if len(spacing) != ndim:
        raise ValueError(f"need {ndim} grid spacings, got {len(spacing)}")
    interior = padded[(slice(None),) + (slice(g, -g),) * ndim]
    if alpha is None:
        alpha = wave_speeds(model, interior)

    if ndim == 1:
        (dx,) = spacing
        fhat = _sweep(model, scheme, padded[:, :, None], 0, alpha[0], dx)[:, 0, :]
        rhs = -(fhat[..., 1:] - fhat[..., :-1]) / dx
        return RHSResult(rhs, fhat[..., -1] - fhat[..., 0])

    dx, dy = spacing
    # each sweep walks lines of the same logical layout (sweep axis first, then
    # the transverse index), so mirror-symmetric data gives bitwise mirror-symmetric fluxes
    fx = _sweep(model, scheme, padded[:, :, g:-g], 0, alpha[0], dx)  # (ncomp, ny, nx + 1)
    fy = _sweep(model, scheme, padded[:, g:-g, :].transpose(0, 2, 1), 1, alpha[1], dy)  # (ncomp, nx, ny + 1)

    if _kernels.AVAILABLE:
        return RHSResult(*_kernels.divergence_2d(fx, fy, float(dx), float(dy)))
    lx = -(fx[..., 1:] - fx[..., :-1]) / dx
    ly = -(fy[..., 1:] - fy[..., :-1]) / dy
    rhs = lx.transpose(0, 2, 1) + ly
    out_x = dy * np.sum(fx[..., -1] - fx[..., 0], axis=-1)
    out_y = dx * np.sum(fy[..., -1] - fy[..., 0], axis=-1)
    return RHSResult(rhs, out_x + out_y)


def _sweep(model: FluxModel, scheme, view: np.ndarray, axis: int, alpha: float, h: float) -> np.ndarray:
    """Interface fluxes along axis 1 of ``view`` (``(ncomp, n_line, n_lines)``).

    Returns ``(ncomp, n_lines, n_line - 5)``.
    """
    scheme = SchemeId.parse(scheme)
    if _kernels.AVAILABLE and isinstance(model, Euler):
        return _kernels.euler_flux_hat(view, axis, float(model.gamma), float(alpha), float(h), _KERNEL_CODE[scheme])
    states = np.ascontiguousarray(view.transpose(0, 2, 1))
    return lf_interface_flux(model, scheme, states, axis, alpha, h)


def wave_speeds(model: FluxModel, u: np.ndarray) -> tuple[float, ...]:
    """Largest wave speed per direction over ``u``, after an admissibility check."""
    ndim = u.ndim - 1
    if _kernels.AVAILABLE and isinstance(model, Euler) and model.ndim == ndim:
        speeds, rho_min, p_min, finite = _kernels.euler_speeds(u.reshape(u.shape[0], -1), float(model.gamma))
        if not finite or not (rho_min > 0.0 and p_min > 0.0):
            model.check_admissible(u)  # locates the offending cell and raises
        return tuple(float(a) for a in speeds)
    model.check_admissible(u)
    return tuple(model.max_speed(u, d) for d in range(ndim))
