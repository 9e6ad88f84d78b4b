"""Third-order candidate polynomials built from cell averages, and their arc lengths.

All candidates are stored about the cell centre ``x_i``::

    p(x) = a + b (x - x_i) + c (x - x_i)**2

which keeps the coefficients well conditioned when ``|x_i|`` is large.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

# straight-line branch of the length antiderivative below this relative curvature
BRANCH_TOL = 1e-12


@dataclass(frozen=True)
class QuadraticPoly:
    """``a + b (x - center) + c (x - center)**2``."""

    a: float
    b: float
    c: float
    center: float = 0.0

    def __call__(self, x):
        s = np.asarray(x, dtype=float) - self.center
        return self.a + s * (self.b + s * self.c)

    def derivative(self, x):
        return self.b + 2.0 * self.c * (np.asarray(x, dtype=float) - self.center)

    def to_global(self) -> tuple[float, float, float]:
        """Coefficients ``(a, b, c)`` of the same polynomial about ``x = 0``."""
        x0 = self.center
        return (
            self.a - self.b * x0 + self.c * x0 * x0,
            self.b - 2.0 * self.c * x0,
            self.c,
        )

    def length(self, lo: float, hi: float) -> float:
        return arc_length_closed_form(self, lo, hi)


@dataclass(frozen=True)
class CandidateSet:
    """Left-biased, centred and right-biased quadratics for one cell."""

    p0: QuadraticPoly
    p1: QuadraticPoly
    p2: QuadraticPoly
    cell_center: float
    dx: float

    def __iter__(self):
        return iter((self.p0, self.p1, self.p2))

    def __getitem__(self, j: int) -> QuadraticPoly:
        return (self.p0, self.p1, self.p2)[j]

    @property
    def faces(self) -> tuple[float, float]:
        h = 0.5 * self.dx
        return self.cell_center - h, self.cell_center + h


@dataclass(frozen=True)
class DividedDiffTable:
    """``levels[m][i]`` is the m-th divided difference starting at point ``i``."""

    levels: tuple[np.ndarray, ...]
    dx: float

    @property
    def max_order(self) -> int:
        return len(self.levels) - 1

    def __getitem__(self, m: int) -> np.ndarray:
        return self.levels[m]


def _check_finite(*arrays) -> None:
    for arr in arrays:
        if not np.all(np.isfinite(arr)):
            raise ValueError("non-finite input")


def candidate_coefficients(vbar: np.ndarray, dx: float):
    """Local coefficients of the three candidates for every full 5-cell stencil.

    ``vbar`` holds cell averages along its last axis; the result refers to the
    cells ``2 .. n-3``.  Returns ``(a, b, c)``, each of shape ``(3, ..., n-4)``
    with the candidate index first.
    """
    v = np.asarray(vbar, dtype=float)
    vm2, vm1, v0, vp1, vp2 = (v[..., k : v.shape[-1] - 4 + k] for k in range(5))
    h = dx

    d0 = vm2 - 2.0 * vm1 + v0
    d1 = vm1 - 2.0 * v0 + vp1
    d2 = v0 - 2.0 * vp1 + vp2
    c = np.stack([d0, d1, d2]) / (2.0 * h * h)
    b = np.stack(
        [
            (vm2 - 4.0 * vm1 + 3.0 * v0) / (2.0 * h),
            (vp1 - vm1) / (2.0 * h),
            (-3.0 * v0 + 4.0 * vp1 - vp2) / (2.0 * h),
        ]
    )
    a = v0 - np.stack([d0, d1, d2]) / 24.0
    return a, b, c


def build_candidates(vbar: Sequence[float], x_i: float, dx: float) -> CandidateSet:
    """Candidates ``p0, p1, p2`` for the cell centred at ``x_i``.

    ``p0`` matches the averages of cells ``i-2..i``, ``p1`` of ``i-1..i+1`` and
    ``p2`` of ``i..i+2``; each also has average ``vbar[2]`` over cell ``i``.
    """
    v = np.asarray(vbar, dtype=float)
    if v.shape != (5,):
        raise ValueError(f"expected 5 cell averages, got shape {v.shape}")
    _check_finite(v, x_i, dx)
    if dx <= 0:
        raise ValueError(f"dx must be positive, got {dx}")
    a, b, c = candidate_coefficients(v, dx)
    polys = [QuadraticPoly(float(a[j, 0]), float(b[j, 0]), float(c[j, 0]), x_i) for j in range(3)]
    return CandidateSet(*polys, cell_center=float(x_i), dx=float(dx))


def length_antiderivative(b: float, c: float, z: float) -> float:
    """Antiderivative of ``sqrt(1 + (b + 2 c z)**2)`` in ``z``.

    Direct form; it loses digits to cancellation when differenced over a short
    interval with small ``c``, so production code uses :func:`arc_length_local`.
    """
    if c == 0.0:
        return math.sqrt(1.0 + b * b) * z
    s = b + 2.0 * c * z
    return (s * math.sqrt(s * s + 1.0) + math.asinh(s)) / (4.0 * c)


def arc_length_local(b, c, lo, hi):
    """Arc length of ``b s + c s**2`` (plus any constant) over ``s in [lo, hi]``.

    Vectorised and free of cancellation: with slopes ``sl``, ``sr`` at the
    ends, the difference of the asinh antiderivative is rewritten using
    ``asinh(sr) - asinh(sl) = asinh(sr*sqrt(1+sl^2) - sl*sqrt(1+sr^2))`` and
    rationalised so every remaining sum has terms of one sign.
    """
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    width = hi - lo

    sl = b + 2.0 * c * lo
    sr = b + 2.0 * c * hi
    d = 2.0 * c * width  # sr - sl without cancellation
    ra = np.sqrt(1.0 + sr * sr)
    rb = np.sqrt(1.0 + sl * sl)
    both = 1.0 + sl * sl + sr * sr
    prod = sl * sr
    with np.errstate(divide="ignore", invalid="ignore"):
        same_sign = prod >= 0.0
        plus = np.where(same_sign, ra * rb + prod, both / (ra * rb - prod))
        minus = np.where(same_sign, both / (ra * rb + prod), ra * rb - prod)
        t1 = (both + plus) / (ra + rb)
        t2 = (1.0 + minus) / (ra + rb)
        arg = d * t2
        ratio = np.where(d != 0.0, np.arcsinh(arg) / np.where(d != 0.0, d, 1.0), t2)
    curved = 0.5 * width * (t1 + ratio)

    scale = np.maximum(np.maximum(np.abs(lo), np.abs(hi)), width)
    straight = np.abs(2.0 * c) * scale <= BRANCH_TOL * (1.0 + np.abs(b))
    out = np.where(straight, np.sqrt(1.0 + b * b) * width, curved)
    return out if out.ndim else float(out)


def arc_length_closed_form(p: QuadraticPoly, a: float, b: float) -> float:
    """Length of the graph of ``p`` over ``[a, b]``."""
    if not (np.isfinite(a) and np.isfinite(b)) or b <= a:
        raise ValueError(f"degenerate interval [{a}, {b}]")
    _check_finite(p.a, p.b, p.c, p.center)
    return float(arc_length_local(p.b, p.c, a - p.center, b - p.center))


def cell_lengths(b, c, dx: float):
    """Arc lengths over the central cell ``[-dx/2, dx/2]`` of local quadratics."""
    h = 0.5 * dx
    return arc_length_local(b, c, -h, h)


def divided_differences(values: Sequence[float], dx: float, max_order: int) -> DividedDiffTable:
    """Divided differences of point values on a uniform grid of step ``dx``."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise ValueError("empty input")
    if max_order >= v.size:
        raise ValueError(f"max_order={max_order} needs more than {v.size} values")
    if dx <= 0:
        raise ValueError(f"dx must be positive, got {dx}")
    levels = [v.copy()]
    for m in range(1, max_order + 1):
        prev = levels[-1]
        levels.append((prev[1:] - prev[:-1]) / (m * dx))
    return DividedDiffTable(tuple(levels), float(dx))


def interpolating_quadratic(xs: Sequence[float], ys: Sequence[float], center: float) -> QuadraticPoly:
    """The quadratic through three points, expressed about ``center``."""
    x0, x1, x2 = (float(x) - center for x in xs)
    y0, y1, y2 = (float(y) for y in ys)
    d01 = (y1 - y0) / (x1 - x0)
    d12 = (y2 - y1) / (x2 - x1)
    c = (d12 - d01) / (x2 - x0)
    b = d01 - c * (x0 + x1)
    a = y0 - b * x0 - c * x0 * x0
    return QuadraticPoly(a, b, c, center)
