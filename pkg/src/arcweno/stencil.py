"""Stencil selection: classical divided-difference ENO and minimal arc length.

Two index conventions meet here.  The shift ``r`` counts how far the stencil
extends to the left of the central point (``r = 0`` is the right-most stencil
``{i, ..., i+k-1}``).  Candidate polynomials are numbered the other way round,
``p0`` being the left-most, so for ``k = 3`` the candidate is ``2 - r``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .polynomials import (
    CandidateSet,
    DividedDiffTable,
    arc_length_closed_form,
    cell_lengths,
    interpolating_quadratic,
)


class Method(enum.Enum):
    DIVIDED_DIFF = "divided-diff"
    ARC_LENGTH = "arc-length"


@dataclass(frozen=True)
class StencilChoice:
    r: int
    method: Method
    k: int = 3
    candidate_lengths: tuple[float, ...] | None = None

    def __post_init__(self):
        if not 0 <= self.r < self.k:
            raise ValueError(f"shift {self.r} outside 0..{self.k - 1}")

    @property
    def candidate(self) -> int:
        """Index of the chosen candidate polynomial (0 = left-most)."""
        return self.k - 1 - self.r

    def stencil(self, i: int) -> range:
        return range(i - self.r, i - self.r + self.k)


def select_classical(
    dd: DividedDiffTable, i: int, k: int = 3, *, prefer_left_on_tie: bool = False
) -> StencilChoice:
    """Classical ENO choice of ``k`` points containing point ``i``.

    The stencil is widened to the left only when the left divided difference is
    strictly smaller in magnitude, so ties keep the current stencil.
    ``prefer_left_on_tie`` flips that, which is the other branch a tie allows.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if dd.max_order < k - 1:
        raise ValueError(f"table holds orders up to {dd.max_order}, need {k - 1}")
    n = dd[0].size
    if i - (k - 1) < 0 or i + (k - 1) > n - 1:
        raise ValueError(f"table too narrow around index {i} for k={k}")
    r = 0
    for j in range(1, k):
        left = abs(dd[j][i - r - 1])
        right = abs(dd[j][i - r])
        if left < right or (prefer_left_on_tie and left == right):
            r += 1
    return StencilChoice(r, Method.DIVIDED_DIFF, k)


def _argmin_first(lengths: Sequence[float]) -> int:
    # np.argmin keeps the first of exactly equal values
    return int(np.argmin(np.asarray(lengths)))


def select_by_length(cands: CandidateSet) -> StencilChoice:
    """Pick the candidate with the shortest graph over the central cell."""
    lo, hi = cands.faces
    lengths = tuple(arc_length_closed_form(p, lo, hi) for p in cands)
    j = _argmin_first(lengths)
    return StencilChoice(2 - j, Method.ARC_LENGTH, 3, lengths)


def select_by_length_interp(
    points: Sequence[float], i: int = 2, dx: float = 1.0, *, x0: float = 0.0, over: str = "stencil"
) -> StencilChoice:
    """Shortest of the three quadratics interpolating point data around ``i``.

    ``points[m]`` is the value at ``x0 + m dx``.  Candidate ``j`` interpolates
    points ``i-2+j .. i+j``.  With ``over="stencil"`` each length is measured
    across that candidate's own three points; ``over="cell"`` uses
    ``[x_i - dx/2, x_i + dx/2]`` for all three.
    """
    v = np.asarray(points, dtype=float)
    if i < 2 or i + 2 >= v.size:
        raise ValueError(f"need two points either side of index {i}")
    if dx <= 0 or not np.all(np.isfinite(v)):
        raise ValueError("invalid point data")
    if over not in ("stencil", "cell"):
        raise ValueError(f"unknown interval mode {over!r}")
    xs = x0 + dx * np.arange(v.size)
    lengths = []
    for j in range(3):
        idx = slice(i - 2 + j, i + j + 1)
        p = interpolating_quadratic(xs[idx], v[idx], center=xs[i])
        if over == "stencil":
            lo, hi = xs[i - 2 + j], xs[i + j]
        else:
            lo, hi = xs[i] - 0.5 * dx, xs[i] + 0.5 * dx
        lengths.append(arc_length_closed_form(p, lo, hi))
    j = _argmin_first(lengths)
    return StencilChoice(2 - j, Method.ARC_LENGTH, 3, tuple(lengths))


def classical_candidates(vbar: np.ndarray) -> np.ndarray:
    """Candidate index (0, 1, 2) chosen by classical ENO3 for each full stencil.

    Works on cell averages along the last axis, reporting cells ``2 .. n-3``.
    """
    v = np.asarray(vbar, dtype=float)
    n = v.shape[-1]
    d1 = np.abs(np.diff(v, axis=-1))  # d1[m] = |v[m+1] - v[m]|
    d2 = np.abs(v[..., :-2] - 2.0 * v[..., 1:-1] + v[..., 2:])  # centred at m+1
    left1 = d1[..., 1 : n - 3]  # |v_i - v_{i-1}|
    right1 = d1[..., 2 : n - 2]  # |v_{i+1} - v_i|
    r = (left1 < right1).astype(np.int8)
    # second level: r=0 compares d2 at i vs i+1, r=1 compares i-1 vs i
    c_im1 = d2[..., 0 : n - 4]
    c_i = d2[..., 1 : n - 3]
    c_ip1 = d2[..., 2 : n - 2]
    left2 = np.where(r == 0, c_i, c_im1)
    right2 = np.where(r == 0, c_ip1, c_i)
    r = r + (left2 < right2)
    return (2 - r).astype(np.intp)


def length_candidates(b: np.ndarray, c: np.ndarray, dx: float):
    """Candidate index of minimal central-cell length, plus the lengths.

    ``b`` and ``c`` are the stacked local coefficients from
    :func:`~arcweno.polynomials.candidate_coefficients`.
    """
    lengths = cell_lengths(b, c, dx)
    return np.argmin(lengths, axis=0), lengths
