"""Error norms and grid-convergence tables."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .problems import ProblemSpec, get_problem
from .reconstruction import SchemeId
from .solver import run
from .timestep import DtRule, TimeControls, accuracy_exponent

DEFAULT_NS = (20, 40, 80, 160, 320)
CSV_COLUMNS = ("N", "linf_err", "linf_rate", "l1_err", "l1_rate")


def error_norms(numerical, exact, dx: float | Sequence[float]) -> tuple[float, float]:
    """``(max |e|, cell_volume * sum |e|)``; ``dx`` is a spacing or a tuple of them."""
    a = np.asarray(numerical, dtype=float)
    b = np.asarray(exact, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"size mismatch: {a.shape} vs {b.shape}")
    diff = np.abs(a - b)
    if diff.size == 0:
        raise ValueError("empty fields")
    volume = float(np.prod(np.atleast_1d(dx)))
    return float(diff.max()), float(volume * diff.sum())


def rates(errors: Sequence[float]) -> list[float]:
    """``log2(e[k-1] / e[k])`` with NaN in the first slot."""
    out = [math.nan]
    for prev, cur in zip(errors[:-1], errors[1:]):
        out.append(math.log2(prev / cur) if prev > 0 and cur > 0 else math.nan)
    return out


@dataclass
class ConvergenceRow:
    n: int
    linf: float
    linf_rate: float
    l1: float
    l1_rate: float
    wall_time: float = 0.0


@dataclass
class ConvergenceTable:
    problem: str
    scheme: SchemeId
    dt_rule: DtRule
    rows: list[ConvergenceRow] = field(default_factory=list)

    @classmethod
    def from_errors(cls, problem, scheme, dt_rule, ns, linf, l1, walls=None) -> "ConvergenceTable":
        walls = walls or [0.0] * len(ns)
        rows = [
            ConvergenceRow(int(n), a, ra, b, rb, w)
            for n, a, ra, b, rb, w in zip(ns, linf, rates(linf), l1, rates(l1), walls)
        ]
        return cls(problem, SchemeId.parse(scheme), DtRule(dt_rule), rows)

    @property
    def last(self) -> ConvergenceRow:
        return self.rows[-1]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow([r.n] + [_fmt(x) for x in (r.linf, r.linf_rate, r.l1, r.l1_rate)])
        return buf.getvalue()

    def to_text(self) -> str:
        head = f"{self.scheme.value} on {self.problem} (dt rule: {self.dt_rule.value})"
        lines = [head, f"{'N':>6} {'Linf error':>12} {'rate':>6} {'L1 error':>12} {'rate':>6}"]
        for r in self.rows:
            lr = "" if math.isnan(r.linf_rate) else f"{r.linf_rate:.2f}"
            l1r = "" if math.isnan(r.l1_rate) else f"{r.l1_rate:.2f}"
            lines.append(f"{r.n:>6} {r.linf:>12.4e} {lr:>6} {r.l1:>12.4e} {l1r:>6}")
        return "\n".join(lines) + "\n"


def _fmt(x: float) -> str:
    return "" if math.isnan(x) else repr(float(x))


def convergence_study(
    problem: ProblemSpec | str,
    scheme: SchemeId | str,
    ns: Sequence[int] = DEFAULT_NS,
    cfl: float = 0.4,
    dt_rule: DtRule | str = DtRule.ACCURACY,
    t_final: float | None = None,
) -> ConvergenceTable:
    """Run ``problem`` at every resolution in ``ns`` and tabulate errors and rates.

    Errors compare against the exact solution in the representation of the
    initial data (cell averages for advection, point values for Burgers).
    """
    spec = get_problem(problem) if isinstance(problem, str) else problem
    scheme = SchemeId.parse(scheme)
    if spec.exact is None or not spec.smooth_exact:
        raise ValueError(
            f"problem {spec.id!r} has no smooth exact solution; convergence studies need one"
        )
    dt_rule = DtRule(dt_rule)
    controls = TimeControls(
        t_final if t_final is not None else spec.t_final, cfl, dt_rule, accuracy_exponent(scheme)
    )
    linf, l1, walls = [], [], []
    for n in ns:
        grid = spec.grid(n)
        res = run(spec.model, scheme, grid, spec.boundary, spec.initial, controls)
        exact = spec.exact(grid, res.t)
        a, b = error_norms(res.u[0], np.reshape(exact, res.u[0].shape), grid.spacing)
        linf.append(a)
        l1.append(b)
        walls.append(res.wall_time)
    return ConvergenceTable.from_errors(spec.id, scheme, dt_rule, ns, linf, l1, walls)


def check_rates(table: ConvergenceTable, expected: dict) -> tuple[bool, str] | None:
    """Compare the last L1 rate with ``expected[scheme]``; None when no range is declared."""
    band = expected.get(table.scheme.value)
    if band is None:
        return None
    lo, hi = band
    rate = table.last.l1_rate
    ok = lo <= rate <= hi
    return ok, f"{table.scheme.value}: last L1 rate {rate:.3f} {'in' if ok else 'outside'} [{lo}, {hi}]"
