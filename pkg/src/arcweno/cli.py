"""Command-line front end: ``solve``, ``converge``, ``compare`` and ``list``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .flux import Euler
from .harness import DEFAULT_NS, check_rates, convergence_study
from .problems import PROBLEMS, ProblemSpec, get_problem
from .reconstruction import SchemeId
from .solver import RunResult, run
from .timestep import DtRule, TimeControls, accuracy_exponent

log = logging.getLogger("arcweno")

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3
MANIFEST = "manifest.json"


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    problem: str
    schemes: list[str]
    ns: list[int]
    cfl: float = 0.4
    dt_rule: str = "cfl"
    t_final: float | None = None
    out: str = "out"
    fmt: str = "csv"
    extra: dict = field(default_factory=dict)

    def validate(self) -> "RunConfig":
        if self.problem not in PROBLEMS:
            raise ConfigError(f"unknown problem {self.problem!r}; valid: {', '.join(PROBLEMS)}")
        if not self.schemes:
            raise ConfigError("no scheme given")
        try:
            self.schemes = [SchemeId.parse(s).value for s in self.schemes]
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if any(int(n) < 5 for n in self.ns):
            raise ConfigError(f"resolutions must be at least 5 cells, got {self.ns}")
        self.ns = [int(n) for n in self.ns]
        if not 0.0 < self.cfl <= 1.0:
            raise ConfigError(f"cfl must lie in (0, 1], got {self.cfl}")
        if self.dt_rule not in ("cfl", "acc"):
            raise ConfigError(f"dt rule must be 'cfl' or 'acc', got {self.dt_rule!r}")
        if self.t_final is not None and not self.t_final > 0:
            raise ConfigError(f"t_final must be positive, got {self.t_final}")
        if self.fmt != "csv":
            raise ConfigError(f"unsupported output format {self.fmt!r}; only csv is written")
        return self

    @property
    def spec(self) -> ProblemSpec:
        return get_problem(self.problem)

    def controls(self, scheme: str) -> TimeControls:
        return TimeControls(
            self.t_final if self.t_final is not None else self.spec.t_final,
            self.cfl,
            DtRule(self.dt_rule),
            accuracy_exponent(scheme),
        )


def _split_list(value) -> list:
    if value is None:
        return []
    if isinstance(value, (list, tuple)):
        out = []
        for v in value:
            out.extend(_split_list(v))
        return out
    if isinstance(value, (int, float)):
        return [value]
    return [s for s in str(value).replace(",", " ").split() if s]


def load_config_file(path: str) -> dict:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file {path} not found")
    text = p.read_text()
    try:
        data = json.loads(text) if p.suffix == ".json" else yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path} must hold a mapping")
    return {k.replace("-", "_"): v for k, v in data.items()}


def build_config(args: argparse.Namespace) -> RunConfig:
    """Merge the config file (if any) with command-line flags; flags win."""
    data = load_config_file(args.config) if args.config else {}
    known = {"problem", "scheme", "schemes", "n", "cfl", "dt_rule", "t_final", "out", "format"}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    flags = {k: v for k, v in vars(args).items() if v is not None}

    def pick(key, default=None):
        return flags.get(key, data.get(key, default))

    problem = pick("problem")
    if problem is None:
        raise ConfigError("no problem given (use --problem or a config file)")
    schemes = _split_list(flags.get("schemes") or flags.get("scheme") or data.get("schemes") or data.get("scheme"))
    ns = _split_list(pick("n"))
    if not ns and problem in PROBLEMS:
        ns = list(DEFAULT_NS) if args.command == "converge" else [PROBLEMS[problem].default_n]
    try:
        cfg = RunConfig(
            problem=str(problem),
            schemes=[str(s) for s in schemes],
            ns=[int(n) for n in ns],
            cfl=float(pick("cfl", 0.4)),
            dt_rule=str(pick("dt_rule", "acc" if args.command == "converge" else "cfl")),
            t_final=None if pick("t_final") is None else float(pick("t_final")),
            out=str(pick("out", "out")),
            fmt=str(pick("format", "csv")),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid config value: {exc}") from None
    return cfg.validate()


# -- output ---------------------------------------------------------------------------


def _fmt(x) -> str:
    return repr(float(x))


def field_variables(spec: ProblemSpec, u: np.ndarray) -> dict[str, np.ndarray]:
    """Named output fields: primitives for Euler, the solution itself otherwise."""
    model = spec.model
    if isinstance(model, Euler):
        prim = model.primitives(u)
        if model.ndim == 1:
            return {"density": prim[0], "velocity": prim[1], "pressure": prim[2]}
        return {"density": prim[0], "velocity_x": prim[1], "velocity_y": prim[2], "pressure": prim[3]}
    return {"u": u[0]}


def exact_variables(spec: ProblemSpec, grid, t: float) -> dict[str, np.ndarray]:
    if spec.exact is None or spec.ndim != 1:
        return {}
    ex = np.asarray(spec.exact(grid, t))
    if isinstance(spec.model, Euler):
        return {"density": ex[0], "velocity": ex[1], "pressure": ex[2]}
    return {"u": ex.reshape(-1)}


def _coords(grid) -> list[np.ndarray]:
    if hasattr(grid, "centers"):
        return [grid.centers]
    x, y = grid.mesh()
    return [x.ravel(), y.ravel()]


def write_columns(path: Path, header: list[str], columns: list[np.ndarray]) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in zip(*columns):
            w.writerow([_fmt(v) for v in row])


def write_manifest(out: Path, entries: dict) -> None:
    (out / MANIFEST).write_text(json.dumps(entries, indent=2, sort_keys=True) + "\n")


def _audit(res: RunResult) -> dict:
    return {
        "initial_total": res.initial_total.tolist(),
        "final_total": res.final_total.tolist(),
        "boundary_outflow": res.boundary_outflow.tolist(),
        "defect": res.conservation_defect.tolist(),
    }


# -- commands -------------------------------------------------------------------------


def _solve_one(cfg: RunConfig, scheme: str, n: int) -> RunResult:
    spec = cfg.spec
    return run(spec.model, scheme, spec.grid(n), spec.boundary, spec.initial, cfg.controls(scheme))


def cmd_solve(cfg: RunConfig) -> int:
    if len(cfg.schemes) != 1 or len(cfg.ns) != 1:
        raise ConfigError("solve takes exactly one scheme and one resolution")
    scheme, n = cfg.schemes[0], cfg.ns[0]
    res = _solve_one(cfg, scheme, n)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    coords = _coords(res.grid)
    header = ["x"] if len(coords) == 1 else ["x", "y"]
    files = []
    for name, values in field_variables(cfg.spec, res.u).items():
        fname = f"{name}.csv"
        write_columns(out / fname, header + ["value"], coords + [values.ravel()])
        files.append(fname)
    write_manifest(
        out,
        {
            "command": "solve",
            "problem": cfg.problem,
            "scheme": scheme,
            "N": n,
            "cfl": cfg.cfl,
            "dt_rule": cfg.dt_rule,
            "final_time": res.t,
            "steps": res.steps,
            "wall_time": res.wall_time,
            "conservation": _audit(res),
            "files": files,
        },
    )
    print(f"{cfg.problem} / {scheme} / N={n}: t={res.t:.6g} in {res.steps} steps, wrote {out}")
    return EXIT_OK


def cmd_converge(cfg: RunConfig) -> int:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    spec = cfg.spec
    if spec.exact is None or not spec.smooth_exact:
        raise ConfigError(
            f"problem {cfg.problem!r} has no smooth exact solution; "
            f"convergence studies need one ({', '.join(p.id for p in PROBLEMS.values() if p.smooth_exact)})"
        )
    files, summary, tables = [], [], {}
    for scheme in cfg.schemes:
        table = convergence_study(spec, scheme, cfg.ns, cfg.cfl, cfg.dt_rule, cfg.t_final)
        stem = f"convergence_{SchemeId.parse(scheme).column}"
        (out / f"{stem}.csv").write_text(table.to_csv())
        (out / f"{stem}.txt").write_text(table.to_text())
        files += [f"{stem}.csv", f"{stem}.txt"]
        print(table.to_text())
        verdict = check_rates(table, spec.expected_rates)
        if verdict is not None:
            ok, line = verdict
            summary.append(("PASS " if ok else "FAIL ") + line)
        tables[scheme] = [asdict(r) for r in table.rows]
    if summary:
        (out / "summary.txt").write_text("\n".join(summary) + "\n")
        files.append("summary.txt")
        print("\n".join(summary))
    write_manifest(
        out,
        {
            "command": "converge",
            "problem": cfg.problem,
            "schemes": cfg.schemes,
            "N": cfg.ns,
            "cfl": cfg.cfl,
            "dt_rule": cfg.dt_rule,
            "final_time": cfg.t_final if cfg.t_final is not None else spec.t_final,
            "wall_time": sum(r["wall_time"] for rows in tables.values() for r in rows),
            "files": files,
        },
    )
    return EXIT_OK


def cmd_compare(cfg: RunConfig) -> int:
    if len(cfg.ns) != 1:
        raise ConfigError("compare needs one resolution shared by every scheme")
    n = cfg.ns[0]
    results = {s: _solve_one(cfg, s, n) for s in cfg.schemes}
    first = next(iter(results.values()))
    grid = first.grid
    coords = _coords(grid)
    header = ["x"] if len(coords) == 1 else ["x", "y"]
    exact = exact_variables(cfg.spec, grid, first.t)
    fields = {s: field_variables(cfg.spec, r.u) for s, r in results.items()}
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for name in fields[cfg.schemes[0]]:
        cols = list(coords)
        head = list(header)
        if name in exact:
            head.append("exact")
            cols.append(np.ravel(exact[name]))
        for s in cfg.schemes:
            head.append(SchemeId.parse(s).column)
            cols.append(fields[s][name].ravel())
        fname = f"compare_{name}.csv"
        write_columns(out / fname, head, cols)
        files.append(fname)
    write_manifest(
        out,
        {
            "command": "compare",
            "problem": cfg.problem,
            "schemes": cfg.schemes,
            "N": n,
            "cfl": cfg.cfl,
            "dt_rule": cfg.dt_rule,
            "final_time": first.t,
            "wall_time": {s: r.wall_time for s, r in results.items()},
            "conservation": {s: _audit(r) for s, r in results.items()},
            "files": files,
        },
    )
    print(f"compared {', '.join(cfg.schemes)} on {cfg.problem} at N={n}, wrote {out}")
    return EXIT_OK


def cmd_list() -> int:
    print("problems:")
    for p in PROBLEMS.values():
        tag = "exact" if p.smooth_exact else ("reference" if p.exact else "-")
        print(f"  {p.id:<16} {p.ndim}D  t_final={p.t_final:.6g}  N={p.default_n}  {tag}")
    print("schemes:")
    for s in SchemeId:
        print(f"  {s.value}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="arcweno", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("list", help="list problems and schemes")
    for name, helptext in (
        ("solve", "run one simulation and dump its fields"),
        ("converge", "grid-convergence table against the exact solution"),
        ("compare", "run several schemes on one grid and merge the fields"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", help="YAML or JSON file; flags override its entries")
        p.add_argument("--problem")
        p.add_argument("--scheme", help="scheme id, or a comma list")
        p.add_argument("--schemes", help="comma-separated scheme ids")
        p.add_argument("--n", nargs="+", help="resolution(s); converge takes a list")
        p.add_argument("--cfl", type=float)
        p.add_argument("--dt-rule", choices=("cfl", "acc"))
        p.add_argument("--t-final", type=float)
        p.add_argument("--out")
        p.add_argument("--format", choices=("csv",))
        p.add_argument("--seedless", action="store_true",
                       help="accepted for scripts; runs never use random numbers and are always deterministic")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if args.command == "list":
        return cmd_list()
    try:
        cfg = build_config(args)
        command = {"solve": cmd_solve, "converge": cmd_converge, "compare": cmd_compare}[args.command]
        return command(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ArithmeticError, ValueError) as exc:
        print(f"run aborted: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
