"""Arc-length ENO/WENO schemes for hyperbolic conservation laws."""

from .flux import Burgers, Euler, InadmissibleStateError, LinearAdvection
from .harness import ConvergenceTable, convergence_study, error_norms
from .problems import PROBLEMS, get_problem
from .reconstruction import SchemeId, reconstruct
from .solver import BoundaryKind, Grid1D, Grid2D, RunResult, run, run_1d, run_2d
from .timestep import DtRule, TimeControls

__all__ = [
    "BoundaryKind",
    "Burgers",
    "ConvergenceTable",
    "DtRule",
    "Euler",
    "Grid1D",
    "Grid2D",
    "InadmissibleStateError",
    "LinearAdvection",
    "PROBLEMS",
    "RunResult",
    "SchemeId",
    "TimeControls",
    "convergence_study",
    "error_norms",
    "get_problem",
    "reconstruct",
    "run",
    "run_1d",
    "run_2d",
]
