"""Solver selection shared by the library entry point and the CLI."""
from __future__ import annotations

from .errors import UnsupportedShapeError
from .field import GF
from .graph import Instance
from .report import SolveReport
from .trees import solve_tree
from .two_sources import solve_2xn
from .two_terminals import solve_nx2

SOLVERS = ("auto", "2xn", "nx2", "tree")
SHAPE_MESSAGE = "unsupported shape: only 2×n and n×2 instances are covered"


def select_solver(inst: Instance, prefer: str = "auto") -> str:
    """Pick a solver by shape.

    Two terminals go to 'nx2' (this includes 2×2), two sources to '2xn',
    and the remaining single-source or single-terminal shapes to 'tree'.
    """
    if prefer not in SOLVERS:
        raise ValueError(f"solver must be one of {SOLVERS}")
    n_src, n_term = inst.shape
    fits = {
        "2xn": n_src == 2 and n_term >= 1,
        "nx2": n_term == 2 and n_src >= 1,
        "tree": min(n_src, n_term) == 1,
    }
    if prefer != "auto":
        if not fits[prefer]:
            raise UnsupportedShapeError(f"{SHAPE_MESSAGE} ({prefer} cannot take {n_src}×{n_term})")
        return prefer
    for name in ("nx2", "2xn", "tree"):
        if fits[name]:
            return name
    raise UnsupportedShapeError(f"{SHAPE_MESSAGE}; got {n_src}×{n_term}")


def solve(inst: Instance, fld: GF | None = None, seed: int = 0, solver: str = "auto") -> SolveReport:
    """Run the matching solver. Raises InfeasibleError on a zero-flow pair."""
    name = select_solver(inst, solver)
    if name == "2xn":
        return solve_2xn(inst, fld, seed)
    if name == "nx2":
        return solve_nx2(inst, fld)
    return solve_tree(inst, fld)
