"""Linear network codes that deliver the XOR of all sources to every terminal.

Two solved shapes: two sources with any number of terminals, and any
number of sources with two terminals. Both need only that every source
reaches every terminal.
"""
from .errors import InfeasibleError, InternalError, MulticastError, UnsupportedShapeError
from .field import GF, GF2
from .flow import FeasibilityReport, check_feasibility, max_flow_unit, super_source_max_flow
from .graph import Dag, Edge, Instance, Path, count_paths, find_path
from .io import export_dot, parse_instance, report_json, serialize_document
from .pipeline import select_solver, solve
from .report import SolveReport
from .two_sources import solve_2xn
from .two_terminals import solve_nx2
from .verify import check_local_validity, check_sum_recovery, simulate_transmission

__all__ = [
    "Dag", "Edge", "FeasibilityReport", "GF", "GF2", "InfeasibleError", "Instance",
    "InternalError", "MulticastError", "Path", "SolveReport", "UnsupportedShapeError",
    "check_feasibility", "check_local_validity", "check_sum_recovery", "count_paths",
    "export_dot", "find_path", "max_flow_unit", "parse_instance", "report_json",
    "select_solver", "serialize_document", "simulate_transmission", "solve",
    "solve_2xn", "solve_nx2", "super_source_max_flow",
]
