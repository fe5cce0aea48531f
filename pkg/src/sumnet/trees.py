"""Degenerate shapes: one source, or one terminal.

A breadth-first tree (out from the lone source, or in towards the lone
terminal) already gives every pair exactly one path, so unit gains
deliver the sum without any construction.
"""
from __future__ import annotations

from .errors import InfeasibleError, InternalError, UnsupportedShapeError
from .field import GF, GF2
from .flow import check_feasibility
from .graph import Instance, count_paths, find_path
from .report import SolveReport
from .rewire import augment
from .two_terminals import OnePathSubgraph, assign_unit_gains
from .verify import check_local_validity, check_sum_recovery


def one_path_tree(g, sources, terminals) -> OnePathSubgraph:
    if len(sources) == 1:
        (s,) = sources
        table = {(s, t): find_path(g, s, t) for t in terminals}
    elif len(terminals) == 1:
        (t,) = terminals
        rev = g.reversed()
        table = {(s, t): find_path(rev, t, s).reversed() for s in sources}
    else:
        raise UnsupportedShapeError("a tree only covers one source or one terminal")
    h = g.subgraph({i for p in table.values() for i in p.edge_ids})
    for s, t in table:
        if count_paths(h, s, t) != 1:
            raise InternalError(f"tree has {count_paths(h, s, t)} paths from {s} to {t}")
    return OnePathSubgraph(h, tuple(sources), tuple(terminals), table)


def solve_tree(inst: Instance, fld: GF | None = None) -> SolveReport:
    if min(inst.shape) != 1:
        raise UnsupportedShapeError("the tree solver needs a single source or a single terminal")
    report = check_feasibility(inst)
    if not report.feasible:
        raise InfeasibleError(report)
    fld = fld or GF2
    aug = augment(inst)
    ops = one_path_tree(aug.graph, aug.virtual_sources, aug.virtual_terminals)
    assignment = assign_unit_gains(ops, fld, aug.graph)
    ok, witness = check_local_validity(aug.graph, assignment, aug.virtual_sources, fld)
    transfer = check_sum_recovery(aug.graph, assignment, aug.virtual_sources, aug.virtual_terminals, fld)
    if not transfer.all_recovered:
        raise InternalError("a terminal does not receive the all-ones vector")
    return SolveReport(
        instance=inst,
        solver="tree",
        field=fld,
        feasibility=report,
        augmented=aug,
        subgraph=frozenset(ops.graph.edges),
        assignment=assignment,
        valid=ok,
        witness=witness,
        transfer=transfer,
        one_path=ops,
        source_order=inst.sources,
    )
