"""Two sources, any number of terminals.

Pipeline: virtual endpoints -> per-terminal path pair rewired to share
its suffix -> union graph with merge points -> random multicast of both
sources to every merge point -> demand-driven overwrite with [1 1].
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import InfeasibleError, InternalError, MulticastError, UnsupportedShapeError
from .field import GF, default_degree_two_sources
from .flow import FeasibilityReport, check_feasibility, max_flow_unit, super_source_max_flow
from .graph import Dag, Edge, Instance, Path, find_path, union_subgraph
from .report import SolveReport
from .rewire import AugmentedInstance, augment, rewire_shared_suffix
from .verify import Assignment, check_local_validity, check_sum_recovery

MAX_RETRIES = 64


@dataclass(frozen=True)
class MergeEntry:
    terminal: int  # virtual terminal node
    merge_node: int
    paths: tuple[Path, Path]

    @property
    def shared_suffix(self) -> Path:
        return self.paths[0].suffix_from(self.merge_node)


@dataclass(frozen=True)
class MergePointTable:
    per_terminal: dict[int, MergeEntry]
    groups: tuple[tuple[int, tuple[int, ...]], ...]  # (merge node, terminals) by topological number

    @property
    def sorted_merge_nodes(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.groups)


@dataclass
class OverwriteTrace:
    active: list[int] = field(default_factory=list)
    demand_history: list[tuple[int, ...]] = field(default_factory=list)
    overwritten: set[int] = field(default_factory=set)
    zeroed: list[int] = field(default_factory=list)


def build_reduced_graph(aug: AugmentedInstance) -> tuple[Dag, MergePointTable]:
    if len(aug.virtual_sources) != 2:
        raise UnsupportedShapeError("the two-source construction needs exactly 2 sources")
    g = aug.graph
    s1, s2 = aug.virtual_sources
    entries: dict[int, MergeEntry] = {}
    for t in aug.virtual_terminals:
        p1, p2 = find_path(g, s1, t), find_path(g, s2, t)
        if p1 is None or p2 is None:
            missing = [(aug.origin[s], aug.origin[t]) for s, p in ((s1, p1), (s2, p2)) if p is None]
            raise InfeasibleError(FeasibilityReport(False, tuple(missing)))
        p1, q2, meet = rewire_shared_suffix(p1, p2)
        entries[t] = MergeEntry(t, meet, (p1, q2))
    reduced = union_subgraph(g, [p for e in entries.values() for p in e.paths])
    groups: dict[int, list[int]] = {}
    for t, entry in entries.items():
        groups.setdefault(entry.merge_node, []).append(t)
    ordered = sorted(groups, key=reduced.position.__getitem__)
    table = MergePointTable(entries, tuple((v, tuple(groups[v])) for v in ordered))
    check_merge_conditions(reduced, (s1, s2), table.sorted_merge_nodes)
    return reduced, table


def check_merge_conditions(reduced: Dag, sources: tuple[int, int], merge_nodes) -> None:
    """Each merge node: unit flow from either source, flow 2 from both."""
    s1, s2 = sources
    for v in merge_nodes:
        flows = (
            max_flow_unit(reduced, s1, v),
            max_flow_unit(reduced, s2, v),
            super_source_max_flow(reduced, sources, v),
        )
        if flows != (1, 1, 2):
            raise InternalError(f"merge node {reduced.label(v)} has flows {flows}, expected (1, 1, 2)")


def _random_code(reduced: Dag, sources: tuple[int, ...], fld: GF, rng: random.Random) -> Assignment:
    n = len(sources)
    index = {s: k for k, s in enumerate(sources)}
    vecs: Assignment = {}
    low = 0 if fld.size == 2 else 1
    for e in reduced.edges_in_topological_order():
        if e.tail in index:
            vecs[e.id] = fld.unit(n, index[e.tail])
            continue
        ins = reduced.in_edges(e.tail)
        # scaling a lone input cannot change any rank, so just forward it
        coeffs = [1] if len(ins) == 1 else [rng.randrange(low, fld.size) for _ in ins]
        vecs[e.id] = fld.combine(coeffs, [vecs[f.id] for f in ins], n)
    return vecs


def multicast_to_merge_nodes(
    reduced: Dag,
    merge_nodes,
    fld: GF,
    seed: int,
    sources: tuple[int, int],
    retries: int = MAX_RETRIES,
) -> tuple[Assignment, int]:
    """Random linear code on the reduced graph delivering rank 2 at every
    merge node.

    Local coefficients are drawn uniformly from the nonzero elements so
    that long paths are never silenced; over GF(2) that would leave a
    single code, so there they range over {0, 1}. Retries with seed+1, seed+2, ...; returns the
    code and the seed that worked.
    """
    for attempt in range(retries):
        rng = random.Random(seed + attempt)
        code = _random_code(reduced, sources, fld, rng)
        if all(fld.rank(code[e.id] for e in reduced.in_edges(v)) == 2 for v in merge_nodes):
            return code, seed + attempt
    raise MulticastError(
        f"no rank-2 multicast code after {retries} seeds over GF(2^{fld.m}); use a larger field"
    )


def _zero_stale_edges(reduced: Dag, a: Assignment, sources, fld: GF, keep: set[int]) -> list[int]:
    # Overwriting can strand downstream edges whose old vector left the span
    # of their tail; such edges feed no terminal, and zero is always valid.
    index = set(sources)
    zeroed = []
    for e in reduced.edges_in_topological_order():
        if e.tail in index or e.id in keep:
            continue
        if not fld.in_span(a[e.id], [a[f.id] for f in reduced.in_edges(e.tail)]):
            a[e.id] = fld.zero(len(sources))
            zeroed.append(e.id)
    return zeroed


def algorithm1_overwrite(
    reduced: Dag,
    table: MergePointTable,
    base: Assignment,
    fld: GF,
    sources: tuple[int, int],
) -> tuple[Assignment, OverwriteTrace]:
    """Demand-driven [1 1] overwrite, walking merge nodes in topological order."""
    a = dict(base)
    ones = fld.ones(2)
    order = [t for _, group in table.groups for t in group]
    demand = dict.fromkeys(order, 0)
    trace = OverwriteTrace()

    def paint(path: Path) -> None:
        for e in path.edges:
            a[e.id] = ones
            trace.overwritten.add(e.id)

    for k, (node, group) in enumerate(table.groups):
        if all(demand[t] for t in group):
            trace.demand_history.append(tuple(demand[t] for t in order))
            continue
        trace.active.append(node)
        for t in group:
            if not demand[t]:
                paint(table.per_terminal[t].shared_suffix)
                demand[t] = 1
        for _, later in table.groups[k + 1:]:
            for t in later:
                if demand[t]:
                    continue
                p = find_path(reduced, node, t)
                if p is not None:
                    paint(p)
                    demand[t] = 1
        trace.demand_history.append(tuple(demand[t] for t in order))

    if not all(demand.values()):
        raise InternalError("some terminal demand is still unmet")
    trace.zeroed = _zero_stale_edges(reduced, a, sources, fld, trace.overwritten)
    ok, bad = check_local_validity(reduced, a, sources, fld)
    if not ok:
        raise InternalError(f"overwritten assignment invalid at edge {bad.id}", edge=bad.id)
    return a, trace


def solve_2xn(inst: Instance, fld: GF | None = None, seed: int = 0) -> SolveReport:
    if len(inst.sources) != 2 or not inst.terminals:
        raise UnsupportedShapeError("the two-source solver needs 2 sources and at least one terminal")
    report = check_feasibility(inst)
    if not report.feasible:
        raise InfeasibleError(report)
    fld = fld or GF(default_degree_two_sources(len(inst.terminals)))
    aug = augment(inst)
    reduced, table = build_reduced_graph(aug)
    sources = aug.virtual_sources
    base, used_seed = multicast_to_merge_nodes(reduced, table.sorted_merge_nodes, fld, seed, sources)
    coded, trace = algorithm1_overwrite(reduced, table, base, fld, sources)
    assignment = {i: coded.get(i, fld.zero(2)) for i in aug.graph.edges}
    validity = check_local_validity(aug.graph, assignment, sources, fld)
    transfer = check_sum_recovery(aug.graph, assignment, sources, aug.virtual_terminals, fld)
    if not transfer.all_recovered:
        raise InternalError("a terminal does not receive [1 1]")
    return SolveReport(
        instance=inst,
        solver="two_by_n",
        field=fld,
        seed=seed,
        feasibility=report,
        augmented=aug,
        subgraph=frozenset(reduced.edges),
        assignment=assignment,
        valid=validity[0],
        witness=validity[1],
        transfer=transfer,
        merge_table=table,
        overwrite=trace,
        multicast_seed=used_seed,
    )
