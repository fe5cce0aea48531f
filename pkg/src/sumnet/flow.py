"""Unit-capacity max-flow and the source/terminal feasibility gate."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .graph import Dag, Edge, Instance


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    failures: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.feasible != (not self.failures):
            raise ValueError("feasible must be equivalent to an empty failure list")


def _augment(g: Dag, sources: set[int], sink: int, flow: set[int]) -> bool:
    """Push one unit along a BFS residual path; False when none remains.

    All sources are roots of the search, which is the same as starting
    from a super-source with unbounded edges into each of them.
    """
    parent: dict[int, tuple[Edge, bool]] = {}
    seen = set(sources)
    queue = deque(sorted(sources))
    while queue:
        v = queue.popleft()
        moves = [(e, True, e.head) for e in g.out_edges(v) if e.id not in flow]
        moves += [(e, False, e.tail) for e in g.in_edges(v) if e.id in flow]
        moves.sort(key=lambda m: m[0].id)
        for e, forward, w in moves:
            if w in seen:
                continue
            seen.add(w)
            parent[w] = (e, forward)
            if w == sink:
                while w not in sources:
                    e, forward = parent[w]
                    if forward:
                        flow.add(e.id)
                        w = e.tail
                    else:
                        flow.discard(e.id)
                        w = e.head
                return True
            queue.append(w)
    return False


def _max_flow(g: Dag, sources: Iterable[int], sink: int) -> tuple[int, set[int]]:
    roots = set(sources)
    if sink in roots:
        raise ValueError("sink must not be a source")
    flow: set[int] = set()
    value = 0
    if sink not in g or not roots & set(g.labels):
        return 0, flow
    roots &= set(g.labels)
    while _augment(g, roots, sink, flow):
        value += 1
    return value, flow


def max_flow_unit(g: Dag, s: int, t: int) -> int:
    """Maximum number of pairwise edge-disjoint s-t paths."""
    return _max_flow(g, {s}, t)[0]


def super_source_max_flow(g: Dag, sources: Iterable[int], t: int) -> int:
    return _max_flow(g, sources, t)[0]


def min_cut(g: Dag, s: int, t: int) -> list[Edge]:
    """Edges of the minimum s-t cut nearest to ``s``."""
    _, flow = _max_flow(g, {s}, t)
    side = {s}
    queue = deque([s])
    while queue:
        v = queue.popleft()
        for e in g.out_edges(v):
            if e.id not in flow and e.head not in side:
                side.add(e.head)
                queue.append(e.head)
        for e in g.in_edges(v):
            if e.id in flow and e.tail not in side:
                side.add(e.tail)
                queue.append(e.tail)
    return [e for e in g.edges.values() if e.tail in side and e.head not in side]


def check_feasibility(inst: Instance) -> FeasibilityReport:
    failures = tuple(
        (s, t)
        for s in inst.sources
        for t in inst.terminals
        if max_flow_unit(inst.graph, s, t) == 0
    )
    return FeasibilityReport(not failures, failures)
