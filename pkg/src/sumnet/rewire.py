"""Graph surgery done before coding: virtual endpoints and path rewiring."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Collection

from .errors import InfeasibleError, InternalError
from .flow import check_feasibility, max_flow_unit
from .graph import Dag, Edge, Instance, Path


class RewireError(ValueError):
    pass


@dataclass(frozen=True)
class AugmentedInstance:
    """Instance graph plus a virtual source S' -> S per source and a
    virtual terminal T -> T' per terminal."""

    instance: Instance
    graph: Dag
    virtual_sources: tuple[int, ...]
    virtual_terminals: tuple[int, ...]
    origin: dict[int, int]

    def source_edge(self, k: int) -> Edge:
        return self.graph.out_edges(self.virtual_sources[k])[0]

    def terminal_edge(self, j: int) -> Edge:
        return self.graph.in_edges(self.virtual_terminals[j])[0]

    @property
    def virtual_edge_ids(self) -> set[int]:
        return {e.id for e in self.graph.edges.values() if e.tail in self.origin or e.head in self.origin}


def _fresh_label(taken: set[str], base: str) -> str:
    label = base + "'"
    while label in taken:
        label += "'"
    taken.add(label)
    return label


def augment(inst: Instance, *, check: bool = True) -> AugmentedInstance:
    if check:
        report = check_feasibility(inst)
        if not report.feasible:
            raise InfeasibleError(report)
    g = inst.graph
    taken = set(g.labels.values())
    node = g.next_node_id()
    eid = g.next_edge_id()
    labels: dict[int, str] = {}
    edges: list[Edge] = []
    origin: dict[int, int] = {}
    vsources, vterminals = [], []
    for s in inst.sources:
        labels[node] = _fresh_label(taken, g.label(s))
        edges.append(Edge(eid, node, s))
        origin[node] = s
        vsources.append(node)
        node += 1
        eid += 1
    for t in inst.terminals:
        labels[node] = _fresh_label(taken, g.label(t))
        edges.append(Edge(eid, t, node))
        origin[node] = t
        vterminals.append(node)
        node += 1
        eid += 1
    aug = AugmentedInstance(inst, g.extended(labels, edges), tuple(vsources), tuple(vterminals), origin)
    if check:
        for s in aug.virtual_sources:
            for t in aug.virtual_terminals:
                if max_flow_unit(aug.graph, s, t) != 1:
                    raise InternalError(f"virtual pair {labels[s]}-{labels[t]} does not have unit max-flow")
    return aug


def _meet_forward(p1: Path, p2: Path, allowed: Collection[int] | None) -> int | None:
    on_p2 = set(p2.nodes)
    for v in p1.nodes:
        if v in on_p2 and (allowed is None or v in allowed):
            return v
    return None


def rewire_shared_suffix(
    p1: Path, p2: Path, allowed: Collection[int] | None = None
) -> tuple[Path, Path, int]:
    """Reroute ``p2`` onto ``p1`` from their first common node.

    ``meet`` is the first node of ``p1`` lying on ``p2`` (and in ``allowed``
    when given). The second returned path follows ``p2`` up to ``meet`` and
    ``p1`` afterwards. Without a restriction the parts before ``meet`` are
    edge-disjoint.
    """
    if p1.end != p2.end:
        raise RewireError("paths must end at the same node")
    meet = _meet_forward(p1, p2, allowed)
    if meet is None:
        raise RewireError("paths have no admissible common node")
    q2 = p2.prefix_to(meet).then(p1.suffix_from(meet))
    if allowed is None:
        shared = set(p1.prefix_to(meet).edge_ids) & set(q2.prefix_to(meet).edge_ids)
        if shared:
            raise InternalError("rewired prefixes share an edge", edge=min(shared))
    return p1, q2, meet


def rewire_shared_prefix(
    p1: Path, p2: Path, allowed: Collection[int] | None = None
) -> tuple[Path, Path, int]:
    """Mirror image of :func:`rewire_shared_suffix` for paths with a common start.

    ``meet`` is the last node of ``p1`` lying on ``p2`` and in ``allowed``;
    the second returned path follows ``p1`` up to ``meet`` and ``p2`` after.
    """
    if p1.start != p2.start:
        raise RewireError("paths must start at the same node")
    _, q2r, meet = rewire_shared_suffix(p1.reversed(), p2.reversed(), allowed)
    return p1, q2r.reversed(), meet
