"""Immutable DAG with unit-capacity (possibly parallel) edges.

Node and edge ids are integers; labels exist for I/O only. Every
traversal visits out-edges in ascending edge id, so all results are
reproducible.
"""
from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence


class CycleError(ValueError):
    """Raised when an edge set contains a directed cycle."""

    def __init__(self, edge: "Edge", message: str | None = None):
        self.edge = edge
        super().__init__(message or f"graph has a cycle through edge {edge.id} ({edge.tail}->{edge.head})")


@dataclass(frozen=True, order=True)
class Edge:
    id: int
    tail: int
    head: int

    def reversed(self) -> "Edge":
        return Edge(self.id, self.head, self.tail)


class Dag:
    """Directed acyclic multigraph.

    ``labels`` maps node id to its text label. A topological order is
    computed on construction (Kahn's algorithm, smallest ready node id
    first); a cycle raises :class:`CycleError` carrying a back-edge.
    """

    __slots__ = ("labels", "edges", "_out", "_in", "topo", "position", "_by_label")

    def __init__(self, labels: Mapping[int, str], edges: Iterable[Edge]):
        self.labels: dict[int, str] = dict(sorted(labels.items()))
        edge_map: dict[int, Edge] = {}
        for e in edges:
            if e.id in edge_map:
                raise ValueError(f"duplicate edge id {e.id}")
            if e.tail not in self.labels or e.head not in self.labels:
                raise ValueError(f"edge {e.id} references an unknown node")
            if e.tail == e.head:
                raise ValueError(f"edge {e.id} is a self-loop on node {e.tail}")
            edge_map[e.id] = e
        self.edges: dict[int, Edge] = dict(sorted(edge_map.items()))
        out: dict[int, list[Edge]] = {v: [] for v in self.labels}
        inc: dict[int, list[Edge]] = {v: [] for v in self.labels}
        for e in self.edges.values():
            out[e.tail].append(e)
            inc[e.head].append(e)
        self._out = {v: tuple(es) for v, es in out.items()}
        self._in = {v: tuple(es) for v, es in inc.items()}
        self._by_label: dict[str, int] | None = None
        self.topo = self._kahn()
        self.position = {v: i for i, v in enumerate(self.topo)}

    @classmethod
    def from_pairs(cls, labels: Sequence[str], pairs: Iterable[tuple[str, str]]) -> "Dag":
        """Build a graph with dense ids from labels and (tail, head) label pairs."""
        index = {lab: i for i, lab in enumerate(labels)}
        if len(index) != len(labels):
            raise ValueError("duplicate node label")
        edges = [Edge(i, index[t], index[h]) for i, (t, h) in enumerate(pairs)]
        return cls(dict(enumerate(labels)), edges)

    def _kahn(self) -> tuple[int, ...]:
        indeg = {v: len(self._in[v]) for v in self.labels}
        ready = [v for v, d in indeg.items() if d == 0]
        heapq.heapify(ready)
        order = []
        while ready:
            v = heapq.heappop(ready)
            order.append(v)
            for e in self._out[v]:
                indeg[e.head] -= 1
                if indeg[e.head] == 0:
                    heapq.heappush(ready, e.head)
        if len(order) != len(self.labels):
            raise CycleError(self._back_edge(set(self.labels) - set(order)))
        return tuple(order)

    def _back_edge(self, stuck: set[int]) -> Edge:
        # every stuck node keeps an in-edge from another stuck node; walking
        # those edges backwards must revisit a node
        v = min(stuck)
        seen: dict[int, Edge | None] = {v: None}
        while True:
            e = next(e for e in self._in[v] if e.tail in stuck)
            if e.tail in seen:
                return e
            seen[e.tail] = e
            v = e.tail

    # -- queries ---------------------------------------------------------

    @property
    def nodes(self) -> tuple[int, ...]:
        return tuple(self.labels)

    def __contains__(self, node: int) -> bool:
        return node in self.labels

    def __len__(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"Dag(nodes={len(self.labels)}, edges={len(self.edges)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dag):
            return NotImplemented
        return self.labels == other.labels and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((tuple(self.labels.items()), tuple(self.edges.values())))

    def label(self, node: int) -> str:
        return self.labels[node]

    def node(self, label: str) -> int:
        if self._by_label is None:
            self._by_label = {lab: v for v, lab in self.labels.items()}
        return self._by_label[label]

    def edge(self, edge_id: int) -> Edge:
        return self.edges[edge_id]

    def out_edges(self, node: int) -> tuple[Edge, ...]:
        return self._out[node]

    def in_edges(self, node: int) -> tuple[Edge, ...]:
        return self._in[node]

    def edges_in_topological_order(self) -> list[Edge]:
        """Edges sorted so every in-edge of a tail precedes its out-edges."""
        pos = self.position
        return sorted(self.edges.values(), key=lambda e: (pos[e.tail], e.id))

    def reachable_from(self, node: int) -> set[int]:
        seen = {node}
        stack = [node]
        while stack:
            for e in self._out[stack.pop()]:
                if e.head not in seen:
                    seen.add(e.head)
                    stack.append(e.head)
        return seen

    def reaching(self, node: int) -> set[int]:
        """Nodes with a path to ``node`` (including ``node``)."""
        seen = {node}
        stack = [node]
        while stack:
            for e in self._in[stack.pop()]:
                if e.tail not in seen:
                    seen.add(e.tail)
                    stack.append(e.tail)
        return seen

    # -- derived graphs -----------------------------------------------------

    def subgraph(self, edge_ids: Iterable[int], keep: Iterable[int] = ()) -> "Dag":
        """Subgraph on the given edges; nodes are their endpoints plus ``keep``."""
        edges = [self.edges[i] for i in set(edge_ids)]
        nodes = set(keep)
        for e in edges:
            nodes.add(e.tail)
            nodes.add(e.head)
        return Dag({v: self.labels[v] for v in nodes}, edges)

    def without_edges(self, edge_ids: Iterable[int]) -> "Dag":
        drop = set(edge_ids)
        return Dag(self.labels, [e for e in self.edges.values() if e.id not in drop])

    def extended(self, labels: Mapping[int, str], edges: Iterable[Edge]) -> "Dag":
        clash = set(labels) & set(self.labels)
        if clash:
            raise ValueError(f"node ids already present: {sorted(clash)}")
        return Dag({**self.labels, **labels}, [*self.edges.values(), *edges])

    def reversed(self) -> "Dag":
        return Dag(self.labels, [e.reversed() for e in self.edges.values()])

    def next_node_id(self) -> int:
        return max(self.labels, default=-1) + 1

    def next_edge_id(self) -> int:
        return max(self.edges, default=-1) + 1


@dataclass(frozen=True)
class Instance:
    """A network: DAG plus ordered source and terminal lists."""

    graph: Dag
    sources: tuple[int, ...]
    terminals: tuple[int, ...]
    name: str = ""

    def __post_init__(self):
        for v in (*self.sources, *self.terminals):
            if v not in self.graph:
                raise ValueError(f"unknown node {v}")
        if len(set(self.sources)) != len(self.sources) or len(set(self.terminals)) != len(self.terminals):
            raise ValueError("duplicate source or terminal")
        if set(self.sources) & set(self.terminals):
            raise ValueError("sources and terminals must be disjoint")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.sources), len(self.terminals)


@dataclass(frozen=True)
class Path:
    """Simple directed path: a start node and a chained edge sequence.

    An empty edge tuple denotes the trivial path at ``start``.
    """

    start: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        at = self.start
        seen = {at}
        for e in self.edges:
            if e.tail != at:
                raise ValueError(f"edge {e.id} does not continue the path at node {at}")
            at = e.head
            if at in seen:
                raise ValueError(f"path revisits node {at}")
            seen.add(at)

    @classmethod
    def of(cls, edges: Sequence[Edge]) -> "Path":
        if not edges:
            raise ValueError("use Path(start) for an empty path")
        return cls(edges[0].tail, tuple(edges))

    @property
    def end(self) -> int:
        return self.edges[-1].head if self.edges else self.start

    @property
    def nodes(self) -> tuple[int, ...]:
        return (self.start, *(e.head for e in self.edges))

    @property
    def edge_ids(self) -> tuple[int, ...]:
        return tuple(e.id for e in self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def index(self, node: int) -> int:
        return self.nodes.index(node)

    def prefix_to(self, node: int) -> "Path":
        return Path(self.start, self.edges[: self.index(node)])

    def suffix_from(self, node: int) -> "Path":
        return Path(node, self.edges[self.index(node):])

    def then(self, other: "Path") -> "Path":
        if other.start != self.end:
            raise ValueError("paths do not chain")
        return Path(self.start, self.edges + other.edges)

    def reversed(self) -> "Path":
        return Path(self.end, tuple(e.reversed() for e in reversed(self.edges)))

    def in_graph(self, g: Dag) -> bool:
        return self.start in g and all(g.edges.get(e.id) == e for e in self.edges)


BLUE = "blue"
RED = "red"


@dataclass(frozen=True)
class ColoredSubgraph:
    """Per-edge color sets over a parent graph; uncolored edges are absent."""

    parent: Dag
    colors: Mapping[int, frozenset[str]] = field(default_factory=dict)

    @classmethod
    def painted(cls, parent: Dag, edge_ids: Iterable[int], color: str) -> "ColoredSubgraph":
        return cls(parent).with_color(edge_ids, color)

    def with_color(self, edge_ids: Iterable[int], color: str) -> "ColoredSubgraph":
        colors = dict(self.colors)
        for i in edge_ids:
            colors[i] = colors.get(i, frozenset()) | {color}
        return ColoredSubgraph(self.parent, colors)

    def without_color(self, edge_ids: Iterable[int], color: str) -> "ColoredSubgraph":
        colors = dict(self.colors)
        for i in edge_ids:
            rest = colors.get(i, frozenset()) - {color}
            if rest:
                colors[i] = rest
            else:
                colors.pop(i, None)
        return ColoredSubgraph(self.parent, colors)

    def edges_with(self, color: str) -> set[int]:
        return {i for i, c in self.colors.items() if color in c}

    def only(self, color: str) -> set[int]:
        return {i for i, c in self.colors.items() if c == {color}}

    def graph(self, color: str | None = None, keep: Iterable[int] = ()) -> Dag:
        ids = self.colors.keys() if color is None else self.edges_with(color)
        return self.parent.subgraph(ids, keep)


# -- operations ---------------------------------------------------------------


def topological_order(g: Dag) -> tuple[int, ...]:
    return g.topo


def find_path(g: Dag, source: int, target: int, forbidden: Iterable[int] = ()) -> Path | None:
    """Breadth-first shortest path avoiding ``forbidden`` nodes, or None."""
    blocked = set(forbidden)
    if source not in g or target not in g or target in blocked:
        return None
    if source == target:
        return Path(source)
    parent: dict[int, Edge] = {}
    seen = {source}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for e in g.out_edges(v):
            w = e.head
            if w in seen or w in blocked:
                continue
            seen.add(w)
            parent[w] = e
            if w == target:
                edges = []
                while w != source:
                    edges.append(parent[w])
                    w = parent[w].tail
                return Path(source, tuple(reversed(edges)))
            queue.append(w)
    return None


def path_counts_to(g: Dag, target: int) -> dict[int, int]:
    """Number of distinct directed paths from every node to ``target``."""
    counts = dict.fromkeys(g.labels, 0)
    if target not in g:
        return counts
    counts[target] = 1
    stop = g.position[target]
    for v in reversed(g.topo[:stop]):
        counts[v] = sum(counts[e.head] for e in g.out_edges(v))
    return counts


def count_paths(g: Dag, source: int, target: int) -> int:
    """Exact path count; the trivial path makes ``count_paths(g, v, v) == 1``."""
    if source not in g or target not in g:
        return 0
    return path_counts_to(g, target)[source]


def is_downstream(g: Dag, a: int | Edge, b: int | Edge) -> bool:
    """True iff ``b`` is downstream of ``a`` (a path leads from a to b).

    Nodes are ints, edges are :class:`Edge` values; an edge is entered
    at its tail and left at its head. Anything is downstream of itself.
    """
    if a == b:
        return True
    start = a.head if isinstance(a, Edge) else a
    end = b.tail if isinstance(b, Edge) else b
    return end in g.reachable_from(start)


def union_subgraph(g: Dag, paths: Iterable[Path]) -> Dag:
    ids: set[int] = set()
    keep: set[int] = set()
    for p in paths:
        if not p.in_graph(g):
            raise ValueError("path is not contained in the graph")
        ids.update(p.edge_ids)
        keep.add(p.start)
    return g.subgraph(ids, keep)
