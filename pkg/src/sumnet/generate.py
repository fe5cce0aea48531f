"""Seeded random instances for testing both solvers."""
from __future__ import annotations

import random

from .flow import check_feasibility, min_cut
from .graph import Dag, Edge, Instance
from .io import InstanceDocument

KINDS = ("two_by_n", "n_by_two")


def _check_counts(kind: str, sources: int, terminals: int) -> None:
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    if sources < 1 or terminals < 1:
        raise ValueError("need at least one source and one terminal")
    if kind == "two_by_n" and sources != 2:
        raise ValueError("two_by_n instances have exactly 2 sources")
    if kind == "n_by_two" and terminals != 2:
        raise ValueError("n_by_two instances have exactly 2 terminals")


def generate_instance(
    kind: str,
    sources: int,
    terminals: int,
    extra_nodes: int = 0,
    seed: int = 0,
    infeasible: bool = False,
    extra_edges: int | None = None,
    max_hops: int = 3,
) -> InstanceDocument:
    """Layered random DAG with one planted path per source/terminal pair.

    Terminals are sinks. With ``infeasible`` a minimum cut for one random
    pair is deleted and every other pair it broke gets a direct edge back,
    so exactly that pair ends up disconnected.
    """
    _check_counts(kind, sources, terminals)
    rng = random.Random(seed)
    srcs = [f"s{i + 1}" for i in range(sources)]
    inner = [f"v{i + 1}" for i in range(extra_nodes)]
    terms = [f"t{i + 1}" for i in range(terminals)]
    rng.shuffle(inner)
    order = srcs + inner + terms
    pos = {lab: i for i, lab in enumerate(order)}

    pairs: list[tuple[str, str]] = []
    planted: set[tuple[str, str]] = set()
    for s in srcs:
        for t in terms:
            hops = sorted(rng.sample(inner, rng.randint(0, min(max_hops, len(inner)))), key=pos.__getitem__)
            chain = [s, *hops, t]
            for a, b in zip(chain, chain[1:]):
                if (a, b) not in planted:
                    planted.add((a, b))
                    pairs.append((a, b))
    count = rng.randint(0, len(inner) + 2) if extra_edges is None else extra_edges
    for _ in range(count):
        u = rng.choice(srcs + inner)
        later = [v for v in inner + terms if pos[v] > pos[u]]
        pairs.append((u, rng.choice(later)))

    failed = None
    if infeasible:
        failed = (rng.choice(srcs), rng.choice(terms))
        pairs = _cut_pair(order, pairs, srcs, terms, failed)

    name = f"{kind}-{sources}x{terminals}-seed{seed}" + ("-cut" if infeasible else "")
    return InstanceDocument(
        nodes=tuple(order),
        edges=tuple((a, b, 1) for a, b in pairs),
        sources=tuple(srcs),
        terminals=tuple(terms),
        name=name,
        infeasible_pair=failed,
    )


def _instance(order, pairs, srcs, terms) -> Instance:
    index = {lab: i for i, lab in enumerate(order)}
    g = Dag(dict(enumerate(order)), [Edge(i, index[a], index[b]) for i, (a, b) in enumerate(pairs)])
    return Instance(g, tuple(index[s] for s in srcs), tuple(index[t] for t in terms))


def _cut_pair(order, pairs, srcs, terms, failed):
    index = {lab: i for i, lab in enumerate(order)}
    inst = _instance(order, pairs, srcs, terms)
    cut = {e.id for e in min_cut(inst.graph, index[failed[0]], index[failed[1]])}
    pairs = [p for i, p in enumerate(pairs) if i not in cut]
    inst = _instance(order, pairs, srcs, terms)
    for s, t in check_feasibility(inst).failures:
        pair = (order[s], order[t])
        if pair != failed:
            # terminals are sinks, so a direct edge cannot reconnect the cut pair
            pairs.append(pair)
    report = check_feasibility(_instance(order, pairs, srcs, terms))
    assert report.failures == ((index[failed[0]], index[failed[1]]),), report
    return pairs
