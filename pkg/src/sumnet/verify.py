"""Verification independent of how an assignment was built.

Everything here works from global coding vectors: propagation from local
coefficients, span validity, terminal sum recovery, symbol-level
simulation, and an exhaustive GF(2) oracle for tiny instances.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .field import GF, Vector
from .graph import Dag, Edge, Instance

Assignment = dict[int, Vector]


@dataclass
class LocalCode:
    """Local mixing coefficients.

    ``inputs[e]`` maps in-edges of ``tail(e)`` to their coefficient;
    ``source_inputs[e]`` maps source indices to the coefficient applied
    to that source symbol, for edges leaving a source node.
    """

    inputs: dict[int, dict[int, int]] = field(default_factory=dict)
    source_inputs: dict[int, dict[int, int]] = field(default_factory=dict)


def propagate(g: Dag, code: LocalCode, n: int, fld: GF) -> Assignment:
    out: Assignment = {}
    for e in g.edges_in_topological_order():
        if e.id not in code.inputs and e.id not in code.source_inputs:
            raise ValueError(f"no local coefficients for edge {e.id} ({g.label(e.tail)}->{g.label(e.head)})")
        vec = [0] * n
        for k, c in code.source_inputs.get(e.id, {}).items():
            vec[k] ^= fld.mul(c, 1)
        in_ids = {f.id for f in g.in_edges(e.tail)}
        for f, c in code.inputs.get(e.id, {}).items():
            if f not in in_ids:
                raise ValueError(f"edge {f} is not an input of edge {e.id}")
            if c:
                for i, x in enumerate(out[f]):
                    vec[i] ^= fld.mul(c, x)
        out[e.id] = tuple(vec)
    return out


def find_invalid_edge(g: Dag, a: Mapping[int, Vector], sources: Sequence[int], fld: GF) -> Edge | None:
    """First edge (topological order) whose vector breaks validity, else None.

    Out-edges of ``sources[k]`` must carry the k-th unit vector; any other
    edge must lie in the span of its tail's incoming vectors.
    """
    n = len(sources)
    index = {s: k for k, s in enumerate(sources)}
    for e in g.edges_in_topological_order():
        vec = a.get(e.id)
        if vec is None or len(vec) != n:
            return e
        if e.tail in index:
            if vec != fld.unit(n, index[e.tail]):
                return e
        elif not fld.in_span(vec, [a[f.id] for f in g.in_edges(e.tail)]):
            return e
    return None


def check_local_validity(
    g: Dag, a: Mapping[int, Vector], sources: Sequence[int], fld: GF
) -> tuple[bool, Edge | None]:
    bad = find_invalid_edge(g, a, sources, fld)
    return bad is None, bad


def local_code_from_assignment(g: Dag, a: Mapping[int, Vector], sources: Sequence[int], fld: GF) -> LocalCode:
    """Solve for coefficients realizing ``a`` inside every tail span."""
    index = {s: k for k, s in enumerate(sources)}
    code = LocalCode()
    for e in g.edges_in_topological_order():
        if e.tail in index:
            code.source_inputs[e.id] = {index[e.tail]: 1}
            continue
        ins = g.in_edges(e.tail)
        coeffs = fld.solve(a[e.id], [a[f.id] for f in ins])
        if coeffs is None:
            raise ValueError(f"edge {e.id} vector is outside the span of its inputs")
        code.inputs[e.id] = {f.id: c for f, c in zip(ins, coeffs)}
    return code


@dataclass(frozen=True)
class TerminalVerdict:
    vector: Vector
    sum_recovered: bool
    span_recovered: bool


@dataclass(frozen=True)
class TransferReport:
    per_terminal: dict[int, TerminalVerdict]
    valid: bool
    witness: Edge | None = None

    @property
    def all_recovered(self) -> bool:
        return self.valid and all(v.sum_recovered for v in self.per_terminal.values())


def check_sum_recovery(
    g: Dag, a: Mapping[int, Vector], sources: Sequence[int], terminals: Sequence[int], fld: GF
) -> TransferReport:
    """Read each virtual terminal's single in-edge as its transfer vector.

    ``span_recovered`` is the weaker diagnostic: the all-ones vector lies in
    the span of the vectors entering the real terminal.
    """
    n = len(sources)
    ones = fld.ones(n)
    verdicts = {}
    for t in terminals:
        (edge,) = g.in_edges(t)
        vec = tuple(a.get(edge.id, fld.zero(n)))
        real_in = [tuple(a.get(f.id, fld.zero(n))) for f in g.in_edges(edge.tail)]
        verdicts[t] = TerminalVerdict(vec, vec == ones, fld.in_span(ones, real_in))
    ok, witness = check_local_validity(g, a, sources, fld)
    return TransferReport(verdicts, ok, witness)


def xor_fold(symbols: Sequence[int]) -> int:
    out = 0
    for x in symbols:
        out ^= x
    return out


def simulate_transmission(
    g: Dag,
    a: Mapping[int, Vector],
    sources: Sequence[int],
    terminals: Sequence[int],
    fld: GF,
    source_symbols: Sequence[int] | None = None,
    rounds: int = 1,
    seed: int = 0,
    batch: Sequence[Sequence[int]] | None = None,
) -> list[dict[int, int]]:
    """Hop-by-hop transmission using local coefficients recovered from ``a``.

    Each round draws a fresh source tuple (or uses ``source_symbols``).
    ``batch`` runs one round per given tuple instead.
    Every edge symbol is checked against the inner product of its global
    vector with the tuple. Returns per-round {terminal: received symbol}.
    """
    ok, witness = check_local_validity(g, a, sources, fld)
    if not ok:
        raise ValueError(f"refusing to simulate an invalid assignment (edge {witness.id})")
    code = local_code_from_assignment(g, a, sources, fld)
    order = g.edges_in_topological_order()
    rng = random.Random(seed)
    results = []
    if batch is not None:
        rounds = len(batch)
    for r in range(rounds):
        if batch is not None:
            xs = list(batch[r])
            if len(xs) != len(sources):
                raise ValueError("one symbol per source required")
        elif source_symbols is None:
            xs = [fld.random_element(rng) for _ in sources]
        else:
            xs = list(source_symbols)
            if len(xs) != len(sources):
                raise ValueError("one symbol per source required")
        sym: dict[int, int] = {}
        for e in order:
            y = 0
            for k, c in code.source_inputs.get(e.id, {}).items():
                y ^= fld.mul(c, xs[k])
            for f, c in code.inputs.get(e.id, {}).items():
                y ^= fld.mul(c, sym[f])
            if y != fld.dot(a[e.id], xs):
                raise AssertionError(f"edge {e.id}: local symbol disagrees with global vector")
            sym[e.id] = y
        results.append({t: sym[g.in_edges(t)[0].id] for t in terminals})
    return results


# -- exhaustive oracle ---------------------------------------------------------


class SearchTooLarge(ValueError):
    pass


def _span_masks(inputs: Sequence[int]) -> list[int]:
    basis: list[int] = []
    for v in inputs:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    span = [0]
    for b in basis:
        span += [x ^ b for x in span]
    return sorted(span)


def brute_force_assignment_search(inst: Instance, edge_cap: int = 12) -> bool:
    """Does any GF(2) linear code let every terminal compute the XOR of
    all sources? Exhaustive, for instances with at most ``edge_cap`` edges.

    Every local coefficient choice is covered by enumerating, per edge, all
    vectors in the span of its tail inputs (distinct choices that yield
    the same vector are merged). Edges that reach no terminal are fixed
    to zero, and subproblems are memoised on the vectors still in flight.
    """
    from .rewire import augment

    if len(inst.graph.edges) > edge_cap:
        raise SearchTooLarge(f"{len(inst.graph.edges)} edges exceeds the cap of {edge_cap}")
    aug = augment(inst, check=False)
    g = aug.graph
    n = len(inst.sources)
    ones = (1 << n) - 1
    src_bit = {s: 1 << k for k, s in enumerate(aug.virtual_sources)}
    sinks = set(aug.virtual_terminals)
    useful = set()
    for t in sinks:
        useful |= g.reaching(t)
    order = [e for e in g.edges_in_topological_order() if e.head in useful]
    pos = {e.id: i for i, e in enumerate(order)}
    last_use = {}
    for e in order:
        for f in g.in_edges(e.tail):
            if f.id in pos:
                last_use[f.id] = max(last_use.get(f.id, -1), pos[e.id])

    memo: dict[tuple, bool] = {}

    def search(i: int, vec: dict[int, int]) -> bool:
        if i == len(order):
            return True
        live = tuple(sorted((k, v) for k, v in vec.items() if last_use.get(k, -1) >= i))
        key = (i, live)
        if key in memo:
            return memo[key]
        e = order[i]
        if e.tail in src_bit:
            choices = [src_bit[e.tail]]
        else:
            choices = _span_masks([vec[f.id] for f in g.in_edges(e.tail)])
        if e.head in sinks:
            choices = [ones] if ones in choices else []
        found = False
        for c in choices:
            vec[e.id] = c
            if search(i + 1, vec):
                found = True
                break
        vec.pop(e.id, None)
        memo[key] = found
        return found

    return search(0, {})
