"""Any number of sources, two terminals.

The work is building a subgraph in which every source has exactly one
path to each terminal. Sources are added one at a time: the subgraph for
the first k-1 sources is painted blue, the new source's two paths red,
and one of three cases decides how the red paths are attached (possibly
by recursing on a smaller problem behind an artificial source). With
unique paths every terminal's transfer vector is all-ones once each node
simply forwards the sum of its inputs.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import InfeasibleError, InternalError, UnsupportedShapeError
from .field import GF, GF2
from .flow import FeasibilityReport, check_feasibility
from .graph import BLUE, RED, ColoredSubgraph, Dag, Edge, Instance, Path, count_paths, find_path
from .report import SolveReport
from .rewire import augment, rewire_shared_prefix
from .verify import Assignment, LocalCode, check_local_validity, check_sum_recovery, propagate

# Artificial sources live far above any id an instance can produce.
ARTIFICIAL_BASE = 1 << 40

BASE, CASE1, CASE2, CASE3 = "base", "case1", "case2", "case3"


@dataclass(frozen=True)
class OnePathSubgraph:
    graph: Dag
    sources: tuple[int, ...]
    terminals: tuple[int, int]
    path_table: dict[tuple[int, int], Path]


@dataclass(frozen=True)
class InductionContext:
    colored: ColoredSubgraph
    red_paths: tuple[Path, Path]
    vr: int
    u1: int
    u2: int
    case: str


@dataclass
class InductionFrame:
    depth: int
    sources: tuple[int, ...]
    case: str
    u1: int | None = None
    u2: int | None = None
    vr: int | None = None
    absorbed: tuple[int, ...] = ()
    context: InductionContext | None = field(default=None, repr=False)
    result: OnePathSubgraph | None = field(default=None, repr=False)

    def to_dict(self, g: Dag) -> dict:
        def name(v):
            if v is None:
                return None
            return g.labels.get(v, f"S_a{v - ARTIFICIAL_BASE}")

        return {
            "depth": self.depth,
            "sources": [name(s) for s in self.sources],
            "case": self.case,
            "u1": name(self.u1),
            "u2": name(self.u2),
            "vr": name(self.vr),
            "absorbed": [name(s) for s in self.absorbed],
        }


def _edge_ids(*paths: Path) -> set[int]:
    out: set[int] = set()
    for p in paths:
        out.update(p.edge_ids)
    return out


def extract_gu1(
    ctx: InductionContext, g_br: Dag, sources: Sequence[int], node: int | None = None
) -> tuple[tuple[int, ...], Dag]:
    """Sources reaching the contact node in ``g_br`` and the union of their
    paths to it. Each member must have exactly one such path."""
    u = ctx.u1 if node is None else node
    members = []
    paths = []
    for s in sources:
        if s not in g_br or u not in g_br.reachable_from(s):
            continue
        n_paths = count_paths(g_br, s, u)
        if n_paths != 1:
            raise InternalError(f"source {s} has {n_paths} paths to contact node {u}", frame=ctx.case)
        members.append(s)
        paths.append(find_path(g_br, s, u))
    return tuple(members), g_br.subgraph(_edge_ids(*paths), keep=[u])


class _Builder:
    def __init__(self, t1: int, t2: int, trace: list[InductionFrame] | None):
        self.t1, self.t2 = t1, t2
        self.trace = trace if trace is not None else []
        self.next_artificial = 0
        self.max_depth = 0

    def artificial(self) -> tuple[int, int]:
        k = self.next_artificial
        self.next_artificial += 1
        return ARTIFICIAL_BASE + k, ARTIFICIAL_BASE + k

    def paths_for(self, g: Dag, s: int) -> tuple[Path, Path]:
        p1, p2 = find_path(g, s, self.t1), find_path(g, s, self.t2)
        if p1 is None or p2 is None:
            missing = tuple((s, t) for t, p in ((self.t1, p1), (self.t2, p2)) if p is None)
            raise InfeasibleError(FeasibilityReport(False, missing))
        return p1, p2

    def build(self, g: Dag, sources: tuple[int, ...], depth: int) -> OnePathSubgraph:
        self.max_depth = max(self.max_depth, depth)
        if len(sources) == 1:
            (s,) = sources
            p1, p2 = self.paths_for(g, s)
            p1, q2, meet = rewire_shared_prefix(p1, p2)
            frame = InductionFrame(depth, sources, BASE, u1=meet)
            self.trace.append(frame)
            frame.context = InductionContext(
                ColoredSubgraph.painted(g, p1.edge_ids, BLUE).with_color(q2.edge_ids, RED),
                (p1, q2), meet, meet, meet, BASE,
            )
            return self.finish(g, _edge_ids(p1, q2), sources, frame)

        blue_ops = self.build(g, sources[:-1], depth + 1)
        blue_graph = blue_ops.graph
        blue_nodes = set(blue_graph.nodes)
        sn = sources[-1]
        r1, r2 = self.paths_for(g, sn)
        r1, r2, vr = rewire_shared_prefix(r1, r2, allowed=set(g.nodes) - blue_nodes)
        u1 = next(v for v in r1.nodes if v in blue_nodes)
        u2 = next(v for v in r2.nodes if v in blue_nodes)
        colored = ColoredSubgraph.painted(g, blue_graph.edges, BLUE).with_color(_edge_ids(r1, r2), RED)

        if find_path(blue_graph, u1, self.t2) is not None:
            case = CASE1
        elif find_path(blue_graph, u2, self.t1) is not None:
            case = CASE2
        else:
            case = CASE3
        ctx = InductionContext(colored, (r1, r2), vr, u1, u2, case)
        frame = InductionFrame(depth, sources, case, u1=u1, u2=u2, vr=vr, context=ctx)
        self.trace.append(frame)

        if case == CASE3:
            edges = set(blue_graph.edges) | _edge_ids(r1.prefix_to(u1), r2.prefix_to(u2))
            result = self.finish(g, edges, sources, frame)
            self._check_red_unreachable(result.graph, set(blue_graph.edges))
            return result
        if case == CASE1:
            keep, drop, u = r1, r2, u1
        else:
            keep, drop, u = r2, r1, u2
        return self.splice(g, ctx, frame, sources, keep, drop, u, depth)

    def splice(self, g, ctx, frame, sources, keep: Path, drop: Path, u: int, depth: int) -> OnePathSubgraph:
        """Cases 1 and 2: cut off everything feeding ``u``, replace it by an
        artificial source, recurse, then glue the cut part back."""
        colored = ctx.colored.without_color(_edge_ids(drop) - _edge_ids(keep), RED)
        g_br = colored.graph(keep=[u])
        members, g_u = extract_gu1(ctx, g_br, sources, u)
        frame.absorbed = members
        remaining = tuple(s for s in sources if s not in members)
        if sources[-1] not in members or len(remaining) > len(sources) - 2:
            raise InternalError(f"contact node {u} is not fed by a blue source", frame=frame.case)
        g_minus = g_br.subgraph(set(g_br.edges) - set(g_u.edges), keep=[u])
        for s in (*remaining, u):
            for t in (self.t1, self.t2):
                if find_path(g_minus, s, t) is None:
                    raise InternalError(f"removing the cut part disconnects {s} from {t}", frame=frame.case)
        sa, sa_edge = self.artificial()
        g_rec = g_minus.extended({sa: f"S_a{sa - ARTIFICIAL_BASE}"}, [Edge(sa_edge, sa, u)])
        sub = self.build(g_rec, (*remaining, sa), depth + 1)
        edges = (set(sub.graph.edges) - {sa_edge}) | set(g_u.edges)
        return self.finish(g, edges, sources, frame)

    def finish(self, g: Dag, edges: set[int], sources, frame: InductionFrame) -> OnePathSubgraph:
        """Keep only table paths, then demand exactly one path per pair."""
        h = g.subgraph(edges)
        table = {}
        for s in sources:
            for t in (self.t1, self.t2):
                p = find_path(h, s, t)
                if p is None:
                    raise InternalError(f"no path from {s} to {t} in frame {frame.case}", frame=frame.case)
                table[(s, t)] = p
        h = g.subgraph(_edge_ids(*table.values()))
        for (s, t) in table:
            n_paths = count_paths(h, s, t)
            if n_paths != 1:
                raise InternalError(
                    f"{n_paths} paths from {s} to {t} after {frame.case} at depth {frame.depth}",
                    frame=frame.case,
                )
        result = OnePathSubgraph(h, tuple(sources), (self.t1, self.t2), table)
        frame.result = result
        return result

    @staticmethod
    def _check_red_unreachable(h: Dag, blue_edges: set[int]) -> None:
        red_only = [e for e in h.edges.values() if e.id not in blue_edges]
        reach: set[int] = set()
        for i in blue_edges & set(h.edges):
            reach |= h.reachable_from(h.edge(i).head)
        for e in red_only:
            if e.tail in reach:
                raise InternalError(f"red edge {e.id} is reachable from the blue subgraph", edge=e.id, frame=CASE3)


def one_path_subgraph(
    g: Dag,
    sources: Sequence[int],
    t1: int,
    t2: int,
    trace: list[InductionFrame] | None = None,
) -> OnePathSubgraph:
    """Minimal subgraph with exactly one path from every source to each terminal.

    ``sources`` are processed in the given order; ``trace`` (if given)
    collects one frame per recursive step.
    """
    if not sources:
        raise ValueError("at least one source required")
    builder = _Builder(t1, t2, trace)
    result = builder.build(g, tuple(sources), 0)
    if builder.max_depth >= len(sources):
        raise InternalError(f"recursion depth {builder.max_depth} exceeds the source count")
    return result


def assign_unit_gains(ops: OnePathSubgraph, fld: GF, full: Dag | None = None) -> Assignment:
    """Every node forwards the plain sum of its inputs."""
    h = ops.graph
    index = {s: k for k, s in enumerate(ops.sources)}
    code = LocalCode()
    for e in h.edges.values():
        if e.tail in index:
            code.source_inputs[e.id] = {index[e.tail]: 1}
        else:
            code.inputs[e.id] = {f.id: 1 for f in h.in_edges(e.tail)}
    n = len(ops.sources)
    vecs = propagate(h, code, n, fld)
    if full is None:
        return vecs
    return {i: vecs.get(i, fld.zero(n)) for i in full.edges}


def solve_nx2(inst: Instance, fld: GF | None = None) -> SolveReport:
    if len(inst.terminals) != 2 or not inst.sources:
        raise UnsupportedShapeError("the two-terminal solver needs 2 terminals and at least one source")
    report = check_feasibility(inst)
    if not report.feasible:
        raise InfeasibleError(report)
    fld = fld or GF2
    aug = augment(inst)
    frames: list[InductionFrame] = []
    ops = one_path_subgraph(aug.graph, aug.virtual_sources, *aug.virtual_terminals, trace=frames)
    assignment = assign_unit_gains(ops, fld, aug.graph)
    ok, witness = check_local_validity(aug.graph, assignment, aug.virtual_sources, fld)
    transfer = check_sum_recovery(aug.graph, assignment, aug.virtual_sources, aug.virtual_terminals, fld)
    if not transfer.all_recovered:
        raise InternalError("a terminal does not receive the all-ones vector")
    top = next(fr for fr in frames if fr.depth == 0)
    colors = {
        i: c for i, c in top.context.colored.colors.items() if i in ops.graph.edges
    }
    return SolveReport(
        instance=inst,
        solver="n_by_two",
        field=fld,
        seed=None,
        feasibility=report,
        augmented=aug,
        subgraph=frozenset(ops.graph.edges),
        assignment=assignment,
        valid=ok,
        witness=witness,
        transfer=transfer,
        one_path=ops,
        frames=frames,
        edge_colors=colors,
        source_order=inst.sources,
    )
