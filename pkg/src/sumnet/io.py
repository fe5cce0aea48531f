"""Instance documents (TOML), report JSON and DOT export."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path as FsPath
from typing import Any

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .field import GF
from .graph import BLUE, RED, CycleError, Dag, Edge, Instance
from .report import SolveReport
from .rewire import AugmentedInstance
from .verify import Assignment


class DocumentError(ValueError):
    """Malformed instance or report file; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass(frozen=True)
class InstanceDocument:
    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str, int], ...]
    sources: tuple[str, ...]
    terminals: tuple[str, ...]
    name: str = ""
    field: tuple[int, int] | None = None
    infeasible_pair: tuple[str, str] | None = None


def _line_of(text: str, *needles: str) -> int | None:
    for i, line in enumerate(text.splitlines(), 1):
        if all(n in line for n in needles):
            return i
    return None


def _edge_line(text: str, tail: str, head: str) -> int | None:
    pattern = re.compile(r"\[\s*" + re.escape(json.dumps(tail)) + r"\s*,\s*" + re.escape(json.dumps(head)) + r"\s*[,\]]")
    for i, line in enumerate(text.splitlines(), 1):
        if pattern.search(line):
            return i
    return None


def _labels(value: Any, key: str, text: str) -> tuple[str, ...]:
    if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
        raise DocumentError(f"'{key}' must be a list of labels", _line_of(text, key))
    return tuple(value)


def parse_document(text: str) -> InstanceDocument:
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        match = re.search(r"line (\d+)", str(exc))
        if match:
            line = int(match.group(1))
        elif "end of document" in str(exc):
            line = max(len(text.splitlines()), 1)
        else:
            line = None
        raise DocumentError(str(exc), line) from exc
    for key in ("nodes", "edges", "sources", "terminals"):
        if key not in raw:
            raise DocumentError(f"missing key '{key}'")
    nodes = _labels(raw["nodes"], "nodes", text)
    seen = set()
    for lab in nodes:
        if lab in seen:
            raise DocumentError(f"duplicate node '{lab}'", _line_of(text, f'"{lab}"'))
        seen.add(lab)
    edges = []
    for item in raw["edges"]:
        if not isinstance(item, list) or len(item) not in (2, 3):
            raise DocumentError(f"edge entry {item!r} must be [tail, head] or [tail, head, multiplicity]")
        tail, head, *rest = item
        mult = rest[0] if rest else 1
        where = _edge_line(text, tail, head)
        if not isinstance(mult, int) or mult < 1:
            raise DocumentError(f"edge {tail}->{head}: multiplicity must be a positive integer", where)
        for lab in (tail, head):
            if lab not in seen:
                raise DocumentError(f"edge {tail}->{head} uses undeclared node '{lab}'", where)
        edges.append((tail, head, mult))
    sources = _labels(raw["sources"], "sources", text)
    terminals = _labels(raw["terminals"], "terminals", text)
    for lab in (*sources, *terminals):
        if lab not in seen:
            raise DocumentError(f"undeclared node '{lab}' in sources/terminals", _line_of(text, f'"{lab}"'))
    if set(sources) & set(terminals):
        raise DocumentError("sources and terminals overlap")
    fld = None
    if "field" in raw:
        f = raw["field"]
        fld = (int(f["m"]), int(f.get("modulus", 0)))
    pair = raw.get("infeasible_pair")
    return InstanceDocument(
        nodes=nodes,
        edges=tuple(edges),
        sources=sources,
        terminals=terminals,
        name=str(raw.get("name", "")),
        field=fld,
        infeasible_pair=tuple(pair) if pair else None,
    )


def to_instance(doc: InstanceDocument, text: str | None = None) -> Instance:
    index = {lab: i for i, lab in enumerate(doc.nodes)}
    edges = []
    for tail, head, mult in doc.edges:
        for _ in range(mult):
            edges.append(Edge(len(edges), index[tail], index[head]))
    try:
        g = Dag(dict(enumerate(doc.nodes)), edges)
    except CycleError as exc:
        t, h = doc.nodes[exc.edge.tail], doc.nodes[exc.edge.head]
        line = _edge_line(text, t, h) if text else None
        raise DocumentError(f"cycle through edge {t}->{h}", line) from exc
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc
    return Instance(
        g,
        tuple(index[s] for s in doc.sources),
        tuple(index[t] for t in doc.terminals),
        doc.name,
    )


def parse_instance(text: str) -> Instance:
    return to_instance(parse_document(text), text)


def document_field(doc: InstanceDocument) -> GF | None:
    return GF(*doc.field) if doc.field else None


def from_instance(inst: Instance) -> InstanceDocument:
    g = inst.graph
    edges: list[tuple[str, str, int]] = []
    for e in g.edges.values():
        pair = (g.label(e.tail), g.label(e.head))
        if edges and edges[-1][:2] == pair:
            edges[-1] = (*pair, edges[-1][2] + 1)
        else:
            edges.append((*pair, 1))
    return InstanceDocument(
        nodes=tuple(g.labels.values()),
        edges=tuple(edges),
        sources=tuple(g.label(s) for s in inst.sources),
        terminals=tuple(g.label(t) for t in inst.terminals),
        name=inst.name,
    )


def _q(s: str) -> str:
    return json.dumps(s)


def serialize_document(doc: InstanceDocument) -> str:
    def labels(xs):
        return "[" + ", ".join(_q(x) for x in xs) + "]"

    lines = []
    if doc.name:
        lines.append(f"name = {_q(doc.name)}")
    lines.append(f"nodes = {labels(doc.nodes)}")
    lines.append(f"sources = {labels(doc.sources)}")
    lines.append(f"terminals = {labels(doc.terminals)}")
    if doc.infeasible_pair:
        lines.append(f"infeasible_pair = {labels(doc.infeasible_pair)}")
    lines.append("edges = [")
    for tail, head, mult in doc.edges:
        extra = f", {mult}" if mult != 1 else ""
        lines.append(f"  [{_q(tail)}, {_q(head)}{extra}],")
    lines.append("]")
    if doc.field:
        lines += ["", "[field]", f"m = {doc.field[0]}", f"modulus = {doc.field[1]}"]
    return "\n".join(lines) + "\n"


def load_document(path: str | FsPath) -> tuple[InstanceDocument, Instance]:
    text = FsPath(path).read_text()
    doc = parse_document(text)
    return doc, to_instance(doc, text)


# -- reports -------------------------------------------------------------------


def report_json(report: SolveReport) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"


def load_assignment(data: dict, aug: AugmentedInstance) -> tuple[GF, Assignment]:
    """Match a stored report's edges against a freshly augmented instance."""
    if "edges" not in data or "field" not in data:
        raise DocumentError("report holds no assignment")
    fld = GF(int(data["field"]["m"]), int(data["field"]["modulus"]))
    g = aug.graph
    a: Assignment = {}
    for item in data["edges"]:
        e = g.edges.get(item["id"])
        if e is None or (g.label(e.tail), g.label(e.head)) != (item["tail"], item["head"]):
            raise DocumentError(f"edge {item['id']} ({item['tail']}->{item['head']}) does not match the instance")
        a[e.id] = tuple(int(x) for x in item["vector"])
    missing = set(g.edges) - set(a)
    if missing:
        raise DocumentError(f"report lacks vectors for edges {sorted(missing)}")
    return fld, a


# -- DOT -------------------------------------------------------------------------


def _vec(v) -> str:
    return "[" + ",".join(str(x) for x in v) + "]"


def export_dot(report: SolveReport) -> str:
    """DOT digraph; solved reports label edges with coding vectors."""
    name = report.instance.name or "instance"
    lines = [f"digraph {_q(name)} {{", "  rankdir=LR;"]
    if not report.solved:
        g = report.instance.graph
        for v in g.topo:
            lines.append(f"  {_q(g.label(v))};")
        for e in g.edges.values():
            lines.append(f"  {_q(g.label(e.tail))} -> {_q(g.label(e.head))};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    aug = report.augmented
    g = aug.graph
    merge = set()
    if report.merge_table is not None:
        merge = set(report.merge_table.sorted_merge_nodes)
    for v in g.topo:
        attrs = []
        if v in aug.origin:
            attrs.append("style=dashed")
        if v in merge:
            attrs += ["shape=doublecircle", 'xlabel="merge"']
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  {_q(g.label(v))}{suffix};")
    for e in g.edges.values():
        attrs = [f'label="{_vec(report.assignment[e.id])}"']
        colors = report.edge_colors.get(e.id, frozenset())
        if colors == {BLUE, RED}:
            attrs.append('color="blue:red"')
        elif colors:
            attrs.append(f"color={next(iter(colors))}")
        if e.id not in report.subgraph:
            attrs.append("style=dotted")
        lines.append(f"  {_q(g.label(e.tail))} -> {_q(g.label(e.head))} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
