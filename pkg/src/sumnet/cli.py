"""Command-line entry point.

Exit status: 0 success, 1 infeasible instance or failed verification,
2 usage error or unsupported shape, 3 internal invariant failure.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path as FsPath
from typing import Sequence

from .errors import InfeasibleError, InternalError, MulticastError, UnsupportedShapeError
from .field import GF
from .fixtures import NAMES, fixture_text
from .flow import check_feasibility
from .generate import KINDS, generate_instance
from .graph import Instance
from .io import (
    DocumentError,
    InstanceDocument,
    document_field,
    export_dot,
    load_assignment,
    parse_document,
    report_json,
    serialize_document,
    to_instance,
)
from .pipeline import SOLVERS, solve
from .report import SolveReport
from .rewire import augment
from .verify import check_sum_recovery, simulate_transmission, xor_fold

OK, FAILED, USAGE, INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _err(msg: str) -> None:
    print(f"sumnet: {msg}", file=sys.stderr)


def _load(path: str) -> tuple[InstanceDocument, Instance]:
    """A file path, or the name of a bundled fixture such as BUTTERFLY."""
    p = FsPath(path)
    if p.exists():
        text = p.read_text()
    elif path.upper() in {n.upper() for n in NAMES}:
        text = fixture_text(next(n for n in NAMES if n.upper() == path.upper()))
    else:
        raise UsageError(f"no such instance file: {path}")
    doc = parse_document(text)
    return doc, to_instance(doc, text)


def _field(args, doc: InstanceDocument) -> GF | None:
    if args.field_m is not None:
        return GF(args.field_m, args.modulus or 0)
    if args.modulus:
        raise UsageError("--modulus needs --field-m")
    return document_field(doc)


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        FsPath(out).write_text(text)


def _report_failures(inst: Instance, failures) -> None:
    lab = inst.graph.label
    for s, t in failures:
        _err(f"zero max-flow from {lab(s)} to {lab(t)}")


def cmd_check(args) -> int:
    _, inst = _load(args.instance)
    report = check_feasibility(inst)
    lab = inst.graph.label
    if report.feasible:
        print(f"feasible: every source reaches every terminal ({len(inst.sources)}×{len(inst.terminals)})")
        return OK
    print("infeasible")
    for s, t in report.failures:
        print(f"  ({lab(s)}, {lab(t)})")
    return FAILED


def cmd_solve(args) -> int:
    doc, inst = _load(args.instance)
    fld = _field(args, doc)
    out = args.out
    if out is None:
        out = FsPath(args.instance).stem.lower() + ".report.json"
    try:
        report = solve(inst, fld, args.seed, args.solver)
    except InfeasibleError as exc:
        _report_failures(inst, exc.report.failures)
        _write(report_json(SolveReport.feasibility_only(inst, exc.report)), out)
        return FAILED
    _write(report_json(report), out)
    if out != "-":
        print(f"{report.solver}: {len(inst.terminals)} terminal(s) recover the sum over GF(2^{report.field.m}); wrote {out}")
    return OK if report.ok else FAILED


def cmd_verify(args) -> int:
    _, inst = _load(args.instance)
    data = json.loads(FsPath(args.report).read_text())
    if "edges" not in data:
        _report_failures(inst, check_feasibility(inst).failures)
        _err("report holds no assignment")
        return FAILED
    aug = augment(inst)
    fld, a = load_assignment(data, aug)
    transfer = check_sum_recovery(aug.graph, a, aug.virtual_sources, aug.virtual_terminals, fld)
    g = aug.graph
    if not transfer.valid:
        w = transfer.witness
        _err(f"edge {w.id} ({g.label(w.tail)}->{g.label(w.head)}) is outside the span of its inputs")
    for t, verdict in transfer.per_terminal.items():
        status = "ok" if verdict.sum_recovered else "FAIL"
        print(f"{g.label(t)}: {list(verdict.vector)} {status}")
    return OK if transfer.all_recovered else FAILED


def cmd_simulate(args) -> int:
    doc, inst = _load(args.instance)
    if args.report:
        aug = augment(inst)
        fld, a = load_assignment(json.loads(FsPath(args.report).read_text()), aug)
    else:
        try:
            report = solve(inst, _field(args, doc), args.seed, args.solver)
        except InfeasibleError as exc:
            _report_failures(inst, exc.report.failures)
            return FAILED
        aug, fld, a = report.augmented, report.field, report.assignment
    rng = random.Random(args.seed)
    bad = 0
    for _ in range(args.trials):
        xs = [fld.random_element(rng) for _ in aug.virtual_sources]
        (outputs,) = simulate_transmission(
            aug.graph, a, aug.virtual_sources, aug.virtual_terminals, fld, source_symbols=xs
        )
        bad += sum(1 for y in outputs.values() if y != xor_fold(xs))
    print(f"{args.trials} trials over GF(2^{fld.m}): {bad} wrong terminal outputs")
    return OK if bad == 0 else FAILED


def cmd_gen(args) -> int:
    doc = generate_instance(
        args.kind,
        args.sources,
        args.terminals,
        extra_nodes=args.extra,
        seed=args.seed,
        infeasible=args.infeasible,
        extra_edges=args.extra_edges,
    )
    _write(serialize_document(doc), args.out)
    return OK


def cmd_dot(args) -> int:
    doc, inst = _load(args.instance)
    if args.plain:
        report = SolveReport.feasibility_only(inst, check_feasibility(inst))
    else:
        try:
            report = solve(inst, _field(args, doc), args.seed, args.solver)
        except InfeasibleError as exc:
            report = SolveReport.feasibility_only(inst, exc.report)
    _write(export_dot(report), args.out)
    return OK


def _solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--field-m", type=int, help="extension degree m of GF(2^m)")
    p.add_argument("--modulus", type=int, help="irreducible modulus as an integer bitmask")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--solver", choices=SOLVERS, default="auto", help="force a solver (2×2 defaults to nx2)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sumnet", description="Linear network codes that deliver the XOR of all sources.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="feasibility report")
    p.add_argument("instance")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solve", help="build a coding assignment and write a JSON report")
    p.add_argument("instance")
    _solver_flags(p)
    p.add_argument("--out", help="report path ('-' for stdout; default <name>.report.json)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="re-check a stored report against its instance")
    p.add_argument("instance")
    p.add_argument("report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="send random symbols through the code")
    p.add_argument("instance")
    _solver_flags(p)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--report", help="use the assignment from this report instead of solving")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--sources", type=int, required=True)
    p.add_argument("--terminals", type=int, required=True)
    p.add_argument("--extra", type=int, default=0, help="number of interior nodes")
    p.add_argument("--extra-edges", type=int, help="random forward edges beyond the planted paths")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--infeasible", action="store_true", help="cut one source/terminal pair")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("dot", help="Graphviz rendering of the solved instance")
    p.add_argument("instance")
    _solver_flags(p)
    p.add_argument("--plain", action="store_true", help="draw the bare graph without solving")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_dot)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.func(args)
    except InfeasibleError as exc:
        _err(str(exc))
        return FAILED
    except (UsageError, UnsupportedShapeError) as exc:
        _err(str(exc))
        return USAGE
    except (DocumentError, ValueError, OSError) as exc:
        _err(str(exc))
        return USAGE
    except (InternalError, MulticastError) as exc:
        _err(f"internal error: {exc}")
        return INTERNAL


if __name__ == "__main__":
    sys.exit(main())
