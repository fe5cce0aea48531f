"""Solver output bundle and its JSON form."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

from .field import GF
from .flow import FeasibilityReport
from .graph import Edge, Instance

if TYPE_CHECKING:
    from .rewire import AugmentedInstance
    from .two_sources import MergePointTable, OverwriteTrace
    from .two_terminals import InductionFrame, OnePathSubgraph
    from .verify import Assignment, TransferReport


@dataclass
class SolveReport:
    instance: Instance
    solver: str | None
    feasibility: FeasibilityReport
    field: GF | None = None
    seed: int | None = None
    augmented: "AugmentedInstance | None" = None
    subgraph: frozenset[int] = frozenset()
    assignment: "Assignment | None" = None
    valid: bool = False
    witness: Edge | None = None
    transfer: "TransferReport | None" = None
    # two sources
    merge_table: "MergePointTable | None" = None
    overwrite: "OverwriteTrace | None" = None
    multicast_seed: int | None = None
    # two terminals
    one_path: "OnePathSubgraph | None" = None
    frames: list["InductionFrame"] = dataclasses.field(default_factory=list)
    edge_colors: dict[int, frozenset[str]] = dataclasses.field(default_factory=dict)
    source_order: tuple[int, ...] = ()

    @classmethod
    def feasibility_only(cls, inst: Instance, report: FeasibilityReport) -> "SolveReport":
        return cls(instance=inst, solver=None, feasibility=report)

    @property
    def solved(self) -> bool:
        return self.assignment is not None

    @property
    def ok(self) -> bool:
        return self.solved and self.valid and self.transfer is not None and self.transfer.all_recovered

    def to_dict(self) -> dict[str, Any]:
        inst = self.instance
        lab = inst.graph.label
        out: dict[str, Any] = {
            "instance": inst.name,
            "solver": self.solver,
            "feasible": self.feasibility.feasible,
            "failures": [[lab(s), lab(t)] for s, t in self.feasibility.failures],
        }
        if not self.solved:
            return out
        aug = self.augmented
        g = aug.graph
        out["field"] = {"m": self.field.m, "modulus": self.field.modulus}
        out["seed"] = self.seed
        out["sources"] = [g.label(s) for s in aug.virtual_sources]
        out["terminals"] = [g.label(t) for t in aug.virtual_terminals]
        out["source_order"] = [lab(s) for s in (self.source_order or inst.sources)]
        out["edges"] = [
            {
                "id": e.id,
                "tail": g.label(e.tail),
                "head": g.label(e.head),
                "vector": list(self.assignment[e.id]),
                "used": e.id in self.subgraph,
            }
            for e in g.edges.values()
        ]
        if self.merge_table is not None:
            out["multicast_seed"] = self.multicast_seed
            out["merge_points"] = [
                {"node": g.label(v), "terminals": [g.label(t) for t in ts]}
                for v, ts in self.merge_table.groups
            ]
            out["active_nodes"] = [g.label(v) for v in self.overwrite.active]
            out["zeroed_edges"] = sorted(self.overwrite.zeroed)
        if self.frames:
            out["induction"] = [fr.to_dict(g) for fr in self.frames]
        t = self.transfer
        out["verdicts"] = {
            "valid": self.valid,
            "witness": None if self.witness is None else self.witness.id,
            "terminals": {
                g.label(v): {
                    "vector": list(tv.vector),
                    "sum_recovered": tv.sum_recovered,
                    "span_recovered": tv.span_recovered,
                }
                for v, tv in t.per_terminal.items()
            },
        }
        return out
