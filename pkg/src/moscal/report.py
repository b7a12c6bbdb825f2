"""Per-run reporting: subproblem records, totals, CSV and JSON emission.

CSV numbers are written with repr (shortest round-trip form) so re-runs
with the same master seed produce byte-identical files; wall-clock
columns are the only nondeterministic ones and downstream comparisons
drop them.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .pareto import Archive

RECORD_COLUMNS = (
    "instance,method,ordering_or_signature,warm,propagate,subproblem,"
    "status,warm_kind,injected,lp_iters,nodes,wall_ms"
)
SUMMARY_COLUMNS = "instance,method,variant,rel_runtime,rel_iters,warm_starts,detections"

STATUS_OPTIMAL = "Optimal"
STATUS_INFEASIBLE = "Infeasible"
STATUS_SKIPPED = "SkippedByPropagation"
STATUS_LIMIT = "Limit"


@dataclass(frozen=True)
class SubproblemRecord:
    index: int
    weight: tuple | None
    epsilon: tuple | None
    cell: tuple | None
    status: str
    warm_kind: str  # none | solution | basis | both
    injected: bool
    lp_iters: int
    nodes: int
    wall_ms: float
    objectives: tuple | None
    value: float | None


@dataclass(frozen=True)
class RunTotals:
    solves: int
    skips: int
    injections: int
    lp_iters: int
    nodes: int
    wall_ms: float
    warm_starts: int  # structural candidate count (ordergrid semantics)
    detections: int  # equals skips for epsilon-constraint runs


@dataclass
class RunReport:
    instance: str
    method: str  # wsm | ecm
    config: dict
    records: list[SubproblemRecord]
    archive: Archive
    totals: RunTotals
    extra: dict = field(default_factory=dict)  # e.g. grid dims for mask harvest

    def validate(self) -> None:
        """Totals must equal the record sums; solves+skips must cover all."""
        t = self.totals
        if t.solves + t.skips != len(self.records):
            raise AssertionError("record count does not match solves+skips")
        if t.skips != sum(1 for r in self.records if r.status == STATUS_SKIPPED):
            raise AssertionError("skip total mismatch")
        if t.injections != sum(1 for r in self.records if r.injected):
            raise AssertionError("injection total mismatch")
        if t.lp_iters != sum(r.lp_iters for r in self.records):
            raise AssertionError("lp iteration total mismatch")
        if t.nodes != sum(r.nodes for r in self.records):
            raise AssertionError("node total mismatch")
        if not math.isclose(
            t.wall_ms, sum(r.wall_ms for r in self.records), rel_tol=1e-9, abs_tol=1e-6
        ):
            raise AssertionError("wall clock total mismatch")

    @property
    def variant(self) -> str:
        ordering = self.config.get("ordering") or self.config.get("signature", "")
        warm = self.config.get("warm", "none")
        prop = "on" if self.config.get("propagate") else "off"
        return f"{ordering}/{warm}/{prop}"

    def ordering_or_signature(self) -> str:
        return self.config.get("ordering") or self.config.get("signature", "")

    def csv_rows(self) -> list[str]:
        rows = []
        for r in self.records:
            rows.append(
                ",".join(
                    [
                        self.instance,
                        self.method,
                        self.ordering_or_signature(),
                        str(self.config.get("warm", "none")),
                        "on" if self.config.get("propagate") else "off",
                        str(r.index),
                        r.status,
                        r.warm_kind,
                        "true" if r.injected else "false",
                        str(r.lp_iters),
                        str(r.nodes),
                        repr(float(r.wall_ms)),
                    ]
                )
            )
        return rows

    def to_dict(self) -> dict:
        return {
            "instance": self.instance,
            "method": self.method,
            "config": self.config,
            "totals": {
                "solves": self.totals.solves,
                "skips": self.totals.skips,
                "injections": self.totals.injections,
                "lp_iters": self.totals.lp_iters,
                "nodes": self.totals.nodes,
                "wall_ms": self.totals.wall_ms,
                "warm_starts": self.totals.warm_starts,
                "detections": self.totals.detections,
            },
            "records": [
                {
                    "index": r.index,
                    "weight": r.weight,
                    "epsilon": r.epsilon,
                    "cell": r.cell,
                    "status": r.status,
                    "warm_kind": r.warm_kind,
                    "injected": r.injected,
                    "lp_iters": r.lp_iters,
                    "nodes": r.nodes,
                    "wall_ms": r.wall_ms,
                    "objectives": r.objectives,
                    "value": r.value,
                }
                for r in self.records
            ],
            "archive": [
                {
                    "objectives": [float(v) for v in fvec],
                    "point": None if sol is None else [float(v) for v in sol.point],
                }
                for fvec, sol in self.archive.sorted_entries()
            ],
            "extra": self.extra,
        }

    def save_json(self, path) -> None:
        Path(path).write_text(
            json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8"
        )


def report_from_dict(doc: dict) -> RunReport:
    """Rehydrate a report written by save_json (archive points included)."""
    records = [
        SubproblemRecord(
            index=r["index"],
            weight=None if r["weight"] is None else tuple(r["weight"]),
            epsilon=None if r["epsilon"] is None else tuple(r["epsilon"]),
            cell=None if r["cell"] is None else tuple(r["cell"]),
            status=r["status"],
            warm_kind=r["warm_kind"],
            injected=r["injected"],
            lp_iters=r["lp_iters"],
            nodes=r["nodes"],
            wall_ms=r["wall_ms"],
            objectives=None if r["objectives"] is None else tuple(r["objectives"]),
            value=r["value"],
        )
        for r in doc["records"]
    ]
    t = doc["totals"]
    archive = Archive()
    for entry in doc["archive"]:
        archive.add(np.array(entry["objectives"]), None)
    return RunReport(
        instance=doc["instance"],
        method=doc["method"],
        config=doc["config"],
        records=records,
        archive=archive,
        totals=RunTotals(
            solves=t["solves"],
            skips=t["skips"],
            injections=t["injections"],
            lp_iters=t["lp_iters"],
            nodes=t["nodes"],
            wall_ms=t["wall_ms"],
            warm_starts=t["warm_starts"],
            detections=t["detections"],
        ),
        extra=doc.get("extra", {}),
    )


def write_records_csv(reports, path) -> None:
    lines = [RECORD_COLUMNS]
    for rep in reports:
        lines.extend(rep.csv_rows())
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def summary_rows(reports) -> list[str]:
    """Relative runtime/iterations against the warm-off, propagate-off
    baseline of the same instance, method and ordering/signature."""
    baselines = {}
    for rep in reports:
        key = (rep.instance, rep.method, rep.ordering_or_signature())
        if rep.config.get("warm", "none") == "none" and not rep.config.get("propagate"):
            baselines[key] = rep
    rows = []
    for rep in reports:
        key = (rep.instance, rep.method, rep.ordering_or_signature())
        base = baselines.get(key)
        if base is None or base.totals.wall_ms <= 0 or base.totals.lp_iters <= 0:
            rel_rt, rel_it = "", ""
        else:
            rel_rt = repr(rep.totals.wall_ms / base.totals.wall_ms)
            rel_it = repr(rep.totals.lp_iters / base.totals.lp_iters)
        rows.append(
            ",".join(
                [
                    rep.instance,
                    rep.method,
                    rep.variant,
                    rel_rt,
                    rel_it,
                    str(rep.totals.warm_starts),
                    str(rep.totals.detections),
                ]
            )
        )
    return rows


def write_summary_csv(reports, path) -> None:
    lines = [SUMMARY_COLUMNS] + summary_rows(reports)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
