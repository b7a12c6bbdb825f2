"""Solver-free combinatorial analysis of subproblem traversal orders.

Given only a feasibility mask over the epsilon grid, simulate a traversal
and count how many cells would receive a primal-feasible warm-start
candidate and how many infeasible cells would be detected (skipped)
before being solved.  Choosing a traversal order is itself a two-
objective problem over these counts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .ecm import OrderSignature, traversal_cells
from .errors import DimensionError, ValidationError
from .pareto import dominates
from .report import STATUS_OPTIMAL, RunReport


@dataclass(frozen=True)
class FeasibilityMask:
    """Boolean feasibility per grid cell; infeasible cells must be downward
    closed in the componentwise order (tightening an infeasible cell can
    never make it feasible)."""

    feasible: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.feasible, dtype=bool)
        object.__setattr__(self, "feasible", arr)
        # downward closure: every one-step-down neighbor of an infeasible
        # cell is infeasible too
        for cell in np.argwhere(~arr):
            for d in range(arr.ndim):
                if cell[d] > 0:
                    nb = cell.copy()
                    nb[d] -= 1
                    if arr[tuple(nb)]:
                        raise ValidationError(
                            f"infeasible set not downward closed at {tuple(cell)}"
                        )

    @property
    def dims(self) -> tuple[int, ...]:
        return self.feasible.shape

    @property
    def num_feasible(self) -> int:
        return int(self.feasible.sum())


@dataclass(frozen=True)
class TradeoffCount:
    warm_starts: int
    detections: int

    def __post_init__(self):
        if self.warm_starts < 0 or self.detections < 0:
            raise ValidationError("counts must be nonnegative")


def enumerate_signatures(p: int) -> list[OrderSignature]:
    """All 2^(p-1) signatures in lexicographic sign order (+ before -)."""
    if p < 2:
        raise ValidationError("p must be at least 2")
    return [
        OrderSignature(signs=tuple(signs))
        for signs in itertools.product((1, -1), repeat=p - 1)
    ]


def analyze_order(
    mask: FeasibilityMask, sig: OrderSignature, ws_mode: str = "strong"
) -> TradeoffCount:
    """Simulate one traversal of the mask.

    A cell is detected when an earlier-solved (not itself detected)
    infeasible cell is componentwise >= it.  A feasible cell receives a
    warm start when, in weak mode, its immediate traversal predecessor is
    solved feasible and componentwise <= it, or, in strong mode, any
    earlier solved feasible cell is componentwise <= it.  Detected cells
    are never solved, so they seed neither further detections nor warm
    starts.
    """
    if ws_mode not in ("weak", "strong"):
        raise ValueError(f"unknown ws_mode {ws_mode!r}")
    if len(sig.signs) != mask.feasible.ndim:
        raise DimensionError("signature length does not match mask dimensions")
    infeasible_solved: list[np.ndarray] = []
    feasible_solved: list[np.ndarray] = []
    warm = det = 0
    prev_cell = None
    prev_solved_feasible = False
    for cell in traversal_cells(mask.dims, sig.signs):
        c = np.array(cell)
        if mask.feasible[cell]:
            if ws_mode == "weak":
                if prev_solved_feasible and np.all(prev_cell <= c):
                    warm += 1
            else:
                if any(np.all(f <= c) for f in feasible_solved):
                    warm += 1
            feasible_solved.append(c)
            prev_cell, prev_solved_feasible = c, True
        else:
            detected = any(np.all(s >= c) for s in infeasible_solved)
            if detected:
                det += 1
            else:
                infeasible_solved.append(c)
            prev_cell, prev_solved_feasible = c, False
    return TradeoffCount(warm_starts=warm, detections=det)


def tradeoff_frontier(
    mask: FeasibilityMask, ws_mode: str = "strong"
) -> list[tuple[OrderSignature, TradeoffCount, bool]]:
    """Counts for every signature with nondominated flags.

    Both counts are maximized; a signature is flagged nondominated when
    no other signature is at least as good in both counts and better in
    one.
    """
    p = mask.feasible.ndim + 1
    sigs = enumerate_signatures(p)
    counts = [analyze_order(mask, sig, ws_mode) for sig in sigs]
    flags = []
    for i, ci in enumerate(counts):
        beaten = any(
            dominates(
                (-cj.warm_starts, -cj.detections), (-ci.warm_starts, -ci.detections)
            )
            for j, cj in enumerate(counts)
            if j != i
        )
        flags.append(not beaten)
    return list(zip(sigs, counts, flags))


def mask_from_report(report: RunReport) -> FeasibilityMask:
    """Harvest the feasibility mask observed by an epsilon-constraint run.

    Skipped cells were proven infeasible by propagation and count as
    infeasible.
    """
    dims = tuple(report.extra.get("grid_dims", ()))
    if not dims:
        raise ValidationError("report carries no grid dimensions")
    feas = np.zeros(dims, dtype=bool)
    for rec in report.records:
        if rec.cell is None:
            raise ValidationError("report record lacks a grid cell")
        feas[tuple(rec.cell)] = rec.status == STATUS_OPTIMAL
    return FeasibilityMask(feasible=feas)


def export_tradeoff_csv(rows, path) -> None:
    """CSV columns: signature, ws_mode, warm_starts, detections, nondominated."""
    lines = ["signature,ws_mode,warm_starts,detections,nondominated"]
    for ws_mode, entries in rows.items():
        for sig, count, flag in entries:
            lines.append(
                f"{sig.label},{ws_mode},{count.warm_starts},{count.detections},"
                f"{'true' if flag else 'false'}"
            )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
