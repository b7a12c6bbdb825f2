"""Weighted-sum engine: weight sampling, ordering strategies, solve loop.

Each subproblem minimizes a strictly positive convex combination of the
objectives, so every optimum is Pareto-optimal (supported).  Because the
feasible set never changes, the previous optimum is always primal
feasible for the next subproblem: it is offered as an incumbent and the
previous root basis warm-starts the root relaxation (objective-only
change, hence a primal start).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .branch_bound import MipOptions, MipStatus, solve_mip_arrays
from .errors import DimensionError
from .model import Problem
from .pareto import Archive
from .report import RunReport, RunTotals, SubproblemRecord
from .rng import SplitMix64, derive_seed
from .simplex import ChangeKind, build_kernel_arrays

MIN_WEIGHT = 1e-9
ORDERINGS = ("random", "lex", "angle")


@dataclass(frozen=True)
class WsmConfig:
    num_samples: int = 100
    ordering: str = "random"
    warm_start: str = "none"  # none | previous
    seed: int = 0

    def __post_init__(self):
        if self.num_samples < 1:
            raise ValueError("num_samples must be at least 1")
        if self.ordering not in ORDERINGS:
            raise ValueError(f"unknown ordering {self.ordering!r}")
        if self.warm_start not in ("none", "previous"):
            raise ValueError(f"unknown warm_start {self.warm_start!r}")


def sample_weights(p: int, n: int, seed: int) -> np.ndarray:
    """n weights uniform on the open simplex, shape (n, p).

    Exponential-spacing construction: p independent standard-exponential
    variates, normalized.  A vector with any component below 1e-9 is
    redrawn whole, keeping strict positivity.
    """
    if p < 2:
        raise ValueError("p must be at least 2")
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = SplitMix64(seed)
    out = np.empty((n, p))
    for i in range(n):
        while True:
            e = np.array([rng.exponential() for _ in range(p)])
            w = e / e.sum()
            if np.all(w >= MIN_WEIGHT):
                out[i] = w
                break
    return out


def angle_to_uniform(w: np.ndarray) -> float:
    """Angle between w and the all-ones direction."""
    p = w.shape[0]
    cos = w.sum() / (np.linalg.norm(w) * math.sqrt(p))
    return math.acos(min(1.0, max(-1.0, cos)))


def order_weights(weights: np.ndarray, strategy: str, seed: int) -> np.ndarray:
    """Permutation of row indices per the ordering strategy.

    random: seeded shuffle; lex: ascending componentwise-lexicographic;
    angle: ascending angle against the unit vector, ties lexicographic.
    """
    n = weights.shape[0]
    if n == 0:
        raise ValueError("empty weight list")
    idx = list(range(n))
    if strategy == "random":
        SplitMix64(seed).shuffle(idx)
        return np.array(idx)
    if strategy == "lex":
        idx.sort(key=lambda i: tuple(weights[i]))
        return np.array(idx)
    if strategy == "angle":
        idx.sort(key=lambda i: (angle_to_uniform(weights[i]), tuple(weights[i])))
        return np.array(idx)
    raise ValueError(f"unknown ordering {strategy!r}")


def scalarized_objective(problem: Problem, w) -> np.ndarray:
    """Componentwise sum of w_i times objective row i."""
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (problem.objective_count,):
        raise DimensionError("weight length differs from objective count")
    return w @ problem.objectives


def run_wsm(problem: Problem, config: WsmConfig) -> RunReport:
    """Solve the weighted-sum subproblems in the configured order."""
    p = problem.objective_count
    weights = sample_weights(p, config.num_samples, config.seed)
    perm = order_weights(weights, config.ordering, derive_seed(config.seed, "wsm-order"))

    arrays = build_kernel_arrays(problem, np.zeros(problem.num_vars))
    n = problem.num_vars
    archive = Archive()
    records = []
    prev_solution = None
    prev_root_basis = None
    warm = config.warm_start == "previous"

    for sub_index, wi in enumerate(perm):
        w = weights[wi]
        arrays["c"][:n] = w @ problem.objectives
        options = MipOptions()
        warm_kind = "none"
        if warm and prev_solution is not None:
            options = MipOptions(
                warm_solution=prev_solution.point,
                warm_basis=prev_root_basis,
                root_change=ChangeKind.OBJECTIVE_ONLY,
            )
            warm_kind = "both" if prev_root_basis is not None else "solution"
        t0 = time.perf_counter()
        out = solve_mip_arrays(problem, arrays, options)
        wall_ms = (time.perf_counter() - t0) * 1e3
        if out.status is MipStatus.OPTIMAL:
            archive.add(out.solution.objectives, out.solution)
            prev_solution = out.solution
            prev_root_basis = out.root_basis
        records.append(
            SubproblemRecord(
                index=sub_index,
                weight=tuple(float(v) for v in w),
                epsilon=None,
                cell=None,
                status=out.status.value,
                warm_kind=warm_kind,
                injected=out.incumbent_injected,
                lp_iters=out.total_lp_iterations,
                nodes=out.nodes,
                wall_ms=wall_ms,
                objectives=None
                if out.solution is None
                else tuple(float(v) for v in out.solution.objectives),
                value=None if out.solution is None else out.objective_value,
            )
        )

    totals = RunTotals(
        solves=len(records),
        skips=0,
        injections=sum(1 for r in records if r.injected),
        lp_iters=sum(r.lp_iters for r in records),
        nodes=sum(r.nodes for r in records),
        wall_ms=sum(r.wall_ms for r in records),
        warm_starts=sum(1 for r in records if r.warm_kind != "none"),
        detections=0,
    )
    report = RunReport(
        instance=problem.name,
        method="wsm",
        config={
            "num_samples": config.num_samples,
            "ordering": config.ordering,
            "warm": config.warm_start,
            "propagate": False,
            "seed": config.seed,
        },
        records=records,
        archive=archive,
        totals=totals,
    )
    report.validate()
    return report
