"""Augmented epsilon-constraint engine.

Keep objective 1, bound objectives 2..p by a grid of epsilon levels, and
add a small rho-weighted sum of the bounded objectives so every
subproblem optimum is efficient rather than merely weakly efficient.

Two structural facts drive the warm-start and pruning machinery: a
previous optimum stays primal feasible for any cell whose epsilon vector
it satisfies, and an infeasible cell makes every componentwise-tighter
cell infeasible as well.  Traversal direction per dimension (the order
signature) therefore trades warm-start opportunities against early
infeasibility detection.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .branch_bound import MipOptions, MipStatus, solve_mip, solve_mip_arrays
from .errors import DimensionError, InfeasibleModel, ValidationError
from .model import LinearConstraint, Problem, Solution
from .pareto import Archive
from .report import (
    STATUS_INFEASIBLE,
    STATUS_LIMIT,
    STATUS_OPTIMAL,
    STATUS_SKIPPED,
    RunReport,
    RunTotals,
    SubproblemRecord,
)
from .simplex import ChangeKind, build_kernel_arrays, slack_bounds

EPS_CMP_TOL = 1e-9  # slack when comparing objective values against epsilon levels
RHO_CONTINUOUS = 1e-4
RHO_CLAMP = (1e-8, 1e-3)


@dataclass(frozen=True)
class IdealNadirEstimate:
    """Payoff-table summary: exact ideal, column-max nadir estimate."""

    ideal: np.ndarray
    nadir_estimate: np.ndarray
    table: np.ndarray  # row k holds the objective vector of the k-th solve

    def __post_init__(self):
        if np.any(self.ideal > self.nadir_estimate + EPS_CMP_TOL):
            raise ValidationError("ideal exceeds nadir estimate")


@dataclass(frozen=True)
class EpsilonGrid:
    """Ascending epsilon levels for each constrained objective 2..p.

    ``levels[d]`` bounds objective ``d+1`` (0-based); the retained
    objective is always objective 0.  Level counts may differ per
    dimension (explicit grids for acceptance checks use the full integer
    range per objective).
    """

    levels: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "levels", tuple(np.asarray(lv, dtype=np.float64) for lv in self.levels)
        )
        for lv in self.levels:
            if lv.size < 1:
                raise ValidationError("each grid dimension needs at least one level")
            if np.any(np.diff(lv) < -EPS_CMP_TOL):
                raise ValidationError("grid levels must be ascending")

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(lv) for lv in self.levels)

    @property
    def cell_count(self) -> int:
        return int(np.prod(self.dims))

    def eps_at(self, cell: tuple[int, ...]) -> np.ndarray:
        return np.array([self.levels[d][i] for d, i in enumerate(cell)])


@dataclass(frozen=True)
class OrderSignature:
    """Traversal direction per constrained objective: +1 ascending, -1 descending."""

    signs: tuple[int, ...]

    def __post_init__(self):
        if not self.signs or any(s not in (-1, 1) for s in self.signs):
            raise ValidationError("signature signs must be +1 or -1")

    @property
    def label(self) -> str:
        return "o" + "".join("+" if s > 0 else "-" for s in self.signs)

    @staticmethod
    def parse(text: str) -> "OrderSignature":
        if not text.startswith("o") or len(text) < 2:
            raise ValidationError(f"bad signature {text!r}")
        signs = []
        for ch in text[1:]:
            if ch == "+":
                signs.append(1)
            elif ch == "-":
                signs.append(-1)
            else:
                raise ValidationError(f"bad signature character {ch!r}")
        return OrderSignature(signs=tuple(signs))


@dataclass
class SolutionPool:
    """Feasible solutions from previously solved subproblems, in discovery
    order, with their constrained objective values and scalarized cost."""

    constrained_objectives: np.ndarray  # (p-1, n) rows f_2..f_p
    scalar_objective: np.ndarray  # the fixed augmented cost row
    solutions: list[Solution] = field(default_factory=list)
    f_rows: list[np.ndarray] = field(default_factory=list)
    costs: list[float] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.solutions)

    def add(self, solution: Solution) -> None:
        self.solutions.append(solution)
        self.f_rows.append(solution.objectives[1:])
        self.costs.append(float(self.scalar_objective @ solution.point))


def select_warm_start(
    pool: SolutionPool, eps: np.ndarray, policy: str, current_objective=None
) -> Solution | None:
    """Feasibility-tested warm-start candidate from the pool.

    weak: the most recent entry, if it satisfies every epsilon bound.
    strong: among all satisfying entries, the one with the best value
    under the current scalarized objective (ties to the oldest).
    """
    if policy == "none" or len(pool) == 0:
        return None
    if policy == "weak":
        last = pool.f_rows[-1]
        if np.all(last <= eps + EPS_CMP_TOL):
            return pool.solutions[-1]
        return None
    if policy == "strong":
        F = np.array(pool.f_rows)
        ok = np.flatnonzero(np.all(F <= eps + EPS_CMP_TOL, axis=1))
        if ok.size == 0:
            return None
        costs = np.array(pool.costs)[ok]
        return pool.solutions[int(ok[np.argmin(costs)])]
    raise ValueError(f"unknown warm-start policy {policy!r}")


@dataclass
class InfeasibilityStore:
    """Antichain of componentwise-maximal epsilon vectors known infeasible."""

    maximal_infeasible: list[np.ndarray] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.maximal_infeasible)


def propagate_infeasibility(store: InfeasibilityStore, eps: np.ndarray) -> bool:
    """True iff eps is componentwise at most some stored infeasible vector,
    i.e. the subproblem at eps is tighter than a known-infeasible one."""
    eps = np.asarray(eps, dtype=np.float64)
    return any(
        np.all(eps <= stored + EPS_CMP_TOL) for stored in store.maximal_infeasible
    )


def record_infeasible(store: InfeasibilityStore, eps: np.ndarray) -> None:
    """Insert eps, dropping stored vectors it componentwise covers."""
    eps = np.asarray(eps, dtype=np.float64).copy()
    store.maximal_infeasible = [
        kept
        for kept in store.maximal_infeasible
        if not np.all(kept <= eps + EPS_CMP_TOL)
    ]
    store.maximal_infeasible.append(eps)


def _box_ranges(problem: Problem) -> np.ndarray:
    """Upper bound on each objective's spread using variable bounds only."""
    lo = np.where(problem.objectives >= 0, problem.lb, problem.ub)
    hi = np.where(problem.objectives >= 0, problem.ub, problem.lb)
    return (problem.objectives * hi).sum(axis=1) - (problem.objectives * lo).sum(axis=1)


def _objectives_integer_valued(problem: Problem) -> bool:
    ints = set(problem.integer_indices().tolist())
    for k in range(problem.objective_count):
        row = problem.objectives[k]
        if np.any(row != np.round(row)):
            return False
        for j in np.flatnonzero(row):
            if j not in ints:
                return False
    return True


def default_rho(problem: Problem, ideal: np.ndarray, grid_top: np.ndarray) -> float:
    """Small enough that the augmentation term can never outweigh a single
    integer step of the retained objective; clamped for continuous data."""
    if _objectives_integer_valued(problem):
        spread = float(np.sum(np.maximum(grid_top - ideal[1:], 0.0)))
        return 1.0 / (2.0 * (1.0 + spread))
    return min(max(RHO_CONTINUOUS, RHO_CLAMP[0]), RHO_CLAMP[1])


def _payoff_rho(problem: Problem) -> float:
    """Tie-break weight for payoff solves, from box ranges (grid unknown yet)."""
    if _objectives_integer_valued(problem):
        ranges = _box_ranges(problem)
        if np.all(np.isfinite(ranges)):
            return 1.0 / (2.0 * (1.0 + float(np.sum(np.maximum(ranges, 0.0)))))
    return min(max(RHO_CONTINUOUS, RHO_CLAMP[0]), RHO_CLAMP[1])


def payoff_table(problem: Problem) -> IdealNadirEstimate:
    """One augmented single-objective solve per objective.

    The diagonal is the exact ideal (the augmentation term is too small
    to shift integer optima); the column maxima estimate the nadir.
    Consecutive solves chain warm starts (objective-only changes).
    """
    p = problem.objective_count
    rho = _payoff_rho(problem)
    table = np.empty((p, p))
    prev = None
    for k in range(p):
        cost = problem.objectives[k] + rho * (
            problem.objectives.sum(axis=0) - problem.objectives[k]
        )
        options = MipOptions()
        if prev is not None:
            options = MipOptions(
                warm_solution=prev.solution.point,
                warm_basis=prev.root_basis,
                root_change=ChangeKind.OBJECTIVE_ONLY,
            )
        out = solve_mip(problem, cost, options)
        if out.status is not MipStatus.OPTIMAL:
            raise InfeasibleModel(f"payoff solve {k} ended {out.status.value}")
        table[k] = out.solution.objectives
        prev = out
    return IdealNadirEstimate(
        ideal=table.diagonal().copy(),
        nadir_estimate=table.max(axis=0),
        table=table,
    )


def build_epsilon_grid(est: IdealNadirEstimate, m: int) -> EpsilonGrid:
    """m equidistant levels per constrained objective.

    Levels j=1..m are ideal + j*(nadir-ideal)/m: the ideal itself is
    excluded (maximally infeasibility-prone, adds no coverage) and the
    nadir estimate is included exactly.
    """
    if m < 1:
        raise ValidationError("m must be at least 1")
    levels = []
    for k in range(1, est.ideal.shape[0]):
        lo, hi = est.ideal[k], est.nadir_estimate[k]
        if m == 1:
            levels.append(np.array([hi]))
        else:
            levels.append(lo + np.arange(1, m + 1) * (hi - lo) / m)
    return EpsilonGrid(levels=tuple(levels))


def traversal_cells(dims: tuple[int, ...], signs: tuple[int, ...]):
    """All index tuples, first dimension fastest, each per its sign."""
    if len(dims) != len(signs):
        raise DimensionError("signature length does not match grid dimensions")
    ranges = [
        range(d) if s > 0 else range(d - 1, -1, -1) for d, s in zip(dims, signs)
    ]
    for combo in itertools.product(*reversed(ranges)):
        yield tuple(reversed(combo))


def traversal_order(grid: EpsilonGrid, sig: OrderSignature):
    """Cell visit order over the grid per the signature."""
    return traversal_cells(grid.dims, sig.signs)


def build_subproblem(
    problem: Problem, eps: np.ndarray, rho: float
) -> tuple[np.ndarray, list[LinearConstraint]]:
    """Augmented scalar objective plus one epsilon row per bounded objective."""
    if rho <= 0:
        raise ValidationError("rho must be positive")
    eps = np.asarray(eps, dtype=np.float64)
    p = problem.objective_count
    if eps.shape != (p - 1,):
        raise DimensionError("epsilon vector must bound objectives 2..p")
    objective = problem.objectives[0] + rho * problem.objectives[1:].sum(axis=0)
    rows = []
    for k in range(1, p):
        row = problem.objectives[k]
        nz = np.flatnonzero(row)
        rows.append(
            LinearConstraint(
                idx=tuple(int(j) for j in nz),
                val=tuple(float(row[j]) for j in nz),
                sense="<=",
                rhs=float(eps[k - 1]),
                eps_index=k,
            )
        )
    return objective, rows


@dataclass(frozen=True)
class EcmConfig:
    m: int = 10
    signature: str | None = None  # defaults to all-ascending
    warm: str = "none"  # none | weak | strong
    propagate: bool = False
    rho: float | None = None
    seed: int = 0
    grid: EpsilonGrid | None = None  # explicit override of the built grid

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be at least 1")
        if self.warm not in ("none", "weak", "strong"):
            raise ValueError(f"unknown warm policy {self.warm!r}")


class _StructuralCounter:
    """Cell-level warm-start candidate counting (ordergrid semantics).

    For all-ascending signatures a constant-time down-neighbor test
    suffices: infeasible cells are downward closed, so some solved
    feasible predecessor exists iff some immediate down-neighbor is
    feasible.  Other signatures scan the solved-feasible history.
    """

    def __init__(self, dims, signs, policy):
        self.dims = dims
        self.policy = policy
        self.ascending = all(s > 0 for s in signs)
        self.feasible_grid = np.zeros(dims, dtype=bool) if self.ascending else None
        self.history: list[np.ndarray] = []
        self.prev_cell = None
        self.prev_feasible = False
        self.count = 0

    def candidate_exists(self, cell) -> bool:
        if self.policy == "weak":
            return (
                self.prev_feasible
                and self.prev_cell is not None
                and all(a <= b for a, b in zip(self.prev_cell, cell))
            )
        if self.ascending:
            for d in range(len(cell)):
                if cell[d] > 0:
                    nb = list(cell)
                    nb[d] -= 1
                    if self.feasible_grid[tuple(nb)]:
                        return True
            return False
        c = np.array(cell)
        return any(np.all(h <= c) for h in self.history)

    def note(self, cell, feasible: bool, skipped: bool) -> None:
        if feasible and self.policy != "none" and self.candidate_exists(cell):
            self.count += 1
        if feasible:
            if self.ascending:
                self.feasible_grid[cell] = True
            else:
                self.history.append(np.array(cell))
        self.prev_cell = cell
        self.prev_feasible = feasible and not skipped


def run_ecm(problem: Problem, config: EcmConfig) -> RunReport:
    """Traverse the epsilon grid, solving one augmented MIP per cell.

    Per cell: propagation check, warm-start selection (candidate offered
    as incumbent, predecessor root basis reused dual-side), solve, pool
    and store updates.  The archive is the nondominated set of all cell
    optima.
    """
    p = problem.objective_count
    est = payoff_table(problem)
    grid = config.grid if config.grid is not None else build_epsilon_grid(est, config.m)
    if len(grid.levels) != p - 1:
        raise DimensionError("grid dimensions must match objective count")
    sig = OrderSignature.parse(
        config.signature if config.signature else "o" + "+" * (p - 1)
    )
    if len(sig.signs) != p - 1:
        raise DimensionError("signature length must be p-1")
    grid_top = np.array([lv[-1] for lv in grid.levels])
    rho = config.rho if config.rho is not None else default_rho(problem, est.ideal, grid_top)
    c_aug, eps_rows = build_subproblem(problem, grid_top, rho)

    # One array build; only the epsilon rows' rhs changes between cells.
    derived = problem.with_constraints(eps_rows)
    arrays = build_kernel_arrays(derived, c_aug)
    m_struct = problem.num_constraints

    pool = SolutionPool(
        constrained_objectives=problem.objectives[1:], scalar_objective=c_aug
    )
    store = InfeasibilityStore()
    archive = Archive()
    counter = _StructuralCounter(grid.dims, sig.signs, config.warm)
    records = []
    prev_root_basis = None
    skips = 0

    for index, cell in enumerate(traversal_order(grid, sig)):
        eps = grid.eps_at(cell)
        t0 = time.perf_counter()
        if config.propagate and propagate_infeasibility(store, eps):
            skips += 1
            counter.note(cell, feasible=False, skipped=True)
            records.append(
                SubproblemRecord(
                    index=index,
                    weight=None,
                    epsilon=tuple(float(v) for v in eps),
                    cell=cell,
                    status=STATUS_SKIPPED,
                    warm_kind="none",
                    injected=False,
                    lp_iters=0,
                    nodes=0,
                    wall_ms=(time.perf_counter() - t0) * 1e3,
                    objectives=None,
                    value=None,
                )
            )
            continue

        candidate = select_warm_start(pool, eps, config.warm, c_aug)
        use_basis = prev_root_basis is not None and config.warm != "none"
        options_kwargs = {}
        if candidate is not None:
            options_kwargs["warm_solution"] = candidate.point
        if use_basis:
            options_kwargs["warm_basis"] = prev_root_basis
            options_kwargs["root_change"] = ChangeKind.RHS_ONLY
        if config.warm == "strong":
            options_kwargs["collect_pool"] = True
        if candidate is not None and use_basis:
            warm_kind = "both"
        elif candidate is not None:
            warm_kind = "solution"
        elif use_basis:
            warm_kind = "basis"
        else:
            warm_kind = "none"

        for d, i in enumerate(cell):
            arrays["b"][m_struct + d] = grid.levels[d][i]
        out = solve_mip_arrays(problem, arrays, MipOptions(**options_kwargs))
        wall_ms = (time.perf_counter() - t0) * 1e3

        if out.status is MipStatus.OPTIMAL:
            feasible = True
            archive.add(out.solution.objectives, out.solution)
            for sol in out.pool:
                pool.add(sol)
            if not out.pool or not np.array_equal(out.pool[-1].point, out.solution.point):
                pool.add(out.solution)
            prev_root_basis = out.root_basis
            status = STATUS_OPTIMAL
        elif out.status is MipStatus.INFEASIBLE:
            feasible = False
            record_infeasible(store, eps)
            if out.root_basis is not None:
                prev_root_basis = out.root_basis
            status = STATUS_INFEASIBLE
        else:
            feasible = False
            status = STATUS_LIMIT
        counter.note(cell, feasible=feasible, skipped=False)

        records.append(
            SubproblemRecord(
                index=index,
                weight=None,
                epsilon=tuple(float(v) for v in eps),
                cell=cell,
                status=status,
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
        solves=len(records) - skips,
        skips=skips,
        injections=sum(1 for r in records if r.injected),
        lp_iters=sum(r.lp_iters for r in records),
        nodes=sum(r.nodes for r in records),
        wall_ms=sum(r.wall_ms for r in records),
        warm_starts=counter.count,
        detections=skips,
    )
    report = RunReport(
        instance=problem.name,
        method="ecm",
        config={
            "m": config.m,
            "signature": sig.label,
            "warm": config.warm,
            "propagate": config.propagate,
            "rho": rho,
            "seed": config.seed,
            "explicit_grid": config.grid is not None,
        },
        records=records,
        archive=archive,
        totals=totals,
        extra={
            "grid_dims": list(grid.dims),
            "ideal": [float(v) for v in est.ideal],
            "nadir_estimate": [float(v) for v in est.nadir_estimate],
        },
    )
    report.validate()
    return report
