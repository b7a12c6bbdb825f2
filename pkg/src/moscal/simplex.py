"""Bounded-variable revised simplex over the kernel, plus warm-basis logic.

The central observation driving every warm start in this package: an
optimal basis stays primal feasible when only the objective changes and
stays dual feasible when only right-hand sides (or variable bounds)
change.  :func:`classify_warm_basis` encodes exactly that.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import _core
from ._core import _pykernel as _k  # constants shared by both kernels
from .errors import DimensionError, NumericalFailure
from .model import Problem


class LpStatus(enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"
    ITERATION_LIMIT = "IterationLimit"


class ChangeKind(enum.Enum):
    OBJECTIVE_ONLY = "ObjectiveOnly"
    RHS_ONLY = "RhsOnly"
    OTHER = "Other"


class BasisStart(enum.Enum):
    START_PRIMAL = "StartPrimal"
    START_DUAL = "StartDual"
    COLD_START = "ColdStart"


_KERNEL_STATUS = {
    _k.LP_OPTIMAL: LpStatus.OPTIMAL,
    _k.LP_INFEASIBLE: LpStatus.INFEASIBLE,
    _k.LP_UNBOUNDED: LpStatus.UNBOUNDED,
    _k.LP_ITER_LIMIT: LpStatus.ITERATION_LIMIT,
}


@dataclass(frozen=True)
class Basis:
    """Simplex state: basic column per row + bound status per column.

    Columns 0..n-1 are structural variables, n..n+m-1 row slacks.  Status
    codes: 0 basic, 1 at lower, 2 at upper, 3 nonbasic free.
    """

    basic: tuple[int, ...]
    status: tuple[int, ...]

    def __post_init__(self):
        if sorted(i for i, s in enumerate(self.status) if s == _k.BASIC) != sorted(
            self.basic
        ):
            raise DimensionError("basis and status arrays do not partition columns")

    @property
    def num_rows(self) -> int:
        return len(self.basic)

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return (
            np.array(self.basic, dtype=np.int64),
            np.array(self.status, dtype=np.int8),
        )


@dataclass(frozen=True)
class LpView:
    """One active scalar objective over a problem's current constraint set.

    Branching bound changes are carried as explicit lb/ub arrays so two
    views of the same problem can be diffed.
    """

    problem: Problem
    objective: np.ndarray
    lb: np.ndarray | None = None
    ub: np.ndarray | None = None

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        lb = self.problem.lb if self.lb is None else np.asarray(self.lb, dtype=np.float64)
        ub = self.problem.ub if self.ub is None else np.asarray(self.ub, dtype=np.float64)
        return lb, ub


@dataclass(frozen=True)
class LpOutcome:
    status: LpStatus
    point: np.ndarray | None
    objective_value: float
    basis: Basis | None
    iterations_primal: int
    iterations_dual: int

    @property
    def iterations(self) -> int:
        return self.iterations_primal + self.iterations_dual


def slack_bounds(senses) -> tuple[np.ndarray, np.ndarray]:
    """Row i gets slack s_i with a.x + s_i = rhs; bounds encode the sense."""
    m = len(senses)
    lo = np.zeros(m)
    hi = np.zeros(m)
    for i, sense in enumerate(senses):
        if sense == "<=":
            lo[i], hi[i] = 0.0, np.inf
        elif sense == ">=":
            lo[i], hi[i] = -np.inf, 0.0
        else:
            lo[i], hi[i] = 0.0, 0.0
    return lo, hi


def build_kernel_arrays(problem: Problem, objective) -> dict:
    """Dense arrays consumed by the kernels, reusable across solves."""
    objective = np.asarray(objective, dtype=np.float64)
    if objective.shape != (problem.num_vars,):
        raise DimensionError("objective length differs from num_vars")
    A, rhs, senses = problem.constraint_matrix()
    slo, shi = slack_bounds(senses)
    c_full = np.concatenate([objective, np.zeros(len(senses))])
    return {
        "W": A,
        "b": rhs,
        "c": c_full,
        "lb": np.concatenate([problem.lb, slo]),
        "ub": np.concatenate([problem.ub, shi]),
    }


def diff_views(old: LpView, new: LpView) -> ChangeKind:
    """Tag what changed between two consecutive views of the same columns."""
    if old.problem.num_vars != new.problem.num_vars:
        return ChangeKind.OTHER
    a_old, r_old, s_old = old.problem.constraint_matrix()
    a_new, r_new, s_new = new.problem.constraint_matrix()
    if a_old.shape != a_new.shape or s_old != s_new or not np.array_equal(a_old, a_new):
        return ChangeKind.OTHER
    obj_same = np.array_equal(old.objective, new.objective)
    lb_o, ub_o = old.bounds()
    lb_n, ub_n = new.bounds()
    rhs_same = (
        np.array_equal(r_old, r_new)
        and np.array_equal(lb_o, lb_n)
        and np.array_equal(ub_o, ub_n)
    )
    if rhs_same and not obj_same:
        return ChangeKind.OBJECTIVE_ONLY
    if obj_same:
        return ChangeKind.RHS_ONLY  # covers the no-change case: dual start is safe
    return ChangeKind.OTHER


def classify_warm_basis(old_basis: Basis | None, change: ChangeKind) -> BasisStart:
    """Which algorithm a reused optimal basis legitimately warm-starts.

    Objective-only changes keep the basis primal feasible; rhs/bound-only
    changes keep it dual feasible; anything else earns a cold start.
    """
    if old_basis is None:
        return BasisStart.COLD_START
    if change is ChangeKind.OBJECTIVE_ONLY:
        return BasisStart.START_PRIMAL
    if change is ChangeKind.RHS_ONLY:
        return BasisStart.START_DUAL
    return BasisStart.COLD_START


_START_TO_ALG = {
    BasisStart.START_PRIMAL: _k.ALG_PRIMAL,
    BasisStart.START_DUAL: _k.ALG_DUAL,
    BasisStart.COLD_START: _k.ALG_AUTO,
}

_ALG_CODES = {"auto": _k.ALG_AUTO, "primal": _k.ALG_PRIMAL, "dual": _k.ALG_DUAL}


def solve_lp(
    lp: LpView,
    start: Basis | None = None,
    algorithm: str = "auto",
    change: ChangeKind | None = None,
    max_iter: int = 20000,
) -> LpOutcome:
    """Solve the LP relaxation of a view.

    With ``algorithm="auto"``, a start basis and a known ``change`` kind,
    the primal/dual choice follows :func:`classify_warm_basis`; without a
    change tag the basis is probed numerically.  Deterministic given
    identical inputs.
    """
    if algorithm not in _ALG_CODES:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    arrays = build_kernel_arrays(lp.problem, lp.objective)
    lb, ub = lp.bounds()
    arrays["lb"][: lp.problem.num_vars] = lb
    arrays["ub"][: lp.problem.num_vars] = ub
    alg = _ALG_CODES[algorithm]
    basic = status = None
    if start is not None:
        if len(start.status) != arrays["c"].shape[0]:
            raise DimensionError("start basis does not match the view's columns")
        basic, status = start.arrays()
        if algorithm == "auto" and change is not None:
            alg = _START_TO_ALG[classify_warm_basis(start, change)]
    return _outcome_from_kernel(
        _core.active_kernel().lp_solve(
            arrays["W"], arrays["b"], arrays["c"], arrays["lb"], arrays["ub"],
            basic, status, alg, max_iter,
        ),
        lp.problem.num_vars,
    )


def _outcome_from_kernel(result, num_vars: int) -> LpOutcome:
    code, x, obj, itp, itd, basic, status = result
    if code == _k.LP_SINGULAR:
        raise NumericalFailure("singular basis after refactorization attempts")
    status_enum = _KERNEL_STATUS[code]
    basis = None
    if basic is not None:
        basis = Basis(basic=tuple(int(i) for i in basic), status=tuple(int(s) for s in status))
    point = None if x is None else np.asarray(x[:num_vars]).copy()
    return LpOutcome(
        status=status_enum,
        point=point,
        objective_value=float(obj),
        basis=basis,
        iterations_primal=int(itp),
        iterations_dual=int(itd),
    )
