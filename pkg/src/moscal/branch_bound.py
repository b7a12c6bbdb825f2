"""MILP solving over the simplex core, with both warm-start channels.

A previous solution enters as an initial incumbent bound
(:func:`try_inject_incumbent`); a previous basis warm-starts the root
relaxation.  Child nodes always restart the dual simplex from their
parent's final basis, since branching only changes variable bounds.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import _core
from ._core import _pykernel as _k
from .errors import DimensionError, MoscalError, NumericalFailure
from .model import (
    FEASIBILITY_TOL,
    INTEGRALITY_TOL,
    Problem,
    Solution,
    check_feasible,
    make_solution,
)
from .simplex import Basis, BasisStart, ChangeKind, build_kernel_arrays, classify_warm_basis


class MipStatus(enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    LIMIT_REACHED = "LimitReached"


class Injection(enum.Enum):
    ACCEPTED = "Accepted"
    REJECTED_INFEASIBLE = "RejectedInfeasible"
    REJECTED_NONINTEGRAL = "RejectedNonIntegral"


@dataclass(frozen=True)
class InjectionResult:
    outcome: Injection
    value: float | None = None

    @property
    def accepted(self) -> bool:
        return self.outcome is Injection.ACCEPTED


@dataclass(frozen=True)
class MipOptions:
    warm_solution: np.ndarray | None = None
    warm_basis: Basis | None = None
    root_change: ChangeKind | None = None  # how the view differs from the basis' origin
    node_limit: int = 1_000_000
    time_limit: float = math.inf
    collect_pool: bool = False

    def __post_init__(self):
        if self.node_limit <= 0 or self.time_limit <= 0:
            raise ValueError("limits must be positive")


@dataclass(frozen=True)
class MipOutcome:
    status: MipStatus
    solution: Solution | None
    objective_value: float
    nodes: int
    root_iterations: int
    total_lp_iterations: int
    incumbent_injected: bool
    pool: tuple[Solution, ...]
    root_basis: Basis | None  # final basis of the root relaxation, for chaining


def try_inject_incumbent(problem: Problem, objective, candidate) -> InjectionResult:
    """Accept a candidate iff it is feasible and integral for this problem."""
    candidate = np.asarray(candidate, dtype=np.float64)
    if candidate.shape != (problem.num_vars,):
        raise DimensionError("candidate length differs from num_vars")
    objective = np.asarray(objective, dtype=np.float64)
    if objective.shape != (problem.num_vars,):
        raise DimensionError("objective length differs from num_vars")
    ints = problem.integer_indices()
    if ints.size and np.any(np.abs(candidate[ints] - np.round(candidate[ints])) > INTEGRALITY_TOL):
        return InjectionResult(Injection.REJECTED_NONINTEGRAL)
    if not check_feasible(problem, candidate):
        return InjectionResult(Injection.REJECTED_INFEASIBLE)
    return InjectionResult(Injection.ACCEPTED, float(objective @ candidate))


_START_TO_ALG = {
    BasisStart.START_PRIMAL: _k.ALG_PRIMAL,
    BasisStart.START_DUAL: _k.ALG_DUAL,
    BasisStart.COLD_START: _k.ALG_AUTO,
}


def solve_mip(problem: Problem, objective, options: MipOptions = MipOptions()) -> MipOutcome:
    """Exact minimization of one scalar objective over the problem's X."""
    arrays = build_kernel_arrays(problem, objective)
    return solve_mip_arrays(problem, arrays, options)


def solve_mip_arrays(problem: Problem, arrays: dict, options: MipOptions) -> MipOutcome:
    """Array-level entry point; lets orchestrators reuse prebuilt arrays."""
    n = problem.num_vars
    is_int = np.zeros(n, dtype=bool)
    is_int[problem.integer_indices()] = True

    inc_x = None
    inc_val = math.inf
    injected = False
    if options.warm_solution is not None:
        res = _inject_arrays(problem, arrays, options.warm_solution)
        if res.accepted:
            injected = True
            inc_x = np.concatenate(
                [np.asarray(options.warm_solution, dtype=np.float64), np.zeros(arrays["b"].shape[0])]
            )
            inc_val = res.value

    warm_basic = warm_status = None
    warm_alg = _k.ALG_AUTO
    if options.warm_basis is not None:
        if len(options.warm_basis.status) == arrays["c"].shape[0]:
            warm_basic, warm_status = options.warm_basis.arrays()
            if options.root_change is not None:
                warm_alg = _START_TO_ALG[
                    classify_warm_basis(options.warm_basis, options.root_change)
                ]

    try:
        (
            code, x, val, nodes, root_iters, total_iters, raw_pool, rb, rs,
        ) = _core.active_kernel().mip_solve(
            arrays["W"], arrays["b"], arrays["c"], arrays["lb"], arrays["ub"],
            is_int, inc_x, inc_val, warm_basic, warm_status, warm_alg,
            options.node_limit, 50000, options.collect_pool,
        )
    except ArithmeticError as exc:
        raise NumericalFailure(str(exc)) from exc

    if code == _k.MIP_UNBOUNDED:
        raise MoscalError("objective is unbounded below over the relaxation")
    status = {
        _k.MIP_OPTIMAL: MipStatus.OPTIMAL,
        _k.MIP_INFEASIBLE: MipStatus.INFEASIBLE,
        _k.MIP_LIMIT: MipStatus.LIMIT_REACHED,
    }[code]
    solution = None
    if x is not None and status is not MipStatus.INFEASIBLE:
        solution = make_solution(problem, np.asarray(x[:n]))
    pool = tuple(make_solution(problem, px) for px, _ in raw_pool)
    root_basis = None
    if rb is not None:
        root_basis = Basis(basic=tuple(int(i) for i in rb), status=tuple(int(s) for s in rs))
    return MipOutcome(
        status=status,
        solution=solution,
        objective_value=float(val) if solution is not None else math.inf,
        nodes=int(nodes),
        root_iterations=int(root_iters),
        total_lp_iterations=int(total_iters),
        incumbent_injected=injected,
        pool=pool,
        root_basis=root_basis,
    )


def _inject_arrays(problem: Problem, arrays: dict, candidate) -> InjectionResult:
    """try_inject_incumbent against the array view (epsilon rows included)."""
    candidate = np.asarray(candidate, dtype=np.float64)
    n = problem.num_vars
    if candidate.shape != (n,):
        raise DimensionError("candidate length differs from num_vars")
    ints = problem.integer_indices()
    if ints.size and np.any(np.abs(candidate[ints] - np.round(candidate[ints])) > INTEGRALITY_TOL):
        return InjectionResult(Injection.REJECTED_NONINTEGRAL)
    tol = FEASIBILITY_TOL
    if np.any(candidate < arrays["lb"][:n] - tol) or np.any(candidate > arrays["ub"][:n] + tol):
        return InjectionResult(Injection.REJECTED_INFEASIBLE)
    if arrays["b"].size:
        lhs = arrays["W"] @ candidate
        slack_lo = arrays["lb"][n:]
        slack_hi = arrays["ub"][n:]
        s = arrays["b"] - lhs  # slack value implied by the row activity
        if np.any(s < slack_lo - tol) or np.any(s > slack_hi + tol):
            return InjectionResult(Injection.REJECTED_INFEASIBLE)
    return InjectionResult(Injection.ACCEPTED, float(arrays["c"][:n] @ candidate))
