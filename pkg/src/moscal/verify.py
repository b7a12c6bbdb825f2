"""Oracle-backed verification of run reports.

Checks, on oracle-enumerable instances: every archive point is efficient,
WSM points are supported and minimize their own weighted sum over the
oracle front, every skipped subproblem is confirmed infeasible by a cold
re-solve, and warm-started subproblem values match cold re-solves.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .branch_bound import MipStatus, solve_mip
from .ecm import build_subproblem
from .errors import ValidationError
from .model import Problem
from .pareto import brute_force_oracle, is_supported
from .report import STATUS_OPTIMAL, STATUS_SKIPPED, RunReport

VALUE_TOL = 1e-6
VERIFY_ARGMIN_TOL = 1e-9


@dataclass
class Verdict:
    passed: bool = True
    violations: list[str] = field(default_factory=list)
    checks: int = 0

    def fail(self, message: str) -> None:
        self.passed = False
        self.violations.append(message)

    def note(self) -> None:
        self.checks += 1


def verify_report(
    problem: Problem,
    report: RunReport,
    expect_exact_front: bool = False,
    resolve_cold: bool = True,
) -> Verdict:
    """Full verification verdict for one run report."""
    verdict = Verdict()
    oracle = brute_force_oracle(problem)
    front = oracle.vectors()
    oracle_set = oracle.set_of_vectors()

    archive_set = report.archive.set_of_vectors()
    for vec in archive_set:
        verdict.note()
        if vec not in oracle_set:
            verdict.fail(f"archive point {vec} is not on the oracle front")
    if expect_exact_front and archive_set != oracle_set:
        missing = oracle_set - archive_set
        extra = archive_set - oracle_set
        verdict.fail(f"archive != oracle front (missing {missing}, extra {extra})")

    if report.method == "wsm":
        _verify_wsm(problem, report, front, verdict, resolve_cold)
    else:
        _verify_ecm(problem, report, verdict, resolve_cold)
    return verdict


def _verify_wsm(problem, report, front, verdict, resolve_cold):
    front_list = [row for row in front]
    for rec in report.records:
        if rec.status != STATUS_OPTIMAL or rec.objectives is None:
            continue
        verdict.note()
        y = np.array(rec.objectives)
        if not is_supported(y, front_list):
            verdict.fail(f"wsm point {rec.objectives} is not supported")
        w = np.array(rec.weight)
        own = float(w @ y)
        best = float(min(w @ z for z in front_list))
        if own > best + VERIFY_ARGMIN_TOL:
            verdict.fail(
                f"wsm point {rec.objectives} not the argmin of its weight {rec.weight}"
                f" ({own} vs {best})"
            )
        if resolve_cold:
            cold = solve_mip(problem, w @ problem.objectives)
            verdict.note()
            if cold.status is not MipStatus.OPTIMAL or abs(cold.objective_value - own) > VALUE_TOL:
                verdict.fail(
                    f"wsm cold re-solve disagrees at weight {rec.weight}: "
                    f"{cold.objective_value} vs {own}"
                )


def _verify_ecm(problem, report, verdict, resolve_cold):
    rho = report.config.get("rho")
    if rho is None:
        raise ValidationError("ecm report lacks rho")
    for rec in report.records:
        eps = None if rec.epsilon is None else np.array(rec.epsilon)
        if rec.status == STATUS_SKIPPED:
            verdict.note()
            objective, rows = build_subproblem(problem, eps, rho)
            cold = solve_mip(problem.with_constraints(rows), objective)
            if cold.status is not MipStatus.INFEASIBLE:
                verdict.fail(
                    f"false skip at cell {rec.cell}: cold re-solve is {cold.status.value}"
                )
        elif resolve_cold and rec.status == STATUS_OPTIMAL:
            verdict.note()
            objective, rows = build_subproblem(problem, eps, rho)
            cold = solve_mip(problem.with_constraints(rows), objective)
            if cold.status is not MipStatus.OPTIMAL:
                verdict.fail(f"cold re-solve at cell {rec.cell} is {cold.status.value}")
            elif abs(cold.objective_value - _augmented_value(rec, rho)) > VALUE_TOL:
                verdict.fail(
                    f"warm/cold value mismatch at cell {rec.cell}: "
                    f"{cold.objective_value} vs {_augmented_value(rec, rho)}"
                )


def _augmented_value(rec, rho) -> float:
    f = rec.objectives
    return float(f[0] + rho * sum(f[1:]))
