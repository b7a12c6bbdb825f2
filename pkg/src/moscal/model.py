"""Multi-objective problem representation, instance file I/O, evaluation.

A :class:`Problem` is a p-objective mixed-integer linear program.  All
objectives are stored in minimization sense; generators negate
maximization data on write so there is exactly one sense everywhere.
Problems are immutable after construction and safe to share between
threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DimensionError, ParseError, ValidationError

# Absolute tolerances; conventional MILP defaults.
FEASIBILITY_TOL = 1e-6
INTEGRALITY_TOL = 1e-6

CONTINUOUS = "C"
INTEGER = "I"
BINARY = "B"

_SENSES = ("<=", ">=", "=")


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class LinearConstraint:
    """Sparse row ``sum(val[t] * x[idx[t]]) sense rhs``.

    ``eps_index`` is None for structural rows; for rows added by the
    epsilon-constraint method it names the objective k (0-based) the row
    bounds.
    """

    idx: tuple[int, ...]
    val: tuple[float, ...]
    sense: str
    rhs: float
    eps_index: int | None = None

    def __post_init__(self):
        if self.sense not in _SENSES:
            raise ValidationError(f"unknown constraint sense {self.sense!r}")
        if len(self.idx) != len(self.val):
            raise ValidationError("constraint idx/val length mismatch")

    def dense_row(self, num_vars: int) -> np.ndarray:
        row = np.zeros(num_vars)
        for j, v in zip(self.idx, self.val):
            row[j] += v
        return row


@dataclass(frozen=True)
class Problem:
    """Immutable p-objective MILP: min (c_1 x, ..., c_p x) over X."""

    name: str
    num_vars: int
    var_types: tuple[str, ...]
    lb: np.ndarray
    ub: np.ndarray
    objectives: np.ndarray  # shape (p, num_vars)
    constraints: tuple[LinearConstraint, ...]

    def __post_init__(self):
        object.__setattr__(self, "lb", _frozen(self.lb))
        object.__setattr__(self, "ub", _frozen(self.ub))
        object.__setattr__(self, "objectives", _frozen(np.atleast_2d(self.objectives)))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        self._validate()

    def _validate(self):
        n = self.num_vars
        if len(self.var_types) != n or len(self.lb) != n or len(self.ub) != n:
            raise ValidationError("variable attribute lengths disagree with num_vars")
        if any(t not in (CONTINUOUS, INTEGER, BINARY) for t in self.var_types):
            raise ValidationError("unknown variable type")
        if self.objectives.ndim != 2 or self.objectives.shape[1] != n:
            raise ValidationError("objective rows must have num_vars coefficients")
        if self.objective_count < 2:
            raise ValidationError("at least two objectives required")
        if np.any(self.lb > self.ub):
            raise ValidationError("lower bound exceeds upper bound")
        for j, t in enumerate(self.var_types):
            if t == BINARY and (self.lb[j] < 0.0 or self.ub[j] > 1.0):
                raise ValidationError(f"binary variable {j} has bounds outside [0,1]")
        seen_eps = set()
        for con in self.constraints:
            if any(j < 0 or j >= n for j in con.idx):
                raise ValidationError("constraint references a variable out of range")
            if con.eps_index is not None:
                if con.eps_index in seen_eps:
                    raise ValidationError(
                        f"duplicate epsilon row for objective {con.eps_index}"
                    )
                seen_eps.add(con.eps_index)

    @property
    def objective_count(self) -> int:
        return self.objectives.shape[0]

    @property
    def num_constraints(self) -> int:
        return len(self.constraints)

    def integer_indices(self) -> np.ndarray:
        return np.array(
            [j for j, t in enumerate(self.var_types) if t in (INTEGER, BINARY)],
            dtype=np.int64,
        )

    def constraint_matrix(self) -> tuple[np.ndarray, np.ndarray, tuple[str, ...]]:
        """Dense (A, rhs, senses) for the full constraint set."""
        m = len(self.constraints)
        A = np.zeros((m, self.num_vars))
        rhs = np.zeros(m)
        senses = []
        for i, con in enumerate(self.constraints):
            A[i] = con.dense_row(self.num_vars)
            rhs[i] = con.rhs
            senses.append(con.sense)
        return A, rhs, tuple(senses)

    def with_constraints(self, extra: list[LinearConstraint]) -> "Problem":
        """New problem with rows appended (used for epsilon rows)."""
        return Problem(
            name=self.name,
            num_vars=self.num_vars,
            var_types=self.var_types,
            lb=self.lb,
            ub=self.ub,
            objectives=self.objectives,
            constraints=self.constraints + tuple(extra),
        )


@dataclass(frozen=True)
class Solution:
    """A decision-space point with its image in objective space."""

    point: np.ndarray
    objectives: np.ndarray
    integral: bool

    def __post_init__(self):
        object.__setattr__(self, "point", _frozen(self.point))
        object.__setattr__(self, "objectives", _frozen(self.objectives))


def make_solution(problem: Problem, point: np.ndarray) -> Solution:
    point = np.asarray(point, dtype=np.float64)
    objs = evaluate_objectives(problem, point)
    ints = problem.integer_indices()
    integral = bool(
        ints.size == 0
        or np.all(np.abs(point[ints] - np.round(point[ints])) <= INTEGRALITY_TOL)
    )
    return Solution(point=point, objectives=objs, integral=integral)


def evaluate_objectives(problem: Problem, point) -> np.ndarray:
    """Exact objective image (c_1 x, ..., c_p x); no augmentation term."""
    point = np.asarray(point, dtype=np.float64)
    if point.shape != (problem.num_vars,):
        raise DimensionError(
            f"point has length {point.shape}, expected ({problem.num_vars},)"
        )
    return problem.objectives @ point


def check_feasible(problem: Problem, point, tol: float = FEASIBILITY_TOL) -> bool:
    """Bounds, constraints and integrality, all within absolute ``tol``."""
    point = np.asarray(point, dtype=np.float64)
    if point.shape != (problem.num_vars,):
        raise DimensionError(
            f"point has length {point.shape}, expected ({problem.num_vars},)"
        )
    if tol <= 0:
        raise ValueError("tol must be positive")
    if np.any(point < problem.lb - tol) or np.any(point > problem.ub + tol):
        return False
    for con in problem.constraints:
        lhs = sum(v * point[j] for j, v in zip(con.idx, con.val))
        if con.sense == "<=" and lhs > con.rhs + tol:
            return False
        if con.sense == ">=" and lhs < con.rhs - tol:
            return False
        if con.sense == "=" and abs(lhs - con.rhs) > tol:
            return False
    ints = problem.integer_indices()
    if ints.size and np.any(np.abs(point[ints] - np.round(point[ints])) > tol):
        return False
    return True


# ---------------------------------------------------------------------------
# Instance files.  A single JSON document; canonical form is the exact byte
# stream produced by save_instance, so save(load(f)) round-trips.

_INF = float("inf")


def _bound_to_json(x: float):
    if x == _INF:
        return "inf"
    if x == -_INF:
        return "-inf"
    return _num_to_json(x)


def _bound_from_json(x) -> float:
    if x == "inf":
        return _INF
    if x == "-inf":
        return -_INF
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return float(x)
    raise ParseError(f"bad bound value {x!r}")


def _num_to_json(x: float):
    f = float(x)
    return int(f) if f.is_integer() else f


def load_instance(path) -> Problem:
    """Parse and validate an instance file; rejects invalid documents."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read instance {path}: {exc}") from exc
    return problem_from_dict(doc)


def problem_from_dict(doc: dict) -> Problem:
    try:
        name = doc["name"]
        num_vars = doc["num_vars"]
        var_types = tuple(doc["var_types"])
        lb = np.array([_bound_from_json(x) for x in doc["lb"]])
        ub = np.array([_bound_from_json(x) for x in doc["ub"]])
        objectives = np.array(doc["objectives"], dtype=np.float64, ndmin=2)
        constraints = tuple(
            LinearConstraint(
                idx=tuple(int(j) for j in c["idx"]),
                val=tuple(float(v) for v in c["val"]),
                sense=c["sense"],
                rhs=float(c["rhs"]),
            )
            for c in doc["constraints"]
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise ParseError(f"malformed instance document: {exc!r}") from exc
    if not isinstance(num_vars, int):
        raise ParseError("num_vars must be an integer")
    return Problem(
        name=str(name),
        num_vars=num_vars,
        var_types=var_types,
        lb=lb,
        ub=ub,
        objectives=objectives,
        constraints=constraints,
    )


def problem_to_dict(problem: Problem) -> dict:
    return {
        "name": problem.name,
        "num_vars": problem.num_vars,
        "var_types": list(problem.var_types),
        "lb": [_bound_to_json(x) for x in problem.lb],
        "ub": [_bound_to_json(x) for x in problem.ub],
        "objectives": [[_num_to_json(v) for v in row] for row in problem.objectives],
        "constraints": [
            {
                "idx": list(c.idx),
                "val": [_num_to_json(v) for v in c.val],
                "sense": c.sense,
                "rhs": _num_to_json(c.rhs),
            }
            for c in problem.constraints
        ],
    }


def save_instance(problem: Problem, path) -> None:
    """Write the canonical form: fixed key order, 2-space indent, newline."""
    text = json.dumps(problem_to_dict(problem), indent=2) + "\n"
    Path(path).write_text(text, encoding="utf-8")
