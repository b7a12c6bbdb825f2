"""Dominance machinery, nondominated archives, supportedness, oracle.

The brute-force oracle is the ground truth the acceptance suite compares
against; it enumerates integer assignments directly and, for rows that
touch continuous variables, delegates the residual feasibility check to
scipy's LP solver so that no code is shared with the simplex module it
verifies.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .errors import DimensionError, TooLargeError, ValidationError
from .model import FEASIBILITY_TOL, Problem, Solution, make_solution

DEDUP_TOL = 1e-9
SUPPORT_DELTA = 1e-6
ORACLE_GUARD = 1 << 20


def dominates(a, b) -> bool:
    """Minimization dominance: a <= b componentwise and a != b."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionError("objective vectors differ in length")
    return bool(np.all(a <= b) and np.any(a < b))


@dataclass
class Archive:
    """Mutually nondominated (objective vector, solution) entries.

    Entries whose objective vectors agree within ``tolerance`` in every
    component are duplicates; the first discovered one is kept.
    """

    tolerance: float = DEDUP_TOL
    entries: list[tuple[np.ndarray, Solution | None]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    def vectors(self) -> np.ndarray:
        if not self.entries:
            return np.zeros((0, 0))
        return np.array([f for f, _ in self.entries])

    def add(self, objectives, solution: Solution | None = None) -> bool:
        """Insert if nondominated; evicts dominated entries. True if kept."""
        f = np.asarray(objectives, dtype=np.float64)
        keep = []
        for g, sol in self.entries:
            if np.all(np.abs(g - f) <= self.tolerance):
                return False  # duplicate
            if dominates(g, f):
                return False
            if not dominates(f, g):
                keep.append((g, sol))
        keep.append((f.copy(), solution))
        self.entries = keep
        return True

    def sorted_entries(self) -> list[tuple[np.ndarray, Solution | None]]:
        return sorted(self.entries, key=lambda e: tuple(e[0]))

    def set_of_vectors(self, decimals: int = 9) -> set:
        return {tuple(np.round(f, decimals)) for f, _ in self.entries}


def filter_nondominated(points) -> Archive:
    """Archive of exactly the input points not dominated by any other."""
    archive = Archive()
    for objectives, solution in points:
        archive.add(objectives, solution)
    return archive


def is_supported(y, front, delta: float = SUPPORT_DELTA) -> bool:
    """Whether y minimizes some strictly positive weighted sum over front.

    Decided by a small feasibility LP over the weights: find w with
    w_k >= delta, sum(w) = 1 and w.(z - y) >= 0 for every z in the front.
    """
    y = np.asarray(y, dtype=np.float64)
    rows = [np.asarray(z, dtype=np.float64) - y for z in front]
    p = y.shape[0]
    if any(r.shape != (p,) for r in rows):
        raise DimensionError("front members differ in length from y")
    # scipy form: minimize 0 s.t. A_ub w <= b_ub, A_eq w = 1, delta <= w <= 1
    A_ub = -np.array(rows) if rows else None
    b_ub = np.zeros(len(rows)) if rows else None
    res = linprog(
        c=np.zeros(p),
        A_ub=A_ub,
        b_ub=b_ub,
        A_eq=np.ones((1, p)),
        b_eq=np.array([1.0]),
        bounds=[(delta, 1.0)] * p,
        method="highs",
    )
    return bool(res.status == 0)


def _integer_cartesian(values: list[np.ndarray], chunk: int = 1 << 14):
    """Yield blocks of the cartesian product of per-variable value lists."""
    sizes = [len(v) for v in values]
    total = int(np.prod([np.int64(s) for s in sizes]))
    k = len(values)
    idx = np.arange(total, dtype=np.int64)
    for start in range(0, total, chunk):
        block_idx = idx[start : start + chunk]
        block = np.empty((len(block_idx), k))
        rem = block_idx
        for col in range(k - 1, -1, -1):
            block[:, col] = values[col][rem % sizes[col]]
            rem = rem // sizes[col]
        yield block


def brute_force_oracle(
    problem: Problem, guard: int = ORACLE_GUARD, tol: float = FEASIBILITY_TOL
) -> Archive:
    """Exact nondominated set by full enumeration of integer assignments.

    Continuous variables are allowed only with zero objective
    coefficients; rows touching them are checked per assignment with an
    independent LP (scipy/HiGHS).
    """
    int_mask = problem.integer_indices()
    cont = np.array(
        [j for j in range(problem.num_vars) if j not in set(int_mask.tolist())],
        dtype=np.int64,
    )
    if cont.size and np.any(problem.objectives[:, cont] != 0.0):
        raise ValidationError(
            "oracle requires zero objective coefficients on continuous variables"
        )
    values = []
    total = 1
    for j in int_mask:
        lo, hi = problem.lb[j], problem.ub[j]
        if not (np.isfinite(lo) and np.isfinite(hi)):
            raise ValidationError("oracle requires finite integer bounds")
        vals = np.arange(np.ceil(lo - tol), np.floor(hi + tol) + 1)
        if vals.size == 0:
            return Archive()
        total *= vals.size
        if total > guard:
            raise TooLargeError(f"enumeration size exceeds guard {guard}")
        values.append(vals)

    A, rhs, senses = problem.constraint_matrix()
    int_cols = A[:, int_mask] if len(problem.constraints) else np.zeros((0, len(int_mask)))
    pure_rows = [i for i in range(len(senses)) if cont.size == 0 or not np.any(A[i, cont])]
    mixed_rows = [i for i in range(len(senses)) if i not in pure_rows]

    archive = Archive()
    for block in _integer_cartesian(values):
        ok = np.ones(len(block), dtype=bool)
        if pure_rows:
            lhs = block @ int_cols[pure_rows].T
            for t, i in enumerate(pure_rows):
                if senses[i] == "<=":
                    ok &= lhs[:, t] <= rhs[i] + tol
                elif senses[i] == ">=":
                    ok &= lhs[:, t] >= rhs[i] - tol
                else:
                    ok &= np.abs(lhs[:, t] - rhs[i]) <= tol
        for row in block[ok]:
            point = np.zeros(problem.num_vars)
            point[int_mask] = row
            if mixed_rows:
                filled = _complete_continuous(problem, point, int_mask, cont, A, rhs, senses, mixed_rows)
                if filled is None:
                    continue
                point = filled
            archive.add(problem.objectives @ point, make_solution(problem, point))
    return archive


def _complete_continuous(problem, point, int_mask, cont, A, rhs, senses, mixed_rows):
    """Find values for the continuous variables, or None if impossible."""
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for i in mixed_rows:
        fixed = A[i, int_mask] @ point[int_mask]
        row = A[i, cont]
        if senses[i] == "<=":
            A_ub.append(row)
            b_ub.append(rhs[i] - fixed)
        elif senses[i] == ">=":
            A_ub.append(-row)
            b_ub.append(fixed - rhs[i])
        else:
            A_eq.append(row)
            b_eq.append(rhs[i] - fixed)
    res = linprog(
        c=np.zeros(cont.size),
        A_ub=np.array(A_ub) if A_ub else None,
        b_ub=np.array(b_ub) if b_ub else None,
        A_eq=np.array(A_eq) if A_eq else None,
        b_eq=np.array(b_eq) if b_eq else None,
        bounds=list(zip(problem.lb[cont], problem.ub[cont])),
        method="highs",
    )
    if res.status != 0:
        return None
    filled = point.copy()
    filled[cont] = res.x
    return filled


def export_archive_csv(archive: Archive, path, num_vars: int, p: int) -> None:
    """CSV with columns f1..fp then variable values, objective-sorted."""
    lines = [",".join([f"f{k+1}" for k in range(p)] + [f"x{j}" for j in range(num_vars)])]
    for fvec, sol in archive.sorted_entries():
        xs = ["" for _ in range(num_vars)] if sol is None else [repr(float(v)) for v in sol.point]
        lines.append(",".join([repr(float(v)) for v in fvec] + xs))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
