"""Seeded generators for the benchmark families (KP, AP, TSP) at desk scale.

Output depends only on the :class:`GenSpec`; every generated instance is
feasible (KP by the empty set, AP by any permutation, TSP by any tour).
All random draws come from :class:`moscal.rng.SplitMix64` in a documented
order so other implementations can reproduce the exact instances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import TooLargeError, ValidationError
from .model import BINARY, CONTINUOUS, LinearConstraint, Problem
from .rng import SplitMix64

FAMILIES = ("KP", "AP", "TSP")
COEFF_LO, COEFF_HI = 1, 100
TSP_MAX_SIZE = 12


@dataclass(frozen=True)
class GenSpec:
    family: str
    size: int
    p: int
    seed: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValidationError(f"unknown family {self.family!r}")
        if self.size < 2:
            raise ValidationError("size must be at least 2")
        if self.p < 2:
            raise ValidationError("at least two objectives required")


def filename(spec: GenSpec) -> str:
    return f"{spec.family}_{spec.size:03d}_{spec.p}obj_{spec.seed}.json"


def generate(spec: GenSpec) -> Problem:
    if spec.family == "KP":
        return gen_knapsack(spec)
    if spec.family == "AP":
        return gen_assignment(spec)
    return gen_tsp(spec)


def gen_knapsack(spec: GenSpec, capacity: int | None = None) -> Problem:
    """Multi-objective 0/1 knapsack.

    Draw order: item weights, then profit rows (objective-major).  Profits
    are stored negated so that minimization applies; capacity defaults to
    ceil(total weight / 2).
    """
    if spec.family != "KP":
        raise ValidationError("gen_knapsack requires family KP")
    n = spec.size
    rng = SplitMix64(spec.seed)
    weights = [rng.randint(COEFF_LO, COEFF_HI) for _ in range(n)]
    profits = [[rng.randint(COEFF_LO, COEFF_HI) for _ in range(n)] for _ in range(spec.p)]
    if capacity is None:
        capacity = math.ceil(sum(weights) / 2)
    objectives = -np.array(profits, dtype=np.float64)
    cap_row = LinearConstraint(
        idx=tuple(range(n)),
        val=tuple(float(w) for w in weights),
        sense="<=",
        rhs=float(capacity),
    )
    return Problem(
        name=f"KP {n:03d}",
        num_vars=n,
        var_types=(BINARY,) * n,
        lb=np.zeros(n),
        ub=np.ones(n),
        objectives=objectives,
        constraints=(cap_row,),
    )


def gen_assignment(spec: GenSpec) -> Problem:
    """Multi-objective assignment: size^2 binaries, row/column equalities.

    Variable (i, j) has index i*size + j.  Draw order: one cost matrix per
    objective, row-major.
    """
    if spec.family != "AP":
        raise ValidationError("gen_assignment requires family AP")
    s = spec.size
    n = s * s
    rng = SplitMix64(spec.seed)
    costs = np.array(
        [[[rng.randint(COEFF_LO, COEFF_HI) for _ in range(s)] for _ in range(s)]
         for _ in range(spec.p)],
        dtype=np.float64,
    )
    rows = []
    for i in range(s):  # each agent does exactly one task
        rows.append(
            LinearConstraint(
                idx=tuple(i * s + j for j in range(s)),
                val=(1.0,) * s,
                sense="=",
                rhs=1.0,
            )
        )
    for j in range(s):  # each task is done by exactly one agent
        rows.append(
            LinearConstraint(
                idx=tuple(i * s + j for i in range(s)),
                val=(1.0,) * s,
                sense="=",
                rhs=1.0,
            )
        )
    return Problem(
        name=f"AP {s:03d}",
        num_vars=n,
        var_types=(BINARY,) * n,
        lb=np.zeros(n),
        ub=np.ones(n),
        objectives=costs.reshape(spec.p, n),
        constraints=tuple(rows),
    )


def tsp_arc_index(size: int, i: int, j: int) -> int:
    """Index of directed arc (i, j); arcs enumerated i-major, skipping i==j."""
    if i == j:
        raise ValueError("no self-loop arcs")
    return i * (size - 1) + (j if j < i else j - 1)


def gen_tsp(spec: GenSpec) -> Problem:
    """Multi-objective asymmetric-formulation TSP on symmetric distances.

    Directed-arc binaries with in/out degree equalities plus
    Miller-Tucker-Zemlin order variables u_1..u_{size-1} (continuous in
    [1, size-1]) for subtour elimination.  Draw order: per objective, the
    strict upper triangle of the distance matrix row-major, mirrored to
    keep the matrix symmetric.
    """
    if spec.family != "TSP":
        raise ValidationError("gen_tsp requires family TSP")
    s = spec.size
    if s > TSP_MAX_SIZE:
        raise TooLargeError(f"TSP size {s} exceeds desk-scale guard {TSP_MAX_SIZE}")
    rng = SplitMix64(spec.seed)
    dists = np.zeros((spec.p, s, s))
    for k in range(spec.p):
        for i in range(s):
            for j in range(i + 1, s):
                d = rng.randint(COEFF_LO, COEFF_HI)
                dists[k, i, j] = d
                dists[k, j, i] = d

    num_arcs = s * (s - 1)
    n = num_arcs + (s - 1)  # arcs then u_1..u_{s-1}
    u_index = lambda i: num_arcs + (i - 1)  # noqa: E731 - tiny local map

    objectives = np.zeros((spec.p, n))
    for k in range(spec.p):
        for i in range(s):
            for j in range(s):
                if i != j:
                    objectives[k, tsp_arc_index(s, i, j)] = dists[k, i, j]

    rows = []
    for i in range(s):  # out-degree
        rows.append(
            LinearConstraint(
                idx=tuple(tsp_arc_index(s, i, j) for j in range(s) if j != i),
                val=(1.0,) * (s - 1),
                sense="=",
                rhs=1.0,
            )
        )
    for j in range(s):  # in-degree
        rows.append(
            LinearConstraint(
                idx=tuple(tsp_arc_index(s, i, j) for i in range(s) if i != j),
                val=(1.0,) * (s - 1),
                sense="=",
                rhs=1.0,
            )
        )
    # MTZ: u_i - u_j + (s-1) x_ij <= s - 2 for i, j >= 1, i != j
    for i in range(1, s):
        for j in range(1, s):
            if i != j:
                rows.append(
                    LinearConstraint(
                        idx=(u_index(i), u_index(j), tsp_arc_index(s, i, j)),
                        val=(1.0, -1.0, float(s - 1)),
                        sense="<=",
                        rhs=float(s - 2),
                    )
                )

    lb = np.zeros(n)
    ub = np.ones(n)
    lb[num_arcs:] = 1.0
    ub[num_arcs:] = float(s - 1)
    var_types = (BINARY,) * num_arcs + (CONTINUOUS,) * (s - 1)
    return Problem(
        name=f"TSP {s:03d}",
        num_vars=n,
        var_types=var_types,
        lb=lb,
        ub=ub,
        objectives=objectives,
        constraints=tuple(rows),
    )
