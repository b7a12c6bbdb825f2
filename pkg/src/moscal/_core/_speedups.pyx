# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled solver kernel; mirrors _pykernel function by function.

Same tolerances, same pivot rules, same tie-breaking (lowest index), same
return conventions.  The speed comes from typed loops, a persistent
workspace across branch-and-bound nodes, and a dense Gauss-Jordan basis
inverse with partial pivoting instead of per-node LAPACK calls.
"""

import heapq

import numpy as np

from libc.math cimport INFINITY, fabs, floor, ceil
from libc.string cimport memcpy, memset

cdef double FEAS_TOL = 1e-7
cdef double OPT_TOL = 1e-9
cdef double PIVOT_TOL = 1e-10
cdef double ZERO_SNAP = 1e-11
cdef double RESIDUAL_TOL = 1e-8
cdef int REFACTOR_EVERY = 50
cdef double INT_TOL = 1e-6
cdef double PRUNE_EPS = 1e-9

cdef int BASIC = 0, AT_LOWER = 1, AT_UPPER = 2, FREE = 3

LP_OPTIMAL, LP_INFEASIBLE, LP_UNBOUNDED, LP_ITER_LIMIT, LP_SINGULAR = 0, 1, 2, 3, 4
ALG_AUTO, ALG_PRIMAL, ALG_DUAL = 0, 1, 2
MIP_OPTIMAL, MIP_INFEASIBLE, MIP_LIMIT, MIP_UNBOUNDED = 0, 1, 2, 3

cdef int C_LP_OPTIMAL = 0, C_LP_INFEASIBLE = 1, C_LP_UNBOUNDED = 2
cdef int C_LP_ITER_LIMIT = 3, C_LP_SINGULAR = 4
cdef int C_ALG_AUTO = 0, C_ALG_PRIMAL = 1, C_ALG_DUAL = 2


cdef class LpWork:
    """Reusable simplex state; rebind bounds/basis between related solves."""

    cdef double[:, ::1] W
    cdef double[::1] b, c, lb, ub
    cdef long long[::1] basic
    cdef signed char[::1] status
    cdef double[:, ::1] Minv
    cdef double[:, ::1] gj
    cdef double[::1] xB, y, d, wcol, vals, rhs_eff, alpha, cost1
    cdef long long[::1] perm
    cdef int m, n, nt
    cdef int pivots_since_refactor, degenerate_streak, bland_after
    cdef bint bland
    cdef long iters_primal, iters_dual, max_iter

    def __init__(self, double[:, ::1] W, double[::1] b, double[::1] c):
        self.W = W
        self.b = b
        self.c = c
        self.m = W.shape[0]
        self.n = W.shape[1]
        self.nt = self.n + self.m
        m, nt = self.m, self.nt
        self.basic = np.empty(m, dtype=np.int64)
        self.status = np.empty(nt, dtype=np.int8)
        self.Minv = np.empty((m, m))
        self.gj = np.empty((m, 2 * m))
        self.xB = np.empty(m)
        self.y = np.empty(m)
        self.d = np.empty(nt)
        self.wcol = np.empty(m)
        self.vals = np.empty(nt)
        self.rhs_eff = np.empty(m)
        self.alpha = np.empty(nt)
        self.cost1 = np.empty(nt)
        self.bland_after = 1000

    cdef void set_bounds(self, double[::1] lb, double[::1] ub):
        self.lb = lb
        self.ub = ub

    cdef void reset_counters(self):
        self.pivots_since_refactor = 0
        self.degenerate_streak = 0
        self.bland = False
        self.iters_primal = 0
        self.iters_dual = 0

    # -- basis algebra ------------------------------------------------------

    cdef bint refactor(self):
        """Gauss-Jordan inverse of the basis matrix with partial pivoting."""
        cdef int m = self.m, n = self.n
        cdef int i, k, r, pos
        cdef long long j
        cdef double piv, factor
        cdef double[:, ::1] g = self.gj
        for pos in range(m):
            j = self.basic[pos]
            if j < n:
                for i in range(m):
                    g[i, pos] = self.W[i, j]
            else:
                for i in range(m):
                    g[i, pos] = 0.0
                g[j - n, pos] = 1.0
        for i in range(m):
            for k in range(m):
                g[i, m + k] = 0.0
            g[i, m + i] = 1.0
        for k in range(m):
            r = k
            piv = fabs(g[k, k])
            for i in range(k + 1, m):
                if fabs(g[i, k]) > piv:
                    piv = fabs(g[i, k])
                    r = i
            if piv < 1e-12:
                return False
            if r != k:
                for i in range(2 * m):
                    g[k, i], g[r, i] = g[r, i], g[k, i]
            piv = g[k, k]
            for i in range(2 * m):
                g[k, i] /= piv
            for i in range(m):
                if i != k:
                    factor = g[i, k]
                    if factor != 0.0:
                        for r in range(2 * m):
                            g[i, r] -= factor * g[k, r]
        for i in range(m):
            for k in range(m):
                self.Minv[i, k] = g[i, m + k]
        self.pivots_since_refactor = 0
        return True

    cdef bint load_basis(self, long long[::1] basic, signed char[::1] status):
        cdef int i
        for i in range(self.m):
            self.basic[i] = basic[i]
        for i in range(self.nt):
            self.status[i] = status[i]
        return self.refactor()

    cdef void load_cold(self):
        cdef int i, j
        for i in range(self.m):
            self.basic[i] = self.n + i
            self.status[self.n + i] = BASIC
        for j in range(self.n):
            if self.c[j] >= 0.0:
                if self.lb[j] > -INFINITY:
                    self.status[j] = AT_LOWER
                elif self.ub[j] < INFINITY:
                    self.status[j] = AT_UPPER
                else:
                    self.status[j] = FREE
            else:
                if self.ub[j] < INFINITY:
                    self.status[j] = AT_UPPER
                elif self.lb[j] > -INFINITY:
                    self.status[j] = AT_LOWER
                else:
                    self.status[j] = FREE

    cdef void fill_vals(self):
        cdef int j
        cdef signed char s
        for j in range(self.nt):
            s = self.status[j]
            if s == AT_LOWER:
                self.vals[j] = self.lb[j]
            elif s == AT_UPPER:
                self.vals[j] = self.ub[j]
            else:
                self.vals[j] = 0.0

    cdef void compute_xB(self):
        cdef int i, j
        cdef double v, s
        self.fill_vals()
        for i in range(self.m):
            self.rhs_eff[i] = self.b[i] - self.vals[self.n + i]
        for j in range(self.n):
            v = self.vals[j]
            if v != 0.0:
                for i in range(self.m):
                    self.rhs_eff[i] -= self.W[i, j] * v
        for i in range(self.m):
            s = 0.0
            for j in range(self.m):
                s += self.Minv[i, j] * self.rhs_eff[j]
            self.xB[i] = s

    cdef double residual(self):
        # max |B xB - rhs_eff|; rhs_eff and xB must be current
        cdef int i, pos
        cdef long long j
        cdef double worst = 0.0, s
        cdef double[::1] acc = self.y  # reuse scratch; y is recomputed later
        for i in range(self.m):
            acc[i] = 0.0
        for pos in range(self.m):
            j = self.basic[pos]
            if j < self.n:
                for i in range(self.m):
                    acc[i] += self.W[i, j] * self.xB[pos]
            else:
                acc[j - self.n] += self.xB[pos]
        for i in range(self.m):
            s = fabs(acc[i] - self.rhs_eff[i])
            if s > worst:
                worst = s
        return worst

    cdef void reduced_costs(self, double[::1] cost):
        cdef int i, j
        cdef double yi, s
        for i in range(self.m):
            s = 0.0
            for j in range(self.m):
                s += cost[self.basic[j]] * self.Minv[j, i]
            self.y[i] = s
        for j in range(self.n):
            self.d[j] = cost[j]
        for i in range(self.m):
            yi = self.y[i]
            if yi != 0.0:
                for j in range(self.n):
                    self.d[j] -= yi * self.W[i, j]
        for i in range(self.m):
            self.d[self.n + i] = cost[self.n + i] - self.y[i]

    cdef void ftran(self, long long q):
        cdef int i, k
        cdef double s
        if q < self.n:
            for i in range(self.m):
                s = 0.0
                for k in range(self.m):
                    s += self.Minv[i, k] * self.W[k, q]
                self.wcol[i] = s
        else:
            for i in range(self.m):
                self.wcol[i] = self.Minv[i, q - self.n]

    cdef bint pivot(self, int r, long long q, signed char leave_status):
        # eta update of Minv with self.wcol as the entering column image
        cdef long long lv = self.basic[r]
        cdef int i, k
        cdef double wr = self.wcol[r], wi
        self.basic[r] = q
        self.status[q] = BASIC
        self.status[lv] = leave_status
        for k in range(self.m):
            self.Minv[r, k] /= wr
        for i in range(self.m):
            if i != r:
                wi = self.wcol[i]
                if wi != 0.0:
                    for k in range(self.m):
                        self.Minv[i, k] -= wi * self.Minv[r, k]
        self.pivots_since_refactor += 1
        if self.pivots_since_refactor >= REFACTOR_EVERY:
            return self.refactor()
        return True

    cdef void note_step(self, double t):
        if t <= ZERO_SNAP:
            self.degenerate_streak += 1
            if self.degenerate_streak > self.bland_after:
                self.bland = True
        else:
            self.degenerate_streak = 0

    # -- pricing --------------------------------------------------------------

    cdef long long entering(self):
        cdef long long j, best_j = -1
        cdef double best = -1.0, v
        cdef signed char s
        for j in range(self.nt):
            s = self.status[j]
            if s == BASIC or self.lb[j] == self.ub[j]:
                continue
            if s == AT_LOWER:
                if self.d[j] < -OPT_TOL:
                    v = -self.d[j]
                else:
                    continue
            elif s == AT_UPPER:
                if self.d[j] > OPT_TOL:
                    v = self.d[j]
                else:
                    continue
            else:  # FREE
                v = fabs(self.d[j])
                if v <= OPT_TOL:
                    continue
            if self.bland:
                return j
            if v > best:
                best = v
                best_j = j
        return best_j

    # -- primal simplex (phase 2) ----------------------------------------------

    cdef int primal(self):
        cdef long long q, bi
        cdef int i, r
        cdef double sigma, rate, t, tmin, t_bound
        cdef signed char leave_status
        cdef long long best_var
        while True:
            if self.iters_primal + self.iters_dual >= self.max_iter:
                return C_LP_ITER_LIMIT
            self.compute_xB()
            self.reduced_costs(self.c)
            q = self.entering()
            if q < 0:
                if self.residual() > RESIDUAL_TOL:
                    if not self.refactor():
                        return C_LP_SINGULAR
                    continue
                return C_LP_OPTIMAL
            sigma = 1.0
            if self.status[q] == AT_UPPER or (self.status[q] == FREE and self.d[q] > 0):
                sigma = -1.0
            self.ftran(q)
            # ratio test over basic rows
            tmin = INFINITY
            for i in range(self.m):
                bi = self.basic[i]
                rate = -sigma * self.wcol[i]
                t = INFINITY
                if rate > PIVOT_TOL:
                    if self.ub[bi] < INFINITY:
                        t = (self.ub[bi] - self.xB[i]) / rate
                elif rate < -PIVOT_TOL:
                    if self.lb[bi] > -INFINITY:
                        t = (self.xB[i] - self.lb[bi]) / (-rate)
                if t < 0.0:
                    t = 0.0
                self.rhs_eff[i] = t  # reuse as per-row ratio scratch
                if t < tmin:
                    tmin = t
            t_bound = INFINITY
            if self.status[q] != FREE and self.lb[q] > -INFINITY and self.ub[q] < INFINITY:
                t_bound = self.ub[q] - self.lb[q]
            if tmin >= t_bound:
                if t_bound == INFINITY:
                    return C_LP_UNBOUNDED
                self.iters_primal += 1
                self.note_step(t_bound)
                self.status[q] = AT_UPPER if self.status[q] == AT_LOWER else AT_LOWER
                continue
            # lowest variable index among exact-tie blocking rows
            r = -1
            best_var = -1
            for i in range(self.m):
                if self.rhs_eff[i] == tmin:
                    if best_var < 0 or self.basic[i] < best_var:
                        best_var = self.basic[i]
                        r = i
            rate = -sigma * self.wcol[r]
            leave_status = AT_UPPER if rate > 0.0 else AT_LOWER
            self.iters_primal += 1
            self.note_step(tmin)
            if not self.pivot(r, q, leave_status):
                return C_LP_SINGULAR

    # -- composite phase 1 ------------------------------------------------------

    cdef int phase1(self):
        cdef long long q, bi
        cdef int i, r
        cdef double sigma, rate, t, tmin, t_bound
        cdef bint any_infeasible, exit_low_r
        cdef signed char leave_status
        cdef long long best_var
        while True:
            if self.iters_primal + self.iters_dual >= self.max_iter:
                return C_LP_ITER_LIMIT
            self.compute_xB()
            any_infeasible = False
            for i in range(self.nt):
                self.cost1[i] = 0.0
            for i in range(self.m):
                bi = self.basic[i]
                if self.xB[i] < self.lb[bi] - FEAS_TOL:
                    self.cost1[bi] = -1.0
                    any_infeasible = True
                elif self.xB[i] > self.ub[bi] + FEAS_TOL:
                    self.cost1[bi] = 1.0
                    any_infeasible = True
            if not any_infeasible:
                if self.residual() > RESIDUAL_TOL:
                    if not self.refactor():
                        return C_LP_SINGULAR
                    continue
                return C_LP_OPTIMAL
            self.reduced_costs(self.cost1)
            q = self.entering()
            if q < 0:
                return C_LP_INFEASIBLE
            sigma = 1.0
            if self.status[q] == AT_UPPER or (self.status[q] == FREE and self.d[q] > 0):
                sigma = -1.0
            self.ftran(q)
            tmin = INFINITY
            for i in range(self.m):
                bi = self.basic[i]
                rate = -sigma * self.wcol[i]
                t = INFINITY
                if self.xB[i] < self.lb[bi] - FEAS_TOL:
                    if rate > PIVOT_TOL:
                        t = (self.lb[bi] - self.xB[i]) / rate
                elif self.xB[i] > self.ub[bi] + FEAS_TOL:
                    if rate < -PIVOT_TOL:
                        t = (self.xB[i] - self.ub[bi]) / (-rate)
                else:
                    if rate > PIVOT_TOL:
                        if self.ub[bi] < INFINITY:
                            t = (self.ub[bi] - self.xB[i]) / rate
                    elif rate < -PIVOT_TOL:
                        if self.lb[bi] > -INFINITY:
                            t = (self.xB[i] - self.lb[bi]) / (-rate)
                if t < 0.0:
                    t = 0.0
                self.rhs_eff[i] = t
                if t < tmin:
                    tmin = t
            t_bound = INFINITY
            if self.status[q] != FREE and self.lb[q] > -INFINITY and self.ub[q] < INFINITY:
                t_bound = self.ub[q] - self.lb[q]
            self.iters_primal += 1
            if tmin >= t_bound:
                if t_bound == INFINITY:
                    return C_LP_SINGULAR  # impossible for a bounded phase-1 objective
                self.note_step(t_bound)
                self.status[q] = AT_UPPER if self.status[q] == AT_LOWER else AT_LOWER
                continue
            r = -1
            best_var = -1
            for i in range(self.m):
                if self.rhs_eff[i] == tmin:
                    if best_var < 0 or self.basic[i] < best_var:
                        best_var = self.basic[i]
                        r = i
            bi = self.basic[r]
            rate = -sigma * self.wcol[r]
            if self.xB[r] < self.lb[bi] - FEAS_TOL:
                leave_status = AT_LOWER
            elif self.xB[r] > self.ub[bi] + FEAS_TOL:
                leave_status = AT_UPPER
            else:
                leave_status = AT_UPPER if rate > 0.0 else AT_LOWER
            self.note_step(tmin)
            if not self.pivot(r, q, leave_status):
                return C_LP_SINGULAR

    # -- dual simplex -------------------------------------------------------------

    cdef bint make_dual_feasible(self):
        cdef long long j
        self.reduced_costs(self.c)
        for j in range(self.nt):
            if self.status[j] == BASIC or self.lb[j] == self.ub[j]:
                continue
            if self.status[j] == AT_LOWER and self.d[j] < -OPT_TOL:
                if self.ub[j] == INFINITY:
                    return False
                self.status[j] = AT_UPPER
            elif self.status[j] == AT_UPPER and self.d[j] > OPT_TOL:
                if self.lb[j] == -INFINITY:
                    return False
                self.status[j] = AT_LOWER
            elif self.status[j] == FREE and fabs(self.d[j]) > OPT_TOL:
                return False
        return True

    cdef int dual(self):
        cdef long long q, bi, best_var
        cdef int i, j, r
        cdef double worst, v_low, v_up, v, at, ratio, best_ratio
        cdef bint leave_low
        cdef signed char s, leave_status
        while True:
            if self.iters_primal + self.iters_dual >= self.max_iter:
                return C_LP_ITER_LIMIT
            self.compute_xB()
            r = -1
            worst = FEAS_TOL
            best_var = -1
            for i in range(self.m):
                bi = self.basic[i]
                v_low = self.lb[bi] - self.xB[i]
                v_up = self.xB[i] - self.ub[bi]
                v = v_low if v_low > v_up else v_up
                if self.bland:
                    if v > FEAS_TOL and (best_var < 0 or bi < best_var):
                        best_var = bi
                        r = i
                else:
                    if v > worst:
                        worst = v
                        r = i
            if r < 0:
                if self.residual() > RESIDUAL_TOL:
                    if not self.refactor():
                        return C_LP_SINGULAR
                    continue
                return C_LP_OPTIMAL
            bi = self.basic[r]
            leave_low = (self.lb[bi] - self.xB[r]) >= (self.xB[r] - self.ub[bi])
            # alpha = r-th row of Minv times [W | I]
            for j in range(self.n):
                self.alpha[j] = 0.0
            for i in range(self.m):
                v = self.Minv[r, i]
                if v != 0.0:
                    for j in range(self.n):
                        self.alpha[j] += v * self.W[i, j]
            for i in range(self.m):
                self.alpha[self.n + i] = self.Minv[r, i]
            if leave_low:
                for j in range(self.nt):
                    self.alpha[j] = -self.alpha[j]
            self.reduced_costs(self.c)
            q = -1
            best_ratio = INFINITY
            for j in range(self.nt):
                s = self.status[j]
                if s == BASIC or self.lb[j] == self.ub[j]:
                    continue
                at = self.alpha[j]
                if s == AT_LOWER:
                    if at <= PIVOT_TOL:
                        continue
                elif s == AT_UPPER:
                    if at >= -PIVOT_TOL:
                        continue
                else:  # FREE
                    if fabs(at) <= PIVOT_TOL:
                        continue
                ratio = self.d[j] / at
                if ratio < 0.0:
                    ratio = 0.0
                if ratio < best_ratio:
                    best_ratio = ratio
                    q = j
            if q < 0:
                return C_LP_INFEASIBLE
            self.ftran(q)
            if fabs(self.wcol[r]) <= PIVOT_TOL:
                if not self.refactor():
                    return C_LP_SINGULAR
                continue
            self.iters_dual += 1
            self.note_step(fabs(self.d[q]))
            leave_status = AT_LOWER if leave_low else AT_UPPER
            if not self.pivot(r, q, leave_status):
                return C_LP_SINGULAR

    # -- feasibility probes ----------------------------------------------------

    cdef bint primal_feasible_now(self):
        cdef int i
        cdef long long bi
        self.compute_xB()
        for i in range(self.m):
            bi = self.basic[i]
            if self.xB[i] < self.lb[bi] - FEAS_TOL or self.xB[i] > self.ub[bi] + FEAS_TOL:
                return False
        return True

    cdef bint dual_feasible_now(self):
        cdef long long j
        self.reduced_costs(self.c)
        for j in range(self.nt):
            if self.status[j] == BASIC or self.lb[j] == self.ub[j]:
                continue
            if self.status[j] == AT_LOWER and self.d[j] < -OPT_TOL:
                return False
            if self.status[j] == AT_UPPER and self.d[j] > OPT_TOL:
                return False
            if self.status[j] == FREE and fabs(self.d[j]) > OPT_TOL:
                return False
        return True

    cdef int primal_route(self):
        cdef int code
        if not self.primal_feasible_now():
            code = self.phase1()
            if code != C_LP_OPTIMAL:
                return code
        return self.primal()

    cdef int solve(self, int algorithm, bint have_start):
        if algorithm == C_ALG_PRIMAL:
            return self.primal_route()
        if algorithm == C_ALG_DUAL:
            if self.make_dual_feasible():
                return self.dual()
            return self.primal_route()
        # auto
        if have_start:
            if self.primal_feasible_now():
                return self.primal()
            if self.dual_feasible_now():
                return self.dual()
            return self.primal_route()
        if self.make_dual_feasible():
            return self.dual()
        return self.primal_route()

    cdef void extract(self, double[::1] out):
        cdef int i
        cdef long long j
        self.compute_xB()
        self.fill_vals()
        for j in range(self.nt):
            out[j] = self.vals[j]
        for i in range(self.m):
            out[self.basic[i]] = self.xB[i]
        for j in range(self.nt):
            if fabs(out[j]) <= ZERO_SNAP:
                out[j] = 0.0


def lp_solve(
    W,
    b,
    c,
    lb,
    ub,
    basic=None,
    status=None,
    int algorithm=0,
    long max_iter=20000,
    int bland_after=1000,
):
    """Drop-in replacement for _pykernel.lp_solve."""
    cdef double[:, ::1] Wv = np.ascontiguousarray(W, dtype=np.float64)
    cdef double[::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef double[::1] cv = np.ascontiguousarray(c, dtype=np.float64)
    work = LpWork(Wv, bv, cv)
    return _lp_solve_on(work, lb, ub, basic, status, algorithm, max_iter, bland_after)


def _lp_solve_on(LpWork work, lb, ub, basic, status, int algorithm, long max_iter, int bland_after):
    cdef double[::1] lbv = np.ascontiguousarray(lb, dtype=np.float64)
    cdef double[::1] ubv = np.ascontiguousarray(ub, dtype=np.float64)
    work.set_bounds(lbv, ubv)
    work.reset_counters()
    work.max_iter = max_iter
    work.bland_after = bland_after
    cdef bint loaded = False
    cdef long long[::1] basv
    cdef signed char[::1] stav
    if basic is not None:
        basv = np.ascontiguousarray(basic, dtype=np.int64)
        stav = np.ascontiguousarray(status, dtype=np.int8)
        loaded = work.load_basis(basv, stav)
    if not loaded:
        work.load_cold()
        if not work.refactor():
            return LP_SINGULAR, None, float("nan"), 0, 0, None, None
        basic = None
    cdef int code = work.solve(algorithm, basic is not None)
    if code == C_LP_OPTIMAL:
        x = np.empty(work.nt)
        cdef_extract(work, x)
        obj = float(np.dot(np.asarray(work.c), x))
        return (
            LP_OPTIMAL,
            x,
            obj,
            work.iters_primal,
            work.iters_dual,
            np.asarray(work.basic).copy(),
            np.asarray(work.status).copy(),
        )
    return code, None, float("nan"), work.iters_primal, work.iters_dual, None, None


cdef void cdef_extract(LpWork work, double[::1] out):
    work.extract(out)


def mip_solve(
    W,
    b,
    c,
    lb,
    ub,
    is_int,
    inc_x=None,
    double inc_val=INFINITY,
    warm_basic=None,
    warm_status=None,
    int warm_alg=0,
    long node_limit=1000000,
    long max_lp_iter=50000,
    bint collect_pool=False,
):
    """Drop-in replacement for _pykernel.mip_solve (same tree order)."""
    cdef double[:, ::1] Wv = np.ascontiguousarray(W, dtype=np.float64)
    cdef double[::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef double[::1] cv = np.ascontiguousarray(c, dtype=np.float64)
    cdef LpWork work = LpWork(Wv, bv, cv)
    cdef int m = Wv.shape[0], n = Wv.shape[1]

    int_idx = np.flatnonzero(np.asarray(is_int, dtype=bool))
    lb0 = np.ascontiguousarray(lb, dtype=np.float64).copy()
    ub0 = np.ascontiguousarray(ub, dtype=np.float64).copy()
    lb0[int_idx] = np.ceil(lb0[int_idx] - INT_TOL)
    ub0[int_idx] = np.floor(ub0[int_idx] + INT_TOL)
    if np.any(lb0[int_idx] > ub0[int_idx]):
        return MIP_INFEASIBLE, None, INFINITY, 0, 0, 0, [], None, None

    best_x = None
    cdef double best_val = INFINITY
    if inc_x is not None:
        best_x = np.asarray(inc_x, dtype=np.float64).copy()
        best_val = inc_val
    pool = []

    res = _lp_solve_on(work, lb0, ub0, warm_basic, warm_status, warm_alg, max_lp_iter, 1000)
    code, x, obj = res[0], res[1], res[2]
    cdef long root_iters = res[3] + res[4]
    cdef long total_iters = root_iters
    cdef long nodes = 1
    root_basic = res[5].copy() if res[5] is not None else None
    root_status = res[6].copy() if res[6] is not None else None

    if code == LP_UNBOUNDED:
        return MIP_UNBOUNDED, None, -INFINITY, nodes, root_iters, total_iters, pool, root_basic, root_status
    if code == LP_SINGULAR:
        raise ArithmeticError("singular basis after refactorization attempts")
    if code == LP_ITER_LIMIT:
        return MIP_LIMIT, best_x, best_val, nodes, root_iters, total_iters, pool, root_basic, root_status

    heap = []
    cdef long seq = 0
    cdef long long frac_j
    if code == LP_OPTIMAL and obj < best_val - PRUNE_EPS:
        frac_j = _most_fractional(x, int_idx)
        if frac_j < 0:
            cand_x, cand_val = _accept(x, np.asarray(cv), int_idx, n)
            if cand_val < best_val:
                best_x, best_val = cand_x, cand_val
                if collect_pool:
                    pool.append((best_x[:n].copy(), best_val))
        else:
            _push_children(heap, seq, obj, x, frac_j, lb0, ub0, res[5], res[6])
            seq += 2

    cdef bint limit_hit = False
    cdef double bound
    while heap:
        item = heapq.heappop(heap)
        bound = item[0]
        if bound >= best_val - PRUNE_EPS:
            continue
        if nodes >= node_limit:
            limit_hit = True
            break
        res = _lp_solve_on(work, item[2], item[3], item[4], item[5], C_ALG_DUAL, max_lp_iter, 1000)
        code, x, obj = res[0], res[1], res[2]
        nodes += 1
        total_iters += res[3] + res[4]
        if code == LP_SINGULAR:
            raise ArithmeticError("singular basis after refactorization attempts")
        if code == LP_ITER_LIMIT:
            limit_hit = True
            break
        if code != LP_OPTIMAL:
            continue
        if obj >= best_val - PRUNE_EPS:
            continue
        frac_j = _most_fractional(x, int_idx)
        if frac_j < 0:
            cand_x, cand_val = _accept(x, np.asarray(cv), int_idx, n)
            if cand_val < best_val:
                best_x, best_val = cand_x, cand_val
                if collect_pool:
                    pool.append((best_x[:n].copy(), best_val))
            continue
        _push_children(heap, seq, obj, x, frac_j, item[2], item[3], res[5], res[6])
        seq += 2

    if limit_hit:
        status = MIP_LIMIT
    elif best_x is None:
        status = MIP_INFEASIBLE
    else:
        status = MIP_OPTIMAL
    return status, best_x, best_val, nodes, root_iters, total_iters, pool, root_basic, root_status


def _most_fractional(x, int_idx):
    cdef double[::1] xv = x
    cdef long long[::1] iv = int_idx.astype(np.int64) if int_idx.dtype != np.int64 else int_idx
    cdef long long best_j = -1
    cdef double best = INT_TOL, f, dist
    cdef Py_ssize_t t
    cdef long long j
    for t in range(iv.shape[0]):
        j = iv[t]
        f = xv[j] - floor(xv[j])
        dist = f if f < 1.0 - f else 1.0 - f
        if dist > best:
            best = dist
            best_j = j
    return best_j


def _accept(x, c, int_idx, int n):
    snapped = np.asarray(x).copy()
    snapped[int_idx] = np.round(snapped[int_idx])
    return snapped, float(np.dot(c[:n], snapped[:n]))


def _push_children(heap, long seq, double bound, x, long long j, lb, ub, basic, status):
    dn_lb, dn_ub = lb.copy(), ub.copy()
    dn_ub[j] = floor(x[j])
    up_lb, up_ub = lb.copy(), ub.copy()
    up_lb[j] = ceil(x[j])
    heapq.heappush(heap, (bound, seq, dn_lb, dn_ub, basic.copy(), status.copy()))
    heapq.heappush(heap, (bound, seq + 1, up_lb, up_ub, basic.copy(), status.copy()))
