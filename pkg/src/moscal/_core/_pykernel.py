"""Pure-Python solver kernel: bounded-variable revised simplex + branch&bound.

This is the fallback selected at import time when the compiled kernel is
unavailable, and the readable reference for it.  Both kernels implement
the same function surface (`lp_solve`, `mip_solve`) over plain arrays;
columns 0..n-1 are structural, columns n..n+m-1 are the implicit slack
identity (row i has slack n+i with bounds encoding the row sense).

Status codes per column: 0 basic, 1 at lower bound, 2 at upper bound,
3 nonbasic free (resting at 0).
"""

from __future__ import annotations

import heapq
import math

import numpy as np

# Tolerances (shared verbatim with the compiled kernel).
FEAS_TOL = 1e-7  # primal feasibility
OPT_TOL = 1e-9  # reduced-cost optimality
PIVOT_TOL = 1e-10  # smallest acceptable pivot element
ZERO_SNAP = 1e-11  # values snapped to zero in reported points
RESIDUAL_TOL = 1e-8  # basic-solution residual forcing refactorization
REFACTOR_EVERY = 50
INT_TOL = 1e-6  # branch&bound integrality
PRUNE_EPS = 1e-9

BASIC, AT_LOWER, AT_UPPER, FREE = 0, 1, 2, 3

LP_OPTIMAL, LP_INFEASIBLE, LP_UNBOUNDED, LP_ITER_LIMIT, LP_SINGULAR = 0, 1, 2, 3, 4
ALG_AUTO, ALG_PRIMAL, ALG_DUAL = 0, 1, 2

MIP_OPTIMAL, MIP_INFEASIBLE, MIP_LIMIT, MIP_UNBOUNDED = 0, 1, 2, 3


class _Workspace:
    """Mutable simplex state for one LP solve."""

    def __init__(self, W, b, c, lb, ub):
        self.W = W
        self.b = b
        self.c = c
        self.lb = lb
        self.ub = ub
        self.m, self.n = W.shape
        self.nt = self.n + self.m
        self.basic = None
        self.status = None
        self.Minv = None
        self.pivots_since_refactor = 0
        self.degenerate_streak = 0
        self.bland = False
        self.bland_after = 1000
        self.iters_primal = 0
        self.iters_dual = 0

    # -- basis algebra ----------------------------------------------------

    def column(self, j):
        if j < self.n:
            return self.W[:, j]
        col = np.zeros(self.m)
        col[j - self.n] = 1.0
        return col

    def refactor(self) -> bool:
        B = np.empty((self.m, self.m))
        for pos, j in enumerate(self.basic):
            B[:, pos] = self.column(j)
        try:
            Minv = np.linalg.inv(B)
        except np.linalg.LinAlgError:
            return False
        if not np.all(np.isfinite(Minv)):
            return False
        self.Minv = Minv
        self.pivots_since_refactor = 0
        return True

    def set_basis(self, basic, status) -> bool:
        self.basic = np.array(basic, dtype=np.int64)
        self.status = np.array(status, dtype=np.int8)
        return self.refactor()

    def nonbasic_values(self):
        """Resting value per column; basic entries are zero placeholders."""
        vals = np.where(
            self.status == AT_LOWER,
            self.lb,
            np.where(self.status == AT_UPPER, self.ub, 0.0),
        )
        vals[self.status == BASIC] = 0.0
        return vals

    def compute_xB(self):
        vals = self.nonbasic_values()
        rhs = self.b - self.W @ vals[: self.n] - vals[self.n :]
        return self.Minv @ rhs

    def residual(self, xB) -> float:
        if not self.m:
            return 0.0
        vals = self.nonbasic_values()
        rhs = self.b - self.W @ vals[: self.n] - vals[self.n :]
        acc = np.zeros(self.m)
        for pos, j in enumerate(self.basic):
            acc += self.column(j) * xB[pos]
        return float(np.max(np.abs(acc - rhs)))

    def reduced_costs(self, cost):
        y = cost[self.basic] @ self.Minv
        d = np.empty(self.nt)
        d[: self.n] = cost[: self.n] - y @ self.W
        d[self.n :] = cost[self.n :] - y
        return d

    def ftran(self, j):
        return self.Minv @ self.column(j)

    def pivot(self, r, q, w, leave_status):
        lv = self.basic[r]
        self.basic[r] = q
        self.status[q] = BASIC
        self.status[lv] = leave_status
        self.Minv[r, :] /= w[r]
        mask = np.arange(self.m) != r
        self.Minv[mask, :] -= np.outer(w[mask], self.Minv[r, :])
        self.pivots_since_refactor += 1
        if self.pivots_since_refactor >= REFACTOR_EVERY:
            if not self.refactor():
                return False
        return True

    def note_step(self, t):
        if t <= ZERO_SNAP:
            self.degenerate_streak += 1
            if self.degenerate_streak > self.bland_after:
                self.bland = True
        else:
            self.degenerate_streak = 0

    # -- pricing ----------------------------------------------------------

    def _entering(self, d):
        fixed = self.lb == self.ub
        down = (self.status == AT_LOWER) & (d < -OPT_TOL) & ~fixed
        up = (self.status == AT_UPPER) & (d > OPT_TOL) & ~fixed
        free = (self.status == FREE) & (np.abs(d) > OPT_TOL)
        eligible = down | up | free
        if not eligible.any():
            return -1
        if self.bland:
            return int(np.flatnonzero(eligible)[0])
        viol = np.where(eligible, np.abs(d), -1.0)
        return int(np.argmax(viol))

    # -- primal simplex (phase 2) ------------------------------------------

    def primal(self, max_iter) -> int:
        while True:
            if self.iters_primal + self.iters_dual >= max_iter:
                return LP_ITER_LIMIT
            xB = self.compute_xB()
            d = self.reduced_costs(self.c)
            q = self._entering(d)
            if q < 0:
                if self.residual(xB) > RESIDUAL_TOL:
                    if not self.refactor():
                        return LP_SINGULAR
                    continue
                return LP_OPTIMAL
            sigma = 1.0
            if self.status[q] == AT_UPPER or (self.status[q] == FREE and d[q] > 0):
                sigma = -1.0
            w = self.ftran(q)
            code, t, r, leave_status, flip = self._primal_ratio(q, sigma, w, xB)
            if code != LP_OPTIMAL:
                return code
            self.iters_primal += 1
            self.note_step(t)
            if flip:
                self.status[q] = AT_UPPER if self.status[q] == AT_LOWER else AT_LOWER
            else:
                if not self.pivot(r, q, w, leave_status):
                    return LP_SINGULAR

    def _primal_ratio(self, q, sigma, w, xB):
        """Classic bounded ratio test. Returns (code, t, row, leave_status, flip)."""
        lbB = self.lb[self.basic]
        ubB = self.ub[self.basic]
        rate = -sigma * w
        t_up = np.where(rate > PIVOT_TOL, (ubB - xB) / np.where(rate > PIVOT_TOL, rate, 1.0), np.inf)
        t_dn = np.where(rate < -PIVOT_TOL, (xB - lbB) / np.where(rate < -PIVOT_TOL, -rate, 1.0), np.inf)
        t_row = np.minimum(t_up, t_dn)
        t_row = np.maximum(t_row, 0.0)  # degenerate: never step backwards
        t_bound = np.inf
        if self.status[q] != FREE and np.isfinite(self.lb[q]) and np.isfinite(self.ub[q]):
            t_bound = self.ub[q] - self.lb[q]
        tmin_row = float(np.min(t_row)) if self.m else np.inf
        if tmin_row >= t_bound:
            if not np.isfinite(t_bound):
                return LP_UNBOUNDED, 0.0, -1, 0, False
            return LP_OPTIMAL, t_bound, -1, 0, True
        cands = np.flatnonzero(t_row == tmin_row)
        r = int(cands[np.argmin(self.basic[cands])])
        leave_status = AT_UPPER if t_up[r] <= t_dn[r] else AT_LOWER
        return LP_OPTIMAL, tmin_row, r, leave_status, False

    # -- composite phase 1 ---------------------------------------------------

    def phase1(self, max_iter) -> int:
        """Drive the sum of bound violations of basic variables to zero.

        Big-M free: infeasible basic variables get piecewise cost -1/+1,
        re-derived every iteration; an infeasible variable blocks the
        ratio test when it reaches the bound it violates.
        """
        while True:
            if self.iters_primal + self.iters_dual >= max_iter:
                return LP_ITER_LIMIT
            xB = self.compute_xB()
            lbB = self.lb[self.basic]
            ubB = self.ub[self.basic]
            below = xB < lbB - FEAS_TOL
            above = xB > ubB + FEAS_TOL
            if not below.any() and not above.any():
                if self.residual(xB) > RESIDUAL_TOL:
                    if not self.refactor():
                        return LP_SINGULAR
                    continue
                return LP_OPTIMAL  # feasible; caller continues with phase 2
            cost = np.zeros(self.nt)
            cost[self.basic[below]] = -1.0
            cost[self.basic[above]] = 1.0
            d = self.reduced_costs(cost)
            q = self._entering(d)
            if q < 0:
                return LP_INFEASIBLE
            sigma = 1.0
            if self.status[q] == AT_UPPER or (self.status[q] == FREE and d[q] > 0):
                sigma = -1.0
            w = self.ftran(q)
            rate = -sigma * w
            t_row = np.full(self.m, np.inf)
            exit_low = np.zeros(self.m, dtype=bool)
            for i in range(self.m):
                if below[i]:
                    if rate[i] > PIVOT_TOL:
                        t_row[i] = (lbB[i] - xB[i]) / rate[i]
                        exit_low[i] = True
                elif above[i]:
                    if rate[i] < -PIVOT_TOL:
                        t_row[i] = (xB[i] - ubB[i]) / -rate[i]
                else:
                    if rate[i] > PIVOT_TOL and np.isfinite(ubB[i]):
                        t_row[i] = (ubB[i] - xB[i]) / rate[i]
                    elif rate[i] < -PIVOT_TOL and np.isfinite(lbB[i]):
                        t_row[i] = (xB[i] - lbB[i]) / -rate[i]
                        exit_low[i] = True
            t_row = np.maximum(t_row, 0.0)
            t_bound = np.inf
            if self.status[q] != FREE and np.isfinite(self.lb[q]) and np.isfinite(self.ub[q]):
                t_bound = self.ub[q] - self.lb[q]
            tmin_row = float(np.min(t_row)) if self.m else np.inf
            self.iters_primal += 1
            if tmin_row >= t_bound:
                if not np.isfinite(t_bound):
                    return LP_SINGULAR  # cannot happen for a bounded phase-1 objective
                self.note_step(t_bound)
                self.status[q] = AT_UPPER if self.status[q] == AT_LOWER else AT_LOWER
                continue
            cands = np.flatnonzero(t_row == tmin_row)
            r = int(cands[np.argmin(self.basic[cands])])
            self.note_step(tmin_row)
            leave_status = AT_LOWER if exit_low[r] else AT_UPPER
            if not self.pivot(r, q, w, leave_status):
                return LP_SINGULAR

    # -- dual simplex ---------------------------------------------------------

    def make_dual_feasible(self) -> bool:
        """Flip nonbasic variables to the bound matching their cost sign."""
        d = self.reduced_costs(self.c)
        for j in range(self.nt):
            s = self.status[j]
            if s == BASIC or self.lb[j] == self.ub[j]:
                continue
            if s == AT_LOWER and d[j] < -OPT_TOL:
                if not np.isfinite(self.ub[j]):
                    return False
                self.status[j] = AT_UPPER
            elif s == AT_UPPER and d[j] > OPT_TOL:
                if not np.isfinite(self.lb[j]):
                    return False
                self.status[j] = AT_LOWER
            elif s == FREE and abs(d[j]) > OPT_TOL:
                return False
        return True

    def dual(self, max_iter) -> int:
        while True:
            if self.iters_primal + self.iters_dual >= max_iter:
                return LP_ITER_LIMIT
            xB = self.compute_xB()
            lbB = self.lb[self.basic]
            ubB = self.ub[self.basic]
            viol_low = lbB - xB
            viol_up = xB - ubB
            viol = np.maximum(viol_low, viol_up)
            worst = float(np.max(viol)) if self.m else 0.0
            if worst <= FEAS_TOL:
                if self.residual(xB) > RESIDUAL_TOL:
                    if not self.refactor():
                        return LP_SINGULAR
                    continue
                return LP_OPTIMAL
            if self.bland:
                bad = np.flatnonzero(viol > FEAS_TOL)
                r = int(bad[np.argmin(self.basic[bad])])
            else:
                cands = np.flatnonzero(viol == worst)
                r = int(cands[np.argmin(self.basic[cands])])
            leave_low = viol_low[r] >= viol_up[r]
            rho = self.Minv[r, :]
            alpha = np.empty(self.nt)
            alpha[: self.n] = rho @ self.W
            alpha[self.n :] = rho
            alpha_t = -alpha if leave_low else alpha
            d = self.reduced_costs(self.c)
            fixed = self.lb == self.ub
            elig_low = (self.status == AT_LOWER) & (alpha_t > PIVOT_TOL) & ~fixed
            elig_up = (self.status == AT_UPPER) & (alpha_t < -PIVOT_TOL) & ~fixed
            elig_free = (self.status == FREE) & (np.abs(alpha_t) > PIVOT_TOL)
            eligible = elig_low | elig_up | elig_free
            if not eligible.any():
                return LP_INFEASIBLE
            ratio = np.full(self.nt, np.inf)
            ratio[eligible] = np.maximum(d[eligible] / alpha_t[eligible], 0.0)
            best = float(np.min(ratio))
            cands = np.flatnonzero(ratio == best)
            q = int(cands[0])
            w = self.ftran(q)
            if abs(w[r]) <= PIVOT_TOL:
                if not self.refactor():
                    return LP_SINGULAR
                continue
            self.iters_dual += 1
            self.note_step(abs(d[q]))
            leave_status = AT_LOWER if leave_low else AT_UPPER
            if not self.pivot(r, q, w, leave_status):
                return LP_SINGULAR

    # -- feasibility checks -----------------------------------------------

    def primal_feasible(self, xB) -> bool:
        lbB = self.lb[self.basic]
        ubB = self.ub[self.basic]
        return bool(np.all(xB >= lbB - FEAS_TOL) and np.all(xB <= ubB + FEAS_TOL))

    def dual_feasible(self) -> bool:
        d = self.reduced_costs(self.c)
        fixed = self.lb == self.ub
        bad_low = (self.status == AT_LOWER) & (d < -OPT_TOL) & ~fixed
        bad_up = (self.status == AT_UPPER) & (d > OPT_TOL) & ~fixed
        bad_free = (self.status == FREE) & (np.abs(d) > OPT_TOL)
        return not bool((bad_low | bad_up | bad_free).any())

    def extract(self):
        xB = self.compute_xB()
        x = self.nonbasic_values()
        x[self.basic] = xB
        x[np.abs(x) <= ZERO_SNAP] = 0.0
        return x


def cold_start(c, lb, ub, m, n):
    """All-slack basis; structural variables rest dual-feasibly when possible."""
    nt = n + m
    basic = np.arange(n, nt, dtype=np.int64)
    status = np.empty(nt, dtype=np.int8)
    status[n:] = BASIC
    for j in range(n):
        lo_fin = np.isfinite(lb[j])
        up_fin = np.isfinite(ub[j])
        if c[j] >= 0.0:
            status[j] = AT_LOWER if lo_fin else (AT_UPPER if up_fin else FREE)
        else:
            status[j] = AT_UPPER if up_fin else (AT_LOWER if lo_fin else FREE)
    return basic, status


def lp_solve(
    W,
    b,
    c,
    lb,
    ub,
    basic=None,
    status=None,
    algorithm: int = ALG_AUTO,
    max_iter: int = 20000,
    bland_after: int = 1000,
):
    """Solve min c.x over the slack-extended system; see module docstring.

    Returns (code, x, objective, iters_primal, iters_dual, basic, status).
    The start basis arrays, when given, are not mutated.
    """
    ws = _Workspace(W, b, c, lb, ub)
    ws.bland_after = bland_after
    loaded = False
    if basic is not None:
        loaded = ws.set_basis(basic, status)
    if not loaded:
        cb, cs = cold_start(c, lb, ub, ws.m, ws.n)
        if not ws.set_basis(cb, cs):
            return LP_SINGULAR, None, math.nan, 0, 0, None, None
        basic = None  # fall through to the cold routing below

    if algorithm == ALG_PRIMAL:
        code = _primal_route(ws, max_iter)
    elif algorithm == ALG_DUAL:
        if ws.make_dual_feasible():
            code = ws.dual(max_iter)
        else:
            code = _primal_route(ws, max_iter)
    else:
        if basic is not None:
            if ws.primal_feasible(ws.compute_xB()):
                code = ws.primal(max_iter)
            elif ws.dual_feasible():
                code = ws.dual(max_iter)
            else:
                code = _primal_route(ws, max_iter)
        else:
            if ws.make_dual_feasible():
                code = ws.dual(max_iter)
            else:
                code = _primal_route(ws, max_iter)

    if code == LP_OPTIMAL:
        x = ws.extract()
        obj = float(c @ x)
        return code, x, obj, ws.iters_primal, ws.iters_dual, ws.basic.copy(), ws.status.copy()
    return code, None, math.nan, ws.iters_primal, ws.iters_dual, None, None


def _primal_route(ws: _Workspace, max_iter: int) -> int:
    if not ws.primal_feasible(ws.compute_xB()):
        code = ws.phase1(max_iter)
        if code != LP_OPTIMAL:
            return code
    return ws.primal(max_iter)


# ---------------------------------------------------------------------------
# Branch and bound


def mip_solve(
    W,
    b,
    c,
    lb,
    ub,
    is_int,
    inc_x=None,
    inc_val=math.inf,
    warm_basic=None,
    warm_status=None,
    warm_alg: int = ALG_AUTO,
    node_limit: int = 1_000_000,
    max_lp_iter: int = 50000,
    collect_pool: bool = False,
):
    """Exact MILP minimization by best-bound branch and bound.

    Branching: most-fractional integer variable, ties lowest index.  The
    warm basis applies only at the root; children restart the dual simplex
    from their parent's final basis (only bounds change between nodes).

    Returns (code, x, value, nodes, root_iters, total_iters,
             pool, root_basic, root_status) where pool is a list of
    (x, value) for every improving incumbent found by the search.
    """
    m, n = W.shape
    int_idx = np.flatnonzero(np.asarray(is_int, dtype=bool))
    lb0 = lb.copy()
    ub0 = ub.copy()
    # integral bound tightening for integer variables
    lb0[int_idx] = np.ceil(lb0[int_idx] - INT_TOL)
    ub0[int_idx] = np.floor(ub0[int_idx] + INT_TOL)
    if np.any(lb0[int_idx] > ub0[int_idx]):
        return MIP_INFEASIBLE, None, math.inf, 0, 0, 0, [], None, None

    best_x = None
    best_val = math.inf
    injected = inc_x is not None
    if injected:
        best_x = np.asarray(inc_x, dtype=np.float64).copy()
        best_val = float(inc_val)
    pool: list[tuple[np.ndarray, float]] = []

    code, x, obj, itp, itd, fb, fs = lp_solve(
        W, b, c, lb0, ub0, warm_basic, warm_status, warm_alg, max_lp_iter
    )
    root_iters = itp + itd
    total_iters = root_iters
    nodes = 1
    root_basic = fb.copy() if fb is not None else None
    root_status = fs.copy() if fs is not None else None

    if code == LP_UNBOUNDED:
        return MIP_UNBOUNDED, None, -math.inf, nodes, root_iters, total_iters, pool, root_basic, root_status
    if code == LP_ITER_LIMIT or code == LP_SINGULAR:
        st = MIP_LIMIT if code == LP_ITER_LIMIT else MIP_INFEASIBLE
        if code == LP_SINGULAR:
            raise ArithmeticError("singular basis after refactorization attempts")
        return st, best_x, best_val, nodes, root_iters, total_iters, pool, root_basic, root_status

    heap: list = []
    seq = 0
    if code == LP_OPTIMAL and obj < best_val - PRUNE_EPS:
        frac_j = _most_fractional(x, int_idx)
        if frac_j < 0:
            cand_x, cand_val = _accept(x, c, int_idx, n)
            if cand_val < best_val:
                best_x, best_val = cand_x, cand_val
                if collect_pool:
                    pool.append((best_x[:n].copy(), best_val))
        else:
            _push_children(heap, seq, obj, x, frac_j, lb0, ub0, fb, fs)
            seq += 2

    limit_hit = False
    while heap:
        bound, _, nlb, nub, pb, ps = _pop(heap)
        if bound >= best_val - PRUNE_EPS:
            continue
        if nodes >= node_limit:
            limit_hit = True
            break
        code, x, obj, itp, itd, fb, fs = lp_solve(
            W, b, c, nlb, nub, pb, ps, ALG_DUAL, max_lp_iter
        )
        nodes += 1
        total_iters += itp + itd
        if code == LP_SINGULAR:
            raise ArithmeticError("singular basis after refactorization attempts")
        if code == LP_ITER_LIMIT:
            limit_hit = True
            break
        if code != LP_OPTIMAL:
            continue  # infeasible (unbounded impossible under finite incumbent search)
        if obj >= best_val - PRUNE_EPS:
            continue
        frac_j = _most_fractional(x, int_idx)
        if frac_j < 0:
            cand_x, cand_val = _accept(x, c, int_idx, n)
            if cand_val < best_val:
                best_x, best_val = cand_x, cand_val
                if collect_pool:
                    pool.append((best_x[:n].copy(), best_val))
            continue
        _push_children(heap, seq, obj, x, frac_j, nlb, nub, fb, fs)
        seq += 2

    if limit_hit:
        status = MIP_LIMIT
    elif best_x is None:
        status = MIP_INFEASIBLE
    else:
        status = MIP_OPTIMAL
    return status, best_x, best_val, nodes, root_iters, total_iters, pool, root_basic, root_status


def _most_fractional(x, int_idx) -> int:
    if int_idx.size == 0:
        return -1
    vals = x[int_idx]
    frac = vals - np.floor(vals)
    dist = np.minimum(frac, 1.0 - frac)
    worst = int(np.argmax(dist))
    if dist[worst] <= INT_TOL:
        return -1
    return int(int_idx[worst])


def _accept(x, c, int_idx, n):
    """Snap integer variables and re-evaluate; exact for integer data."""
    snapped = x.copy()
    snapped[int_idx] = np.round(snapped[int_idx])
    return snapped, float(c[:n] @ snapped[:n])


def _push_children(heap, seq, bound, x, j, lb, ub, basic, status):
    dn_lb, dn_ub = lb.copy(), ub.copy()
    dn_ub[j] = np.floor(x[j])
    up_lb, up_ub = lb.copy(), ub.copy()
    up_lb[j] = np.ceil(x[j])
    heapq.heappush(heap, (bound, seq, dn_lb, dn_ub, basic.copy(), status.copy()))
    heapq.heappush(heap, (bound, seq + 1, up_lb, up_ub, basic.copy(), status.copy()))


def _pop(heap):
    return heapq.heappop(heap)
