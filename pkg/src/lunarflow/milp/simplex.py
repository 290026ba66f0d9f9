"""Bounded-variable revised primal simplex.

Solves ``min c @ x`` subject to ``A_eq x = b_eq``, ``A_ub x <= b_ub`` and
``lb <= x <= ub`` with finite ``lb``. Inequality rows get slack columns, rows
whose starting residual has the wrong sign get artificial columns, and a
phase-one objective drives the artificials out before the real costs are
priced. The basis inverse is kept explicitly and refreshed by product-form
updates between periodic reinversions.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

FEAS_TOL = 1e-6          # relative residual accepted on the unscaled problem
PRIMAL_TOL = 1e-9        # bound violation tolerated inside the scaled solve
DUAL_TOL = 1e-9          # reduced-cost optimality, objective scaled to max|c| = 1
PIVOT_TOL = 1e-9
REFACTOR_EVERY = 50


@dataclass
class LPResult:
    status: str
    x: np.ndarray | None = None
    objective: float = float("nan")
    y_eq: np.ndarray | None = None
    y_ub: np.ndarray | None = None
    reduced_costs: np.ndarray | None = None
    dual_objective: float = float("nan")
    iterations: int = 0
    message: str = ""
    pivot: dict | None = field(default=None)

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def _pow2(v: np.ndarray) -> np.ndarray:
    return np.exp2(np.round(np.log2(v)))


def scale_factors(A_eq: np.ndarray, A_ub: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Scale factors for the standard-form matrix ``[[A_eq, 0], [A_ub, I]]``."""
    n = A_eq.shape[1] if A_eq.size or A_eq.ndim == 2 else A_ub.shape[1]
    m_eq, m_ub = A_eq.shape[0], A_ub.shape[0]
    A = np.zeros((m_eq + m_ub, n + m_ub))
    A[:m_eq, :n] = A_eq
    A[m_eq:, :n] = A_ub
    A[m_eq:, n:] = np.eye(m_ub)
    if not A.shape[0]:
        return np.ones(0), np.ones(A.shape[1])
    return _equilibrate(A)


def _equilibrate(A: np.ndarray, passes: int = 6) -> tuple[np.ndarray, np.ndarray]:
    """Geometric row/column scale factors, rounded to powers of two."""
    m, n = A.shape
    r = np.ones(m)
    s = np.ones(n)
    absA = np.abs(A)
    nz = absA > 0
    for _ in range(passes):
        S = absA * r[:, None] * s[None, :]
        big = np.where(nz, S, 0.0).max(axis=1, initial=0.0)
        small = np.where(nz, S, np.inf).min(axis=1, initial=np.inf)
        ok = big > 0
        r[ok] /= np.sqrt(big[ok] * small[ok])
        S = absA * r[:, None] * s[None, :]
        big = np.where(nz, S, 0.0).max(axis=0, initial=0.0)
        small = np.where(nz, S, np.inf).min(axis=0, initial=np.inf)
        ok = big > 0
        s[ok] /= np.sqrt(big[ok] * small[ok])
    return _pow2(r), _pow2(s)


class _Tableau:
    """Working state of one simplex run on scaled standard form ``A x = b``."""

    def __init__(self, A, b, lb, ub, basis, x, at_upper, diagonal=False):
        self.A = A
        self.b = b
        self.lb = lb
        self.ub = ub
        self.basis = np.array(basis, dtype=int)
        self.x = x
        self.at_upper = at_upper
        self.is_basic = np.zeros(A.shape[1], dtype=bool)
        self.is_basic[self.basis] = True
        self.iterations = 0
        self.Binv = None
        if diagonal:
            self.Binv = np.diag(1.0 / A[np.arange(len(self.basis)), self.basis])
        else:
            self.reinvert()

    def reinvert(self) -> None:
        B = self.A[:, self.basis]
        self.Binv = np.linalg.inv(B)
        nonbasic = ~self.is_basic
        rhs = self.b - self.A[:, nonbasic] @ self.x[nonbasic]
        self.x[self.basis] = self.Binv @ rhs

    def run(self, c: np.ndarray, max_iter: int) -> tuple[str, dict | None]:
        m, n = self.A.shape
        stall_limit = 10 * (m + n)
        stalled = 0
        bland = False
        lb, ub, x = self.lb, self.ub, self.x
        movable = ub > lb
        obj = float(c @ x)
        since_refactor = 0
        while True:
            if self.iterations >= max_iter:
                return "iteration_limit", None
            if since_refactor >= REFACTOR_EVERY:
                try:
                    self.reinvert()
                except np.linalg.LinAlgError:
                    return "numerical_error", {"iteration": self.iterations, "reason": "singular basis"}
                since_refactor = 0
            y = c[self.basis] @ self.Binv
            d = c - y @ self.A
            nonbasic = ~self.is_basic & movable
            up = nonbasic & ~self.at_upper & (d < -DUAL_TOL)
            down = nonbasic & self.at_upper & (d > DUAL_TOL)
            eligible = up | down
            if not eligible.any():
                return "optimal", None
            if bland:
                q = int(np.flatnonzero(eligible)[0])
            else:
                score = np.where(eligible, np.abs(d), -1.0)
                q = int(np.argmax(score))
            sigma = 1.0 if up[q] else -1.0
            alpha = self.Binv @ self.A[:, q]
            step = sigma * alpha

            xb = x[self.basis]
            lbb = lb[self.basis]
            ubb = ub[self.basis]
            dec = step > PIVOT_TOL
            inc = (step < -PIVOT_TOL) & np.isfinite(ubb)
            limit = np.full(m, np.inf)
            limit[dec] = (xb[dec] - lbb[dec]) / step[dec]
            limit[inc] = (ubb[inc] - xb[inc]) / -step[inc]
            limit = np.maximum(limit, 0.0)
            theta_b = limit.min() if m else np.inf
            flip = ub[q] - lb[q]
            if not np.isfinite(theta_b) and not np.isfinite(flip):
                return "unbounded", {"iteration": self.iterations, "entering": q}

            if flip <= theta_b:
                theta = flip
                x[self.basis] = xb - theta * step
                self.at_upper[q] = not self.at_upper[q]
                x[q] = ub[q] if self.at_upper[q] else lb[q]
            else:
                theta = theta_b
                ties = np.flatnonzero(limit <= theta_b + PRIMAL_TOL * 1e-3)
                if bland:
                    r = int(ties[np.argmin(self.basis[ties])])
                else:
                    r = int(ties[np.argmax(np.abs(alpha[ties]))])
                piv = alpha[r]
                if abs(piv) < PIVOT_TOL:
                    return "numerical_error", {
                        "iteration": self.iterations, "entering": q,
                        "leaving": int(self.basis[r]), "pivot": float(piv),
                    }
                leaving = int(self.basis[r])
                x[self.basis] = xb - theta * step
                x[q] = x[q] + sigma * theta
                hit_upper = step[r] < 0
                x[leaving] = ub[leaving] if hit_upper else lb[leaving]
                self.at_upper[leaving] = hit_upper
                self.at_upper[q] = False
                self.is_basic[leaving] = False
                self.is_basic[q] = True
                self.basis[r] = q
                prow = self.Binv[r] / piv
                self.Binv -= np.outer(alpha, prow)
                self.Binv[r] = prow
                since_refactor += 1
            self.iterations += 1

            new_obj = float(c @ x)
            if new_obj < obj - 1e-12 * max(1.0, abs(obj)):
                stalled = 0
                bland = False
            else:
                stalled += 1
                if stalled > stall_limit:
                    bland = True
            obj = new_obj


def linprog_bounded(
    c,
    A_eq=None,
    b_eq=None,
    A_ub=None,
    b_ub=None,
    lb=None,
    ub=None,
    max_iter: int | None = None,
    scaling: tuple | None = None,
) -> LPResult:
    """Minimize ``c @ x`` over the box-bounded polyhedron.

    Returns an :class:`LPResult`; ``status`` is one of ``optimal``,
    ``infeasible``, ``unbounded``, ``iteration_limit`` or
    ``numerical_error`` (the last carries the offending pivot).
    ``scaling`` may pass precomputed ``(row, column)`` factors from
    :func:`scale_factors` when the same matrix is solved repeatedly.
    """
    c = np.asarray(c, dtype=float)
    n = c.size
    A_eq = np.zeros((0, n)) if A_eq is None else np.asarray(A_eq, dtype=float).reshape(-1, n)
    A_ub = np.zeros((0, n)) if A_ub is None else np.asarray(A_ub, dtype=float).reshape(-1, n)
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float).ravel()
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float).ravel()
    lb = np.zeros(n) if lb is None else np.asarray(lb, dtype=float).copy()
    ub = np.full(n, np.inf) if ub is None else np.asarray(ub, dtype=float).copy()
    if not np.all(np.isfinite(lb)):
        raise ValueError("lower bounds must be finite")
    if np.any(lb > ub):
        return LPResult("infeasible", message="lower bound exceeds upper bound")
    m_eq, m_ub = A_eq.shape[0], A_ub.shape[0]
    m = m_eq + m_ub

    # standard form over [x, slacks]
    A = np.zeros((m, n + m_ub))
    A[:m_eq, :n] = A_eq
    A[m_eq:, :n] = A_ub
    A[m_eq:, n:] = np.eye(m_ub)
    b = np.concatenate([b_eq, b_ub])
    lo = np.concatenate([lb, np.zeros(m_ub)])
    hi = np.concatenate([ub, np.full(m_ub, np.inf)])
    cost = np.concatenate([c, np.zeros(m_ub)])

    rs, cs = scaling if scaling is not None else scale_factors(A_eq, A_ub)
    As = A * rs[:, None] * cs[None, :]
    bs = b * rs
    los = lo / cs
    his = hi / cs
    cmax = np.max(np.abs(cost)) if cost.size else 0.0
    cscale = _pow2(np.array([cmax]))[0] if cmax > 0 else 1.0
    costs = cost * cs / cscale

    N = n + m_ub
    x = los.copy()
    resid = bs - As @ x
    # starting basis: one slack or artificial per row, so B is a signed diagonal
    basis = np.empty(m, dtype=int)
    art_rows = []
    for i in range(m):
        if i >= m_eq and resid[i] >= 0:
            basis[i] = n + (i - m_eq)
            x[basis[i]] = resid[i] / As[i, basis[i]]
        else:
            art_rows.append(i)
    k = len(art_rows)
    Afull = np.zeros((m, N + k))
    Afull[:, :N] = As
    lo_full = np.concatenate([los, np.zeros(k)])
    hi_full = np.concatenate([his, np.full(k, np.inf)])
    x_full = np.concatenate([x, np.zeros(k)])
    for j, i in enumerate(art_rows):
        Afull[i, N + j] = 1.0 if resid[i] >= 0 else -1.0
        x_full[N + j] = abs(resid[i])
        basis[i] = N + j

    max_iter = max_iter or 50 * (m + N + k) + 1000
    tab = _Tableau(Afull, bs, lo_full, hi_full, basis, x_full, np.zeros(N + k, dtype=bool), diagonal=True)

    if k:
        c1 = np.zeros(N + k)
        c1[N:] = 1.0
        status, info = tab.run(c1, max_iter)
        if status != "optimal":
            return LPResult(status, iterations=tab.iterations, pivot=info,
                            message=f"phase one stopped: {status}")
        infeas = float(tab.x[N:].sum())
        if infeas > PRIMAL_TOL * max(1.0, float(np.abs(bs).max(initial=0.0))):
            return LPResult("infeasible", iterations=tab.iterations,
                            message=f"phase one residual {infeas:.3e}")
        tab.ub[N:] = 0.0
        tab.x[N:] = np.where(tab.is_basic[N:], tab.x[N:], 0.0)
        tab.at_upper[N:] = False

    c2 = np.concatenate([costs, np.zeros(k)])
    status, info = tab.run(c2, max_iter)
    if status != "optimal":
        return LPResult(status, iterations=tab.iterations, pivot=info, message=f"phase two stopped: {status}")

    try:
        tab.reinvert()
    except np.linalg.LinAlgError:
        return LPResult("numerical_error", iterations=tab.iterations,
                        pivot={"iteration": tab.iterations, "reason": "singular final basis"})
    x_orig = tab.x[:n] * cs[:n]
    x_orig = np.minimum(np.maximum(x_orig, lb), ub)

    y_s = c2[tab.basis] @ tab.Binv
    y = y_s * rs * cscale
    d = (c2[:N] - y_s @ Afull[:, :N]) / cs * cscale
    dual_obj = float(y @ b)
    for j in range(N):
        if d[j] > 0 and np.isfinite(lo[j]):
            dual_obj += d[j] * lo[j]
        elif d[j] < 0 and np.isfinite(hi[j]):
            dual_obj += d[j] * hi[j]

    scale_b = 1.0 + max(float(np.abs(b_eq).max(initial=0.0)), float(np.abs(b_ub).max(initial=0.0)))
    r_eq = float(np.abs(A_eq @ x_orig - b_eq).max(initial=0.0))
    r_ub = float(np.maximum(A_ub @ x_orig - b_ub, 0.0).max(initial=0.0))
    if max(r_eq, r_ub) > FEAS_TOL * scale_b:
        return LPResult("numerical_error", x=x_orig, iterations=tab.iterations,
                        message=f"residual {max(r_eq, r_ub):.3e} exceeds tolerance",
                        pivot={"iteration": tab.iterations, "reason": "residual check"})
    return LPResult(
        "optimal",
        x=x_orig,
        objective=float(c @ x_orig),
        y_eq=y[:m_eq],
        y_ub=y[m_eq:],
        reduced_costs=d[:n],
        dual_objective=dual_obj,
        iterations=tab.iterations,
    )
