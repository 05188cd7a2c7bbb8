"""Dantzig selector solving, in data space and in reduced (C, v, lambda) form.

The reduced problem is: minimize ||u||_1 subject to ||C u - v||_inf <= lambda.
Fitting to data (X, y) uses C = X'X/n and v = X'y/n.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import lp
from .linalg import as_matrix, as_vector

SYMMETRY_TOL = 1e-10
ACTIVE_TOL = 1e-7


def check_design(x, y):
    """Validate an (X, y) regression pair and return float arrays."""
    x = as_matrix(x, "x")
    y = as_vector(y, "y")
    n, p = x.shape
    if n < 1 or p < 1:
        raise ValueError("design needs at least one row and one column")
    if y.size != n:
        raise ValueError(f"y has length {y.size}, expected {n}")
    return x, y


@dataclass
class DantzigProblem:
    """Reduced problem data: symmetric PSD-like C, target v, bound lambda."""

    c: np.ndarray
    v: np.ndarray
    lam: float

    def __post_init__(self):
        self.c = as_matrix(self.c, "c")
        self.v = as_vector(self.v, "v")
        p = self.c.shape[0]
        if self.c.shape != (p, p):
            raise ValueError("c must be square")
        if self.v.size != p:
            raise ValueError("v length must match c")
        scale = max(1.0, np.abs(self.c).max())
        if np.abs(self.c - self.c.T).max() > SYMMETRY_TOL * scale:
            raise ValueError("c must be symmetric")
        if not np.isfinite(self.lam) or self.lam < 0:
            raise ValueError("lambda must be a nonnegative real")
        self.lam = float(self.lam)

    @property
    def p(self) -> int:
        return self.c.shape[0]


@dataclass
class DantzigEstimate:
    beta_hat: Optional[np.ndarray]
    l1_norm: Optional[float]
    active_set: Optional[np.ndarray]
    status: str  # "optimal" | "infeasible"


def _split_lp(prob: DantzigProblem) -> lp.LinearProgram:
    # beta = beta+ - beta-, both halves nonnegative, objective sum(beta+ + beta-).
    c = prob.c
    a_ub = np.vstack([np.hstack([c, -c]), np.hstack([-c, c])])
    b_ub = np.concatenate([prob.v + prob.lam, prob.lam - prob.v])
    return lp.LinearProgram(c=np.ones(2 * prob.p), a_ub=a_ub, b_ub=b_ub)


def _estimate_from_point(prob: DantzigProblem, beta: np.ndarray,
                         l1_norm: float) -> DantzigEstimate:
    residual = np.abs(prob.c @ beta - prob.v)
    tol = ACTIVE_TOL * max(1.0, prob.lam)
    active = np.flatnonzero(np.abs(residual - prob.lam) <= tol)
    return DantzigEstimate(beta_hat=beta, l1_norm=float(l1_norm),
                           active_set=active, status="optimal")


def solve_dantzig_problem(prob: DantzigProblem,
                          config: lp.SolverConfig = lp.DEFAULT_CONFIG) -> DantzigEstimate:
    """Minimum-l1 point of {u : ||Cu - v||_inf <= lam}.

    Returns a basic optimum (deterministic under the fixed pivot rules);
    status is "infeasible" when v is farther than lam from range(C).
    """
    sol = lp.solve(_split_lp(prob), config)
    if sol.status == lp.INFEASIBLE:
        return DantzigEstimate(beta_hat=None, l1_norm=None, active_set=None,
                               status="infeasible")
    if sol.status != lp.OPTIMAL:  # the objective is bounded below by zero
        raise RuntimeError(f"unexpected LP status {sol.status}")
    p = prob.p
    beta = sol.x[:p] - sol.x[p:]
    # A basis never holds both halves of a split pair, so the LP objective
    # and the l1 norm of the recombined point agree.
    return _estimate_from_point(prob, beta, sol.objective_value)


def problem_from_design(x, y, lam: float) -> DantzigProblem:
    x, y = check_design(x, y)
    n = x.shape[0]
    c = x.T @ x / n
    c = 0.5 * (c + c.T)
    v = x.T @ y / n
    return DantzigProblem(c=c, v=v, lam=lam)


def dantzig_select(x, y, lam: float,
                   config: lp.SolverConfig = lp.DEFAULT_CONFIG) -> DantzigEstimate:
    """Dantzig selector fit: min ||b||_1 s.t. ||X'(y - Xb)||_inf / n <= lam."""
    est = solve_dantzig_problem(problem_from_design(x, y, lam), config)
    if est.status != "optimal":
        # v = X'y/n always lies in range(X'X/n), so this cannot trigger.
        raise RuntimeError("data-space problem reported infeasible")
    return est


def solution_set_diameter(prob: DantzigProblem,
                          config: lp.SolverConfig = lp.DEFAULT_CONFIG):
    """Per-coordinate spread of the optimal solution set.

    Returns (diameter_inf, ranges) where ranges[j] = (min, max) of u_j over
    the optimal face.  A diameter at roundoff scale (<= 1e-7) certifies an
    empirically unique solution; > 1e-6 certifies multiplicity.
    """
    split = _split_lp(prob)
    base = lp.solve(split, config)
    if base.status != lp.OPTIMAL:
        raise ValueError(f"problem must be solvable, got LP status {base.status}")
    p = prob.p
    ranges = []
    for j in range(p):
        w = np.zeros(2 * p)
        w[j] = 1.0
        w[p + j] = -1.0
        ranges.append(lp.linear_range_on_optimal_face(split, w, config, base=base))
    diameter = max(hi - lo for lo, hi in ranges)
    return float(diameter), ranges


def _clip_halfplane(poly, a, b, tol):
    """Sutherland-Hodgman step: keep {x : a.x <= b}."""
    out = []
    m = len(poly)
    for k in range(m):
        p_cur = poly[k]
        p_nxt = poly[(k + 1) % m]
        d_cur = a @ p_cur - b
        d_nxt = a @ p_nxt - b
        cur_in = d_cur <= tol
        nxt_in = d_nxt <= tol
        if cur_in:
            out.append(p_cur)
            if not nxt_in:
                t = d_cur / (d_cur - d_nxt)
                out.append(p_cur + t * (p_nxt - p_cur))
        elif nxt_in:
            t = d_cur / (d_cur - d_nxt)
            out.append(p_cur + t * (p_nxt - p_cur))
    return out


def _dedupe_polygon(points, tol):
    if not points:
        return []
    kept = []
    for pt in points:
        if not kept or np.abs(pt - kept[-1]).max() > tol:
            kept.append(pt)
    while len(kept) > 1 and np.abs(kept[0] - kept[-1]).max() <= tol:
        kept.pop()
    # Drop collinear interior vertices so degenerate sets come out minimal.
    changed = True
    while changed and len(kept) > 2:
        changed = False
        for i in range(len(kept)):
            a = kept[i - 1]
            b = kept[i]
            c = kept[(i + 1) % len(kept)]
            cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
            span = max(np.abs(c - a).max(), 1.0)
            if abs(cross) <= tol * span:
                kept.pop(i)
                changed = True
                break
    return kept


def feasible_polygon_2d(prob: DantzigProblem, box_halfwidth: float) -> np.ndarray:
    """Vertices (counterclockwise) of the feasible set clipped to a box.

    Intended for emitting plot data; degenerate intersections come back with
    fewer than three vertices, an empty set as a (0, 2) array.
    """
    if prob.p != 2:
        raise ValueError("polygon emission requires p = 2")
    w = float(box_halfwidth)
    if not np.isfinite(w) or w <= 0:
        raise ValueError("box halfwidth must be positive")
    scale = max(1.0, np.abs(prob.v).max() + prob.lam, w)
    tol = 1e-9 * scale
    poly = [np.array(pt, dtype=float) for pt in
            [(-w, -w), (w, -w), (w, w), (-w, w)]]
    halfplanes = []
    for i in range(2):
        row = prob.c[i]
        halfplanes.append((row, prob.v[i] + prob.lam))
        halfplanes.append((-row, prob.lam - prob.v[i]))
    for a, b in halfplanes:
        if np.abs(a).max() == 0.0:
            if b < -tol:
                return np.zeros((0, 2))
            continue
        poly = _clip_halfplane(poly, a, b, tol)
        if not poly:
            return np.zeros((0, 2))
    poly = _dedupe_polygon(poly, tol)
    if not poly:
        return np.zeros((0, 2))
    return np.vstack(poly)
