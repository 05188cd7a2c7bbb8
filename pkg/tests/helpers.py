"""Independent brute-force oracles and instance generators for the tests.

These deliberately avoid the library's own LP machinery: candidate-vertex
enumeration and scalar minimization only, so they can confirm solver
results without sharing a code path with them.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar


@lru_cache(maxsize=None)
def _subsets(total: int, k: int) -> np.ndarray:
    return np.array(list(itertools.combinations(range(total), k)), dtype=int)


def l1_min_oracle(c_mat, v, lam, tol=1e-8):
    """min ||b||_1 over {b : ||C b - v||_inf <= lam} by enumerating the
    vertices of the constraint/coordinate-plane arrangement.

    Returns (objective, point) or None when no candidate vertex is
    feasible (the instances used in tests are always feasible).
    """
    c_mat = np.asarray(c_mat, dtype=float)
    v = np.asarray(v, dtype=float).ravel()
    p = v.size
    pool_rows = np.vstack([c_mat, c_mat, np.eye(p)])
    pool_offs = np.concatenate([v + lam, v - lam, np.zeros(p)])
    idx = _subsets(3 * p, p)
    mats = pool_rows[idx]
    offs = pool_offs[idx]
    norms = np.maximum(np.linalg.norm(mats, axis=2), 1e-30)
    dets = np.abs(np.linalg.det(mats))
    ok = dets > 1e-10 * norms.prod(axis=1)
    if not ok.any():
        return None
    pts = np.linalg.solve(mats[ok], offs[ok][..., None])[..., 0]
    resid = np.abs(pts @ c_mat.T - v)
    feas = (resid <= lam + tol).all(axis=1)
    if not feas.any():
        return None
    l1 = np.abs(pts[feas]).sum(axis=1)
    k = int(np.argmin(l1))
    return float(l1[k]), pts[feas][k]


def lp_vertex_oracle(prog, tol=1e-8):
    """Brute-force optimum of a small bounded-feasible LinearProgram.

    Enumerates candidate vertices (equality rows always active, the rest
    chosen among inequality rows and lower-bound planes) and returns
    (objective, point), or None when no candidate is feasible.
    """
    n = prog.n_vars
    eq_rows = [(prog.a_eq[i], prog.b_eq[i]) for i in range(prog.a_eq.shape[0])]
    pool = [(prog.a_ub[i], prog.b_ub[i]) for i in range(prog.a_ub.shape[0])]
    for j, lb in enumerate(prog.lower_bounds):
        if lb is not None:
            e = np.zeros(n)
            e[j] = 1.0
            pool.append((e, lb))
    need = n - len(eq_rows)
    if need < 0:
        return None
    best = None
    for combo in itertools.combinations(range(len(pool)), need):
        rows = [r for r, _ in eq_rows] + [pool[i][0] for i in combo]
        rhs = [b for _, b in eq_rows] + [pool[i][1] for i in combo]
        mat = np.vstack(rows) if rows else np.zeros((0, n))
        if mat.shape[0] != n:
            continue
        if abs(np.linalg.det(mat)) < 1e-10 * max(
                np.prod(np.maximum(np.linalg.norm(mat, axis=1), 1e-30)), 1e-30):
            continue
        x = np.linalg.solve(mat, np.array(rhs))
        if prog.a_ub.shape[0] and (prog.a_ub @ x - prog.b_ub > tol).any():
            continue
        if prog.a_eq.shape[0] and np.abs(prog.a_eq @ x - prog.b_eq).max() > tol:
            continue
        if any(lb is not None and x[j] < lb - tol
               for j, lb in enumerate(prog.lower_bounds)):
            continue
        obj = float(prog.c @ x)
        if best is None or obj < best[0]:
            best = (obj, x)
    return best


def lasso_1d_oracle(x, y, lam, span=25.0):
    """Grid search plus bounded refinement for a single-column lasso."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    n = y.size
    col = x[:, 0]

    def objective(b):
        r = y - col * b
        return r @ r / (2.0 * n) + lam * abs(b)

    grid = np.linspace(-span, span, 4001)
    vals = np.array([objective(b) for b in grid])
    k = int(np.argmin(vals))
    lo = grid[max(0, k - 1)]
    hi = grid[min(grid.size - 1, k + 1)]
    res = minimize_scalar(objective, bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-13})
    # the kink at zero is easy for the grid to land on exactly
    cands = [(objective(0.0), 0.0), (res.fun, float(res.x))]
    return min(cands)[1]


def random_design(rng, p=None, n=None, sparse=0.6, noise=0.5):
    """A small random regression instance with a sparse-ish truth."""
    if p is None:
        p = int(rng.integers(1, 6))
    if n is None:
        n = int(rng.integers(p + 2, 21))
    x = rng.standard_normal((n, p))
    beta = rng.standard_normal(p) * (rng.random(p) < sparse)
    y = x @ beta + noise * rng.standard_normal(n)
    return x, y


def lambda_grid(x, y, multipliers=(0.0, 0.1, 0.3, 0.7, 1.05)):
    """Five penalty levels spread from exact interpolation past the
    all-zero threshold."""
    n = x.shape[0]
    lam_max = np.abs(x.T @ y).max() / n
    return [m * lam_max for m in multipliers]


def feasible_suboptimal_point(rng, c_mat, v, lam, beta_opt, t0,
                              norm=1e-2, l1_gap_min=1e-5):
    """A feasible point near beta_opt with strictly larger l1 norm.

    Perturbs toward the interior (the zero-residual point) plus noise,
    then retracts onto the feasible set along the segment.  Returns None
    when the geometry pins every nearby point to the optimum.
    """
    p = v.size
    try:
        interior = np.linalg.solve(c_mat, v)
    except np.linalg.LinAlgError:
        return None
    pull = interior - beta_opt
    if np.linalg.norm(pull) < 1e-9:
        pull = np.zeros(p)
    for _ in range(50):
        direction = pull + 0.5 * np.linalg.norm(pull) * rng.standard_normal(p) \
            if np.linalg.norm(pull) > 0 else rng.standard_normal(p)
        scale = np.linalg.norm(direction)
        if scale < 1e-12:
            continue
        step = norm * direction / scale
        # largest t in [0, 1] keeping beta_opt + t*step feasible
        r0 = c_mat @ beta_opt - v
        d = c_mat @ step
        t_max = 1.0
        for j in range(p):
            if d[j] > 1e-15:
                t_max = min(t_max, (lam - r0[j]) / d[j])
            elif d[j] < -1e-15:
                t_max = min(t_max, (-lam - r0[j]) / d[j])
        if t_max <= 1e-6:
            continue
        cand = beta_opt + t_max * step
        if np.abs(cand).sum() - t0 >= l1_gap_min:
            return cand
    return None
