"""Parallelism analysis for symmetric Gram matrices.

A symmetric C is parallel to the l1 ball when some subset pair (A, B)
admits w with ||C_B w||_inf <= 1, C_{A,B} w a +-1 sign vector, and
C_{B,A} rank-deficient.  Non-parallel C guarantees a unique minimum-l1
solution for every right-hand side; the related full-B variant is the
necessary condition for lasso multiplicity.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Optional

import numpy as np

from . import lp
from .dantzig import check_design, problem_from_design
from .linalg import as_matrix, as_vector, check_index_set, null_space, rank

DEFAULT_P_CAP = 10
DEFAULT_WITNESS_CAP = 16


@dataclass
class ParallelismWitness:
    a: np.ndarray       # row subset whose correlations pin to +-1
    b: np.ndarray       # column subset carrying the dual weights
    w: np.ndarray       # the weight vector, length |b|
    signs: np.ndarray   # attained sign vector, length |a|


@dataclass
class ParallelismReport:
    parallel: bool
    witnesses: list
    pairs_examined: int
    p_cap_respected: bool


@dataclass
class MultiplicityInstance:
    """A claimed certificate that a concrete fit has multiple solutions."""

    x: np.ndarray
    y: np.ndarray
    lam: float
    beta0: np.ndarray
    mu0: np.ndarray
    a: np.ndarray
    b: np.ndarray


@dataclass
class MultiplicityCheck:
    holds: bool
    conditions: tuple  # four booleans, one per certificate condition


def _check_symmetric(c) -> np.ndarray:
    c = as_matrix(c, "c")
    p = c.shape[0]
    if c.shape != (p, p):
        raise ValueError("c must be square")
    scale = max(1.0, np.abs(c).max())
    if np.abs(c - c.T).max() > 1e-10 * scale:
        raise ValueError("c must be symmetric")
    return c


def _sign_patterns(k: int):
    """All sign vectors of length k with the leading entry fixed to +1
    (each witness is valid with both (w, s) and (-w, -s))."""
    if k == 0:
        return
    for bits in range(2 ** (k - 1)):
        s = np.ones(k)
        for i in range(k - 1):
            if bits >> i & 1:
                s[k - 1 - i] = -1.0
        yield s


def _nonempty_subsets(p: int):
    out = []
    for size in range(1, p + 1):
        out.extend(np.array(c, dtype=np.intp) for c in combinations(range(p), size))
    return out


def _consistent_solutions(mat: np.ndarray, target: np.ndarray, tol: float):
    """Particular solution of mat w = target plus a kernel basis, or None
    when the system is inconsistent at tolerance ``tol`` (inf-norm)."""
    w0, *_ = np.linalg.lstsq(mat, target, rcond=None)
    if np.abs(mat @ w0 - target).max() > tol:
        return None
    return w0, null_space(mat)


def _bounded_weight(cb: np.ndarray, w0: np.ndarray, kernel: np.ndarray,
                    config: lp.SolverConfig):
    """Some w = w0 + kernel z with ||cb w||_inf <= 1, or None."""
    if np.abs(cb @ w0).max() <= 1.0 + 1e-12:
        return w0
    if kernel.size == 0:
        return None
    g = cb @ kernel
    h = cb @ w0
    prog = lp.LinearProgram(
        c=np.zeros(kernel.shape[1]),
        a_ub=np.vstack([g, -g]),
        b_ub=np.concatenate([1.0 - h, 1.0 + h]),
        lower_bounds=[None] * kernel.shape[1],
    )
    ok, z = lp.feasible(prog, config)
    if not ok:
        return None
    return w0 + kernel @ z


def _witnesses_for_pair(c, a_idx, b_idx, tol, config, cap):
    """Verified witnesses for one (A, B) pair, canonical sign only."""
    found = []
    cba = c[np.ix_(b_idx, a_idx)]
    # rank(C_{B,A}) <= |B|, so |A| > |B| forces a nontrivial kernel.
    if a_idx.size <= b_idx.size and rank(cba) >= a_idx.size:
        return found
    cab = c[np.ix_(a_idx, b_idx)]
    cb = c[:, b_idx]
    for s in _sign_patterns(a_idx.size):
        sol = _consistent_solutions(cab, s, tol)
        if sol is None:
            continue
        w = _bounded_weight(cb, sol[0], sol[1], config)
        if w is None:
            continue
        if np.abs(cb @ w).max() > 1.0 + tol or np.abs(cab @ w - s).max() > tol:
            continue
        found.append(ParallelismWitness(a=a_idx.copy(), b=b_idx.copy(),
                                        w=w, signs=s))
        if len(found) >= cap:
            break
    return found


def is_parallel(c, tol: float = 1e-8, p_cap: int = DEFAULT_P_CAP,
                max_witnesses: int = DEFAULT_WITNESS_CAP,
                config: lp.SolverConfig = lp.DEFAULT_CONFIG) -> ParallelismReport:
    """Decide parallelism by exhaustive enumeration of subset pairs.

    Pairs are visited in increasing |A|+|B| (then lexicographic) order so
    minimal witnesses surface first.  The work is exponential in p, hence
    the hard cap; it is never silently sampled.
    """
    c = _check_symmetric(c)
    p = c.shape[0]
    if p > p_cap:
        raise ValueError(f"p = {p} exceeds the enumeration cap {p_cap}")
    subsets = _nonempty_subsets(p)
    pairs = sorted(
        ((a, b) for a in subsets for b in subsets),
        key=lambda ab: (ab[0].size + ab[1].size, tuple(ab[0]), tuple(ab[1])),
    )
    witnesses = []
    examined = 0
    for a_idx, b_idx in pairs:
        examined += 1
        room = max_witnesses - len(witnesses)
        if room <= 0:
            break
        witnesses.extend(_witnesses_for_pair(c, a_idx, b_idx, tol, config, room))
    return ParallelismReport(parallel=bool(witnesses), witnesses=witnesses,
                             pairs_examined=examined, p_cap_respected=True)


def lasso_parallelism_check(c, tol: float = 1e-8, p_cap: int = DEFAULT_P_CAP,
                            max_witnesses: int = DEFAULT_WITNESS_CAP,
                            config: lp.SolverConfig = lp.DEFAULT_CONFIG) -> ParallelismReport:
    """Parallelism with B fixed to all columns: the necessary condition for
    the lasso to have multiple solutions at some positive lam."""
    c = _check_symmetric(c)
    p = c.shape[0]
    if p > p_cap:
        raise ValueError(f"p = {p} exceeds the enumeration cap {p_cap}")
    full = np.arange(p, dtype=np.intp)
    witnesses = []
    examined = 0
    for a_idx in _nonempty_subsets(p):
        examined += 1
        if rank(c[:, a_idx]) >= a_idx.size:
            continue
        cab = c[np.ix_(a_idx, full)]
        for s in _sign_patterns(a_idx.size):
            sol = _consistent_solutions(cab, s, tol)
            if sol is None:
                continue
            w = _bounded_weight(c, sol[0], sol[1], config)
            if w is None:
                continue
            if np.abs(c @ w).max() > 1.0 + tol or np.abs(cab @ w - s).max() > tol:
                continue
            witnesses.append(ParallelismWitness(a=a_idx.copy(), b=full.copy(),
                                                w=w, signs=s))
            if len(witnesses) >= max_witnesses:
                break
        if len(witnesses) >= max_witnesses:
            break
    return ParallelismReport(parallel=bool(witnesses), witnesses=witnesses,
                             pairs_examined=examined, p_cap_respected=True)


def verify_multiplicity(inst: MultiplicityInstance, tol: float = 1e-7,
                        config: lp.SolverConfig = lp.DEFAULT_CONFIG) -> MultiplicityCheck:
    """Check the four conditions certifying multiple minimum-l1 solutions.

    With C = X'X/n, v = X'y/n: (1) the (A, B) pair carries a parallelism
    witness mu0; (2) b'C_B mu0 >= ||beta0||_1 over the whole feasible set,
    decided by one LP; (3) A is exactly the support of beta0; (4) the
    active residual pattern is exactly B.
    """
    x, y = check_design(inst.x, inst.y)
    p = x.shape[1]
    a_idx = check_index_set(inst.a, p, "a")
    b_idx = check_index_set(inst.b, p, "b")
    beta0 = as_vector(inst.beta0, "beta0")
    mu0 = as_vector(inst.mu0, "mu0")
    if beta0.size != p:
        raise ValueError("beta0 length must match the number of columns")
    if mu0.size != b_idx.size:
        raise ValueError("mu0 length must match |b|")
    prob = problem_from_design(x, y, inst.lam)
    c, v, lam = prob.c, prob.v, prob.lam

    support = np.flatnonzero(np.abs(beta0) > tol)
    if support.size == 0:
        raise ValueError("degenerate certificate: beta0 has empty support")
    residual = np.abs(c @ beta0 - v)
    rel = tol * max(1.0, lam)
    if residual.max() > lam + rel:
        raise ValueError("invalid certificate: beta0 is not feasible")

    cb = c[:, b_idx]
    pinned = cb[a_idx] @ mu0
    cond1 = (np.abs(cb @ mu0).max() <= 1.0 + tol
             and np.abs(np.abs(pinned) - 1.0).max() <= tol
             and (a_idx.size > b_idx.size
                  or rank(c[np.ix_(b_idx, a_idx)]) < a_idx.size))

    g = cb @ mu0
    support_lp = lp.LinearProgram(
        c=g,
        a_ub=np.vstack([c, -c]),
        b_ub=np.concatenate([v + lam, lam - v]),
        lower_bounds=[None] * p,
    )
    sol = lp.solve(support_lp, config)
    if sol.status == lp.INFEASIBLE:
        raise ValueError("invalid certificate: empty feasible set")
    cond2 = (sol.status == lp.OPTIMAL
             and sol.objective_value >= np.abs(beta0).sum()
             - tol * max(1.0, np.abs(beta0).sum()))

    cond3 = support.size == a_idx.size and bool(np.all(support == a_idx))

    active = np.flatnonzero(np.abs(residual - lam) <= rel)
    cond4 = active.size == b_idx.size and bool(np.all(active == b_idx))
    inactive = np.setdiff1d(np.arange(p), b_idx)
    if inactive.size and residual[inactive].max() >= lam - rel:
        cond4 = False

    conditions = (bool(cond1), bool(cond2), bool(cond3), bool(cond4))
    return MultiplicityCheck(holds=all(conditions), conditions=conditions)


def duplicated_column_instance() -> MultiplicityInstance:
    """The canonical two-column certificate: duplicated predictors make the
    Gram matrix parallel, and at lam = 1 the solution set is the segment
    {b >= 0 : b1 + b2 = 1}, giving per-coordinate diameter 1."""
    root2 = np.sqrt(2.0)
    x = np.array([[root2, root2], [0.0, 0.0]])
    y = np.array([2.0 * root2, 0.0])
    return MultiplicityInstance(
        x=x, y=y, lam=1.0,
        beta0=np.array([0.5, 0.5]),
        mu0=np.array([0.5, 0.5]),
        a=np.array([0, 1], dtype=np.intp),
        b=np.array([0, 1], dtype=np.intp),
    )


def duplicate_first_column_sampler(rng: np.random.Generator, n: int, p: int) -> np.ndarray:
    """Design sampler that violates continuity by duplicating a column."""
    if p < 2:
        raise ValueError("column duplication needs p >= 2")
    x = rng.standard_normal((n, p))
    x[:, 1] = x[:, 0]
    return x


def random_design_parallel_fraction(
        n: int, p: int, reps: int, seed: int,
        design_sampler: Optional[Callable[[np.random.Generator, int, int], np.ndarray]] = None,
        tol: float = 1e-8, p_cap: int = DEFAULT_P_CAP) -> float:
    """Fraction of Monte Carlo designs whose Gram matrix is parallel.

    Rows are iid standard normal by default; with continuous sampling the
    fraction is 0.  A degenerate sampler (duplicated columns) flips it to 1.
    """
    if n < 1 or p < 1 or reps < 1:
        raise ValueError("n, p, reps must be positive")
    if p > p_cap:
        raise ValueError(f"p = {p} exceeds the enumeration cap {p_cap}")
    hits = 0
    for rep in range(reps):
        rng = np.random.default_rng(np.random.SeedSequence([abs(int(seed)), 4, rep]))
        x = rng.standard_normal((n, p)) if design_sampler is None \
            else design_sampler(rng, n, p)
        c = x.T @ x / n
        c = 0.5 * (c + c.T)
        report = is_parallel(c, tol=tol, p_cap=p_cap, max_witnesses=1)
        hits += int(report.parallel)
    return hits / reps
