"""Dense matrix helpers shared by the solvers and the analysis modules."""
from __future__ import annotations

import numpy as np

# Relative singular-value threshold used for rank decisions.
DEFAULT_REL_TOL = 1e-12


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise ValueError(f"{name} contains non-finite entries")
    return m


def as_vector(v, name: str = "vector") -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise ValueError(f"{name} must be 1-dimensional, got shape {v.shape}")
    if not np.isfinite(v).all():
        raise ValueError(f"{name} contains non-finite entries")
    return v


def check_index_set(indices, universe: int, name: str = "index set",
                    allow_empty: bool = False) -> np.ndarray:
    """Validate a strictly increasing, duplicate-free 0-based index set."""
    idx = np.asarray(indices, dtype=np.intp)
    if idx.ndim != 1:
        raise ValueError(f"{name} must be 1-dimensional")
    if idx.size == 0:
        if allow_empty:
            return idx
        raise ValueError(f"{name} must be nonempty")
    if idx.min() < 0 or idx.max() >= universe:
        raise ValueError(f"{name} has entries outside [0, {universe})")
    if np.any(np.diff(idx) <= 0):
        raise ValueError(f"{name} must be strictly increasing without duplicates")
    return idx


def submatrix(m, rows=None, cols=None) -> np.ndarray:
    """Extract rows/columns of ``m`` in order; ``None`` keeps everything."""
    m = as_matrix(m)
    if rows is None:
        ridx = np.arange(m.shape[0], dtype=np.intp)
    else:
        ridx = check_index_set(rows, m.shape[0], "row set", allow_empty=True)
    if cols is None:
        cidx = np.arange(m.shape[1], dtype=np.intp)
    else:
        cidx = check_index_set(cols, m.shape[1], "column set", allow_empty=True)
    return m[np.ix_(ridx, cidx)]


def _singular_values(m: np.ndarray) -> np.ndarray:
    return np.linalg.svd(m, compute_uv=False)


def rank(m, rel_tol: float = DEFAULT_REL_TOL) -> int:
    m = as_matrix(m)
    if m.size == 0:
        return 0
    s = _singular_values(m)
    if s.size == 0 or s[0] == 0.0:
        return 0
    cutoff = rel_tol * s[0] * max(m.shape)
    return int(np.count_nonzero(s > cutoff))


def null_space_dim(m, rel_tol: float = DEFAULT_REL_TOL) -> int:
    """Dimension of the kernel; the all-zero matrix maps everything to 0."""
    m = as_matrix(m)
    if m.size == 0:
        raise ValueError("null_space_dim requires a nonempty matrix")
    return m.shape[1] - rank(m, rel_tol)


def null_space(m, rel_tol: float = DEFAULT_REL_TOL) -> np.ndarray:
    """Orthonormal kernel basis, returned as a (cols, nullity) array."""
    m = as_matrix(m)
    if m.size == 0:
        raise ValueError("null_space requires a nonempty matrix")
    _, s, vh = np.linalg.svd(m)
    if s.size == 0 or s[0] == 0.0:
        r = 0
    else:
        cutoff = rel_tol * s[0] * max(m.shape)
        r = int(np.count_nonzero(s > cutoff))
    return vh[r:].T.copy()


def pseudoinverse(m, rel_tol: float = DEFAULT_REL_TOL) -> np.ndarray:
    """Moore-Penrose pseudoinverse with the same threshold as ``rank``."""
    m = as_matrix(m)
    if m.size == 0:
        raise ValueError("pseudoinverse requires a nonempty matrix")
    return np.linalg.pinv(m, rcond=rel_tol * max(m.shape))


def product_rank_probe(n: int, p: int, q: int, reps: int, seed: int,
                       w=None, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Fraction of replicates where X^T W attains rank min(q, p).

    X is redrawn each replicate with iid standard normal rows; W is a fixed
    full-rank n-by-q matrix (a deterministic orthonormal one by default).
    With continuous sampling the fraction is 1.0.
    """
    if n < p:
        raise ValueError("requires n >= p")
    if not 1 <= q <= n:
        raise ValueError("requires 1 <= q <= n")
    if reps < 1:
        raise ValueError("requires reps >= 1")
    if p < 1:
        raise ValueError("requires p >= 1")
    rng = np.random.default_rng(np.random.SeedSequence([abs(int(seed)), 0]))
    if w is None:
        w_mat, _ = np.linalg.qr(rng.standard_normal((n, q)))
    else:
        w_mat = as_matrix(w, "w")
        if w_mat.shape != (n, q):
            raise ValueError(f"w must have shape ({n}, {q}), got {w_mat.shape}")
        if rank(w_mat, rel_tol) < q:
            raise ValueError("w must have full column rank q")
    target = min(q, p)
    hits = 0
    for _ in range(reps):
        x = rng.standard_normal((n, p))
        if rank(x.T @ w_mat, rel_tol) == target:
            hits += 1
    return hits / reps
