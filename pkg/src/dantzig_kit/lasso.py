"""Lasso solving by cyclic coordinate descent, with stationarity checks.

The objective is (2n)^-1 ||y - X b||^2 + lam ||b||_1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dantzig import check_design
from .linalg import rank

# A solution must satisfy the subgradient conditions to this accuracy
# before the solver declares convergence.
KKT_CONVERGENCE_TOL = 1e-6


class LassoConvergenceError(RuntimeError):
    """Sweep budget exhausted; carries the best iterate seen."""

    def __init__(self, message, estimate):
        super().__init__(message)
        self.estimate = estimate


@dataclass
class LassoEstimate:
    beta_hat: np.ndarray
    objective: float
    kkt_residual: float
    n_sweeps: int
    objective_path: np.ndarray


def lasso_objective(x, y, lam, beta) -> float:
    r = y - x @ beta
    n = x.shape[0]
    return float(r @ r / (2.0 * n) + lam * np.abs(beta).sum())


def _soft(z, t):
    return np.sign(z) * max(abs(z) - t, 0.0)


def _stationarity_gap(x, y, lam, beta, support_tol=0.0):
    """Max violation of the subgradient conditions at beta."""
    n = x.shape[0]
    g = x.T @ (y - x @ beta) / n
    worst = 0.0
    for j in range(x.shape[1]):
        if abs(beta[j]) > support_tol:
            worst = max(worst, abs(g[j] - lam * np.sign(beta[j])))
        else:
            worst = max(worst, max(abs(g[j]) - lam, 0.0))
    return worst


def lasso_kkt_check(x, y, lam, beta, tol: float = 1e-6):
    """Check the zero-subgradient conditions: correlations equal
    lam*sign(b_j) on the support and stay within [-lam, lam] off it.

    Returns (ok, max_violation).
    """
    x, y = check_design(x, y)
    if lam <= 0:
        raise ValueError("the subgradient check requires lam > 0")
    beta = np.asarray(beta, dtype=float).ravel()
    if beta.size != x.shape[1]:
        raise ValueError("beta length must match the number of columns")
    worst = _stationarity_gap(x, y, lam, beta)
    return worst <= tol, float(worst)


def lasso_solve(x, y, lam: float, max_sweeps: int = 10_000,
                tol: float = 1e-10, beta_init=None) -> LassoEstimate:
    """Cyclic coordinate descent with exact univariate soft-threshold updates.

    Converges when the largest coordinate move in a sweep drops below
    ``tol`` and the stationarity gap is below 1e-6; otherwise raises
    LassoConvergenceError carrying the best iterate.

    lam = 0 demands a full-rank design; with a singular Gram matrix the
    minimizer is not unique and silently picking one would be misleading.
    """
    x, y = check_design(x, y)
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    n, p = x.shape
    if lam == 0 and rank(x) < p:
        raise ValueError("lam = 0 requires a design of full column rank")
    col_scale = (x * x).sum(axis=0) / n
    if beta_init is None:
        beta = np.zeros(p)
    else:
        beta = np.array(beta_init, dtype=float).ravel()
        if beta.size != p:
            raise ValueError("beta_init length must match the number of columns")
    r = y - x @ beta
    path = [lasso_objective(x, y, lam, beta)]
    for sweep in range(1, max_sweeps + 1):
        max_move = 0.0
        for j in range(p):
            if col_scale[j] == 0.0:
                continue
            rho = (x[:, j] @ r) / n + col_scale[j] * beta[j]
            new = _soft(rho, lam) / col_scale[j]
            if new != beta[j]:
                r += x[:, j] * (beta[j] - new)
                max_move = max(max_move, abs(new - beta[j]))
                beta[j] = new
        path.append(lasso_objective(x, y, lam, beta))
        if max_move < tol:
            gap = _stationarity_gap(x, y, lam, beta)
            if gap < KKT_CONVERGENCE_TOL:
                return LassoEstimate(beta_hat=beta, objective=path[-1],
                                     kkt_residual=float(gap), n_sweeps=sweep,
                                     objective_path=np.array(path))
    gap = _stationarity_gap(x, y, lam, beta)
    best = LassoEstimate(beta_hat=beta, objective=path[-1],
                         kkt_residual=float(gap), n_sweeps=max_sweeps,
                         objective_path=np.array(path))
    raise LassoConvergenceError(
        f"coordinate descent did not converge in {max_sweeps} sweeps "
        f"(stationarity gap {gap:.3e})", best)
