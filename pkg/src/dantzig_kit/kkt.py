"""Primal-dual optimality certificates for Dantzig selector fits.

A point beta is optimal iff it is feasible and some dual vector mu
satisfies: ||X'X mu||_inf / n <= 1, mu reproduces sign(beta_j) on the
support through X_j'X mu / n, mu vanishes on inactive constraints, and mu
agrees in sign with the active residual correlations.  Under feasibility
these per-coordinate conditions are equivalent to the two scalar
identities mu'X'X beta / n = ||beta||_1 and mu'X'(y - X beta) / n =
lam * ||mu||_1, which makes the certificate search a single LP
feasibility problem.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import lp
from .dantzig import check_design
from .linalg import as_vector

SUPPORT_TOL = 1e-9


@dataclass
class KktCertificate:
    found: bool
    mu_hat: Optional[np.ndarray]
    active_set: Optional[np.ndarray]
    slacks: dict
    failure: Optional[str] = None            # None | "primal" | "dual"
    violating_coordinate: Optional[int] = None


def dantzig_certificate(x, y, lam: float, beta, tol: float = 1e-7,
                        config: lp.SolverConfig = lp.DEFAULT_CONFIG) -> KktCertificate:
    """Search for a dual certificate proving beta optimal at level lam.

    Returns found=False with failure="primal" when beta is infeasible
    (the violating coordinate is reported), and failure="dual" when no
    admissible mu exists, i.e. beta is feasible but suboptimal.
    """
    x, y = check_design(x, y)
    beta = as_vector(beta, "beta")
    n, p = x.shape
    if beta.size != p:
        raise ValueError("beta length must match the number of columns")
    if lam < 0:
        raise ValueError("lam must be nonnegative")

    gram = x.T @ x / n
    gram = 0.5 * (gram + gram.T)
    corr = x.T @ (y - x @ beta) / n
    slacks = {
        "residual_correlations": corr,
        "residual_bound": float(np.abs(corr).max()),
        "lam": float(lam),
    }
    rel = tol * max(1.0, lam)
    if np.abs(corr).max() > lam + rel:
        worst = int(np.argmax(np.abs(corr)))
        return KktCertificate(found=False, mu_hat=None, active_set=None,
                              slacks=slacks, failure="primal",
                              violating_coordinate=worst)

    active = np.flatnonzero(np.abs(np.abs(corr) - lam) <= rel)
    inactive = np.setdiff1d(np.arange(p), active)
    support = np.flatnonzero(np.abs(beta) > SUPPORT_TOL)

    # |X_j'X mu| / n <= 1 everywhere.
    a_ub = np.vstack([gram, -gram])
    b_ub = np.ones(2 * p)
    rows_ub = [a_ub]
    rhs_ub = [b_ub]
    # Sign agreement with active residuals (vacuous where the residual
    # itself is at noise level, which only happens at lam ~ 0).
    for j in active:
        s = np.sign(corr[j]) if abs(corr[j]) > rel else 0.0
        if s != 0.0:
            row = np.zeros(p)
            row[j] = -s
            rows_ub.append(row[None, :])
            rhs_ub.append(np.zeros(1))
    # Support coordinates must reproduce their signs exactly; inactive
    # coordinates carry no dual weight.
    rows_eq = []
    rhs_eq = []
    if support.size:
        rows_eq.append(gram[support])
        rhs_eq.append(np.sign(beta[support]))
    for j in inactive:
        row = np.zeros(p)
        row[j] = 1.0
        rows_eq.append(row[None, :])
        rhs_eq.append(np.zeros(1))
    a_eq = np.vstack(rows_eq) if rows_eq else None
    b_eq = np.concatenate(rhs_eq) if rows_eq else None

    prog = lp.LinearProgram(
        c=np.zeros(p),
        a_ub=np.vstack(rows_ub),
        b_ub=np.concatenate(rhs_ub),
        a_eq=a_eq,
        b_eq=b_eq,
        lower_bounds=[None] * p,
    )
    ok, mu = lp.feasible(prog, config)
    if not ok:
        return KktCertificate(found=False, mu_hat=None, active_set=active,
                              slacks=slacks, failure="dual")

    dual_corr = gram @ mu
    slacks.update({
        "dual_correlations": dual_corr,
        "dual_bound": float(np.abs(dual_corr).max()),
        "l1_identity_gap": float(abs(mu @ gram @ beta - np.abs(beta).sum())),
        "penalty_identity_gap": float(abs(mu @ corr - lam * np.abs(mu).sum())),
    })
    return KktCertificate(found=True, mu_hat=mu, active_set=active,
                          slacks=slacks)
