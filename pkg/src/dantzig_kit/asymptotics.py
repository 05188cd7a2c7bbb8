"""Monte Carlo studies of the large-sample behaviour of the selector.

Two study kinds:

* ``simulate_almost_sure_limit`` (fixed penalty): fits converge to the
  minimum-l1 point of {b : ||C(b - beta_star)||_inf <= lam0}, which equals
  beta_star exactly when lam0 = 0.
* ``simulate_limit_distribution`` (penalty lam_n = lt0 / sqrt(n)): the
  scaled errors sqrt(n)(beta_hat - beta_star) converge in law to the
  solution of a limiting LP driven by a N(0, sigma^2 C) draw.  With
  lt0 = 0 that law is the Gaussian OLS limit N(0, sigma^2 C^-1); with
  lt0 > 0 it has atoms at zero on the null coordinates, so it is not
  normal.

Replicates are seeded individually by (seed, stream, n, replicate), so
reports are bitwise reproducible for any worker count.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import stats

from . import lp
from .dantzig import DantzigProblem, dantzig_select, solve_dantzig_problem
from .kkt import dantzig_certificate
from .linalg import as_matrix, as_vector
from .uniqueness import is_parallel

_STREAM_DESIGN = 1
_STREAM_LIMIT = 2
_STREAM_PROBE = 3

KKT_SPOT_CHECK_EVERY = 50


def _gaussian_noise(rng, n, sigma):
    return sigma * rng.standard_normal(n)


def _laplace_noise(rng, n, sigma):
    return rng.laplace(scale=sigma / np.sqrt(2.0), size=n)


def _two_point_noise(rng, n, sigma):
    return sigma * (2.0 * rng.integers(0, 2, size=n) - 1.0)


NOISE_GENERATORS = {
    "gaussian": _gaussian_noise,
    "laplace": _laplace_noise,
    "two_point": _two_point_noise,
}


@dataclass
class ScenarioConfig:
    """One simulation scenario; validated before any computation runs."""

    beta_star: np.ndarray
    c_target: np.ndarray
    sigma: float
    lambda_rule: str          # "fixed" or "root_n"
    lambda_value: float
    n_grid: tuple
    reps: int
    seed: int
    noise: str = "gaussian"
    ks_max: float = 0.05
    cov_rel_error_max: float = 0.15
    err_to_limit_max: float = 0.05
    atom_tol: float = 1e-6
    p_cap: int = 10

    def __post_init__(self):
        self.beta_star = as_vector(self.beta_star, "beta_star")
        self.c_target = as_matrix(self.c_target, "c_target")
        self.n_grid = tuple(int(n) for n in self.n_grid)

    @property
    def p(self) -> int:
        return self.beta_star.size

    def validate(self) -> None:
        p = self.p
        if self.c_target.shape != (p, p):
            raise ValueError("c_target shape must match beta_star")
        if np.abs(self.c_target - self.c_target.T).max() > 1e-10 * max(
                1.0, np.abs(self.c_target).max()):
            raise ValueError("c_target must be symmetric")
        try:
            np.linalg.cholesky(self.c_target)
        except np.linalg.LinAlgError:
            raise ValueError("c_target must be positive definite") from None
        report = is_parallel(self.c_target, p_cap=self.p_cap)
        if report.parallel:
            w = report.witnesses[0]
            raise ValueError(
                "c_target is parallel to the l1 ball; witness "
                f"a={list(w.a)}, b={list(w.b)}, w={list(w.w)}")
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.lambda_rule not in ("fixed", "root_n"):
            raise ValueError("lambda_rule must be 'fixed' or 'root_n'")
        if self.lambda_value < 0:
            raise ValueError("lambda_value must be nonnegative")
        if len(self.n_grid) == 0 or any(n < 1 for n in self.n_grid):
            raise ValueError("n_grid must hold positive sample sizes")
        if any(b <= a for a, b in zip(self.n_grid, self.n_grid[1:])):
            raise ValueError("n_grid must be strictly increasing")
        if self.reps < 1:
            raise ValueError("reps must be positive")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        if self.noise not in NOISE_GENERATORS:
            raise ValueError(f"unknown noise kind {self.noise!r}")


@dataclass
class AsymptoticsReport:
    kind: str
    config: ScenarioConfig
    per_n: list
    beta_limit: Optional[np.ndarray] = None
    empirical: Optional[np.ndarray] = None
    limiting: Optional[np.ndarray] = None
    ks_stats: Optional[np.ndarray] = None
    cov_rel_error: Optional[float] = None
    cov_rel_error_ols: Optional[float] = None
    atom_mass_empirical: Optional[np.ndarray] = None
    atom_mass_limiting: Optional[np.ndarray] = None
    kkt_checks_passed: int = 0
    kkt_checks_total: int = 0
    pass_flags: dict = field(default_factory=dict)


def _lambda_at(cfg: ScenarioConfig, n: int) -> float:
    if cfg.lambda_rule == "fixed":
        return cfg.lambda_value
    return cfg.lambda_value / np.sqrt(n)


def _design_chunk(cfg: ScenarioConfig, n: int, rep_lo: int, rep_hi: int):
    """Fit replicates rep_lo..rep_hi-1 at sample size n.

    Returns (betas, lindeberg stats, kkt spot-check outcomes).
    """
    p = cfg.p
    chol = np.linalg.cholesky(cfg.c_target)
    gen = NOISE_GENERATORS[cfg.noise]
    lam_n = _lambda_at(cfg, n)
    betas = np.empty((rep_hi - rep_lo, p))
    lindeberg = np.empty(rep_hi - rep_lo)
    kkt_flags = []
    for k, rep in enumerate(range(rep_lo, rep_hi)):
        rng = np.random.default_rng(
            np.random.SeedSequence([cfg.seed, _STREAM_DESIGN, n, rep]))
        x = rng.standard_normal((n, p)) @ chol.T
        eps = gen(rng, n, cfg.sigma)
        y = x @ cfg.beta_star + eps
        est = dantzig_select(x, y, lam_n)
        betas[k] = est.beta_hat
        lindeberg[k] = (x * x).sum(axis=1).max() / n
        if rep % KKT_SPOT_CHECK_EVERY == 0:
            cert = dantzig_certificate(x, y, lam_n, est.beta_hat)
            kkt_flags.append(bool(cert.found))
    return betas, lindeberg, kkt_flags


def _limit_chunk(cfg: ScenarioConfig, rep_lo: int, rep_hi: int):
    p = cfg.p
    chol = np.linalg.cholesky(cfg.c_target)
    out = np.empty((rep_hi - rep_lo, p))
    for k, rep in enumerate(range(rep_lo, rep_hi)):
        rng = np.random.default_rng(
            np.random.SeedSequence([cfg.seed, _STREAM_LIMIT, rep]))
        v0 = cfg.sigma * (chol @ rng.standard_normal(p))
        out[k] = solve_limiting_problem(cfg.c_target, v0, cfg.lambda_value,
                                        cfg.beta_star)
    return out


def _chunks(reps: int, jobs: int):
    size = max(1, reps // (4 * max(jobs, 1)) + 1) if jobs > 1 else reps
    return [(lo, min(lo + size, reps)) for lo in range(0, reps, size)]


def _run_design_replicates(cfg: ScenarioConfig, n: int, jobs: int):
    p = cfg.p
    betas = np.empty((cfg.reps, p))
    lindeberg = np.empty(cfg.reps)
    kkt_flags = []
    pieces = _chunks(cfg.reps, jobs)
    if jobs > 1 and len(pieces) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [(lo, hi, pool.submit(_design_chunk, cfg, n, lo, hi))
                       for lo, hi in pieces]
            for lo, hi, fut in futures:
                b, li, kf = fut.result()
                betas[lo:hi] = b
                lindeberg[lo:hi] = li
                kkt_flags.extend(kf)
    else:
        for lo, hi in pieces:
            b, li, kf = _design_chunk(cfg, n, lo, hi)
            betas[lo:hi] = b
            lindeberg[lo:hi] = li
            kkt_flags.extend(kf)
    return betas, lindeberg, kkt_flags


def solve_limiting_problem(c, v0, lambda_tilde: float, beta_star,
                           config: lp.SolverConfig = lp.DEFAULT_CONFIG) -> np.ndarray:
    """Solve the limiting program for the scaled estimation error.

    minimize ||u_off||_1 + sign(beta_star)_on . u_on subject to
    ||C u - v0||_inf <= lambda_tilde, where "on" is the support of
    beta_star.  Off-support coordinates enter through epigraph variables;
    support coordinates are free with a linear cost.
    """
    c = as_matrix(c, "c")
    v0 = as_vector(v0, "v0")
    beta_star = as_vector(beta_star, "beta_star")
    p = c.shape[0]
    if c.shape != (p, p) or v0.size != p or beta_star.size != p:
        raise ValueError("c, v0 and beta_star dimensions must agree")
    if lambda_tilde < 0:
        raise ValueError("lambda_tilde must be nonnegative")
    on = np.flatnonzero(beta_star != 0.0)
    off = np.flatnonzero(beta_star == 0.0)
    k = off.size
    # Variables: u (p, free) then t (k, >= 0) with t_j >= |u_off_j|.
    cost = np.zeros(p + k)
    cost[on] = np.sign(beta_star[on])
    cost[p:] = 1.0
    box = np.hstack([c, np.zeros((p, k))])
    rows = [np.vstack([box, -box])]
    rhs = [np.concatenate([v0 + lambda_tilde, lambda_tilde - v0])]
    for i, j in enumerate(off):
        up = np.zeros(p + k)
        up[j] = 1.0
        up[p + i] = -1.0
        dn = np.zeros(p + k)
        dn[j] = -1.0
        dn[p + i] = -1.0
        rows.append(np.vstack([up, dn]))
        rhs.append(np.zeros(2))
    prog = lp.LinearProgram(
        c=cost,
        a_ub=np.vstack(rows),
        b_ub=np.concatenate(rhs),
        lower_bounds=[None] * p + [0.0] * k,
    )
    sol = lp.solve(prog, config)
    if sol.status != lp.OPTIMAL:
        raise RuntimeError(f"limiting program ended with status {sol.status}")
    return sol.x[:p]


def _summaries(samples: np.ndarray) -> dict:
    qs = np.quantile(samples, [0.05, 0.25, 0.5, 0.75, 0.95], axis=0)
    return {
        "mean": samples.mean(axis=0),
        "cov": np.cov(samples.T) if samples.shape[0] > 1 else np.zeros(
            (samples.shape[1], samples.shape[1])),
        "quantiles": qs,
    }


def simulate_almost_sure_limit(cfg: ScenarioConfig, jobs: int = 1) -> AsymptoticsReport:
    """Fixed-penalty study: track convergence of fits to the limit point."""
    cfg.validate()
    if cfg.lambda_rule != "fixed":
        raise ValueError("the almost-sure-limit study uses the fixed rule")
    beta_limit = solve_dantzig_problem(DantzigProblem(
        c=cfg.c_target, v=cfg.c_target @ cfg.beta_star, lam=cfg.lambda_value))
    if beta_limit.status != "optimal":
        raise RuntimeError("limit problem unexpectedly infeasible")
    b0 = beta_limit.beta_hat
    per_n = []
    kkt_pass = kkt_total = 0
    for n in cfg.n_grid:
        betas, lindeberg, kkt_flags = _run_design_replicates(cfg, n, jobs)
        err_limit = np.abs(betas - b0).max(axis=1)
        err_star = np.abs(betas - cfg.beta_star).max(axis=1)
        row = _summaries(betas)
        row.update({
            "n": n,
            "median_err_to_limit": float(np.median(err_limit)),
            "median_err_to_beta_star": float(np.median(err_star)),
            "mean_lindeberg": float(lindeberg.mean()),
        })
        per_n.append(row)
        kkt_pass += sum(kkt_flags)
        kkt_total += len(kkt_flags)
    flags = {
        "err_to_limit_final": per_n[-1]["median_err_to_limit"] <= cfg.err_to_limit_max,
        "lindeberg_decreasing": all(
            a["mean_lindeberg"] > b["mean_lindeberg"]
            for a, b in zip(per_n, per_n[1:])),
        "kkt_spot_checks": kkt_pass == kkt_total,
    }
    return AsymptoticsReport(kind="limit", config=cfg, per_n=per_n,
                             beta_limit=b0, kkt_checks_passed=kkt_pass,
                             kkt_checks_total=kkt_total, pass_flags=flags)


def simulate_limit_distribution(cfg: ScenarioConfig, jobs: int = 1) -> AsymptoticsReport:
    """Root-n-penalty study: compare scaled errors with the limiting law."""
    cfg.validate()
    if cfg.lambda_rule != "root_n":
        raise ValueError("the distribution study uses the root_n rule")
    if cfg.n_grid[-1] < 2000:
        raise ValueError("the largest n must be at least 2000")
    per_n = []
    kkt_pass = kkt_total = 0
    empirical = None
    for n in cfg.n_grid:
        betas, lindeberg, kkt_flags = _run_design_replicates(cfg, n, jobs)
        scaled = np.sqrt(n) * (betas - cfg.beta_star)
        row = _summaries(scaled)
        row.update({"n": n, "mean_lindeberg": float(lindeberg.mean())})
        per_n.append(row)
        kkt_pass += sum(kkt_flags)
        kkt_total += len(kkt_flags)
        if n == cfg.n_grid[-1]:
            empirical = scaled

    pieces = _chunks(cfg.reps, jobs)
    limiting = np.empty((cfg.reps, cfg.p))
    if jobs > 1 and len(pieces) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [(lo, hi, pool.submit(_limit_chunk, cfg, lo, hi))
                       for lo, hi in pieces]
            for lo, hi, fut in futures:
                limiting[lo:hi] = fut.result()
    else:
        for lo, hi in pieces:
            limiting[lo:hi] = _limit_chunk(cfg, lo, hi)

    ks = np.array([stats.ks_2samp(empirical[:, j], limiting[:, j]).statistic
                   for j in range(cfg.p)])
    cov_emp = np.cov(empirical.T)
    cov_lim = np.cov(limiting.T)
    denom = np.linalg.norm(cov_lim)
    cov_rel = float(np.linalg.norm(cov_emp - cov_lim) / denom) if denom > 0 else 0.0
    cov_rel_ols = None
    if cfg.lambda_value == 0.0:
        ols_cov = cfg.sigma ** 2 * np.linalg.inv(cfg.c_target)
        cov_rel_ols = float(np.linalg.norm(cov_emp - ols_cov) / np.linalg.norm(ols_cov))
    atom_emp = (np.abs(empirical) < cfg.atom_tol).mean(axis=0)
    atom_lim = (np.abs(limiting) < cfg.atom_tol).mean(axis=0)
    flags = {
        "ks_below_max": bool((ks < cfg.ks_max).all()),
        "lindeberg_decreasing": all(
            a["mean_lindeberg"] > b["mean_lindeberg"]
            for a, b in zip(per_n, per_n[1:])),
        "kkt_spot_checks": kkt_pass == kkt_total,
    }
    if cov_rel_ols is not None:
        flags["cov_matches_ols_limit"] = cov_rel_ols <= cfg.cov_rel_error_max
    return AsymptoticsReport(kind="distribution", config=cfg, per_n=per_n,
                             empirical=empirical, limiting=limiting,
                             ks_stats=ks, cov_rel_error=cov_rel,
                             cov_rel_error_ols=cov_rel_ols,
                             atom_mass_empirical=atom_emp,
                             atom_mass_limiting=atom_lim,
                             kkt_checks_passed=kkt_pass,
                             kkt_checks_total=kkt_total, pass_flags=flags)


@dataclass
class ContinuityProbeResult:
    rows: list              # (eps, distance, status) with status "ok"/"skipped"
    passed: bool
    base_solution: np.ndarray


def continuity_probe(c, v, lam: float, directions=None,
                     eps_grid=(1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6),
                     seed: int = 0, p_cap: int = 10,
                     config: lp.SolverConfig = lp.DEFAULT_CONFIG) -> ContinuityProbeResult:
    """Perturb (C, v, lam) along a fixed direction and watch the solution.

    Reports d(eps) = ||solution(perturbed) - solution(base)||_inf down the
    eps grid.  Grid points where the perturbed matrix leaves the valid
    domain (loses definiteness or becomes parallel) are skipped, not
    failed.  Passing means the final distance is below 1e-4 and no step
    grows by more than a factor of 10.
    """
    c = as_matrix(c, "c")
    v = as_vector(v, "v")
    p = c.shape[0]
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    if np.linalg.matrix_rank(c) < p:
        raise ValueError("the probe requires invertible c")
    if is_parallel(c, p_cap=p_cap).parallel:
        raise ValueError("c must not be parallel to the l1 ball")
    if directions is None:
        rng = np.random.default_rng(
            np.random.SeedSequence([abs(int(seed)), _STREAM_PROBE]))
        dc = rng.standard_normal((p, p))
        dc = 0.5 * (dc + dc.T)
        dc /= max(np.abs(dc).max(), 1e-12)
        dv = rng.standard_normal(p)
        dv /= max(np.abs(dv).max(), 1e-12)
        dlam = float(rng.standard_normal())
    else:
        dc, dv, dlam = directions
        dc = as_matrix(dc, "dc")
        dv = as_vector(dv, "dv")
        if np.abs(dc - dc.T).max() > 1e-10 * max(1.0, np.abs(dc).max()):
            raise ValueError("the matrix perturbation must stay symmetric")
        dlam = float(dlam)

    base = solve_dantzig_problem(DantzigProblem(c=c, v=v, lam=lam), config)
    if base.status != "optimal":
        raise ValueError("base problem must be solvable")
    rows = []
    for eps in eps_grid:
        c_eps = c + eps * dc
        c_eps = 0.5 * (c_eps + c_eps.T)
        lam_eps = max(0.0, lam + eps * dlam)
        eigs = np.linalg.eigvalsh(c_eps)
        if eigs.min() <= 0 or is_parallel(c_eps, p_cap=p_cap).parallel:
            rows.append((float(eps), None, "skipped"))
            continue
        est = solve_dantzig_problem(
            DantzigProblem(c=c_eps, v=v + eps * dv, lam=lam_eps), config)
        if est.status != "optimal":
            rows.append((float(eps), None, "skipped"))
            continue
        d = float(np.abs(est.beta_hat - base.beta_hat).max())
        rows.append((float(eps), d, "ok"))
    dists = [d for _, d, status in rows if status == "ok"]
    passed = bool(dists) and dists[-1] < 1e-4 and all(
        b <= 10.0 * a + 1e-12 for a, b in zip(dists, dists[1:]))
    return ContinuityProbeResult(rows=rows, passed=passed,
                                 base_solution=base.beta_hat)
