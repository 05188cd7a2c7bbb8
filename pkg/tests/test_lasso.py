import numpy as np
import pytest

from dantzig_kit import lasso, uniqueness

from helpers import lasso_1d_oracle, random_design


def test_orthonormalized_soft_threshold():
    x = np.sqrt(2.0) * np.eye(2)
    y = np.sqrt(2.0) * np.array([3.0, 0.5])
    est = lasso.lasso_solve(x, y, 1.0)
    np.testing.assert_allclose(est.beta_hat, [2.0, 0.0], atol=1e-10)
    assert est.kkt_residual <= 1e-6


def test_large_penalty_returns_zero():
    rng = np.random.default_rng(0)
    x, y = random_design(rng, p=4, n=15)
    lam = np.abs(x.T @ y).max() / x.shape[0] + 0.1
    est = lasso.lasso_solve(x, y, lam)
    np.testing.assert_allclose(est.beta_hat, np.zeros(4), atol=1e-12)


def test_zero_penalty_is_ols():
    rng = np.random.default_rng(1)
    x = rng.standard_normal((3, 3))
    y = rng.standard_normal(3)
    est = lasso.lasso_solve(x, y, 0.0, tol=1e-13)
    np.testing.assert_allclose(est.beta_hat, np.linalg.solve(x, y), atol=1e-6)


def test_zero_penalty_rejects_rank_deficient_design():
    x = np.ones((5, 2))
    y = np.arange(5.0)
    with pytest.raises(ValueError):
        lasso.lasso_solve(x, y, 0.0)


def test_kkt_check_at_zero_solution():
    rng = np.random.default_rng(2)
    x, y = random_design(rng, p=3, n=10)
    lam = np.abs(x.T @ y).max() / x.shape[0] + 0.05
    ok, viol = lasso.lasso_kkt_check(x, y, lam, np.zeros(3))
    assert ok and viol <= 1e-12


def test_kkt_check_accepts_solver_output():
    x = np.sqrt(2.0) * np.eye(2)
    y = np.sqrt(2.0) * np.array([3.0, 0.5])
    est = lasso.lasso_solve(x, y, 1.0)
    ok, viol = lasso.lasso_kkt_check(x, y, 1.0, est.beta_hat)
    assert ok and viol <= 1e-10


def test_kkt_check_rejects_ols_under_penalty():
    rng = np.random.default_rng(3)
    x = rng.standard_normal((6, 3))
    y = x @ np.array([2.0, -1.0, 0.5]) + 0.1 * rng.standard_normal(6)
    ols, *_ = np.linalg.lstsq(x, y, rcond=None)
    ok, viol = lasso.lasso_kkt_check(x, y, 0.5, ols)
    assert not ok and viol > 0.1


def test_solver_output_always_passes_check():
    rng = np.random.default_rng(4)
    for _ in range(15):
        x, y = random_design(rng)
        lam = 0.3 * np.abs(x.T @ y).max() / x.shape[0] + 1e-3
        est = lasso.lasso_solve(x, y, lam)
        ok, viol = lasso.lasso_kkt_check(x, y, lam, est.beta_hat)
        assert ok, viol


def test_objective_monotone_per_sweep():
    rng = np.random.default_rng(5)
    for _ in range(10):
        x, y = random_design(rng, p=4, n=12)
        lam = 0.1 * np.abs(x.T @ y).max() / x.shape[0] + 1e-3
        est = lasso.lasso_solve(x, y, lam, beta_init=rng.standard_normal(4))
        diffs = np.diff(est.objective_path)
        assert (diffs <= 1e-12 * max(1.0, est.objective_path[0])).all()


def test_single_column_matches_scalar_oracle():
    rng = np.random.default_rng(6)
    for _ in range(10):
        x, y = random_design(rng, p=1, n=12)
        lam = float(rng.uniform(0.01, 1.0))
        est = lasso.lasso_solve(x, y, lam)
        oracle = lasso_1d_oracle(x, y, lam)
        assert est.beta_hat[0] == pytest.approx(oracle, abs=1e-6)


def test_warm_starts_agree_when_not_parallel():
    rng = np.random.default_rng(7)
    x, y = random_design(rng, p=4, n=14)
    c = x.T @ x / x.shape[0]
    assert not uniqueness.lasso_parallelism_check(c).parallel
    lam = 0.2 * np.abs(x.T @ y).max() / x.shape[0]
    reference = lasso.lasso_solve(x, y, lam).beta_hat
    for _ in range(20):
        start = 2.0 * rng.standard_normal(4)
        est = lasso.lasso_solve(x, y, lam, beta_init=start)
        assert np.abs(est.beta_hat - reference).max() <= 1e-6


def test_convergence_failure_carries_best_iterate():
    rng = np.random.default_rng(8)
    x, y = random_design(rng, p=3, n=10)
    with pytest.raises(lasso.LassoConvergenceError) as excinfo:
        lasso.lasso_solve(x, y, 0.01, max_sweeps=1, tol=1e-16)
    est = excinfo.value.estimate
    assert est.beta_hat.shape == (3,)
    assert est.n_sweeps == 1


def test_kkt_check_requires_positive_penalty():
    with pytest.raises(ValueError):
        lasso.lasso_kkt_check(np.eye(2), [1.0, 1.0], 0.0, [0.0, 0.0])
