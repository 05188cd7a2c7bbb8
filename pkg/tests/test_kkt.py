import numpy as np
import pytest

from dantzig_kit import dantzig, kkt

from helpers import (feasible_suboptimal_point, lambda_grid, random_design)


def test_zero_solution_certificate():
    rng = np.random.default_rng(0)
    x, y = random_design(rng, p=3, n=10)
    lam = np.abs(x.T @ y).max() / x.shape[0] + 0.05
    cert = kkt.dantzig_certificate(x, y, lam, np.zeros(3))
    assert cert.found
    np.testing.assert_allclose(cert.mu_hat, np.zeros(3), atol=1e-9)


def test_hand_solved_identity_instance():
    # residual correlations (1, 0.5): coordinate 0 active, mu (2, 0)
    cert = kkt.dantzig_certificate(np.eye(2), [3.0, 1.0], 1.0, [1.0, 0.0])
    assert cert.found
    np.testing.assert_allclose(cert.mu_hat, [2.0, 0.0], atol=1e-8)
    np.testing.assert_array_equal(cert.active_set, [0])
    assert cert.slacks["dual_bound"] == pytest.approx(1.0, abs=1e-9)


def test_feasible_but_suboptimal_point_rejected():
    cert = kkt.dantzig_certificate(np.eye(2), [3.0, 1.0], 1.0, [1.5, 0.0])
    assert not cert.found
    assert cert.failure == "dual"


def test_infeasible_point_rejected_with_coordinate():
    cert = kkt.dantzig_certificate(np.eye(2), [3.0, 1.0], 1.0, [0.0, 0.0])
    assert not cert.found
    assert cert.failure == "primal"
    assert cert.violating_coordinate == 0


def test_identities_reconstructed_when_found():
    rng = np.random.default_rng(1)
    for _ in range(20):
        x, y = random_design(rng)
        n = x.shape[0]
        for lam in lambda_grid(x, y)[1:]:
            est = dantzig.dantzig_select(x, y, lam)
            cert = kkt.dantzig_certificate(x, y, lam, est.beta_hat)
            assert cert.found
            mu = cert.mu_hat
            beta = est.beta_hat
            lhs1 = mu @ (x.T @ x) @ beta / n
            assert lhs1 == pytest.approx(np.abs(beta).sum(), abs=1e-7)
            lhs2 = mu @ x.T @ (y - x @ beta) / n
            assert lhs2 == pytest.approx(lam * np.abs(mu).sum(), abs=1e-7)
            assert cert.slacks["l1_identity_gap"] <= 1e-7
            assert cert.slacks["penalty_identity_gap"] <= 1e-7


def test_perturbed_points_rejected():
    rng = np.random.default_rng(2)
    rejected = 0
    attempts = 0
    while rejected < 40 and attempts < 200:
        attempts += 1
        x, y = random_design(rng)
        lam = lambda_grid(x, y)[2]
        if lam <= 0:
            continue
        prob = dantzig.problem_from_design(x, y, lam)
        est = dantzig.solve_dantzig_problem(prob)
        cand = feasible_suboptimal_point(rng, prob.c, prob.v, prob.lam,
                                         est.beta_hat, est.l1_norm)
        if cand is None:
            continue
        cert = kkt.dantzig_certificate(x, y, lam, cand)
        assert not cert.found, (cand, est.beta_hat)
        assert cert.failure == "dual"
        rejected += 1
    assert rejected >= 40


def test_zero_penalty_certificate():
    # lam = 0: any feasible point has zero residual correlations; optimality
    # still requires a dual reproducing the support signs.
    rng = np.random.default_rng(3)
    x = rng.standard_normal((6, 2))
    y = x @ np.array([1.0, -2.0])
    est = dantzig.dantzig_select(x, y, 0.0)
    cert = kkt.dantzig_certificate(x, y, 0.0, est.beta_hat)
    assert cert.found


def test_dimension_validation():
    with pytest.raises(ValueError):
        kkt.dantzig_certificate(np.eye(2), [1.0, 1.0], 1.0, [0.0])
    with pytest.raises(ValueError):
        kkt.dantzig_certificate(np.eye(2), [1.0, 1.0], -1.0, [0.0, 0.0])
