import numpy as np
import pytest

from dantzig_kit import dantzig, kkt, uniqueness
from dantzig_kit.dantzig import DantzigProblem

from helpers import l1_min_oracle, lambda_grid, random_design


def test_decoupled_soft_threshold():
    est = dantzig.solve_dantzig_problem(
        DantzigProblem(c=np.eye(2), v=[3.0, -0.4], lam=1.0))
    assert est.status == "optimal"
    np.testing.assert_allclose(est.beta_hat, [2.0, 0.0], atol=1e-9)
    np.testing.assert_array_equal(est.active_set, [0])


def test_zero_penalty_inverts():
    c = np.array([[2.0, 0.3], [0.3, 1.0]])
    v = np.array([1.0, -2.0])
    est = dantzig.solve_dantzig_problem(DantzigProblem(c=c, v=v, lam=0.0))
    np.testing.assert_allclose(est.beta_hat, np.linalg.solve(c, v), atol=1e-9)


def test_large_penalty_returns_zero():
    c = np.array([[2.0, 0.3], [0.3, 1.0]])
    v = np.array([1.0, -2.0])
    est = dantzig.solve_dantzig_problem(
        DantzigProblem(c=c, v=v, lam=float(np.abs(v).max())))
    np.testing.assert_allclose(est.beta_hat, [0.0, 0.0], atol=1e-12)
    assert est.l1_norm == pytest.approx(0.0, abs=1e-12)


def test_infeasible_when_target_escapes_range():
    est = dantzig.solve_dantzig_problem(DantzigProblem(
        c=[[1.0, 0.0], [0.0, 0.0]], v=[0.0, 1.0], lam=0.3))
    assert est.status == "infeasible"
    assert est.beta_hat is None


def test_select_orthogonal_design():
    est = dantzig.dantzig_select(np.eye(2), [3.0, 1.0], 1.0)
    np.testing.assert_allclose(est.beta_hat, [1.0, 0.0], atol=1e-9)


def test_select_all_zero_threshold():
    rng = np.random.default_rng(0)
    x, y = random_design(rng, p=3, n=12)
    lam_max = np.abs(x.T @ y).max() / x.shape[0]
    est = dantzig.dantzig_select(x, y, lam_max * 1.0001)
    np.testing.assert_allclose(est.beta_hat, np.zeros(3), atol=1e-10)


def test_select_zero_penalty_is_ols():
    rng = np.random.default_rng(1)
    x = rng.standard_normal((2, 2))
    y = rng.standard_normal(2)
    est = dantzig.dantzig_select(x, y, 0.0)
    np.testing.assert_allclose(est.beta_hat, np.linalg.solve(x, y), atol=1e-8)


def test_l1_norm_matches_point():
    rng = np.random.default_rng(2)
    for _ in range(20):
        x, y = random_design(rng)
        for lam in lambda_grid(x, y)[1:]:
            est = dantzig.dantzig_select(x, y, lam)
            assert est.l1_norm == pytest.approx(np.abs(est.beta_hat).sum(), abs=1e-10)


def test_constraint_satisfied_at_solution():
    rng = np.random.default_rng(3)
    for _ in range(20):
        x, y = random_design(rng)
        prob = dantzig.problem_from_design(x, y, lambda_grid(x, y)[2])
        est = dantzig.solve_dantzig_problem(prob)
        assert np.abs(prob.c @ est.beta_hat - prob.v).max() <= prob.lam + 1e-9


def test_active_set_realizes_boundary():
    prob = DantzigProblem(c=np.eye(2), v=[3.0, -0.4], lam=1.0)
    est = dantzig.solve_dantzig_problem(prob)
    resid = np.abs(prob.c @ est.beta_hat - prob.v)
    for j in est.active_set:
        assert abs(resid[j] - prob.lam) <= 1e-7 * max(1.0, prob.lam)


def test_matches_vertex_enumeration_oracle():
    rng = np.random.default_rng(4)
    for _ in range(25):
        x, y = random_design(rng)
        for lam in lambda_grid(x, y):
            prob = dantzig.problem_from_design(x, y, lam)
            est = dantzig.solve_dantzig_problem(prob)
            oracle = l1_min_oracle(prob.c, prob.v, lam)
            assert oracle is not None
            assert est.l1_norm == pytest.approx(oracle[0], abs=1e-8)


def test_no_sampled_feasible_point_beats_optimum():
    rng = np.random.default_rng(5)
    c = np.array([[1.5, 0.4, 0.0], [0.4, 1.0, -0.2], [0.0, -0.2, 0.8]])
    v = np.array([0.9, -0.3, 0.5])
    lam = 0.25
    est = dantzig.solve_dantzig_problem(DantzigProblem(c=c, v=v, lam=lam))
    z = rng.uniform(-lam, lam, size=(10_000, 3))
    sampled = np.linalg.solve(c, (v + z).T).T
    assert np.abs(sampled).sum(axis=1).min() >= est.l1_norm - 1e-9


def test_l1_norm_nonincreasing_in_lambda():
    rng = np.random.default_rng(6)
    for _ in range(5):
        x, y = random_design(rng, p=3)
        lam_max = np.abs(x.T @ y).max() / x.shape[0]
        norms = [dantzig.dantzig_select(x, y, lam).l1_norm
                 for lam in np.linspace(0.0, 1.1 * lam_max, 20)]
        diffs = np.diff(norms)
        assert (diffs <= 1e-9).all()


def test_consistent_target_recovered_at_zero_penalty():
    rng = np.random.default_rng(7)
    for _ in range(10):
        p = int(rng.integers(1, 5))
        half = rng.standard_normal((p + 3, p))
        c = half.T @ half / (p + 3)
        beta = rng.standard_normal(p)
        est = dantzig.solve_dantzig_problem(
            DantzigProblem(c=c, v=c @ beta, lam=0.0))
        np.testing.assert_allclose(est.beta_hat, beta, atol=1e-8)


def test_every_solution_carries_certificate():
    rng = np.random.default_rng(8)
    for _ in range(15):
        x, y = random_design(rng)
        for lam in lambda_grid(x, y)[1:]:
            est = dantzig.dantzig_select(x, y, lam)
            cert = kkt.dantzig_certificate(x, y, lam, est.beta_hat)
            assert cert.found


def test_diameter_of_duplicated_column_instance():
    inst = uniqueness.duplicated_column_instance()
    prob = dantzig.problem_from_design(inst.x, inst.y, inst.lam)
    diam, ranges = dantzig.solution_set_diameter(prob)
    assert diam == pytest.approx(1.0, abs=1e-6)
    for lo, hi in ranges:
        assert lo == pytest.approx(0.0, abs=1e-6)
        assert hi == pytest.approx(1.0, abs=1e-6)


def test_diameter_zero_at_zero_penalty():
    c = np.array([[2.0, 0.3], [0.3, 1.0]])
    diam, _ = dantzig.solution_set_diameter(
        DantzigProblem(c=c, v=[1.0, -2.0], lam=0.0))
    assert diam <= 1e-7


def test_diameter_zero_for_decoupled_problem():
    diam, ranges = dantzig.solution_set_diameter(
        DantzigProblem(c=np.eye(2), v=[3.0, -0.4], lam=1.0))
    assert diam <= 1e-7
    assert ranges[0][0] == pytest.approx(2.0, abs=1e-7)


def test_diameter_zero_whenever_not_parallel():
    rng = np.random.default_rng(9)
    for _ in range(6):
        p = int(rng.integers(2, 4))
        half = rng.standard_normal((p + 4, p))
        c = half.T @ half / (p + 4)
        if uniqueness.is_parallel(c).parallel:
            continue
        v = rng.standard_normal(p)
        for lam in (0.0, 0.2, 1.0):
            diam, _ = dantzig.solution_set_diameter(
                DantzigProblem(c=c, v=v, lam=lam))
            assert diam <= 1e-7


def test_polygon_square():
    verts = dantzig.feasible_polygon_2d(
        DantzigProblem(c=np.eye(2), v=[0.0, 0.0], lam=1.0), 10.0)
    assert verts.shape == (4, 2)
    got = {tuple(np.round(v, 9)) for v in verts}
    assert got == {(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)}
    assert _signed_area(verts) > 0


def test_polygon_single_point():
    c = np.array([[2.0, 0.3], [0.3, 1.0]])
    v = np.array([1.0, -2.0])
    verts = dantzig.feasible_polygon_2d(DantzigProblem(c=c, v=v, lam=0.0), 10.0)
    assert verts.shape[0] == 1
    np.testing.assert_allclose(verts[0], np.linalg.solve(c, v), atol=1e-8)


def test_polygon_strip():
    verts = dantzig.feasible_polygon_2d(DantzigProblem(
        c=0.5 * np.array([[1.0, 1.0], [1.0, 1.0]]), v=[1.0, 1.0], lam=0.5), 10.0)
    assert verts.shape == (4, 2)
    got = {tuple(np.round(v, 9)) for v in verts}
    assert got == {(10.0, -9.0), (10.0, -7.0), (-7.0, 10.0), (-9.0, 10.0)}
    assert _signed_area(verts) == pytest.approx(36.0, abs=1e-9)


def test_polygon_empty():
    verts = dantzig.feasible_polygon_2d(DantzigProblem(
        c=[[1.0, 0.0], [0.0, 0.0]], v=[0.0, 1.0], lam=0.3), 10.0)
    assert verts.shape == (0, 2)


def test_polygon_requires_two_dims():
    with pytest.raises(ValueError):
        dantzig.feasible_polygon_2d(
            DantzigProblem(c=np.eye(3), v=np.zeros(3), lam=1.0), 5.0)


def test_problem_validation():
    with pytest.raises(ValueError):
        DantzigProblem(c=[[1.0, 0.5], [0.2, 1.0]], v=[0.0, 0.0], lam=1.0)
    with pytest.raises(ValueError):
        DantzigProblem(c=np.eye(2), v=[0.0, 0.0], lam=-0.5)
    with pytest.raises(ValueError):
        DantzigProblem(c=np.eye(2), v=[0.0], lam=1.0)


def _signed_area(verts):
    x = verts[:, 0]
    y = verts[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))
