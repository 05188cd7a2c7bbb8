"""Scikit-learn compatible estimator wrappers around the solvers."""
from __future__ import annotations

from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .dantzig import dantzig_select, problem_from_design
from .lasso import lasso_solve


class DantzigSelector(RegressorMixin, BaseEstimator):
    """Linear regression by constrained l1 minimization.

    Minimizes ||coef||_1 subject to ||X'(y - X coef)||_inf / n <= alpha.
    No intercept is fit; center the data beforehand if one is needed.

    Attributes after ``fit``: ``coef_``, ``l1_norm_``, ``active_set_``
    (constraints met with equality), and ``problem_`` (the reduced form,
    handy for uniqueness diagnostics).
    """

    def __init__(self, alpha=1.0):
        self.alpha = alpha

    def fit(self, X, y):
        X, y = check_X_y(X, y, y_numeric=True)
        if self.alpha < 0:
            raise ValueError("alpha must be nonnegative")
        est = dantzig_select(X, y, float(self.alpha))
        self.coef_ = est.beta_hat
        self.l1_norm_ = est.l1_norm
        self.active_set_ = est.active_set
        self.problem_ = problem_from_design(X, y, float(self.alpha))
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X)
        return X @ self.coef_


class LassoRegressor(RegressorMixin, BaseEstimator):
    """Lasso via cyclic coordinate descent with a stationarity guarantee.

    Minimizes ||y - X coef||^2 / (2n) + alpha ||coef||_1 and only reports
    convergence once the subgradient conditions hold to 1e-6
    (``kkt_residual_`` records the final gap).
    """

    def __init__(self, alpha=1.0, max_sweeps=10_000, tol=1e-10):
        self.alpha = alpha
        self.max_sweeps = max_sweeps
        self.tol = tol

    def fit(self, X, y):
        X, y = check_X_y(X, y, y_numeric=True)
        if self.alpha < 0:
            raise ValueError("alpha must be nonnegative")
        est = lasso_solve(X, y, float(self.alpha),
                          max_sweeps=self.max_sweeps, tol=self.tol)
        self.coef_ = est.beta_hat
        self.objective_ = est.objective
        self.kkt_residual_ = est.kkt_residual
        self.n_sweeps_ = est.n_sweeps
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X)
        return X @ self.coef_
