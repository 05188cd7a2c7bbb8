"""Generic dense LP solving: two-phase simplex with anti-cycling, a
feasibility mode, and range analysis over the optimal face."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class SolverStalledError(RuntimeError):
    """Pivot budget exhausted before reaching a conclusive status."""


@dataclass(frozen=True)
class SolverConfig:
    """All solver tolerances in one place.

    feasibility_tol is absolute, applied after row scaling; optimality_tol
    bounds reduced costs; active_tol (relative) classifies active
    constraints downstream.
    """

    feasibility_tol: float = 1e-9
    optimality_tol: float = 1e-9
    active_tol: float = 1e-7
    pivot_tol: float = 1e-9
    degeneracy_tol: float = 1e-11
    max_pivots: int = 50_000
    bland_after: int = 1_000
    face_slack: float = 1e-9


DEFAULT_CONFIG = SolverConfig()


@dataclass
class LinearProgram:
    """min c.x  s.t.  a_ub.x <= b_ub,  a_eq.x = b_eq,  x >= lower_bounds.

    A lower bound of None makes the variable free.  ``lower_bounds=None``
    means all variables are bounded below by zero.
    """

    c: np.ndarray
    a_ub: Optional[np.ndarray] = None
    b_ub: Optional[np.ndarray] = None
    a_eq: Optional[np.ndarray] = None
    b_eq: Optional[np.ndarray] = None
    lower_bounds: Optional[Sequence[Optional[float]]] = None

    def __post_init__(self):
        self.c = np.array(self.c, dtype=float).ravel()
        n = self.c.size
        if n == 0:
            raise ValueError("LP needs at least one variable")
        if not np.isfinite(self.c).all():
            raise ValueError("objective contains non-finite entries")
        self.a_ub, self.b_ub = _check_system(self.a_ub, self.b_ub, n, "ub")
        self.a_eq, self.b_eq = _check_system(self.a_eq, self.b_eq, n, "eq")
        if self.lower_bounds is None:
            self.lower_bounds = [0.0] * n
        else:
            lbs = list(self.lower_bounds)
            if len(lbs) != n:
                raise ValueError("lower_bounds length must match the variable count")
            for lb in lbs:
                if lb is not None and not np.isfinite(lb):
                    raise ValueError("lower bounds must be finite or None")
            self.lower_bounds = lbs

    @property
    def n_vars(self) -> int:
        return self.c.size


@dataclass
class LPSolution:
    status: str
    x: Optional[np.ndarray] = None
    objective_value: Optional[float] = None
    basis: Optional[list] = None
    dual: Optional[np.ndarray] = None  # rows ordered [eq; ub], zeros for vacuous rows


def _check_system(a, b, n, label):
    if a is None and b is None:
        return np.zeros((0, n)), np.zeros(0)
    a = np.atleast_2d(np.array(a, dtype=float))
    b = np.array(b, dtype=float).ravel()
    if a.shape[1] != n:
        raise ValueError(f"a_{label} has {a.shape[1]} columns, expected {n}")
    if a.shape[0] != b.size:
        raise ValueError(f"a_{label}/b_{label} row mismatch")
    if not (np.isfinite(a).all() and np.isfinite(b).all()):
        raise ValueError(f"{label} system contains non-finite entries")
    return a, b


class _Standardized:
    """Equality standard form  A z = b (b >= 0, z >= 0)  plus bookkeeping."""

    def __init__(self, lp: LinearProgram, config: SolverConfig = DEFAULT_CONFIG):
        n = lp.n_vars
        self.lp = lp
        shift = np.array([lb if lb is not None else 0.0 for lb in lp.lower_bounds])
        free = [j for j, lb in enumerate(lp.lower_bounds) if lb is None]
        self.shift = shift

        a_all = np.vstack([lp.a_eq, lp.a_ub])
        b_all = np.concatenate([lp.b_eq - lp.a_eq @ shift, lp.b_ub - lp.a_ub @ shift])
        m_eq = lp.a_eq.shape[0]
        is_eq = np.arange(a_all.shape[0]) < m_eq

        # Split free variables: extra negated columns appended after the originals.
        self.col_var = np.concatenate([np.arange(n), np.array(free, dtype=int)]).astype(int)
        self.col_sign = np.concatenate([np.ones(n), -np.ones(len(free))])
        a_exp = np.hstack([a_all, -a_all[:, free]]) if free else a_all
        c_exp = np.concatenate([lp.c, -lp.c[free]]) if free else lp.c.copy()

        # Row scaling by the max structural coefficient; vacuous rows resolved here.
        self.infeasible_row = False
        keep, scale = [], []
        for i in range(a_exp.shape[0]):
            s = np.abs(a_exp[i]).max() if a_exp.shape[1] else 0.0
            if s == 0.0:
                ok = abs(b_all[i]) <= config.feasibility_tol if is_eq[i] \
                    else b_all[i] >= -config.feasibility_tol
                if not ok:
                    self.infeasible_row = True
                continue
            keep.append(i)
            scale.append(s)
        keep = np.array(keep, dtype=int)
        scale = np.array(scale)
        self.kept_rows = keep
        self.row_is_eq = is_eq[keep]
        a_s = a_exp[keep] / scale[:, None]
        b_s = b_all[keep] / scale
        self.row_scale = scale

        # Slacks for the kept inequality rows.
        m = a_s.shape[0]
        ub_rows = np.flatnonzero(~self.row_is_eq)
        n_struct = a_s.shape[1]
        slack = np.zeros((m, ub_rows.size))
        for k, i in enumerate(ub_rows):
            slack[i, k] = 1.0
        a_s = np.hstack([a_s, slack])
        c_exp = np.concatenate([c_exp, np.zeros(ub_rows.size)])
        self.slack_col_of_row = {int(i): n_struct + k for k, i in enumerate(ub_rows)}

        # Make b nonnegative (flipping a row flips its slack coefficient too).
        self.row_sign = np.ones(m)
        neg = b_s < 0
        a_s[neg] *= -1.0
        b_s[neg] *= -1.0
        self.row_sign[neg] = -1.0

        self.a = a_s
        self.b = b_s
        self.c = c_exp
        self.n_struct = n_struct
        self.n_cols = a_s.shape[1]

    def initial_basis(self):
        """Slack columns where usable; -1 marks rows needing an artificial."""
        basis = np.full(self.a.shape[0], -1, dtype=int)
        for i in range(self.a.shape[0]):
            j = self.slack_col_of_row.get(i)
            if j is not None and self.row_sign[i] > 0:
                basis[i] = j
        return basis

    def to_original(self, z: np.ndarray) -> np.ndarray:
        x = self.shift.copy()
        np.add.at(x, self.col_var, self.col_sign * z[: self.col_var.size])
        return x

    def dual_to_original(self, y: np.ndarray) -> np.ndarray:
        out = np.zeros(self.lp.a_eq.shape[0] + self.lp.a_ub.shape[0])
        out[self.kept_rows] = y * self.row_sign / self.row_scale
        return out


def _pivot(t: np.ndarray, row: int, col: int) -> None:
    t[row] /= t[row, col]
    factors = t[:, col].copy()
    factors[row] = 0.0
    t -= np.outer(factors, t[row])
    t[:, col] = 0.0
    t[row, col] = 1.0


class _Budget:
    def __init__(self, config: SolverConfig):
        self.config = config
        self.pivots = 0
        self.degenerate = 0
        self.bland = False

    def spend(self, degenerate: bool) -> None:
        self.pivots += 1
        if degenerate:
            self.degenerate += 1
            if self.degenerate >= self.config.bland_after:
                self.bland = True
        if self.pivots > self.config.max_pivots:
            raise SolverStalledError(
                f"simplex exceeded {self.config.max_pivots} pivots")


def _run_simplex(t, basis, n_cols, allowed, budget: SolverConfig, state: _Budget):
    """Pivot until optimal or unbounded.  Last tableau row holds reduced costs
    and (negated) objective; rows 0..m-1 hold the constraints."""
    cfg = state.config
    m = t.shape[0] - 1
    while True:
        r = t[m, :n_cols]
        eligible = np.flatnonzero(allowed & (r < -cfg.optimality_tol))
        if eligible.size == 0:
            return OPTIMAL
        if state.bland:
            col = int(eligible[0])
        else:
            col = int(eligible[np.argmin(r[eligible])])
        a_col = t[:m, col]
        pos = np.flatnonzero(a_col > cfg.pivot_tol)
        if pos.size == 0:
            return UNBOUNDED
        ratios = t[pos, n_cols] / a_col[pos]
        theta = ratios.min()
        ties = pos[ratios <= theta + cfg.degeneracy_tol * (1.0 + abs(theta))]
        if state.bland:
            row = int(ties[np.argmin(basis[ties])])
        else:
            row = int(ties[np.argmax(a_col[ties])])
        _pivot(t, row, col)
        basis[row] = col
        t[:m, n_cols] = np.where(
            np.abs(t[:m, n_cols]) < cfg.degeneracy_tol, 0.0, t[:m, n_cols])
        state.spend(theta <= cfg.degeneracy_tol)


def _phase_one(std: _Standardized, config: SolverConfig, state: _Budget):
    """Returns (tableau, basis, kept_row_mask) or None when infeasible."""
    a, b = std.a, std.b
    m, n = a.shape
    basis = std.initial_basis()
    art_rows = np.flatnonzero(basis < 0)
    n_total = n + art_rows.size
    t = np.zeros((m + 1, n_total + 1))
    t[:m, :n] = a
    t[:m, n_total] = b
    for k, i in enumerate(art_rows):
        t[i, n + k] = 1.0
        basis[i] = n + k
    # Phase-1 reduced costs: cost 1 on artificials, eliminated on the basis.
    for i in art_rows:
        t[m] -= t[i]
    t[m, basis] = 0.0

    allowed = np.ones(n_total, dtype=bool)
    status = _run_simplex(t, basis, n_total, allowed, config, state)
    if status != OPTIMAL:  # phase 1 is bounded below by zero
        raise SolverStalledError("phase-1 simplex reported unbounded")
    obj1 = -t[m, n_total]
    if obj1 > config.feasibility_tol * max(1.0, np.abs(b).max() if b.size else 1.0):
        return None

    # Drive surviving artificials out of the basis; drop redundant rows.
    drop = []
    for i in range(m):
        if basis[i] < n:
            continue
        row = t[i, :n]
        cand = np.flatnonzero(np.abs(row) > config.pivot_tol)
        if cand.size:
            col = int(cand[np.argmax(np.abs(row[cand]))])
            _pivot(t, i, col)
            basis[i] = col
        else:
            drop.append(i)
    keep = np.array([i for i in range(m) if i not in drop], dtype=int)
    t = np.vstack([t[keep][:, list(range(n)) + [n_total]], t[[m]][:, list(range(n)) + [n_total]]])
    basis = basis[keep]
    mask = np.zeros(m, dtype=bool)
    mask[keep] = True
    return t, basis, mask


def _extract(std: _Standardized, t, basis, row_mask, config: SolverConfig) -> LPSolution:
    m = basis.size
    n = std.n_cols
    z = np.zeros(n)
    z[basis] = t[:m, n]
    # Re-solve the basic system against the untouched data to shed pivot drift.
    a_kept = std.a[row_mask]
    b_kept = std.b[row_mask]
    if m:
        try:
            zb = np.linalg.solve(a_kept[:, basis], b_kept)
            if np.isfinite(zb).all():
                z[basis] = zb
        except np.linalg.LinAlgError:
            pass
    np.clip(z, 0.0, None, out=z)
    x = std.to_original(z)
    dual = None
    if m:
        try:
            y = np.linalg.solve(a_kept[:, basis].T, std.c[basis])
            dual = np.zeros(std.a.shape[0])
            dual[row_mask] = y
            dual = std.dual_to_original(dual)
        except np.linalg.LinAlgError:
            dual = None
    else:
        dual = std.dual_to_original(np.zeros(std.a.shape[0]))
    return LPSolution(
        status=OPTIMAL,
        x=x,
        objective_value=float(std.lp.c @ x),
        basis=[int(j) for j in basis],
        dual=dual,
    )


def solve(lp: LinearProgram, config: SolverConfig = DEFAULT_CONFIG) -> LPSolution:
    """Solve the LP; the returned point is a basic feasible optimum."""
    std = _Standardized(lp, config)
    if std.infeasible_row:
        return LPSolution(status=INFEASIBLE)
    state = _Budget(config)
    if std.a.shape[0] == 0:
        if np.any(std.c < -config.optimality_tol):
            return LPSolution(status=UNBOUNDED)
        x = std.to_original(np.zeros(std.n_cols))
        return LPSolution(status=OPTIMAL, x=x, objective_value=float(lp.c @ x),
                          basis=[], dual=std.dual_to_original(np.zeros(0)))
    phase1 = _phase_one(std, config, state)
    if phase1 is None:
        return LPSolution(status=INFEASIBLE)
    t, basis, row_mask = phase1
    m = basis.size
    n = std.n_cols
    # Rebuild the cost row for the real objective.
    t[m, :n] = std.c
    t[m, n] = 0.0
    for i in range(m):
        if std.c[basis[i]] != 0.0:
            t[m] -= std.c[basis[i]] * t[i]
    t[m, basis] = 0.0
    allowed = np.ones(n, dtype=bool)
    status = _run_simplex(t, basis, n, allowed, config, state)
    if status == UNBOUNDED:
        return LPSolution(status=UNBOUNDED)
    return _extract(std, t, basis, row_mask, config)


def feasible(lp: LinearProgram, config: SolverConfig = DEFAULT_CONFIG):
    """Phase-1 only: returns (True, witness) or (False, None)."""
    std = _Standardized(lp, config)
    if std.infeasible_row:
        return False, None
    if std.a.shape[0] == 0:
        return True, std.to_original(np.zeros(std.n_cols))
    state = _Budget(config)
    phase1 = _phase_one(std, config, state)
    if phase1 is None:
        return False, None
    t, basis, row_mask = phase1
    m = basis.size
    z = np.zeros(std.n_cols)
    z[basis] = t[:m, std.n_cols]
    np.clip(z, 0.0, None, out=z)
    return True, std.to_original(z)


def linear_range_on_optimal_face(lp: LinearProgram, weights,
                                 config: SolverConfig = DEFAULT_CONFIG,
                                 base: Optional[LPSolution] = None):
    """Min and max of weights.x over the optimal face of ``lp``.

    The face is the feasible set intersected with c.x <= t0 + face_slack.
    Unbounded directions come back as -inf/inf.
    """
    w = np.asarray(weights, dtype=float).ravel()
    if w.size != lp.n_vars:
        raise ValueError("weights length must match the variable count")
    if base is None:
        base = solve(lp, config)
    if base.status != OPTIMAL:
        raise ValueError(f"LP must be optimal to take face ranges, got {base.status}")
    t0 = base.objective_value
    a_ub = np.vstack([lp.a_ub, lp.c[None, :]])
    b_ub = np.concatenate([lp.b_ub, [t0 + config.face_slack]])
    lo_hi = []
    for sign in (1.0, -1.0):
        face = LinearProgram(c=sign * w, a_ub=a_ub, b_ub=b_ub,
                             a_eq=lp.a_eq, b_eq=lp.b_eq,
                             lower_bounds=lp.lower_bounds)
        sol = solve(face, config)
        if sol.status == UNBOUNDED:
            lo_hi.append(-np.inf if sign > 0 else np.inf)
        elif sol.status == OPTIMAL:
            lo_hi.append(sign * sol.objective_value)
        else:
            raise RuntimeError("optimal face re-solve became infeasible")
    return lo_hi[0], lo_hi[1]


def coordinate_range_on_optimal_face(lp: LinearProgram, coord: int,
                                     config: SolverConfig = DEFAULT_CONFIG,
                                     base: Optional[LPSolution] = None):
    """Range of x[coord] over the optimal face."""
    if not 0 <= coord < lp.n_vars:
        raise ValueError("coordinate out of range")
    w = np.zeros(lp.n_vars)
    w[coord] = 1.0
    return linear_range_on_optimal_face(lp, w, config, base)
