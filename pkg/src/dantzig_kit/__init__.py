"""dantzig-kit: Dantzig selector and lasso solving with uniqueness
analysis, KKT certificates, and large-sample Monte Carlo studies."""

__version__ = "0.1.0"

from .asymptotics import (
    AsymptoticsReport,
    ContinuityProbeResult,
    ScenarioConfig,
    continuity_probe,
    simulate_almost_sure_limit,
    simulate_limit_distribution,
    solve_limiting_problem,
)
from .dantzig import (
    DantzigEstimate,
    DantzigProblem,
    dantzig_select,
    feasible_polygon_2d,
    problem_from_design,
    solution_set_diameter,
    solve_dantzig_problem,
)
from .estimators import DantzigSelector, LassoRegressor
from .kkt import KktCertificate, dantzig_certificate
from .lasso import LassoConvergenceError, LassoEstimate, lasso_kkt_check, lasso_solve
from .lp import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    LinearProgram,
    LPSolution,
    SolverConfig,
    SolverStalledError,
)
from .uniqueness import (
    MultiplicityCheck,
    MultiplicityInstance,
    ParallelismReport,
    ParallelismWitness,
    duplicated_column_instance,
    is_parallel,
    lasso_parallelism_check,
    random_design_parallel_fraction,
    verify_multiplicity,
)

__all__ = [
    "__version__",
    "AsymptoticsReport",
    "ContinuityProbeResult",
    "DantzigEstimate",
    "DantzigProblem",
    "DantzigSelector",
    "KktCertificate",
    "LassoConvergenceError",
    "LassoEstimate",
    "LassoRegressor",
    "LinearProgram",
    "LPSolution",
    "MultiplicityCheck",
    "MultiplicityInstance",
    "ParallelismReport",
    "ParallelismWitness",
    "ScenarioConfig",
    "SolverConfig",
    "SolverStalledError",
    "OPTIMAL",
    "INFEASIBLE",
    "UNBOUNDED",
    "continuity_probe",
    "dantzig_certificate",
    "dantzig_select",
    "duplicated_column_instance",
    "feasible_polygon_2d",
    "is_parallel",
    "lasso_kkt_check",
    "lasso_parallelism_check",
    "lasso_solve",
    "problem_from_design",
    "random_design_parallel_fraction",
    "simulate_almost_sure_limit",
    "simulate_limit_distribution",
    "solution_set_diameter",
    "solve_dantzig_problem",
    "solve_limiting_problem",
    "verify_multiplicity",
]
