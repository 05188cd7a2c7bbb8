"""Command-line surface: solving, uniqueness checks, simulation studies,
and plot-data emission.

Exit codes: 0 success; 2 parse/IO error (missing or malformed inputs,
unknown config keys); 3 infeasible problem or convergence failure (and
empty polygons); 4 dimension caps (enumeration cap, polygon needs p = 2);
5 scenario invariant violations (e.g. a parallel target matrix).

JSON reports carry ``"schema": "dantzig-kit/1"``, the resolved
configuration, and the library version.  Index sets are serialized
1-based; everything internal stays 0-based.  Matrices are CSV with no
header (``--header`` skips one line) and 17 significant digits on output,
so write/read round-trips are exact.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

import numpy as np

from . import __version__, asymptotics, lp
from .dantzig import (DantzigProblem, dantzig_select, feasible_polygon_2d,
                      problem_from_design, solution_set_diameter,
                      solve_dantzig_problem)
from .kkt import dantzig_certificate
from .lasso import LassoConvergenceError, lasso_solve
from .uniqueness import (duplicate_first_column_sampler, is_parallel,
                         lasso_parallelism_check,
                         random_design_parallel_fraction)

SCHEMA = "dantzig-kit/1"
SEED_ENV_VAR = "DANTZIG_KIT_SEED"
CSV_FMT = "%.17g"

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INFEASIBLE = 3
EXIT_DIMENSION = 4
EXIT_SCENARIO = 5


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return _jsonable(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _one_based(indices) -> list:
    return [int(i) + 1 for i in indices]


def _load_matrix(path: str, header: bool = False, name: str = "matrix") -> np.ndarray:
    if not os.path.exists(path):
        raise CliError(EXIT_PARSE, f"{name} file not found: {path}")
    try:
        data = np.loadtxt(path, delimiter=",", skiprows=1 if header else 0, ndmin=2)
    except Exception as exc:
        raise CliError(EXIT_PARSE, f"could not parse {name} file {path}: {exc}")
    return data


def _load_vector(path: str, header: bool = False, name: str = "vector") -> np.ndarray:
    return _load_matrix(path, header, name).ravel()


def _write_matrix(path: str, data: np.ndarray) -> None:
    np.savetxt(path, np.atleast_2d(data), delimiter=",", fmt=CSV_FMT)


def _resolve_seed(value) -> int:
    if value is not None:
        return int(value)
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise CliError(EXIT_PARSE, f"{SEED_ENV_VAR} must be an integer, got {env!r}")
    return 0


def _emit(report: dict, output) -> None:
    text = json.dumps(_jsonable(report), indent=2, sort_keys=True)
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
    else:
        print(text)


def _base_report(command: str, config: dict) -> dict:
    return {"schema": SCHEMA, "version": __version__,
            "command": command, "config": config}


def _witness_json(w) -> dict:
    return {"a": _one_based(w.a), "b": _one_based(w.b),
            "w": w.w.tolist(), "signs": w.signs.tolist()}


# --------------------------------------------------------------------------
# solve


def _cmd_solve(args) -> int:
    x = _load_matrix(args.x, args.header, "x")
    y = _load_vector(args.y, args.header, "y")
    if y.size != x.shape[0]:
        raise CliError(EXIT_PARSE, "x and y row counts disagree")
    if args.lam < 0:
        raise CliError(EXIT_PARSE, "--lambda must be nonnegative")
    report = _base_report("solve", {
        "method": args.method, "x": args.x, "y": args.y,
        "lambda": args.lam, "diameter": bool(args.diameter),
    })
    if args.method in ("dantzig", "both"):
        est = dantzig_select(x, y, args.lam)
        cert = dantzig_certificate(x, y, args.lam, est.beta_hat)
        block = {
            "status": est.status,
            "beta_hat": est.beta_hat,
            "l1_norm": est.l1_norm,
            "active_set": _one_based(est.active_set),
            "kkt": {
                "found": cert.found,
                "residual_bound": cert.slacks.get("residual_bound"),
                "l1_identity_gap": cert.slacks.get("l1_identity_gap"),
                "penalty_identity_gap": cert.slacks.get("penalty_identity_gap"),
            },
        }
        if args.diameter:
            diam, ranges = solution_set_diameter(problem_from_design(x, y, args.lam))
            block["diameter_inf"] = diam
            block["per_coordinate_ranges"] = ranges
        report["dantzig"] = block
    if args.method in ("lasso", "both"):
        try:
            est = lasso_solve(x, y, args.lam)
        except LassoConvergenceError as exc:
            raise CliError(EXIT_INFEASIBLE, f"lasso did not converge: {exc}")
        except ValueError as exc:
            raise CliError(EXIT_INFEASIBLE, str(exc))
        report["lasso"] = {
            "beta_hat": est.beta_hat,
            "objective": est.objective,
            "kkt_residual": est.kkt_residual,
            "n_sweeps": est.n_sweeps,
        }
    _emit(report, args.output)
    return EXIT_OK


# --------------------------------------------------------------------------
# uniqueness


def _cmd_uniqueness_check(args) -> int:
    c = _load_matrix(args.matrix, args.header, "matrix")
    try:
        rep = is_parallel(c, tol=args.tol, p_cap=args.p_cap)
    except ValueError as exc:
        msg = str(exc)
        raise CliError(EXIT_DIMENSION if "cap" in msg else EXIT_PARSE, msg)
    report = _base_report("uniqueness.check", {
        "matrix": args.matrix, "tol": args.tol, "p_cap": args.p_cap})
    report.update({
        "parallel": rep.parallel,
        "pairs_examined": rep.pairs_examined,
        "p_cap_respected": rep.p_cap_respected,
        "witnesses": [_witness_json(w) for w in rep.witnesses],
    })
    _emit(report, args.output)
    return EXIT_OK


def _cmd_uniqueness_lasso(args) -> int:
    c = _load_matrix(args.matrix, args.header, "matrix")
    try:
        rep = lasso_parallelism_check(c, tol=args.tol, p_cap=args.p_cap)
    except ValueError as exc:
        msg = str(exc)
        raise CliError(EXIT_DIMENSION if "cap" in msg else EXIT_PARSE, msg)
    report = _base_report("uniqueness.lasso-check", {
        "matrix": args.matrix, "tol": args.tol, "p_cap": args.p_cap})
    report.update({
        "condition_holds": rep.parallel,
        "subsets_examined": rep.pairs_examined,
        "witnesses": [_witness_json(w) for w in rep.witnesses],
    })
    _emit(report, args.output)
    return EXIT_OK


def _cmd_uniqueness_random(args) -> int:
    seed = _resolve_seed(args.seed)
    sampler = duplicate_first_column_sampler if args.duplicate_column else None
    try:
        frac = random_design_parallel_fraction(
            args.n, args.p, args.reps, seed, design_sampler=sampler)
    except ValueError as exc:
        msg = str(exc)
        raise CliError(EXIT_DIMENSION if "cap" in msg else EXIT_PARSE, msg)
    report = _base_report("uniqueness.random", {
        "n": args.n, "p": args.p, "reps": args.reps, "seed": seed,
        "duplicate_column": bool(args.duplicate_column)})
    report["fraction_parallel"] = frac
    _emit(report, args.output)
    return EXIT_OK


# --------------------------------------------------------------------------
# asymptotics


_SCENARIO_KEYS = {
    "beta_star", "c_target", "sigma", "lambda_rule", "lambda_value",
    "n_grid", "reps", "seed", "noise", "ks_max", "cov_rel_error_max",
    "err_to_limit_max", "atom_tol", "p_cap",
}


def _scenario_from_dict(raw: dict) -> asymptotics.ScenarioConfig:
    unknown = set(raw) - _SCENARIO_KEYS
    if unknown:
        raise CliError(EXIT_PARSE, f"unknown scenario keys: {sorted(unknown)}")
    missing = {"beta_star", "c_target", "sigma", "lambda_rule",
               "lambda_value", "n_grid", "reps", "seed"} - set(raw)
    if missing:
        raise CliError(EXIT_PARSE, f"scenario misses keys: {sorted(missing)}")
    try:
        return asymptotics.ScenarioConfig(**raw)
    except (TypeError, ValueError) as exc:
        raise CliError(EXIT_PARSE, f"bad scenario: {exc}")


def _default_limit_scenario() -> dict:
    return {
        "beta_star": [0.6, -0.45, 0.0],
        "c_target": np.eye(3).tolist(),
        "sigma": 1.0,
        "lambda_rule": "fixed",
        "lambda_value": 0.5,
        "n_grid": [500, 2000, 4000],
        "reps": 100,
        "seed": 0,
    }


def _default_distribution_scenario() -> dict:
    return {
        "beta_star": [2.0, -1.0, 0.0],
        "c_target": np.eye(3).tolist(),
        "sigma": 1.0,
        "lambda_rule": "root_n",
        "lambda_value": 1.0,
        "n_grid": [2000],
        "reps": 500,
        "seed": 0,
    }


def _load_scenario(args, defaults: dict, rule: str) -> asymptotics.ScenarioConfig:
    raw = dict(defaults)
    if args.config:
        if not os.path.exists(args.config):
            raise CliError(EXIT_PARSE, f"config file not found: {args.config}")
        try:
            with open(args.config, encoding="utf-8") as handle:
                raw = json.load(handle)
        except json.JSONDecodeError as exc:
            raise CliError(EXIT_PARSE, f"malformed config {args.config}: {exc}")
    if getattr(args, "lambda_value", None) is not None:
        raw["lambda_value"] = args.lambda_value
    if getattr(args, "beta_star", None) is not None:
        try:
            raw["beta_star"] = [float(t) for t in args.beta_star.split(",")]
        except ValueError:
            raise CliError(EXIT_PARSE, "--beta-star must be comma-separated numbers")
    if args.reps is not None:
        raw["reps"] = args.reps
    if getattr(args, "n", None) is not None:
        raw["n_grid"] = [args.n]
    if args.seed is not None or os.environ.get(SEED_ENV_VAR):
        raw["seed"] = _resolve_seed(args.seed)
    raw.setdefault("lambda_rule", rule)
    cfg = _scenario_from_dict(raw)
    if cfg.lambda_rule != rule:
        raise CliError(EXIT_PARSE, f"this study requires lambda_rule={rule!r}")
    try:
        cfg.validate()
    except ValueError as exc:
        raise CliError(EXIT_SCENARIO, f"invalid scenario: {exc}")
    return cfg


def _per_n_json(per_n: list) -> list:
    out = []
    for row in per_n:
        out.append({
            "n": row["n"],
            "mean": row["mean"],
            "cov": row["cov"],
            "quantiles": row["quantiles"],
            "mean_lindeberg": row["mean_lindeberg"],
            **{k: v for k, v in row.items()
               if k.startswith("median_err")},
        })
    return out


def _config_json(cfg: asymptotics.ScenarioConfig) -> dict:
    d = dataclasses.asdict(cfg)
    return _jsonable(d)


def _cmd_asymptotics_limit(args) -> int:
    cfg = _load_scenario(args, _default_limit_scenario(), "fixed")
    rep = asymptotics.simulate_almost_sure_limit(cfg, jobs=args.jobs)
    report = _base_report("asymptotics.limit", _config_json(cfg))
    report.update({
        "beta_limit": rep.beta_limit,
        "per_n": _per_n_json(rep.per_n),
        "kkt_checks": {"passed": rep.kkt_checks_passed,
                       "total": rep.kkt_checks_total},
        "pass_flags": rep.pass_flags,
    })
    if args.output_dir:
        os.makedirs(args.output_dir, exist_ok=True)
        curves = np.array([[row["n"], row["median_err_to_limit"],
                            row["median_err_to_beta_star"],
                            row["mean_lindeberg"]] for row in rep.per_n])
        path = os.path.join(args.output_dir, "convergence_curves.csv")
        _write_matrix(path, curves)
        report["sample_files"] = {"convergence_curves": path}
    _emit(report, args.output)
    return EXIT_OK


def _cmd_asymptotics_distribution(args) -> int:
    cfg = _load_scenario(args, _default_distribution_scenario(), "root_n")
    rep = asymptotics.simulate_limit_distribution(cfg, jobs=args.jobs)
    report = _base_report("asymptotics.distribution", _config_json(cfg))
    report.update({
        "per_n": _per_n_json(rep.per_n),
        "ks_stats": rep.ks_stats,
        "cov_rel_error": rep.cov_rel_error,
        "cov_rel_error_ols": rep.cov_rel_error_ols,
        "atom_mass_empirical": rep.atom_mass_empirical,
        "atom_mass_limiting": rep.atom_mass_limiting,
        "kkt_checks": {"passed": rep.kkt_checks_passed,
                       "total": rep.kkt_checks_total},
        "pass_flags": rep.pass_flags,
    })
    if args.output_dir:
        os.makedirs(args.output_dir, exist_ok=True)
        emp = os.path.join(args.output_dir, "empirical_samples.csv")
        lim = os.path.join(args.output_dir, "limiting_samples.csv")
        _write_matrix(emp, rep.empirical)
        _write_matrix(lim, rep.limiting)
        report["sample_files"] = {"empirical": emp, "limiting": lim}
    _emit(report, args.output)
    return EXIT_OK


def _cmd_asymptotics_continuity(args) -> int:
    seed = _resolve_seed(args.seed)
    if args.c:
        c = _load_matrix(args.c, args.header, "c")
        v = _load_vector(args.v, args.header, "v") if args.v else np.zeros(c.shape[0])
        lam = args.lam if args.lam is not None else 0.5
    else:
        rng = np.random.default_rng(np.random.SeedSequence([seed, 9]))
        p = args.p
        half = rng.standard_normal((2 * p, p))
        c = half.T @ half / (2 * p) + 0.5 * np.eye(p)
        v = rng.standard_normal(p)
        lam = args.lam if args.lam is not None else 0.5
    try:
        res = asymptotics.continuity_probe(c, v, lam, seed=seed)
    except ValueError as exc:
        raise CliError(EXIT_SCENARIO, f"invalid probe instance: {exc}")
    report = _base_report("asymptotics.continuity", {
        "seed": seed, "lambda": lam, "preset": "random" if not args.c else "file"})
    report.update({
        "base_solution": res.base_solution,
        "table": [{"eps": e, "d": d, "status": s} for e, d, s in res.rows],
        "passed": res.passed,
    })
    _emit(report, args.output)
    return EXIT_OK


# --------------------------------------------------------------------------
# polygon


def _cmd_polygon(args) -> int:
    c = _load_matrix(args.c, args.header, "c")
    v = _load_vector(args.v, args.header, "v")
    if c.shape != (2, 2) or v.size != 2:
        raise CliError(EXIT_DIMENSION, "polygon emission requires p = 2 inputs")
    if args.lam < 0:
        raise CliError(EXIT_PARSE, "--lambda must be nonnegative")
    try:
        prob = DantzigProblem(c=c, v=v, lam=args.lam)
    except ValueError as exc:
        raise CliError(EXIT_PARSE, str(exc))
    est = solve_dantzig_problem(prob)
    if est.status != "optimal":
        raise CliError(EXIT_INFEASIBLE, "feasible set is empty")
    verts = feasible_polygon_2d(prob, args.box)
    if verts.shape[0] == 0:
        raise CliError(EXIT_INFEASIBLE, "feasible set misses the clipping box")
    if args.output:
        _write_matrix(args.output, verts)
    report = _base_report("polygon", {
        "c": args.c, "v": args.v, "lambda": args.lam, "box": args.box,
        "output": args.output})
    report.update({
        "t0": est.l1_norm,
        "n_vertices": int(verts.shape[0]),
        "vertices": verts,
    })
    _emit(report, None if args.output is None else args.output_json)
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dantzig-kit",
        description="Dantzig selector / lasso solving, uniqueness analysis, "
                    "and large-sample simulation studies.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="fit an estimator to CSV data")
    solve.add_argument("--method", choices=["dantzig", "lasso", "both"],
                       default="dantzig")
    solve.add_argument("--x", required=True, help="predictor matrix CSV")
    solve.add_argument("--y", required=True, help="outcome column CSV")
    solve.add_argument("--lambda", dest="lam", type=float, required=True)
    solve.add_argument("--diameter", action="store_true",
                       help="also report the solution-set diameter")
    solve.add_argument("--header", action="store_true",
                       help="CSV inputs carry one header line")
    solve.add_argument("--output", help="write the JSON report here")
    solve.set_defaults(func=_cmd_solve)

    uniq = sub.add_parser("uniqueness", help="parallelism diagnostics")
    usub = uniq.add_subparsers(dest="subcommand", required=True)

    chk = usub.add_parser("check", help="decide parallelism for a matrix")
    chk.add_argument("--matrix", required=True)
    chk.add_argument("--tol", type=float, default=1e-8)
    chk.add_argument("--p-cap", type=int, default=10)
    chk.add_argument("--header", action="store_true")
    chk.add_argument("--output")
    chk.set_defaults(func=_cmd_uniqueness_check)

    lchk = usub.add_parser("lasso-check",
                           help="necessary condition for lasso multiplicity")
    lchk.add_argument("--matrix", required=True)
    lchk.add_argument("--tol", type=float, default=1e-8)
    lchk.add_argument("--p-cap", type=int, default=10)
    lchk.add_argument("--header", action="store_true")
    lchk.add_argument("--output")
    lchk.set_defaults(func=_cmd_uniqueness_lasso)

    rnd = usub.add_parser("random",
                          help="Monte Carlo parallelism rate for random designs")
    rnd.add_argument("--n", type=int, required=True)
    rnd.add_argument("--p", type=int, required=True)
    rnd.add_argument("--reps", type=int, required=True)
    rnd.add_argument("--seed", type=int)
    rnd.add_argument("--duplicate-column", action="store_true",
                     help="use the degenerate duplicated-column sampler")
    rnd.add_argument("--output")
    rnd.set_defaults(func=_cmd_uniqueness_random)

    asym = sub.add_parser("asymptotics", help="simulation studies")
    asub = asym.add_subparsers(dest="subcommand", required=True)

    limit = asub.add_parser("limit", help="fixed-penalty convergence study")
    limit.add_argument("--config", help="scenario JSON file")
    limit.add_argument("--lambda0", dest="lambda_value", type=float)
    limit.add_argument("--beta-star", dest="beta_star")
    limit.add_argument("--reps", type=int)
    limit.add_argument("--seed", type=int)
    limit.add_argument("--jobs", type=int, default=1)
    limit.add_argument("--output")
    limit.add_argument("--output-dir", help="directory for CSV curve dumps")
    limit.set_defaults(func=_cmd_asymptotics_limit)

    dist = asub.add_parser("distribution",
                           help="root-n-penalty limiting distribution study")
    dist.add_argument("--config", help="scenario JSON file")
    dist.add_argument("--lambda-tilde", dest="lambda_value", type=float)
    dist.add_argument("--beta-star", dest="beta_star")
    dist.add_argument("--reps", type=int)
    dist.add_argument("--n", type=int, help="single sample size shortcut")
    dist.add_argument("--seed", type=int)
    dist.add_argument("--jobs", type=int, default=1)
    dist.add_argument("--output")
    dist.add_argument("--output-dir", help="directory for CSV sample dumps")
    dist.set_defaults(func=_cmd_asymptotics_distribution)

    cont = asub.add_parser("continuity", help="solution-map continuity probe")
    cont.add_argument("--preset", choices=["random"], default="random")
    cont.add_argument("--p", type=int, default=3)
    cont.add_argument("--c", help="matrix CSV (overrides the preset)")
    cont.add_argument("--v", help="vector CSV")
    cont.add_argument("--lambda", dest="lam", type=float)
    cont.add_argument("--seed", type=int)
    cont.add_argument("--header", action="store_true")
    cont.add_argument("--output")
    cont.set_defaults(func=_cmd_asymptotics_continuity)

    poly = sub.add_parser("polygon", help="emit feasible-set vertices (p = 2)")
    poly.add_argument("--c", required=True, help="2x2 matrix CSV")
    poly.add_argument("--v", required=True, help="length-2 vector CSV")
    poly.add_argument("--lambda", dest="lam", type=float, required=True)
    poly.add_argument("--box", type=float, default=10.0,
                      help="clipping box halfwidth")
    poly.add_argument("--header", action="store_true")
    poly.add_argument("--output", help="write the vertex CSV here")
    poly.add_argument("--output-json", help="write the JSON report here")
    poly.set_defaults(func=_cmd_polygon)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags, which matches our parse-error code
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except lp.SolverStalledError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
