"""Command line: `lane-emden {ground,solve,sweep,green,verify}`.

Every command writes into `<out>/<timestamp>-<digest>/` with a
`manifest.json` at its root, also when it fails. Exit codes: 0 success,
1 check failure, 2 numerical failure, 64 usage error.
"""
from pathlib import Path
from typing import List, Optional
import argparse
import logging
import os
import sys
import time

from py_lane_emden.errors import EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE, LaneEmdenError

__all__ = ["main", "build_parser", "UsageError"]

logger = logging.getLogger(__name__)

_THREAD_VARIABLES = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_params(sub):
    sub.add_argument("--p", type=float, help="exponent of v in the first equation")
    sub.add_argument("--N", type=int, help="dimension")


def _add_domain(sub):
    sub.add_argument("--domain", choices=("ball", "box"), help="ball (radial) or box (3d grid)")
    sub.add_argument("--R", type=float, help="ball radius")
    sub.add_argument("--side", type=float, help="side of the cube [0, side]^3")
    sub.add_argument("--grid", type=int, help="nodes per axis on boxes")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lane-emden", description="Lane-Emden systems near the critical hyperbola")
    parser.add_argument("--out", default="runs", help="directory holding the run directories")
    parser.add_argument("--threads", type=int, help="BLAS/OpenMP thread count")
    parser.add_argument("--config", help="JSON configuration; flags override it")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("-q", "--quiet", action="store_true")
    commands = parser.add_subparsers(dest="command", parser_class=_Parser)

    ground = commands.add_parser("ground", help="ground state (U, V) on R^N")
    _add_params(ground)
    ground.add_argument("--tol", type=float)
    ground.add_argument("--rmax", type=float)

    solve = commands.add_parser("solve", help="one Dirichlet solve")
    _add_params(solve)
    _add_domain(solve)
    solve.add_argument("--eps", type=float, required=True)
    solve.add_argument("--mode", help="exponent (nearly-critical-exponent) or perturbation (linear-perturbation)")
    solve.add_argument("--tol", type=float)

    sweep = commands.add_parser("sweep", help="continuation, Pohozaev checks and rate fit")
    _add_params(sweep)
    _add_domain(sweep)
    sweep.add_argument("--eps", dest="schedule", help="schedule start:end:geoR or a decreasing comma list")
    sweep.add_argument("--mode")
    sweep.add_argument("--tol", type=float)
    sweep.add_argument("--extrapolation", choices=("eps", "inv_log"))

    green = commands.add_parser("green", help="Green, Robin and iterated Green functions")
    _add_params(green)
    _add_domain(green)
    green.add_argument("--x0", help="source point, comma separated")
    green.add_argument("--identities", action="store_true", default=None)
    green.add_argument("--tol", type=float)

    verify = commands.add_parser("verify", help="acceptance suites")
    verify.add_argument("suite", help="identities, rates, profiles or all")
    return parser


def _overrides(args) -> dict:
    get = lambda name: getattr(args, name, None)
    out = dict(
        ground=dict(p=get("p"), N=get("N")),
        solver=dict(domain=get("domain"), R=get("R"), side=get("side"), mode=get("mode"), grid=get("grid")),
        sweep=dict(schedule=get("schedule"), extrapolation=get("extrapolation")),
        green=dict(x0=get("x0"), identities=get("identities")),
        run=dict(eps=get("eps") if args.command == "solve" else None, suite=get("suite")),
    )
    if args.command == "ground":
        out["ground"].update(tol=get("tol"), rmax=get("rmax"))
    elif args.command == "green":
        out["green"].update(tol=get("tol"), grid=get("grid"))
        out["solver"].pop("grid")
    else:
        out["solver"]["tol"] = get("tol")
    return out


def _configure_logging(verbose: int, quiet: bool):
    level = logging.WARNING if quiet else (logging.DEBUG if verbose > 1 else logging.INFO)
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def _run_directory(out: str, digest: str) -> Path:
    stamp = time.strftime("%Y%m%dT%H%M%S", time.gmtime())
    path = Path(out) / "{}-{}".format(stamp, digest[:12])
    path.mkdir(parents=True, exist_ok=True)
    return path


def cmd_ground(config, run_dir: Path, manifest) -> int:
    from py_lane_emden import export
    from py_lane_emden.errors import AccuracyError
    from py_lane_emden.ground_state import find_ground_state, flux_residuals
    from py_lane_emden.hyperbola import SystemParams

    cfg = config.ground
    params = SystemParams.critical(cfg.p, cfg.N)
    gs = find_ground_state(params, tol=cfg.tol, r_max=cfg.rmax)
    radii = [R for R in (1.0, 10.0, 100.0) if R <= gs.profile.r_max]
    flux_tol = max(1e-6, 100.0 * cfg.tol)
    worst = max(abs(lhs - rhs) / abs(rhs) for _, lhs, rhs in flux_residuals(gs, params, radii))
    manifest.record_check("flux_identity", worst <= flux_tol, flux_tol)
    manifest.outputs.append(str(export.write_profile(run_dir / "profile.csv", gs)))
    tolerances = dict(shooting=cfg.tol, a=gs.a_error, b=gs.b_error, flux_identity=flux_tol)
    manifest.outputs.append(str(export.write_constants(run_dir / "constants.json", gs, tolerances)))
    if worst > flux_tol:
        raise AccuracyError("flux identity residual {:.3g} exceeds {:.3g}".format(worst, flux_tol), worst)
    return EXIT_OK


def cmd_solve(config, run_dir: Path, manifest) -> int:
    from py_lane_emden import export
    from py_lane_emden.bvp.continuation import params_for, solve_on
    from py_lane_emden.errors import DomainError
    from py_lane_emden.green.domains import Ball
    from py_lane_emden.ground_state import find_ground_state
    from py_lane_emden.hyperbola import SystemParams
    from py_lane_emden.lab.pohozaev import base_point_drift, pohozaev_residual
    from py_lane_emden.lab.reports import CheckReport
    from py_lane_emden.pipeline import pohozaev_tolerance

    if config.eps is None:
        raise DomainError("solve needs --eps")
    cfg = config.solver
    p, N = config.ground.p, config.ground.N
    domain = cfg.build(N)
    params = params_for(p, N, config.eps, cfg.mode)
    gs = find_ground_state(SystemParams.critical(p, N)) if isinstance(domain, Ball) else None
    sol = solve_on(domain, params, cfg.mode, gs=gs, grid=cfg.grid, tol=cfg.tol)
    tol = pohozaev_tolerance(domain)
    res = pohozaev_residual(sol)
    report = CheckReport("pohozaev", dict(eps=sol.eps, y=res.y), res.lhs, res.rhs, res.rel_residual,
                         res.rel_residual <= tol, tol)
    drift = base_point_drift(sol)
    manifest.record_check("pohozaev", report.passed, tol)
    manifest.record_check("pohozaev_base_point", drift <= tol, tol)
    manifest.outputs.append(str(export.write_solution(run_dir / "solution.csv", sol)))
    out = dict(solution=sol.summary(), pohozaev=report.as_dict(), base_point_drift=drift, tolerance=cfg.tol)
    manifest.outputs.append(str(export.write_json(run_dir / "pohozaev.json", out)))
    return EXIT_OK if manifest.all_passed else EXIT_CHECK_FAILED


def _write_sweep(result, run_dir: Path, manifest):
    from py_lane_emden import export

    if result.fit is not None:
        manifest.outputs.append(str(export.write_branch(run_dir / "branch.csv", result.series, result.fit)))
        fit = result.fit.as_dict()
        fit["prediction"] = result.prediction.as_dict()
        manifest.outputs.append(str(export.write_json(run_dir / "ratefit.json", fit)))
    checks = [c.as_dict() for c in result.checks]
    manifest.outputs.append(str(export.write_json(run_dir / "checks.json", dict(checks=checks))))
    if result.green is not None:
        manifest.outputs.append(str(export.write_bundle(run_dir / "bundle.json", result.green)))
    for c in result.checks:
        manifest.record_check("{}:{}".format(c.check, c.inputs.get("eps", "")).rstrip(":"), c.passed, c.tolerance)


def cmd_sweep(config, run_dir: Path, manifest) -> int:
    from py_lane_emden.errors import ContinuationError
    from py_lane_emden.pipeline import run_sweep

    cfg = config.solver
    p, N = config.ground.p, config.ground.N
    result = run_sweep(p, N, cfg.build(N), config.sweep.eps_values, cfg.mode, grid=cfg.grid, tol=cfg.tol,
                       variable=config.sweep.extrapolation, max_insertions=config.sweep.max_insertions)
    manifest.last_good_eps = result.run.last_good_eps
    _write_sweep(result, run_dir, manifest)
    if result.failure is not None:
        raise ContinuationError(str(result.failure), last_good_eps=result.run.last_good_eps, run=result.run)
    return EXIT_OK if manifest.all_passed else EXIT_CHECK_FAILED


def cmd_green(config, run_dir: Path, manifest) -> int:
    from py_lane_emden import export
    from py_lane_emden.green.bundle import build_bundle
    from py_lane_emden.green.identities import BALL_TOLERANCE, IDENTITIES

    cfg = config.green
    N = config.ground.N
    domain = config.solver.build(N)
    p = config.ground.p
    checks = IDENTITIES if cfg.identities else ()
    bundle = build_bundle(domain, cfg.point(N), p=p, grid_spec=cfg.grid, checks=checks, tol=cfg.tol)
    for report in bundle.reports:
        limit = cfg.tol if cfg.tol is not None else (1e-3 if report.which in ("ii", "vec4") else BALL_TOLERANCE)
        if domain.smooth or cfg.tol is not None:
            manifest.record_check("identity_" + report.which, report.passed(limit), limit)
    manifest.outputs.append(str(export.write_bundle(run_dir / "bundle.json", bundle)))
    manifest.outputs.append(str(export.write_field(run_dir / "field.csv", bundle)))
    return EXIT_OK if manifest.all_passed else EXIT_CHECK_FAILED


def cmd_verify(config, run_dir: Path, manifest) -> int:
    from py_lane_emden import export
    from py_lane_emden.verify import run_suite

    reports = run_suite(config.suite)
    for r in reports:
        manifest.record_check(r.check, r.passed, r.tolerance)
    failed = [r.check for r in reports if not r.passed]
    out = dict(suite=config.suite, passed=not failed, failed=failed, checks=[r.as_dict() for r in reports])
    manifest.outputs.append(str(export.write_json(run_dir / "verify.json", out)))
    if failed:
        logger.error("failing checks: %s", ", ".join(failed))
        return EXIT_CHECK_FAILED
    return EXIT_OK


COMMANDS = dict(ground=cmd_ground, solve=cmd_solve, sweep=cmd_sweep, green=cmd_green, verify=cmd_verify)


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required: " + ", ".join(COMMANDS))
    except UsageError as e:
        sys.stderr.write("lane-emden: {}\n".format(e))
        return EXIT_USAGE
    if args.threads is not None:
        if args.threads < 1:
            sys.stderr.write("lane-emden: --threads must be positive\n")
            return EXIT_USAGE
        for name in _THREAD_VARIABLES:
            os.environ[name] = str(args.threads)
    _configure_logging(args.verbose, args.quiet)

    from py_lane_emden.config import RunManifest, config_digest, load_config
    from py_lane_emden import export

    try:
        config = load_config(args.command, args.config, _overrides(args))
    except LaneEmdenError as e:
        sys.stderr.write("lane-emden: {}\n".format(e))
        return e.exit_code
    if args.command == "verify":
        from py_lane_emden.verify import SUITES
        if config.suite not in SUITES:
            sys.stderr.write("lane-emden: unknown suite {!r}; expected one of {}\n".format(
                config.suite, ", ".join(sorted(SUITES))))
            return EXIT_USAGE

    digest = config_digest(config)
    run_dir = _run_directory(args.out, digest)
    manifest = RunManifest(command=args.command, config=config.to_dict(), digest=digest, threads=args.threads)
    started = time.monotonic()
    try:
        code = COMMANDS[args.command](config, run_dir, manifest)
    except LaneEmdenError as e:
        logger.error("%s", e)
        sys.stderr.write("lane-emden: {}\n".format(e))
        manifest.error = "{}: {}".format(type(e).__name__, e)
        manifest.last_good_eps = getattr(e, "last_good_eps", manifest.last_good_eps)
        code = e.exit_code
    manifest.finish(code, time.monotonic() - started)
    export.write_json(run_dir / "manifest.json", manifest.as_dict())
    logger.info("run directory %s (exit %d)", run_dir, code)
    return code
