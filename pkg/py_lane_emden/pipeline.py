"""The full sweep: ground state, continuation along a decreasing eps schedule,
Green's functions at the computed concentration point, and every check that
consumes them.
"""
from typing import List, Optional, Sequence
import logging

import attr
import numpy as np

from py_lane_emden.bvp.continuation import continue_branch
from py_lane_emden.bvp.solution import ContinuationRun, SolverMode
from py_lane_emden.errors import ContinuationError, DataError
from py_lane_emden.green.bundle import GreenBundle, build_bundle, evaluation_points
from py_lane_emden.green.domains import Ball, Domain
from py_lane_emden.ground_state import GroundState, find_ground_state
from py_lane_emden.hyperbola import Regime, SystemParams
from py_lane_emden.lab.pohozaev import base_point_drift, pohozaev_residual
from py_lane_emden.lab.profiles import KEEP_OUT, annulus_points, branch_profile_errors
from py_lane_emden.lab.rates import (
    Prediction,
    RateFit,
    RateSeries,
    Window,
    perturbed_prediction,
    perturbed_window,
    rate_fit,
    series_from_run,
    blowup_rate_prediction,
)
from py_lane_emden.lab.reports import CheckReport

__all__ = ["SweepResult", "needs_tilde", "green_for_run", "run_sweep", "pohozaev_tolerance"]

logger = logging.getLogger(__name__)


def pohozaev_tolerance(domain: Domain) -> float:
    """acceptance level of the Pohozaev residual: collocation on balls,
    second-order differences on boxes.
    """
    return 1e-6 if isinstance(domain, Ball) else 5e-2


def needs_tilde(params: SystemParams, mode: SolverMode) -> bool:
    if mode is SolverMode.exponent:
        return params.regime is Regime.subcritical
    return perturbed_window(params) in (Window.power_subcritical, Window.log_borderline)


def green_for_run(run: ContinuationRun, mode: SolverMode, grid: Optional[int] = None) -> GreenBundle:
    """Green's functions at the peak of the smallest-eps solution, evaluated
    on points at least 0.2 diameters away from it.
    """
    last = run.solutions[-1]
    domain = last.domain
    x0 = np.asarray(last.x_peak, dtype=float)
    params = SystemParams.critical(last.params.p, last.params.N)
    if isinstance(domain, Ball):
        points = annulus_points(domain, 0.5, 0.9)
    else:
        points = evaluation_points(domain, x0, n=7, keep_out=1.05 * KEEP_OUT)
    p = params.p if needs_tilde(params, mode) else None
    checks = ("i", "ii") if p is not None else ("i",)
    return build_bundle(domain, x0, p=p, grid_spec=grid, points=points, checks=checks)


@attr.s
class SweepResult:
    params = attr.ib()  # type: SystemParams
    mode = attr.ib()  # type: SolverMode
    gs = attr.ib()  # type: GroundState
    run = attr.ib()  # type: ContinuationRun
    green = attr.ib(default=None)  # type: Optional[GreenBundle]
    series = attr.ib(default=None)  # type: Optional[RateSeries]
    prediction = attr.ib(default=None)  # type: Optional[Prediction]
    fit = attr.ib(default=None)  # type: Optional[RateFit]
    checks = attr.ib(factory=list)  # type: List[CheckReport]
    failure = attr.ib(default=None)  # type: Optional[ContinuationError]

    @property
    def passed(self) -> bool:
        return self.failure is None and all(c.passed for c in self.checks)


def _pohozaev_checks(run: ContinuationRun, tol: float) -> List[CheckReport]:
    out = []
    for sol in run.solutions:
        res = pohozaev_residual(sol)
        inputs = dict(eps=sol.eps, y=res.y)
        out.append(CheckReport("pohozaev", inputs, res.lhs, res.rhs, res.rel_residual,
                               res.rel_residual <= tol, tol))
        drift = base_point_drift(sol)
        out.append(CheckReport("pohozaev_base_point", dict(eps=sol.eps, shift=[0.3, 0.0, 0.0]), None, None,
                               drift, drift <= tol, tol))
    return out


def run_sweep(
        p: float,
        N: int,
        domain: Domain,
        schedule: Sequence[float],
        mode: SolverMode = SolverMode.exponent,
        grid: Optional[int] = None,
        tol: Optional[float] = None,
        variable: str = "eps",
        max_insertions: int = 4,
        exponent_tolerance: Optional[float] = None,
        gs: Optional[GroundState] = None) -> SweepResult:
    """continuation plus the Pohozaev, rate and profile checks. A continuation
    failure keeps the accepted part of the branch; the result then carries
    the error in `failure`.
    """
    params = SystemParams.critical(p, N)
    if mode is SolverMode.perturbation:
        window = perturbed_window(params)
        logger.info("perturbed window: %s", window.value)
    if gs is None:
        gs = find_ground_state(params)
    failure = None
    try:
        run = continue_branch(p, N, domain, schedule, mode, gs=gs, grid=grid, tol=tol,
                              max_insertions=max_insertions)
    except ContinuationError as e:
        if e.run is None or not e.run.solutions:
            raise
        logger.error("continuation stopped after eps=%g: %s", e.last_good_eps, e)
        run, failure = e.run, e
    result = SweepResult(params, mode, gs, run, failure=failure)
    result.checks.extend(_pohozaev_checks(run, pohozaev_tolerance(domain)))

    result.green = green_for_run(run, mode, grid)
    phi = result.green.gt_diag if result.green.gt_diag is not None else result.green.g_diag
    result.series = series_from_run(run, params.regime, phi)
    if mode is SolverMode.exponent:
        result.prediction = blowup_rate_prediction(params, gs, result.green)
    else:
        result.prediction = perturbed_prediction(params, gs, result.green)
    try:
        result.fit = rate_fit(result.series, result.prediction, variable)
    except DataError as e:
        logger.error("no rate fit: %s", e)
        result.checks.append(CheckReport("rate_fit", dict(entries=len(run.solutions)), None, None,
                                         float("nan"), False, None, str(e)))
        return result
    fit = result.fit
    limit = exponent_tolerance if exponent_tolerance is not None else (
        0.05 if mode is SolverMode.exponent else 0.15)
    result.checks.append(CheckReport.compare(
        "rate_exponent", dict(p=p, N=N, mode=mode.value), fit.fitted_exponent, fit.predicted_exponent, limit))
    result.checks.append(CheckReport(
        "rate_constant", dict(p=p, N=N, mode=mode.value, variable=variable), fit.extrapolated_constant,
        fit.predicted_constant, abs(fit.extrapolated_constant - fit.predicted_constant) / abs(fit.predicted_constant),
        True, None, "reported only; stated constant {:.6g}".format(fit.stated_constant)))

    if mode is SolverMode.exponent:
        profiles = branch_profile_errors(run, gs, result.green)
        errors = np.array([r.v_error for r in profiles])
        decreasing = bool(np.all(np.diff(errors) < 0))
        result.checks.append(CheckReport(
            "profile_v_decreasing", dict(eps=[r.eps for r in profiles]), errors, None,
            float(errors[-1]), decreasing, None, "u law: {}".format(profiles[-1].u_law)))
    return result
