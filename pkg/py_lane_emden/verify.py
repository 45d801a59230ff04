"""Acceptance suites at pinned desk-scale settings.

Each suite returns a list of `CheckReport`; a suite passes when every report
does. `rates` and `profiles` share the expensive sweeps through a cache
keyed by the sweep arguments.
"""
from typing import Callable, Dict, List
import logging
import math

import numpy as np
from scipy.special import gamma

from py_lane_emden.bvp.continuation import geometric_schedule, solve_on
from py_lane_emden.bvp.box import local_maxima
from py_lane_emden.bvp.solution import SolverMode
from py_lane_emden.errors import DomainError
from py_lane_emden.green.ball import regular_ball, robin_ball
from py_lane_emden.green.domains import Ball, Box
from py_lane_emden.green.identities import boundary_identity_check
from py_lane_emden.green.iterated import tilde_robin
from py_lane_emden.ground_state import find_ground_state, flux_residuals
from py_lane_emden.hyperbola import SystemParams
from py_lane_emden.lab.branch import mu_eps_report
from py_lane_emden.lab.profiles import concentration_report
from py_lane_emden.lab.rates import Window, perturbed_window
from py_lane_emden.lab.reports import CheckReport
from py_lane_emden.pipeline import SweepResult, run_sweep

__all__ = ["SUITES", "run_suite", "identities_suite", "rates_suite", "profiles_suite"]

logger = logging.getLogger(__name__)

BALL_SCHEDULE = geometric_schedule(0.5, 0.02, 0.8)
PERTURBED_SCHEDULE = geometric_schedule(100.0, 5.0, 0.75)

_sweeps = {}  # type: Dict[tuple, SweepResult]


def _sweep(p: float, N: int, mode: SolverMode, schedule: tuple) -> SweepResult:
    key = (p, N, mode, schedule)
    if key not in _sweeps:
        logger.info("sweep p=%g N=%d mode=%s over %d values of eps", p, N, mode.value, len(schedule))
        _sweeps[key] = run_sweep(p, N, Ball(1.0, N), schedule, mode)
    return _sweeps[key]


def _bubble_checks() -> List[CheckReport]:
    params = SystemParams.critical(5, 3)
    gs = find_ground_state(params)
    r = gs.profile.grid[gs.profile.grid <= 100.0]
    sup = float(np.max(np.abs(gs.profile.U(r) - (1.0 + r * r / 3.0) ** -0.5)))
    root3 = math.sqrt(3.0)
    return [
        CheckReport("bubble_profile", dict(p=5, N=3, r_max=100.0), sup, 0.0, sup, sup < 1e-6, 1e-6),
        CheckReport("bubble_a", dict(p=5, N=3), gs.a, root3, abs(gs.a - root3), abs(gs.a - root3) < 1e-4, 1e-4),
        CheckReport.compare("bubble_int_Uq", dict(p=5, N=3), gs.int_Uq, 4.0 * math.pi * root3, 1e-3),
    ]


def _flux_checks() -> List[CheckReport]:
    out = []
    for p in (5, 3, 2.5):
        params = SystemParams.critical(p, 3)
        gs = find_ground_state(params)
        for R, lhs, rhs in flux_residuals(gs, params, (1.0, 10.0, 100.0)):
            out.append(CheckReport.compare("flux_identity", dict(p=p, N=3, R=R), lhs, rhs, 1e-6))
    return out


def _robin_oracle(x: np.ndarray, R: float, N: int) -> float:
    sigma = 2.0 * math.pi ** (N / 2.0) / gamma(N / 2.0)
    return -(R / (R * R - float(x @ x))) ** (N - 2) / ((N - 2.0) * sigma)


def _robin_checks(seed: int = 7) -> List[CheckReport]:
    rng = np.random.RandomState(seed)
    worst = 0.0
    for _ in range(20):
        N = int(rng.choice([3, 4, 5]))
        R = float(rng.uniform(0.5, 3.0))
        direction = rng.normal(size=N)
        x = direction / np.linalg.norm(direction) * R * rng.uniform(0.0, 0.9)
        oracle = _robin_oracle(x, R, N)
        worst = max(worst, abs(float(robin_ball(x, R, N)) - oracle) / abs(oracle),
                    abs(float(regular_ball(x, x, R, N)) - oracle) / abs(oracle))
    out = [CheckReport("robin_oracle", dict(samples=20, seed=seed), worst, 0.0, worst, worst < 1e-10, 1e-10)]
    report = boundary_identity_check(Ball(1.0, 3), (0.0, 0.0, 0.0), "i")
    out.append(CheckReport.compare("identity_i", dict(R=1, N=3, x0=[0, 0, 0]),
                                   float(report.lhs), 1.0 / (4.0 * math.pi), 1e-6))
    return out


def _iterated_checks() -> List[CheckReport]:
    ball, x0 = Ball(1.0, 3), (0.0, 0.0, 0.0)
    report = boundary_identity_check(ball, x0, "ii", p=2.5)
    out = [CheckReport("identity_ii", dict(R=1, N=3, p=2.5, x0=list(x0)), report.lhs, report.rhs,
                       report.rel_residual, report.rel_residual < 1e-3, 1e-3)]
    tilde = tilde_robin(ball, 2.5, x0)
    gap = abs(tilde.phi_t - tilde.phi_direct)
    limit = 2.0 * tilde.phi_t_error + 1e-12
    out.append(CheckReport("tilde_robin_stability", dict(p=2.5, x0=list(x0)), tilde.phi_t, tilde.phi_direct,
                           gap, gap <= limit, limit))
    return out


def _window_checks() -> List[CheckReport]:
    out = []
    for p, N, expected in ((1, 9, Window.power_subcritical), (1, 8, Window.log_borderline), (3, 4, Window.log_n4)):
        got = perturbed_window(SystemParams.critical(p, N))
        out.append(CheckReport("perturbed_window", dict(p=p, N=N), got.value, expected.value,
                               0.0 if got is expected else 1.0, got is expected, 0.0))
    return out


def identities_suite() -> List[CheckReport]:
    return _bubble_checks() + _flux_checks() + _robin_checks() + _iterated_checks() + _window_checks()


def rates_suite() -> List[CheckReport]:
    out = []
    sup = _sweep(5, 3, SolverMode.exponent, BALL_SCHEDULE)
    out += [c for c in sup.checks if c.check.startswith("pohozaev")]
    if sup.fit is not None:
        out.append(CheckReport("rate_exponent", dict(p=5, N=3), sup.fit.fitted_exponent, 2.0,
                               abs(sup.fit.fitted_exponent - 2.0), abs(sup.fit.fitted_exponent - 2.0) <= 0.1, 0.1))
        out.append(CheckReport.compare("rate_constant", dict(p=5, N=3), sup.fit.extrapolated_constant,
                                       sup.fit.predicted_constant, 0.15))
    sub = _sweep(2.5, 3, SolverMode.exponent, BALL_SCHEDULE)
    if sub.fit is not None:
        out.append(CheckReport.compare("rate_exponent", dict(p=2.5, N=3), sub.fit.fitted_exponent, 3.5, 0.05))
        out.append(CheckReport.compare("rate_constant", dict(p=2.5, N=3), sub.fit.extrapolated_constant,
                                       sub.fit.predicted_constant, 0.25,
                                       "stated constant {:.6g}".format(sub.fit.stated_constant)))
    pert = _sweep(1, 9, SolverMode.perturbation, PERTURBED_SCHEDULE)
    if pert.fit is not None:
        out.append(CheckReport.compare("perturbed_rate_exponent", dict(p=1, N=9), pert.fit.fitted_exponent,
                                       0.4, 0.15))
    for result in (sup, sub, pert):
        if result.failure is not None or result.fit is None:
            out.append(CheckReport("sweep_complete", dict(p=result.params.p, N=result.params.N),
                                   None, None, float("nan"), False, None, str(result.failure)))
    return out


def _box_checks() -> List[CheckReport]:
    out = []
    box = Box.unit_cube()
    for p in (2.5, 5):
        params = SystemParams.from_eps(p, 3, 0.3)
        sol = solve_on(box, params, SolverMode.exponent, grid=65)
        peaks = local_maxima(sol)
        offset = float(np.max(np.abs(sol.x_peak - np.asarray(box.center))))
        cell = float(np.max(sol.grid.h))
        out.append(CheckReport("box_single_peak", dict(p=p, eps=0.3, grid=65), len(peaks), 1,
                               offset, len(peaks) == 1 and offset <= cell, cell))
    return out


def profiles_suite() -> List[CheckReport]:
    sup = _sweep(5, 3, SolverMode.exponent, BALL_SCHEDULE)
    out = [c for c in sup.checks if c.check == "profile_v_decreasing"]
    if out:
        last = out[0].residual
        out.append(CheckReport("profile_v_smallest_eps", dict(p=5, N=3), last, 0.0, last, last < 0.1, 0.1))
    sub = _sweep(2.5, 3, SolverMode.exponent, BALL_SCHEDULE)
    out += [c for c in sub.checks if c.check == "profile_v_decreasing"]
    for result in (sup, sub):
        inputs = dict(p=result.params.p, N=result.params.N)
        conc = concentration_report(result.run, result.gs)
        frac = float(conc.mass_fraction[-1])
        out.append(CheckReport("mass_fraction", inputs, frac, 0.95, frac, frac > 0.95, 0.95))
        out.append(CheckReport("domination", inputs, conc.domination, 3.0, conc.domination, conc.domination < 3.0, 3.0))
        mu = mu_eps_report(result.run)
        out.append(CheckReport("mu_eps", inputs, mu.min_mu_eps, 0.1, mu.min_mu_eps, mu.min_mu_eps > 0.1, 0.1))
    return out + _box_checks()


def _all() -> List[CheckReport]:
    return identities_suite() + rates_suite() + profiles_suite()


SUITES = dict(
    identities=identities_suite,
    rates=rates_suite,
    profiles=profiles_suite,
    all=_all,
)  # type: Dict[str, Callable[[], List[CheckReport]]]


def run_suite(name: str) -> List[CheckReport]:
    if name not in SUITES:
        raise DomainError("unknown suite {!r}; expected one of {}".format(name, ", ".join(sorted(SUITES))))
    reports = SUITES[name]()
    failed = [r.check for r in reports if not r.passed]
    logger.info("suite %s: %d checks, %d failed", name, len(reports), len(failed))
    return reports
