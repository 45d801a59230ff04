"""Limits of the solutions away from the concentration point.

Along the branch, with critical alpha and beta,

    u_max v                          ->  (int U^q) G(x, x0)
    u_max^(beta/alpha) u             ->  (int V^p) G(x, x0)                      p > N/(N-2)
    u_max^(beta/alpha) u / log u_max ->  (1/alpha) a^(N/(N-2)) G(x, x0)           p = N/(N-2)
    u_max^p u                        ->  (int U^q)^p G~(x, x0)                   p < N/(N-2)

uniformly on compact sets away from x0. Besides these, the module measures
where the mass of v^(p+1) sits and how fast the solutions die out away from
the peak.
"""
from typing import List
import logging
import math

import attr
import numpy as np
from scipy.interpolate import RegularGridInterpolator

from py_lane_emden.bvp.box import box_integral
from py_lane_emden.bvp.rescale import rescale_solution
from py_lane_emden.bvp.solution import ContinuationRun, DomainSolution
from py_lane_emden.errors import CompositionError, ContractError, DataError
from py_lane_emden.green.bundle import GreenBundle
from py_lane_emden.ground_state import GroundState
from py_lane_emden.hyperbola import Regime
from py_lane_emden.quadrature import radial_integral

__all__ = [
    "ProfileReport",
    "ConcentrationReport",
    "DecayReport",
    "field_values",
    "annulus_points",
    "limit_profile_check",
    "branch_profile_errors",
    "concentration_report",
    "decay_away_report",
    "KEEP_OUT",
]

logger = logging.getLogger(__name__)

# evaluation points must stay this far (times the diameter) from the peak
KEEP_OUT = 0.2


def field_values(sol: DomainSolution, points: np.ndarray):
    """u and v of a solution at arbitrary points of its domain."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if sol.radial:
        r = np.linalg.norm(points - np.asarray(sol.domain.center), axis=-1)
        if sol.profile is not None:
            Y = sol.profile(r)
            return Y[0], Y[2]
        return np.interp(r, sol.grid, sol.u_field), np.interp(r, sol.grid, sol.v_field)
    axes = sol.grid.axes
    iu = RegularGridInterpolator(axes, sol.u_field, method="cubic")
    iv = RegularGridInterpolator(axes, sol.v_field, method="cubic")
    return iu(points), iv(points)


@attr.s
class ProfileReport:
    eps = attr.ib()  # type: float
    u_max = attr.ib()  # type: float
    v_error = attr.ib()  # type: float
    u_error = attr.ib()  # type: float
    u_law = attr.ib()  # type: str
    n_points = attr.ib()  # type: int

    def as_dict(self) -> dict:
        return attr.asdict(self)


def _sup_relative(scaled: np.ndarray, limit: np.ndarray) -> float:
    return float(np.max(np.abs(scaled - limit) / np.abs(limit)))


def _u_limit(sol: DomainSolution, gs: GroundState, green: GreenBundle, u: np.ndarray):
    params = sol.params
    N, p = params.N, params.p
    alpha, beta = params.alpha, params.beta
    m = sol.u_max
    G = np.abs(green.G_field)
    if gs.regime is Regime.supercritical:
        return m ** (beta / alpha) * u, gs.int_Vp * G, "u_max^(beta/alpha) u"
    if gs.regime is Regime.logarithmic:
        limit = gs.a ** (N / (N - 2.0)) * G / alpha
        return m ** (beta / alpha) * u / math.log(m), limit, "u_max^(beta/alpha) u / log u_max"
    if green.Gt_field is None:
        raise CompositionError("the tail-subcritical u profile needs G~ in the Green bundle (build it with p)")
    # (beta + p(N-2) - N)/alpha equals p on the critical hyperbola
    exponent = (beta + p * (N - 2.0) - N) / alpha
    return m ** exponent * u, gs.int_Uq ** p * np.abs(green.Gt_field), "u_max^p u"


def limit_profile_check(sol: DomainSolution, gs: GroundState, green: GreenBundle) -> ProfileReport:
    """sup relative errors of the scaled solution against its limit field on
    the evaluation points of the Green bundle.
    """
    if gs.params.p != sol.params.p or gs.params.N != sol.params.N:
        raise CompositionError("ground state and solution belong to different (p, N)")
    pts = green.points
    reach = np.linalg.norm(pts - sol.x_peak, axis=-1)
    limit_distance = KEEP_OUT * sol.domain.diameter
    if np.any(reach < limit_distance):
        raise ContractError("evaluation set comes within {:.3g} of the peak (need >= {:.3g})".format(
            float(np.min(reach)), limit_distance))
    u, v = field_values(sol, pts)
    v_error = _sup_relative(sol.u_max * v, gs.int_Uq * np.abs(green.G_field))
    scaled_u, limit_u, law = _u_limit(sol, gs, green, u)
    report = ProfileReport(sol.eps, sol.u_max, v_error, _sup_relative(scaled_u, limit_u), law, len(pts))
    logger.debug("profile errors at eps=%g: v %.3g, u %.3g", sol.eps, report.v_error, report.u_error)
    return report


def branch_profile_errors(run: ContinuationRun, gs: GroundState, green: GreenBundle) -> List[ProfileReport]:
    return [limit_profile_check(sol, gs, green) for sol in run.solutions]


def annulus_points(domain, inner: float, outer: float, n: int = 24) -> np.ndarray:
    """points of {inner <= |x - center| <= outer} along the coordinate axes
    and the diagonals; the evaluation set of the ball profile checks.
    """
    center = np.asarray(domain.center, dtype=float)
    dirs = []
    for v in np.ndindex(3, 3, 3):
        d = np.zeros(len(center))
        d[:3] = np.array(v, dtype=float) - 1.0
        if np.any(d):
            dirs.append(d / np.linalg.norm(d))
    radii = np.linspace(inner, outer, n) * getattr(domain, "R", 0.5 * float(np.min(domain.sides)))
    return np.array([center + r * d for d in dirs for r in radii])


@attr.s
class ConcentrationReport:
    eps = attr.ib()  # type: np.ndarray
    mass_fraction = attr.ib()  # type: np.ndarray
    total = attr.ib()  # type: np.ndarray
    target_total = attr.ib()  # type: float
    extrapolated_total = attr.ib()  # type: float
    domination = attr.ib()  # type: float
    radius_factor = attr.ib()  # type: float

    def as_dict(self) -> dict:
        return dict(
            eps=[float(e) for e in self.eps],
            mass_fraction=[float(f) for f in self.mass_fraction],
            total=[float(t) for t in self.total],
            target_total=self.target_total,
            extrapolated_total=self.extrapolated_total,
            domination=self.domination,
            radius_factor=self.radius_factor,
        )


def _mass(sol: DomainSolution, radius: float):
    f = sol.v_field ** (sol.params.p + 1.0)
    N = sol.params.N
    if sol.radial:
        total = radial_integral(sol.grid, f, N)
        inside = sol.grid <= radius
        if np.count_nonzero(inside) < 3:
            return 0.0, total
        return radial_integral(sol.grid[inside], f[inside], N), total
    X = sol.grid.nodes()
    near = np.linalg.norm(X - sol.x_peak, axis=-1) <= radius
    return box_integral(sol.grid, np.where(near, f, 0.0)), box_integral(sol.grid, f)


def concentration_report(run: ContinuationRun, gs: GroundState, radius_factor: float = 5.0) -> ConcentrationReport:
    """share of int v^(p+1) inside |x - x_peak| <= radius_factor mu^(1-eps/2),
    the total against int V^(p+1), and the domination constant K bounding
    the rescaled solutions by (U, V) over the whole branch.
    """
    if len(run.solutions) < 3:
        raise DataError("concentration needs at least 3 solutions, got {}".format(len(run.solutions)))
    fractions, totals, dominations = [], [], []
    for sol in run.solutions:
        inner, total = _mass(sol, radius_factor * sol.peak_width)
        fractions.append(inner / total)
        totals.append(total)
        rescaled = rescale_solution(sol, gs)
        dominations.append(max(rescaled.dom_u, rescaled.dom_v))
    eps = run.eps_values
    coef = np.polyfit(eps[-3:], np.array(totals[-3:]), 1)
    report = ConcentrationReport(
        eps=eps,
        mass_fraction=np.array(fractions),
        total=np.array(totals),
        target_total=gs.int_Vp1,
        extrapolated_total=float(coef[-1]),
        domination=float(max(dominations)),
        radius_factor=radius_factor,
    )
    logger.info("concentration: fraction %.4f at eps=%g, total -> %.6g (limit %.6g), K=%.3g",
                fractions[-1], eps[-1], report.extrapolated_total, gs.int_Vp1, report.domination)
    return report


@attr.s
class DecayReport:
    eps = attr.ib()  # type: np.ndarray
    sup_u = attr.ib()  # type: np.ndarray
    sup_v = attr.ib()  # type: np.ndarray
    radius = attr.ib()  # type: float

    @property
    def decreasing(self) -> bool:
        return bool(np.all(np.diff(self.sup_u) < 0) and np.all(np.diff(self.sup_v) < 0))

    def as_dict(self) -> dict:
        return dict(
            eps=[float(e) for e in self.eps],
            sup_u=[float(s) for s in self.sup_u],
            sup_v=[float(s) for s in self.sup_v],
            radius=self.radius,
            decreasing=self.decreasing,
        )


def decay_away_report(run: ContinuationRun, keep_out: float = 0.25) -> DecayReport:
    """sup of u and v outside |x - x_peak| < keep_out * diameter per solution.
    """
    if not run.solutions:
        raise DataError("continuation run holds no solutions")
    sup_u, sup_v = [], []
    radius = keep_out * run.solutions[0].domain.diameter
    for sol in run.solutions:
        if sol.radial:
            far = sol.grid >= radius
        else:
            far = np.linalg.norm(sol.grid.nodes() - sol.x_peak, axis=-1) >= radius
        sup_u.append(float(np.max(sol.u_field[far])))
        sup_v.append(float(np.max(sol.v_field[far])))
    report = DecayReport(run.eps_values, np.array(sup_u), np.array(sup_v), radius)
    if not report.decreasing:
        logger.warning("sup away from the peak is not monotone along the branch")
    return report
