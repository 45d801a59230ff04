import logging

import attr
import numpy as np
from scipy.interpolate import RegularGridInterpolator

from py_lane_emden.bvp.solution import DomainSolution
from py_lane_emden.errors import PreconditionError
from py_lane_emden.ground_state import GroundState

__all__ = ["RescaleReport", "rescale_solution", "COMPACT_RADIUS"]

logger = logging.getLogger(__name__)

COMPACT_RADIUS = 10.0


@attr.s
class RescaleReport:
    y = attr.ib()  # type: np.ndarray
    u_rescaled = attr.ib()  # type: np.ndarray
    v_rescaled = attr.ib()  # type: np.ndarray
    U = attr.ib()  # type: np.ndarray
    V = attr.ib()  # type: np.ndarray
    sup_distance = attr.ib()  # type: float
    dom_u = attr.ib()  # type: float
    dom_v = attr.ib()  # type: float
    mu_eps = attr.ib()  # type: float
    compact_covered = attr.ib()  # type: bool

    def as_dict(self) -> dict:
        return dict(
            sup_distance=self.sup_distance,
            dom_u=self.dom_u,
            dom_v=self.dom_v,
            mu_eps=self.mu_eps,
            compact_covered=self.compact_covered,
            compact_radius=COMPACT_RADIUS,
        )


def _ray_values(sol: DomainSolution, radii: np.ndarray):
    """u and v at distance `radii` from the peak; boxes take the largest
    value over the six axis directions.
    """
    if sol.radial:
        if sol.profile is not None:
            Y = sol.profile(radii)
            return Y[0], Y[2]
        return np.interp(radii, sol.grid, sol.u_field), np.interp(radii, sol.grid, sol.v_field)
    grid = sol.grid
    iu = RegularGridInterpolator(grid.axes, sol.u_field, method="cubic", bounds_error=False, fill_value=0.0)
    iv = RegularGridInterpolator(grid.axes, sol.v_field, method="cubic", bounds_error=False, fill_value=0.0)
    u = np.zeros(len(radii))
    v = np.zeros(len(radii))
    for axis in range(3):
        for side in (-1.0, 1.0):
            pts = np.tile(sol.x_peak, (len(radii), 1))
            pts[:, axis] += side * radii
            u = np.maximum(u, iu(pts))
            v = np.maximum(v, iv(pts))
    return u, v


def rescale_solution(sol: DomainSolution, gs: GroundState) -> RescaleReport:
    """u_{eps,mu}(y) = mu^alpha u(mu^d y + x_peak), v_{eps,mu}(y) = mu^beta v(...)
    on the ground-state grid, compared with (U, V).
    """
    if gs.params.p != sol.params.p or gs.params.N != sol.params.N:
        raise PreconditionError("ground state (p={}, N={}) does not match the solution (p={}, N={})".format(
            gs.params.p, gs.params.N, sol.params.p, sol.params.N))
    width = sol.peak_width
    if sol.radial:
        reach = float(sol.grid[-1]) / width
    else:
        reach = sol.domain.distance_to_boundary(sol.x_peak) / width
    y = gs.profile.grid[gs.profile.grid <= reach]
    u, v = _ray_values(sol, width * y)
    ur = sol.mu ** sol.alpha_used * u
    vr = sol.mu ** sol.params.beta * v
    U, V = gs.profile.U(y), gs.profile.V(y)
    near = y <= COMPACT_RADIUS
    covered = reach >= COMPACT_RADIUS
    if not covered:
        logger.warning("rescaled domain reaches |y| <= %.3g only; eps=%g is too large for the profile comparison",
                       reach, sol.eps)
    sup = float(max(np.max(np.abs(ur[near] - U[near])), np.max(np.abs(vr[near] - V[near]))))
    return RescaleReport(
        y=y,
        u_rescaled=ur,
        v_rescaled=vr,
        U=U,
        V=V,
        sup_distance=sup,
        dom_u=float(np.max(ur / U)),
        dom_v=float(np.max(vr / V)),
        mu_eps=sol.mu_eps,
        compact_covered=covered,
    )
