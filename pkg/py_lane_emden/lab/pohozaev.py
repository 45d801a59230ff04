"""Pohozaev identity of the Dirichlet system.

For the exponent family (q_eps below the critical q),

    eps * int u^(q_eps+1) dx = int du/dn dv/dn (n, x - y) ds,

and for the linear perturbation u^q + eps u at the critical q,

    eps (N/2 - alpha) int u^2 dx = int du/dn dv/dn (n, x - y) ds,

for any base point y. Both normal derivatives are negative on the boundary,
so both sides are positive.
"""
import attr
import numpy as np

from py_lane_emden.bvp.box import box_integral
from py_lane_emden.bvp.solution import DomainSolution, SolverMode
from py_lane_emden.errors import PreconditionError
from py_lane_emden.quadrature import radial_integral, sphere_area, sphere_rule

__all__ = ["PohozaevResult", "pohozaev_residual", "base_point_drift", "perturbed_copy"]


@attr.s(frozen=True)
class PohozaevResult:
    lhs = attr.ib()  # type: float
    rhs = attr.ib()  # type: float
    rel_residual = attr.ib()  # type: float
    y = attr.ib()  # type: list

    def as_dict(self) -> dict:
        return attr.asdict(self)


def _volume_side(sol: DomainSolution) -> float:
    u = sol.u_field
    if sol.mode is SolverMode.exponent:
        f = u ** (sol.q_used + 1.0)
        scale = sol.eps
    else:
        f = u * u
        scale = sol.eps * (0.5 * sol.params.N - sol.params.alpha)
    if sol.radial:
        return scale * radial_integral(sol.grid, f, sol.params.N)
    return scale * box_integral(sol.grid, f)


def _boundary_side(sol: DomainSolution, y: np.ndarray) -> float:
    if sol.radial:
        N = sol.params.N
        flux = float(sol.du_dn[0] * sol.dv_dn[0])
        R = float(sol.grid[-1])
        if N == 3:
            rule, _ = sphere_rule(sol.x_peak, R, 48)
            lever = np.sum((rule.points - y) * rule.normals, axis=-1)
            return float(rule.integrate(flux * lever))
        # the normal integrates to zero over the sphere
        return sphere_area(N) * R ** N * flux
    rule = sol.boundary_rule
    lever = np.sum((rule.points - y) * rule.normals, axis=-1)
    return float(rule.integrate(sol.du_dn * sol.dv_dn * lever))


def pohozaev_residual(sol: DomainSolution, y=None) -> PohozaevResult:
    if sol.du_dn is None or sol.dv_dn is None or len(sol.du_dn) == 0:
        raise PreconditionError("solution carries no boundary traces")
    y = np.asarray(sol.x_peak if y is None else y, dtype=float)
    lhs = _volume_side(sol)
    rhs = _boundary_side(sol, y)
    return PohozaevResult(lhs, rhs, abs(lhs - rhs) / abs(lhs), [float(v) for v in y])


def base_point_drift(sol: DomainSolution, shift=(0.3, 0.0, 0.0)) -> float:
    """relative change of the boundary side when the base point moves by
    `shift`; zero exactly when int du/dn dv/dn n ds vanishes.
    """
    y0 = np.asarray(sol.x_peak, dtype=float)
    step = np.zeros_like(y0)
    step[:len(shift)] = shift[:len(y0)]
    a = _boundary_side(sol, y0)
    b = _boundary_side(sol, y0 + step)
    return abs(a - b) / abs(a)


def perturbed_copy(sol: DomainSolution, amplitude: float = 0.01) -> DomainSolution:
    """the solution with u multiplied by 1 + amplitude |x - x_peak|^2, which
    is not a solution any more; u vanishes on the boundary, so its normal
    derivative picks up the same factor.
    """
    if sol.radial:
        r = sol.grid
        factor = 1.0 + amplitude * r * r
        R = float(r[-1])
        trace = sol.du_dn * (1.0 + amplitude * R * R)
    else:
        X = sol.grid.nodes()
        factor = 1.0 + amplitude * np.sum((X - sol.x_peak) ** 2, axis=-1)
        pts = sol.boundary_rule.points
        trace = sol.du_dn * (1.0 + amplitude * np.sum((pts - sol.x_peak) ** 2, axis=-1))
    return attr.evolve(sol, u_field=sol.u_field * factor, du_dn=trace, profile=None)
