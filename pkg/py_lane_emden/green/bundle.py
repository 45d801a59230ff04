"""Everything computed about one (domain, x0[, p]) in one record.
"""
from typing import Optional, Sequence
import logging

import attr
import numpy as np

from py_lane_emden.green.ball import BallGreen
from py_lane_emden.green.box import BoxGreen, robin_box_series
from py_lane_emden.green.domains import Ball, Domain, require_interior
from py_lane_emden.green.identities import boundary_identity_check
from py_lane_emden.green.iterated import iterated_green, tilde_robin
from py_lane_emden.hyperbola import critical_q

__all__ = ["GreenBundle", "build_bundle", "evaluation_points"]

logger = logging.getLogger(__name__)


def _floats(v) -> Optional[list]:
    return None if v is None else [float(x) for x in np.atleast_1d(v)]


@attr.s
class GreenBundle:
    domain = attr.ib()  # type: Domain
    x0 = attr.ib()  # type: np.ndarray
    points = attr.ib()  # type: np.ndarray
    G_field = attr.ib()  # type: np.ndarray
    g_diag = attr.ib()  # type: float
    grad_phi = attr.ib()  # type: np.ndarray
    p = attr.ib(default=None)  # type: Optional[float]
    q = attr.ib(default=None)  # type: Optional[float]
    Gt_field = attr.ib(default=None)  # type: Optional[np.ndarray]
    gt_diag = attr.ib(default=None)  # type: Optional[float]
    grad_phi_t = attr.ib(default=None)  # type: Optional[np.ndarray]
    residuals = attr.ib(factory=dict)  # type: dict
    tolerances = attr.ib(factory=dict)  # type: dict
    reports = attr.ib(factory=list)  # type: list

    @property
    def phi(self) -> float:
        return self.g_diag

    @property
    def phi_t(self) -> Optional[float]:
        return self.gt_diag

    @property
    def outside_smoothness_hypotheses(self) -> bool:
        return not self.domain.smooth

    def to_summary(self) -> dict:
        return dict(
            domain=self.domain.to_dict(),
            x0=_floats(self.x0),
            phi=self.g_diag,
            grad_phi=_floats(self.grad_phi),
            phi_t=self.gt_diag,
            grad_phi_t=_floats(self.grad_phi_t),
            p=self.p,
            q=self.q,
            residuals=dict(self.residuals),
            outside_smoothness_hypotheses=self.outside_smoothness_hypotheses,
            tolerances=dict(self.tolerances),
        )

    def field_header(self) -> tuple:
        return ("x", "y", "z", "G") if self.Gt_field is None else ("x", "y", "z", "G", "Gt")

    def field_rows(self) -> np.ndarray:
        """(x, y, z, G[, Gt]) per evaluation point."""
        columns = [self.points[:, :3], self.G_field]
        if self.Gt_field is not None:
            columns.append(self.Gt_field)
        return np.column_stack(columns)


def evaluation_points(domain: Domain, x0, n: int = 9, keep_out: float = 0.05) -> np.ndarray:
    """a tensor lattice over the bounding box restricted to the domain,
    without the nodes closer than `keep_out` (relative to the diameter) to x0.
    """
    if isinstance(domain, Ball):
        lo = np.asarray(domain.center) - domain.R
        hi = np.asarray(domain.center) + domain.R
    else:
        lo, hi = np.asarray(domain.lower), np.asarray(domain.upper)
    axes = [np.linspace(a, b, n + 2)[1:-1] for a, b in zip(lo, hi)]
    pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(lo))
    inside = np.array([domain.distance_to_boundary(y) > 0.0 for y in pts])
    far = np.linalg.norm(pts - x0, axis=-1) > keep_out * domain.diameter
    return pts[inside & far]


def build_bundle(
        domain: Domain,
        x0,
        p: Optional[float] = None,
        grid_spec: Optional[int] = None,
        points: Optional[np.ndarray] = None,
        checks: Sequence[str] = ("i", "vec", "ii", "vec4"),
        tol: Optional[float] = None) -> GreenBundle:
    x0 = require_interior(domain, x0)
    if isinstance(domain, Ball):
        green = BallGreen(domain, x0)
    else:
        green = BoxGreen(domain, x0, grid_spec or 65)
    points = evaluation_points(domain, x0) if points is None else np.atleast_2d(np.asarray(points, dtype=float))
    bundle = GreenBundle(
        domain=domain,
        x0=x0,
        points=points,
        G_field=green.G(points),
        g_diag=float(green.phi),
        grad_phi=np.asarray(green.grad_phi),
    )
    field = tilde = None
    if p is not None:
        field = iterated_green(domain, p, x0, grid_spec)
        tilde = tilde_robin(domain, p, x0, field=field)
        bundle.p = p
        bundle.q = critical_q(p, domain.N)
        bundle.Gt_field = field.Gt(points)
        bundle.gt_diag = tilde.phi_t
        bundle.grad_phi_t = tilde.grad_phi_t
        bundle.tolerances["tilde_extraction"] = tilde.phi_t_error
        bundle.residuals["tilde_direct"] = abs(tilde.phi_t - tilde.phi_direct)

    if not domain.smooth:
        series, series_error = robin_box_series(domain, x0)
        bundle.residuals["robin_two_routes"] = abs(series - green.phi)
        bundle.tolerances["robin_two_routes"] = 3.0 * (series_error + green.phi_fd_error)
        bundle.residuals["harmonic"] = green.solver.residual(green.g_nodes, np.zeros(green.grid.shape))
        if field is not None:
            bundle.residuals["tilde_solver"] = field.solver_residual()
            bundle.tolerances["tilde_resolution"] = field.resolution_error
        logger.warning("box bundle: identity checks are outside the smoothness hypotheses")

    if domain.N == 3:
        for which in checks:
            if which in ("ii", "vec4") and field is None:
                continue
            report = boundary_identity_check(domain, x0, which, p=p, tol=tol, grid_spec=grid_spec,
                                             field=field, tilde=tilde)
            bundle.reports.append(report)
            bundle.residuals[which] = report.rel_residual
            bundle.tolerances["quadrature_" + which] = report.quadrature_error
    return bundle
