"""Boundary identities tying surface integrals of normal derivatives to
Robin-type diagonal values:

    i     int (dG/dn)^2 (n, z - x0) ds        = -(N - 2) phi(x0)
    vec   int (dG/dn)^2 n ds                  = -grad phi(x0)
    ii    int dG~/dn dG/dn (n, z - x0) ds     = -(N/(q+1)) phi~(x0)
    vec4  int dG~/dn dG/dn n ds               = -grad_y g-hat(x0, y)|_{y=x0}

with q the critical partner of p. Left sides are surface quadratures, right
sides come from the closed forms or from `tilde_robin`.
"""
from typing import Optional
import logging

import attr
import numpy as np

from py_lane_emden.errors import AccuracyError, DomainError
from py_lane_emden.green.ball import BallGreen
from py_lane_emden.green.box import BoxGreen
from py_lane_emden.green.domains import Ball, Box, Domain, require_interior
from py_lane_emden.green.iterated import BoxIterated, iterated_green, tilde_robin
from py_lane_emden.hyperbola import critical_q
from py_lane_emden.quadrature import sphere_rule

__all__ = ["IdentityReport", "boundary_identity_check", "IDENTITIES", "BALL_TOLERANCE"]

logger = logging.getLogger(__name__)

IDENTITIES = ("i", "vec", "ii", "vec4")

BALL_TOLERANCE = 1e-6


@attr.s(frozen=True)
class IdentityReport:
    which = attr.ib()  # type: str
    domain = attr.ib()  # type: dict
    x0 = attr.ib()  # type: list
    p = attr.ib()  # type: Optional[float]
    q = attr.ib()  # type: Optional[float]
    lhs = attr.ib()  # type: object
    rhs = attr.ib()  # type: object
    abs_residual = attr.ib()  # type: float
    rel_residual = attr.ib()  # type: float
    quadrature_error = attr.ib()  # type: float
    outside_smoothness_hypotheses = attr.ib(default=False)  # type: bool

    def passed(self, tol: float) -> bool:
        return self.rel_residual <= tol

    def as_dict(self) -> dict:
        def plain(v):
            return [float(x) for x in np.atleast_1d(v)] if np.ndim(v) else float(v)

        return dict(
            which=self.which,
            domain=self.domain,
            x0=self.x0,
            p=self.p,
            q=self.q,
            lhs=plain(self.lhs),
            rhs=plain(self.rhs),
            abs_residual=self.abs_residual,
            rel_residual=self.rel_residual,
            quadrature_error=self.quadrature_error,
            outside_smoothness_hypotheses=self.outside_smoothness_hypotheses,
        )


def _integrand(which: str, x0: np.ndarray, dGt, dG, points, normals):
    weight = dG * dG if dGt is None else dGt * dG
    if which in ("i", "ii"):
        return weight * np.sum((points - x0) * normals, axis=-1)
    return weight[:, None] * normals


def _ball_lhs(domain: Ball, x0, which: str, field, degree: int):
    if domain.N != 3:
        raise DomainError("surface quadrature on balls is implemented for N = 3, got N={}".format(domain.N))
    green = BallGreen(domain, x0)
    values = []
    for rule in sphere_rule(domain.center, domain.R, degree):
        dG = green.dG_dn(rule.points, rule.normals)
        dGt = field.dGt_dn(rule.points, rule.normals) if field is not None else None
        values.append(rule.integrate(_integrand(which, x0, dGt, dG, rule.points, rule.normals)))
    fine, coarse = values
    return fine, float(np.max(np.abs(np.asarray(fine) - np.asarray(coarse)))), green


def _box_lhs(domain: Box, x0, which: str, field, n: int):
    values = []
    green = None
    for size in (n, (n + 1) // 2):
        if field is not None:
            level = field if size == n else BoxIterated(domain, field.p, x0, n=size)
            g_level = level.green
            dGt = level.dGt_dn()
        else:
            g_level = BoxGreen(domain, x0, size)
            dGt = None
        rule = g_level.surface_rule()
        dG = g_level.dG_dn()
        values.append(rule.integrate(_integrand(which, x0, dGt, dG, rule.points, rule.normals)))
        green = green or g_level
    fine, coarse = values
    return fine, float(np.max(np.abs(np.asarray(fine) - np.asarray(coarse)))), green


def boundary_identity_check(
        domain: Domain,
        x0,
        which: str,
        p: Optional[float] = None,
        tol: Optional[float] = None,
        grid_spec: Optional[int] = None,
        field=None,
        tilde=None) -> IdentityReport:
    """evaluate one identity; `field` and `tilde` reuse an iterated Green's
    function and its extracted diagonal when the caller already has them.

    On balls the surface-integration error must stay below `tol`
    (default 1e-6); on boxes it is enforced only when `tol` is given, and the
    report is flagged as outside the smoothness hypotheses.
    """
    if which not in IDENTITIES:
        raise DomainError("unknown identity {!r}; expected one of {}".format(which, ", ".join(IDENTITIES)))
    x0 = require_interior(domain, x0)
    N = domain.N
    tilde_needed = which in ("ii", "vec4")
    q = None
    if tilde_needed:
        if p is None:
            raise DomainError("identity {} needs the exponent p".format(which))
        q = critical_q(p, N)
        if field is None:
            field = iterated_green(domain, p, x0, grid_spec)
    else:
        field = None

    if isinstance(domain, Ball):
        lhs, q_err, green = _ball_lhs(domain, x0, which, field, grid_spec or 48)
        limit = BALL_TOLERANCE if tol is None else tol
    else:
        lhs, q_err, green = _box_lhs(domain, x0, which, field, grid_spec or 65)
        limit = tol
        logger.warning("identity %s on a box: edges and corners are outside the smoothness hypotheses", which)

    if which == "i":
        rhs = -(N - 2.0) * green.phi
    elif which == "vec":
        rhs = -np.asarray(green.grad_phi)
    else:
        tilde = tilde if tilde is not None else tilde_robin(domain, p, x0, field=field)
        if which == "ii":
            rhs = -(N / (q + 1.0)) * tilde.phi_t
        else:
            rhs = -np.asarray(tilde.grad_phi_t)

    if limit is not None and q_err > limit * max(1.0, float(np.max(np.abs(lhs)))):
        raise AccuracyError(
            "surface quadrature error {:.3g} exceeds tolerance {:.3g} for identity {}".format(q_err, limit, which),
            estimate=q_err,
        )
    diff = float(np.linalg.norm(np.atleast_1d(np.asarray(lhs) - np.asarray(rhs))))
    scale = float(np.linalg.norm(np.atleast_1d(rhs)))
    rel = diff / scale if scale > 1e-12 else diff
    report = IdentityReport(
        which=which,
        domain=domain.to_dict(),
        x0=[float(v) for v in x0],
        p=p if tilde_needed else None,
        q=q,
        lhs=lhs,
        rhs=rhs,
        abs_residual=diff,
        rel_residual=rel,
        quadrature_error=q_err,
        outside_smoothness_hypotheses=not domain.smooth,
    )
    logger.info("identity %s: residual %.3g (relative %.3g)", which, diff, rel)
    return report
