"""Iterated Green's function G~(x0, .), the solution of

    -Laplace G~(x0, .) = G(x0, .)^p  in the domain,   G~(x0, .) = 0  on the boundary,

for 2/(N-2) < p < N/(N-2).

Every representation writes G~ = S1 + S2 + S3 + S4 + W with the exact
near-field potentials of `kernels.SingularExpansion` and a remainder W whose
source is bounded:

  * centered ball, any N: W by the radial Green's function and adaptive
    quadrature;
  * off-center ball, N = 3: W as a Poisson integral of its boundary data plus
    a Newton potential of the bounded source, both by product Gauss rules;
  * box: W on the 7-point grid of `box.PoissonSolver`.

With this splitting the regularized diagonal is W(x0) and the gradient in y
of g-hat at the diagonal is grad W(x0); `tilde_robin` nevertheless extracts
both from offsets, as a check on the whole construction.
"""
from typing import Optional, Sequence, Tuple
import logging
import math

import attr
import numpy as np
from scipy.integrate import quad

from py_lane_emden.errors import DomainError, ExtractionError, ResolutionError
from py_lane_emden.green.ball import BallGreen, regular_ball
from py_lane_emden.green.box import BoxGreen, PoissonSolver, _interpolator, one_sided_normal_derivative
from py_lane_emden.green.domains import Ball, Box, Domain, require_interior
from py_lane_emden.green.kernels import SingularExpansion, fundamental_coefficient
from py_lane_emden.quadrature import SurfaceRule, richardson, sphere_rule

__all__ = [
    "RadialIterated",
    "BallIterated",
    "BoxIterated",
    "TildeRobin",
    "iterated_green",
    "tilde_robin",
    "iterated_green_quadrature",
]

logger = logging.getLogger(__name__)


class _Iterated:
    """shared surface of the three representations.
    """
    expansion = None  # type: SingularExpansion
    x0 = None  # type: np.ndarray

    def W(self, y) -> np.ndarray:
        raise NotImplementedError

    def Gt(self, y) -> np.ndarray:
        y = np.atleast_2d(np.asarray(y, dtype=float))
        return self.expansion.singular(y - self.x0) + self.W(y)

    def __call__(self, y) -> np.ndarray:
        return self.Gt(y)

    @property
    def phi_direct(self) -> float:
        return float(self.W(self.x0[None, :])[0])

    @property
    def p(self) -> float:
        return self.expansion.p


class RadialIterated(_Iterated):
    def __init__(self, domain: Ball, p: float):
        self.domain = domain
        self.x0 = np.asarray(domain.center, dtype=float)
        self.green = BallGreen(domain, self.x0)
        self.N = domain.N
        self.R = domain.R
        self.expansion = SingularExpansion(p, self.N, self.green.phi, np.zeros(self.N))
        self.W_R = -float(self._singular_radial(np.array([self.R]))[0])
        self._cache = {}

    def _singular_radial(self, t: np.ndarray) -> np.ndarray:
        e = self.expansion
        return e.S1(t) + e.S2(t) + e.S4(t)

    def _source(self, t: float) -> float:
        d = np.zeros((1, self.N))
        d[0, 0] = t
        return float(self.expansion.remainder_source(d, np.array([self.expansion.g0]))[0])

    def W_radial(self, rho: float) -> float:
        rho = float(rho)
        if rho in self._cache:
            return self._cache[rho]
        N, R = self.N, self.R
        outer, _ = quad(
            lambda t: (t ** (2.0 - N) - R ** (2.0 - N)) * t ** (N - 1.0) * self._source(t),
            rho, R, epsabs=1e-14, epsrel=1e-12, limit=200,
        )
        value = outer
        if rho > 0.0:
            inner, _ = quad(lambda t: t ** (N - 1.0) * self._source(t), 0.0, rho, epsabs=1e-14, epsrel=1e-12, limit=200)
            value += (rho ** (2.0 - N) - R ** (2.0 - N)) * inner
        value = self.W_R + value / (N - 2.0)
        self._cache[rho] = value
        return value

    def W(self, y) -> np.ndarray:
        y = np.atleast_2d(np.asarray(y, dtype=float))
        rho = np.linalg.norm(y - self.x0, axis=-1)
        return np.array([self.W_radial(r) for r in rho.reshape(-1)]).reshape(rho.shape)

    def Gt_radial(self, rho) -> np.ndarray:
        rho = np.atleast_1d(np.asarray(rho, dtype=float))
        return self._singular_radial(rho) + np.array([self.W_radial(r) for r in rho])

    def normal_derivative(self) -> float:
        """outward normal derivative of G~ on the sphere, from the flux of G^p.
        """
        N, R, e = self.N, self.R, self.expansion
        c, p, k = e.c, e.p, e.k

        def excess(t):
            gamma = c * t ** (2.0 - N)
            return gamma ** p * np.expm1(p * np.log1p(e.g0 / gamma)) * t ** (N - 1.0)

        body, _ = quad(excess, 0.0, R, epsabs=1e-14, epsrel=1e-12, limit=200)
        body += c ** p * R ** (N - k) / (N - k)
        return -R ** (1.0 - N) * body

    def dGt_dn(self, points, normals=None) -> np.ndarray:
        return np.full(len(np.atleast_2d(points)), self.normal_derivative())

    def laplacian_residual(self, rhos: Sequence[float], h: float = 1e-3) -> float:
        """max relative deviation of -Laplace G~ (centered differences in rho)
        from G^p at the given radii.
        """
        N = self.N
        worst = 0.0
        for rho in rhos:
            f = self.Gt_radial([rho - h, rho, rho + h])
            lap = (f[2] - 2.0 * f[1] + f[0]) / h ** 2 + (N - 1.0) / rho * (f[2] - f[0]) / (2.0 * h)
            y = np.zeros(N)
            y[0] = rho
            target = float(self.green.G(y[None, :])[0]) ** self.p
            worst = max(worst, abs(-lap - target) / target)
        return worst


def _direction_rule(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    n_phi = 2 * n
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    ct, ph = np.meshgrid(x, phi, indexing="ij")
    st = np.sqrt(1.0 - ct ** 2)
    omega = np.stack([st * np.cos(ph), st * np.sin(ph), ct], axis=-1).reshape(-1, 3)
    weights = np.outer(w, np.full(n_phi, 2.0 * math.pi / n_phi)).reshape(-1)
    return omega, weights


def _radial_rule(n: int):
    u, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (u + 1.0), 0.5 * w


def _chord(y: np.ndarray, omega: np.ndarray, R: float) -> np.ndarray:
    """distance from y along each direction to the sphere of radius R.
    """
    yo = omega @ y
    return -yo + np.sqrt(yo * yo + R * R - float(y @ y))


class BallIterated(_Iterated):
    def __init__(self, domain: Ball, p: float, x0, order: int = 48):
        if domain.N != 3:
            raise DomainError("off-center iterated Green's functions are implemented for N = 3 only")
        self.domain = domain
        self.x0 = require_interior(domain, x0)
        self.order = int(order)
        self.green = BallGreen(domain, self.x0)
        self.expansion = SingularExpansion(p, 3, self.green.phi, self.green.grad_g_diag)
        self.R = domain.R
        self._boundary, _ = sphere_rule((0.0, 0.0, 0.0), self.R, self.order)
        # boundary data of W in local coordinates
        self._h = -self.expansion.singular(self._boundary.points - self.green.local_x0)
        self._omega, self._w_omega = _direction_rule(self.order)
        self._u, self._w_u = _radial_rule(self.order)

    def _source_local(self, z: np.ndarray) -> np.ndarray:
        xl = self.green.local_x0
        g = regular_ball(xl, z, self.R, 3)
        return self.expansion.remainder_source(z - xl, g)

    def _W_local(self, y: np.ndarray) -> float:
        R = self.R
        c = fundamental_coefficient(3)
        rule = self._boundary
        dist = np.linalg.norm(rule.points - y, axis=-1)
        harmonic = float(np.dot(rule.weights, (R * R - y @ y) / (4.0 * math.pi * R * dist ** 3) * self._h))
        tmax = _chord(y, self._omega, R)
        t = tmax[:, None] * self._u[None, :]
        z = y + t[..., None] * self._omega[:, None, :]
        dsq = np.sum(z * z, axis=-1) * (y @ y) / (R * R) - 2.0 * (z @ y) + R * R
        # t^2 G(z, y) written without the 1/t singularity
        kernel = c * (t - t * t / np.sqrt(np.maximum(dsq, 1e-300)))
        f = self._source_local(z.reshape(-1, 3)).reshape(t.shape)
        newton = float(np.sum(self._w_omega[:, None] * tmax[:, None] * self._w_u[None, :] * kernel * f))
        return harmonic + newton

    def W(self, y) -> np.ndarray:
        y = np.atleast_2d(np.asarray(y, dtype=float))
        local = self.domain.local(y)
        return np.array([self._W_local(v) for v in local])

    def dGt_dn(self, points, normals=None) -> np.ndarray:
        """-integral of G(x0, w)^p P(w, z) dw for z on the sphere, with a
        graded radial rule about x0.
        """
        R = self.R
        xl = self.green.local_x0
        n = max(self.order // 2, 16)
        omega, w_omega = _direction_rule(n)
        u, w_u = _radial_rule(n)
        tmax = _chord(xl, omega, R)
        # t = tmax u^2 grades the nodes toward x0
        t = tmax[:, None] * u[None, :] ** 2
        jac = (w_omega[:, None] * tmax[:, None] * 2.0 * u[None, :] * w_u[None, :]) * t * t
        w = (xl + t[..., None] * omega[:, None, :]).reshape(-1, 3)
        G = fundamental_coefficient(3) * (
            1.0 / t.reshape(-1) - 1.0 / np.sqrt(np.maximum(
                np.sum(w * w, axis=-1) * (xl @ xl) / (R * R) - 2.0 * (w @ xl) + R * R, 1e-300))
        )
        mass = jac.reshape(-1) * np.maximum(G, 0.0) ** self.p
        z = self.domain.local(np.atleast_2d(points))
        out = np.empty(len(z))
        ww = np.sum(w * w, axis=-1)
        for start in range(0, len(z), 64):
            zz = z[start:start + 64]
            dist = np.linalg.norm(w[None, :, :] - zz[:, None, :], axis=-1)
            P = (R * R - ww[None, :]) / (4.0 * math.pi * R * dist ** 3)
            out[start:start + 64] = -(P @ mass)
        return out


class BoxIterated(_Iterated):
    def __init__(self, domain: Box, p: float, x0, n: int = 65, resolution_tol: float = 1e-2):
        self.domain = domain
        self.x0 = require_interior(domain, x0)
        self.green = BoxGreen(domain, self.x0, n)
        g0 = float(self.green.g(self.x0)[0])
        self.expansion = SingularExpansion(p, 3, g0, self.green.grad_g_diag)
        self.grid = self.green.grid
        self.W_nodes, self._source_nodes = self._remainder(self.green.grid, self.green.solver, self.green.g_nodes)
        self._W = _interpolator(self.grid, self.W_nodes)
        coarse = self.grid.coarse()
        coarse_green = BoxGreen(domain, self.x0, coarse.n)
        W_coarse, _ = self._remainder(coarse, coarse_green.solver, coarse_green.g_nodes)
        fine_value = self.phi_direct
        coarse_value = float(_interpolator(coarse, W_coarse)(self.x0[None, :])[0])
        self.resolution_error = abs(fine_value - coarse_value) / 3.0
        scale = max(abs(fine_value), 1e-12)
        if self.resolution_error > resolution_tol * scale:
            raise ResolutionError(
                "grid of {} nodes does not resolve the iterated source: estimated error {:.3g}".format(
                    n, self.resolution_error
                )
            )

    def _remainder(self, grid, solver: PoissonSolver, g_nodes: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        d = grid.nodes() - self.x0
        source = self.expansion.remainder_source(d, g_nodes)
        boundary = np.zeros(grid.shape)
        mask = grid.boundary_mask()
        boundary[mask] = -self.expansion.singular(d[mask])
        return solver.solve(source, boundary), source

    def W(self, y) -> np.ndarray:
        return self._W(np.atleast_2d(np.asarray(y, dtype=float)))

    def surface_rule(self) -> SurfaceRule:
        return self.green.surface_rule()

    def dGt_dn(self, points=None, normals=None) -> np.ndarray:
        rule = self.surface_rule()
        analytic = np.sum(self.expansion.singular_gradient(rule.points - self.x0) * rule.normals, axis=-1)
        return analytic + np.concatenate(one_sided_normal_derivative(self.W_nodes, self.grid.h))

    def solver_residual(self) -> float:
        return self.green.solver.residual(self.W_nodes, self._source_nodes)


def iterated_green(domain: Domain, p: float, x0, grid_spec=None) -> _Iterated:
    """G~(x0, .) as a callable field on the domain.

    `grid_spec` is the node count per axis on boxes and the Gauss order on
    off-center balls; centered balls ignore it.
    """
    x0 = require_interior(domain, x0)
    if isinstance(domain, Ball):
        if domain.is_centered(x0):
            return RadialIterated(domain, p)
        return BallIterated(domain, p, x0, order=grid_spec or 48)
    if isinstance(domain, Box):
        return BoxIterated(domain, p, x0, n=grid_spec or 65)
    raise DomainError("unsupported domain {!r}".format(domain))


@attr.s(frozen=True)
class TildeRobin:
    phi_t = attr.ib()  # type: float
    grad_phi_t = attr.ib()  # type: np.ndarray
    phi_t_error = attr.ib()  # type: float
    grad_error = attr.ib()  # type: float
    offsets = attr.ib()  # type: list
    samples = attr.ib()  # type: list
    phi_direct = attr.ib()  # type: float

    def as_dict(self) -> dict:
        return dict(
            phi_t=self.phi_t,
            grad_phi_t=[float(v) for v in self.grad_phi_t],
            phi_t_error=self.phi_t_error,
            grad_error=self.grad_error,
            offsets=list(self.offsets),
            samples=list(self.samples),
            phi_direct=self.phi_direct,
        )


def _exponents(*values: float) -> list:
    out = []
    for v in sorted(values):
        if v > 0 and all(abs(v - u) > 1e-9 for u in out):
            out.append(v)
    return out


def tilde_robin(
        domain: Domain,
        p: float,
        x0,
        field: Optional[_Iterated] = None,
        levels: int = 5,
        tol: float = 1e-3) -> TildeRobin:
    """phi~(x0) = lim G~(x0, y) - c_p |x0 - y|^(2 - p(N-2)) along offsets
    delta_k = 0.1 dist(x0, boundary) 2^-k, and the gradient in y of g-hat at
    the diagonal by centered differences over the same offsets.
    """
    if levels < 4:
        raise DomainError("extraction needs at least 4 offset levels, got {}".format(levels))
    x0 = require_interior(domain, x0)
    field = field if field is not None else iterated_green(domain, p, x0)
    e = field.expansion
    N, k = e.N, e.k
    dim = len(x0)
    delta0 = 0.1 * domain.distance_to_boundary(x0)
    offsets = [delta0 * 2.0 ** (-j) for j in range(levels)]

    def sample_pair(axis, delta):
        step = np.zeros(dim)
        step[axis] = delta
        values = field.Gt(np.stack([x0 + step, x0 - step]))
        return float(values[0]), float(values[1])

    diagonal = []
    slopes = [[] for _ in range(dim)]
    for delta in offsets:
        for axis in range(dim):
            plus, minus = sample_pair(axis, delta)
            slopes[axis].append((plus - minus) / (2.0 * delta))
            if axis == 0:
                diagonal.append(0.5 * (plus + minus) - float(e.S1(delta)))

    ex = richardson(diagonal, _exponents(N - k, 2.0 * N - k - 2.0, 2.0, 2.0 + N - k))
    scale = max(1.0, abs(ex.value))
    if not ex.error <= tol * scale:
        raise ExtractionError(
            "diagonal extraction is not Cauchy: successive estimates differ by {:.3g}".format(ex.error)
        )
    grad = np.empty(dim)
    grad_error = 0.0
    for axis in range(dim):
        gx = richardson(slopes[axis], _exponents(N - k, 2.0, 2.0 + N - k))
        grad[axis] = gx.value
        grad_error = max(grad_error, gx.error)
    if not grad_error <= tol * max(1.0, float(np.max(np.abs(grad)))):
        raise ExtractionError(
            "gradient extraction is not Cauchy: successive estimates differ by {:.3g}".format(grad_error)
        )
    logger.info("phi~(x0) = %.10g (+- %.2g), grad = %s", ex.value, ex.error, grad)
    return TildeRobin(ex.value, grad, ex.error, grad_error, offsets, diagonal, field.phi_direct)


def iterated_green_quadrature(domain: Ball, p: float, x0, y, order: int = 64) -> float:
    """G~(x0, y) on a ball in R^3 by direct volume quadrature of
    integral G(x0, z)^p G(z, y) dz, independent of the singular expansion.

    The integrand is split as (G(x0,z)^p - G(x0,y)^p) G(z,y) plus
    G(x0,y)^p times the torsion function (R^2 - |y|^2)/6; the first part is
    integrated in spherical coordinates about x0 with radial nodes graded as
    t = tmax u^2.
    """
    if domain.N != 3:
        raise DomainError("volume quadrature oracle is implemented for N = 3 only")
    R = domain.R
    xl = domain.local(require_interior(domain, x0))
    yl = domain.local(require_interior(domain, y))
    c = fundamental_coefficient(3)

    def G(a, b):
        dist = np.linalg.norm(a - b, axis=-1)
        dsq = np.sum(a * a, axis=-1) * np.sum(b * b, axis=-1) / (R * R) - 2.0 * np.sum(a * b, axis=-1) + R * R
        return c * (1.0 / dist - 1.0 / np.sqrt(np.maximum(dsq, 1e-300)))

    Gy = float(G(xl[None, :], yl[None, :])[0]) ** p
    omega, w_omega = _direction_rule(order)
    u, w_u = _radial_rule(order)
    tmax = _chord(xl, omega, R)
    t = tmax[:, None] * u[None, :] ** 2
    jac = w_omega[:, None] * tmax[:, None] * 2.0 * u[None, :] * w_u[None, :] * t * t
    z = (xl + t[..., None] * omega[:, None, :]).reshape(-1, 3)
    Gxz = np.maximum(G(np.broadcast_to(xl, z.shape), z), 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        Gzy = G(z, np.broadcast_to(yl, z.shape))
    integrand = np.where(np.isfinite(Gzy), (Gxz ** p - Gy) * Gzy, 0.0)
    torsion = (R * R - float(yl @ yl)) / 6.0
    return float(np.sum(jac.reshape(-1) * integrand)) + Gy * torsion
