"""Dirichlet Green's function of the ball by the method of images.

For the ball of radius R about the origin,

    G(x, y) = c (|x - y|^(2-N) - d'(x, y)^(2-N)),
    d'(x, y)^2 = |x|^2 |y|^2 / R^2 - 2 x.y + R^2,

which is symmetric in (x, y) and vanishes when either point is on the sphere.
"""
import attr
import numpy as np

from py_lane_emden.errors import DomainError, SingularityError
from py_lane_emden.green.domains import Ball, require_interior
from py_lane_emden.green.kernels import fundamental_coefficient
from py_lane_emden.quadrature import sphere_area

__all__ = [
    "green_ball",
    "regular_ball",
    "robin_ball",
    "robin_ball_gradient",
    "regular_ball_gradient",
    "green_ball_gradient",
    "poisson_kernel_ball",
    "BallGreen",
]

_EDGE = 1e-12


def _points(x, N):
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != N:
        raise DomainError("points must have {} coordinates, got shape {}".format(N, x.shape))
    return x


def _inside(x, R, strict=False):
    norm = np.linalg.norm(x, axis=-1)
    bad = norm >= R if strict else norm > R * (1 + _EDGE)
    if np.any(bad):
        raise DomainError("point outside the ball of radius {} (|x| = {})".format(R, np.max(norm)))
    return norm


def _image_distance_sq(x, y, R):
    xx = np.sum(x * x, axis=-1)
    yy = np.sum(y * y, axis=-1)
    xy = np.sum(x * y, axis=-1)
    return np.maximum(xx * yy / (R * R) - 2.0 * xy + R * R, 0.0)


def green_ball(x, y, R: float, N: int):
    x, y = _points(x, N), _points(y, N)
    _inside(x, R)
    _inside(y, R)
    dist = np.linalg.norm(x - y, axis=-1)
    if np.any(dist == 0.0):
        raise SingularityError("Green's function is singular at x = y")
    c = fundamental_coefficient(N)
    return c * (dist ** (2.0 - N) - _image_distance_sq(x, y, R) ** ((2.0 - N) / 2.0))


def regular_ball(x, y, R: float, N: int):
    x, y = _points(x, N), _points(y, N)
    return -fundamental_coefficient(N) * _image_distance_sq(x, y, R) ** ((2.0 - N) / 2.0)


def robin_ball(x, R: float, N: int):
    x = _points(x, N)
    rho = _inside(x, R, strict=True)
    return -fundamental_coefficient(N) * (R / (R * R - rho * rho)) ** (N - 2.0)


def robin_ball_gradient(x, R: float, N: int):
    x = _points(x, N)
    rho = _inside(x, R, strict=True)[..., None]
    c = fundamental_coefficient(N)
    return -2.0 * c * (N - 2.0) * R ** (N - 2.0) * x / (R * R - rho * rho) ** (N - 1.0)


def regular_ball_gradient(x, y, R: float, N: int):
    """gradient in y of the regular part g(x, y).
    """
    x, y = _points(x, N), _points(y, N)
    c = fundamental_coefficient(N)
    xx = np.sum(x * x, axis=-1)[..., None]
    dsq = _image_distance_sq(x, y, R)[..., None]
    return c * (N - 2.0) * dsq ** (-N / 2.0) * (xx * y / (R * R) - x)


def green_ball_gradient(x, y, R: float, N: int):
    """gradient in y of G(x, y).
    """
    x, y = _points(x, N), _points(y, N)
    d = y - x
    r = np.linalg.norm(d, axis=-1)[..., None]
    c = fundamental_coefficient(N)
    return -(N - 2.0) * c * d / r ** N + regular_ball_gradient(x, y, R, N)


def poisson_kernel_ball(x, z, R: float, N: int):
    """outward normal derivative of G(x, .) at z on the sphere |z| = R.
    """
    x, z = _points(x, N), _points(z, N)
    rho = np.linalg.norm(x, axis=-1)
    dist = np.linalg.norm(x - z, axis=-1)
    return -(R * R - rho * rho) / (sphere_area(N) * R * dist ** N)


@attr.s
class BallGreen:
    """G(x0, .) and its regular part on a (possibly translated) ball.
    """
    domain = attr.ib()  # type: Ball
    x0 = attr.ib(converter=lambda v: np.asarray(v, dtype=float))  # type: np.ndarray

    def __attrs_post_init__(self):
        require_interior(self.domain, self.x0)

    @property
    def N(self) -> int:
        return self.domain.N

    @property
    def local_x0(self) -> np.ndarray:
        return self.domain.local(self.x0)

    def G(self, y):
        return green_ball(self.local_x0, self.domain.local(y), self.domain.R, self.N)

    def g(self, y):
        return regular_ball(self.local_x0, self.domain.local(y), self.domain.R, self.N)

    @property
    def phi(self) -> float:
        return float(robin_ball(self.local_x0, self.domain.R, self.N))

    @property
    def grad_phi(self) -> np.ndarray:
        return robin_ball_gradient(self.local_x0, self.domain.R, self.N)

    @property
    def grad_g_diag(self) -> np.ndarray:
        """gradient in y of g(x0, y) at y = x0, half of grad phi.
        """
        return regular_ball_gradient(self.local_x0, self.local_x0, self.domain.R, self.N)

    def dG_dn(self, points, normals=None):
        return poisson_kernel_ball(self.local_x0, self.domain.local(points), self.domain.R, self.N)
