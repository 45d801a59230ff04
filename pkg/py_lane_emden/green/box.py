"""Dirichlet Green's function of an axis-aligned box.

Two independent routes to the regular part and its diagonal:

  * finite differences: the harmonic complement g(x0, .) with boundary data
    -Gamma(x0, .) is solved on the 7-point grid (conjugate gradients,
    preconditioned by the exact sine-transform inverse of the grid
    Laplacian) and Richardson-extrapolated over a coarse/fine pair;
  * a double sine series in the first two coordinates with the closed-form
    one-dimensional kernel along the third, which converges exponentially
    once the two points are apart; the diagonal is reached by subtracting
    Gamma at shrinking offsets along the third axis.
"""
from typing import Optional, Sequence, Tuple
import logging
import math

import attr
import numpy as np
import scipy.sparse as sps
from scipy.fft import dstn, idstn
from scipy.interpolate import RegularGridInterpolator
from scipy.sparse.linalg import LinearOperator, cg

from py_lane_emden.errors import AccuracyError, DomainError
from py_lane_emden.green.domains import Box, require_interior
from py_lane_emden.green.kernels import fundamental, fundamental_gradient
from py_lane_emden.quadrature import SurfaceRule, box_face_rule, richardson

__all__ = [
    "BoxGrid",
    "PoissonSolver",
    "BoxGreen",
    "robin_box_series",
    "green_box_series",
    "one_sided_normal_derivative",
]

logger = logging.getLogger(__name__)

MAX_NODES = 97
SERIES_CUTOFF = 40.0


@attr.s(frozen=True)
class BoxGrid:
    box = attr.ib()  # type: Box
    n = attr.ib(converter=int)  # type: int

    def __attrs_post_init__(self):
        if self.n < 5:
            raise DomainError("box grids need at least 5 nodes per axis, got {}".format(self.n))
        if self.n > MAX_NODES:
            raise DomainError("box grids are limited to {} nodes per axis, got {}".format(MAX_NODES, self.n))

    @property
    def axes(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return tuple(np.linspace(l, u, self.n) for l, u in zip(self.box.lower, self.box.upper))

    @property
    def h(self) -> np.ndarray:
        return self.box.sides / (self.n - 1)

    @property
    def shape(self) -> Tuple[int, int, int]:
        return (self.n,) * 3

    @property
    def interior_shape(self) -> Tuple[int, int, int]:
        return (self.n - 2,) * 3

    def nodes(self) -> np.ndarray:
        X = np.meshgrid(*self.axes, indexing="ij")
        return np.stack(X, axis=-1)

    def boundary_mask(self) -> np.ndarray:
        mask = np.zeros(self.shape, dtype=bool)
        mask[0, :, :] = mask[-1, :, :] = True
        mask[:, 0, :] = mask[:, -1, :] = True
        mask[:, :, 0] = mask[:, :, -1] = True
        return mask

    def coarse(self) -> "BoxGrid":
        return BoxGrid(self.box, (self.n + 1) // 2)

    def face_rule(self) -> SurfaceRule:
        """trapezoid rule on the boundary nodes, face by face in the order
        of `one_sided_normal_derivative`.
        """
        return box_face_rule(self.box.lower, self.box.upper, self.shape)


def _second_difference(n: int, h: float) -> sps.spmatrix:
    m = n - 2
    return sps.diags([-np.ones(m - 1), 2.0 * np.ones(m), -np.ones(m - 1)], [-1, 0, 1]) / (h * h)


@attr.s
class PoissonSolver:
    """-Laplace u = f on the interior nodes with Dirichlet data on the rest.
    """
    grid = attr.ib()  # type: BoxGrid
    rtol = attr.ib(default=1e-12)  # type: float

    def __attrs_post_init__(self):
        g = self.grid
        m = g.n - 2
        I = sps.identity(m, format="csr")
        T = [_second_difference(g.n, h) for h in g.h]
        self.matrix = (
            sps.kron(sps.kron(T[0], I), I) + sps.kron(sps.kron(I, T[1]), I) + sps.kron(sps.kron(I, I), T[2])
        ).tocsr()
        j = np.arange(1, m + 1)
        lam = [(2.0 - 2.0 * np.cos(math.pi * j / (g.n - 1))) / (h * h) for h in g.h]
        self.eigenvalues = lam[0][:, None, None] + lam[1][None, :, None] + lam[2][None, None, :]

    def fast_inverse(self, f: np.ndarray) -> np.ndarray:
        shape = self.grid.interior_shape
        F = dstn(np.reshape(f, shape), type=1)
        return idstn(F / self.eigenvalues, type=1).reshape(-1)

    def boundary_load(self, full: np.ndarray) -> np.ndarray:
        """contribution of the boundary values of `full` to the interior rows.
        """
        h = self.grid.h
        load = np.zeros(self.grid.interior_shape)
        inner = np.array(full, dtype=float, copy=True)
        inner[1:-1, 1:-1, 1:-1] = 0.0
        load += (inner[:-2, 1:-1, 1:-1] + inner[2:, 1:-1, 1:-1]) / h[0] ** 2
        load += (inner[1:-1, :-2, 1:-1] + inner[1:-1, 2:, 1:-1]) / h[1] ** 2
        load += (inner[1:-1, 1:-1, :-2] + inner[1:-1, 1:-1, 2:]) / h[2] ** 2
        return load

    def solve(self, source: np.ndarray, boundary: np.ndarray) -> np.ndarray:
        """`source` on the interior (or full) grid, `boundary` on the full grid;
        returns the full-grid solution.
        """
        source = np.asarray(source, dtype=float)
        if source.shape == self.grid.shape:
            source = source[1:-1, 1:-1, 1:-1]
        rhs = (source + self.boundary_load(boundary)).reshape(-1)
        size = rhs.size
        M = LinearOperator((size, size), matvec=self.fast_inverse, dtype=float)
        u, info = cg(self.matrix, rhs, x0=self.fast_inverse(rhs), M=M, rtol=self.rtol, atol=0.0, maxiter=200)
        if info != 0:
            raise AccuracyError("Poisson solve did not reach rtol={} (info={})".format(self.rtol, info))
        full = np.array(boundary, dtype=float, copy=True)
        full[1:-1, 1:-1, 1:-1] = u.reshape(self.grid.interior_shape)
        return full

    def residual(self, full: np.ndarray, source: np.ndarray) -> float:
        """max-norm of -Laplace_h u - f on the interior nodes.
        """
        if source.shape == self.grid.shape:
            source = source[1:-1, 1:-1, 1:-1]
        u = full[1:-1, 1:-1, 1:-1].reshape(-1)
        r = self.matrix @ u - self.boundary_load(full).reshape(-1) - source.reshape(-1)
        return float(np.max(np.abs(r)))


def one_sided_normal_derivative(full: np.ndarray, h: Sequence[float]) -> list:
    """outward normal derivative on each of the six faces by fourth-order
    one-sided differences, in the face order of `box_face_rule`.
    """
    out = []
    for axis in range(3):
        moved = np.moveaxis(full, axis, 0)
        step = h[axis]
        for side in (-1.0, 1.0):
            u = moved if side > 0 else moved[::-1]
            # derivative toward the face, taken from the inside
            d = (25.0 * u[-1] - 48.0 * u[-2] + 36.0 * u[-3] - 16.0 * u[-4] + 3.0 * u[-5]) / (12.0 * step)
            out.append(d.reshape(-1))
    return out


def _interpolator(grid: BoxGrid, values: np.ndarray) -> RegularGridInterpolator:
    return RegularGridInterpolator(grid.axes, values, method="cubic")


def _central_gradient(f, x: np.ndarray, h: float) -> np.ndarray:
    grad = np.empty(3)
    for i in range(3):
        e = np.zeros(3)
        e[i] = h
        grad[i] = (f(x + e) - f(x - e)) / (2.0 * h)
    return grad


@attr.s
class BoxGreen:
    """G(x0, .) on a box by the harmonic complement on a 7-point grid.
    """
    domain = attr.ib()  # type: Box
    x0 = attr.ib(converter=lambda v: np.asarray(v, dtype=float))  # type: np.ndarray
    n = attr.ib(default=65)  # type: int

    def __attrs_post_init__(self):
        require_interior(self.domain, self.x0)
        self.grid = BoxGrid(self.domain, self.n)
        self.solver = PoissonSolver(self.grid)
        self.g_nodes = self._complement(self.grid, self.solver)
        self._g = _interpolator(self.grid, self.g_nodes)
        coarse = self.grid.coarse()
        g_coarse = self._complement(coarse, PoissonSolver(coarse))
        fine_value = float(self._g(self.x0[None, :])[0])
        coarse_value = float(_interpolator(coarse, g_coarse)(self.x0[None, :])[0])
        ex = richardson([coarse_value, fine_value], [2.0])
        self.phi_fd, self.phi_fd_error = ex.value, ex.error
        logger.info("box Robin value by finite differences: %.10g (+- %.2g)", self.phi_fd, self.phi_fd_error)

    N = 3

    def _complement(self, grid: BoxGrid, solver: PoissonSolver) -> np.ndarray:
        nodes = grid.nodes()
        boundary = np.zeros(grid.shape)
        mask = grid.boundary_mask()
        boundary[mask] = -fundamental(np.linalg.norm(nodes[mask] - self.x0, axis=-1), 3)
        return solver.solve(np.zeros(grid.interior_shape), boundary)

    def g(self, y):
        y = np.atleast_2d(np.asarray(y, dtype=float))
        return self._g(y)

    def G(self, y):
        y = np.atleast_2d(np.asarray(y, dtype=float))
        return fundamental(np.linalg.norm(y - self.x0, axis=-1), 3) + self._g(y)

    @property
    def phi(self) -> float:
        return self.phi_fd

    @property
    def grad_g_diag(self) -> np.ndarray:
        h = float(np.min(self.grid.h))
        return _central_gradient(lambda y: float(self._g(y[None, :])[0]), self.x0, h)

    @property
    def grad_phi(self) -> np.ndarray:
        """the regular part is symmetric, so grad phi is twice its y-gradient.
        """
        return 2.0 * self.grad_g_diag

    def face_traces(self, nodes_full: np.ndarray) -> np.ndarray:
        return np.concatenate(one_sided_normal_derivative(nodes_full, self.grid.h))

    def surface_rule(self) -> SurfaceRule:
        return self.grid.face_rule()

    def dG_dn(self, points=None, normals=None) -> np.ndarray:
        """outward normal derivative of G(x0, .) on the face nodes of the grid.
        """
        rule = self.surface_rule()
        analytic = np.sum(fundamental_gradient(rule.points - self.x0, 3) * rule.normals, axis=-1)
        return analytic + self.face_traces(self.g_nodes)


def _series_kernel(kappa: np.ndarray, s: float, t: float, L: float) -> np.ndarray:
    lo, hi = min(s, t), max(s, t)
    return (
        np.exp(-kappa * (hi - lo))
        * -np.expm1(-2.0 * kappa * lo)
        * -np.expm1(-2.0 * kappa * (L - hi))
        / (2.0 * kappa * -np.expm1(-2.0 * kappa * L))
    )


def green_box_series(box: Box, x, y, cutoff: float = SERIES_CUTOFF, chunk: int = 256) -> float:
    """G(x, y) for points offset along the third axis (equal first two
    coordinates); terms with kappa |x3 - y3| above `cutoff` are dropped.
    """
    x = np.asarray(x, dtype=float) - np.asarray(box.lower)
    y = np.asarray(y, dtype=float) - np.asarray(box.lower)
    L1, L2, L3 = box.sides
    if abs(x[0] - y[0]) > 0 or abs(x[1] - y[1]) > 0:
        raise DomainError("series route needs points offset along the third axis only")
    gap = abs(x[2] - y[2])
    if gap == 0.0:
        raise DomainError("series route needs distinct points")
    kmax = cutoff / gap
    M = int(kmax * L1 / math.pi) + 1
    Nn = int(kmax * L2 / math.pi) + 1
    n = np.arange(1, Nn + 1)
    sn = np.sin(n * math.pi * x[1] / L2) ** 2
    total = 0.0
    for start in range(1, M + 1, chunk):
        m = np.arange(start, min(start + chunk, M + 1))
        sm = np.sin(m * math.pi * x[0] / L1) ** 2
        kappa = math.pi * np.sqrt((m[:, None] / L1) ** 2 + (n[None, :] / L2) ** 2)
        keep = kappa <= kmax
        K = np.where(keep, _series_kernel(np.where(keep, kappa, 1.0), x[2], y[2], L3), 0.0)
        total += float(np.sum(sm[:, None] * sn[None, :] * K))
    return 4.0 / (L1 * L2) * total


def robin_box_series(box: Box, x0, levels: int = 4, first: Optional[float] = None) -> Tuple[float, float]:
    """phi(x0) from the series route: average of G(x0, x0 +- delta e3) minus
    Gamma(delta), extrapolated in delta with exponents 2 and 4.
    """
    x0 = require_interior(box, x0)
    delta0 = first if first is not None else 0.1 * box.distance_to_boundary(x0)
    values = []
    for k in range(levels):
        delta = delta0 * 2.0 ** (-k)
        e = np.array([0.0, 0.0, delta])
        avg = 0.5 * (green_box_series(box, x0, x0 + e) + green_box_series(box, x0, x0 - e))
        values.append(avg - float(fundamental(delta, 3)))
    ex = richardson(values, [2.0, 4.0])
    logger.info("box Robin value by series: %.10g (+- %.2g)", ex.value, ex.error)
    return ex.value, ex.error
