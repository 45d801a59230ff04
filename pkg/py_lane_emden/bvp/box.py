"""The system on a box, on the 7-point grid of `green.box`.

Unknowns are the interior values of u and v. Newton corrections come from
GMRES on the block Jacobian

    [ A        -p v^(p-1) ]
    [ -q u^(q-1) - c    A ]

preconditioned by the fast sine-transform inverse of A on each block.
"""
from typing import Optional
import logging

import numpy as np
import scipy.sparse as sps
from scipy.integrate import simpson
from scipy.sparse.linalg import LinearOperator, gmres

from py_lane_emden.bvp.newton import damped_newton
from py_lane_emden.bvp.solution import DomainSolution, SolverMode
from py_lane_emden.errors import BranchError, DomainError, InfeasibilityError, ResolutionError
from py_lane_emden.green.box import BoxGrid, PoissonSolver, one_sided_normal_derivative
from py_lane_emden.green.domains import Box
from py_lane_emden.hyperbola import SystemParams

__all__ = ["solve_box_fd", "box_integral", "local_maxima"]

logger = logging.getLogger(__name__)

_PEAK_CELLS = 3.0


def box_integral(grid: BoxGrid, f: np.ndarray) -> float:
    """Simpson's rule along each axis of a full node array."""
    x, y, z = grid.axes
    return float(simpson(simpson(simpson(f, x=z, axis=2), x=y, axis=1), x=x, axis=0))


def local_maxima(sol: DomainSolution, threshold: float = 0.01) -> np.ndarray:
    """interior nodes of u at least as large as their six neighbours and
    above `threshold` times u_max.
    """
    u = sol.u_field
    c = u[1:-1, 1:-1, 1:-1]
    peak = c >= threshold * sol.u_max
    for axis in range(3):
        lo = [slice(1, -1)] * 3
        hi = [slice(1, -1)] * 3
        lo[axis] = slice(0, -2)
        hi[axis] = slice(2, None)
        peak &= (c >= u[tuple(lo)]) & (c >= u[tuple(hi)])
    nodes = sol.grid.nodes()[1:-1, 1:-1, 1:-1]
    return nodes[peak]


def _guess(params: SystemParams, solver: PoissonSolver, q: float) -> np.ndarray:
    grid = solver.grid
    lam = float(solver.eigenvalues[0, 0, 0])
    p = params.p
    B = lam ** ((q + 1.0) / (p * q - 1.0))
    A = B ** p / lam
    X = grid.nodes()[1:-1, 1:-1, 1:-1]
    lower, sides = np.asarray(grid.box.lower), grid.box.sides
    phi = np.prod(np.sin(np.pi * (X - lower) / sides), axis=-1).reshape(-1)
    return np.concatenate([A * phi, B * phi])


def solve_box_fd(
        params: SystemParams,
        box: Box,
        mode: SolverMode = SolverMode.exponent,
        grid: int = 65,
        init: Optional[DomainSolution] = None,
        tol: float = 1e-9) -> DomainSolution:
    if params.N != 3:
        raise DomainError("box solves are three dimensional, got N={}".format(params.N))
    if not params.eps > 0:
        raise InfeasibilityError(
            "eps={} admits no positive solution on a bounded domain; need eps > 0".format(params.eps)
        )
    g = BoxGrid(box, grid)
    solver = PoissonSolver(g)
    A = solver.matrix
    size = A.shape[0]
    p = params.p
    if mode is SolverMode.exponent:
        q, lin = params.q_eps, 0.0
    else:
        q, lin = params.q, params.eps

    def split(x):
        return x[:size], x[size:]

    def residual(x):
        u, v = split(x)
        up, vp = np.maximum(u, 0.0), np.maximum(v, 0.0)
        return np.concatenate([A @ u - vp ** p, A @ v - up ** q - lin * u])

    def scale(x):
        u, v = split(x)
        return max(1.0, float(np.max(np.maximum(v, 0.0) ** p)), float(np.max(np.maximum(u, 0.0) ** q)))

    def precondition(r):
        a, b = split(r)
        return np.concatenate([solver.fast_inverse(a), solver.fast_inverse(b)])

    M = LinearOperator((2 * size, 2 * size), matvec=precondition, dtype=float)

    def step(x, F):
        u, v = split(x)
        up, vp = np.maximum(u, 0.0), np.maximum(v, 0.0)
        P = sps.diags(p * np.where(vp > 0, vp, 1.0) ** (p - 1.0) * (vp > 0))
        Q = sps.diags(q * np.where(up > 0, up, 1.0) ** (q - 1.0) * (up > 0) + lin)
        J = sps.bmat([[A, -P], [-Q, A]], format="csr")
        dx, info = gmres(J, -F, M=M, rtol=1e-8, restart=80, maxiter=20)
        if info != 0:
            logger.debug("gmres stopped early (info=%d); using the inexact correction", info)
        return dx

    if init is not None and init.grid == g:
        x0 = np.concatenate([
            init.u_field[1:-1, 1:-1, 1:-1].reshape(-1), init.v_field[1:-1, 1:-1, 1:-1].reshape(-1)
        ])
    else:
        x0 = _guess(params, solver, q)
    result = damped_newton(residual, step, x0, tol, scale=scale)

    u_int, v_int = split(result.x)
    if np.any(u_int <= 0) or np.any(v_int <= 0):
        raise BranchError("iterate left the positive cone at eps={}".format(params.eps))
    u = np.zeros(g.shape)
    v = np.zeros(g.shape)
    u[1:-1, 1:-1, 1:-1] = u_int.reshape(g.interior_shape)
    v[1:-1, 1:-1, 1:-1] = v_int.reshape(g.interior_shape)
    k = np.unravel_index(int(np.argmax(u)), g.shape)
    u_max = float(u[k])
    alpha = params.alpha_eps if mode is SolverMode.exponent else params.alpha
    mu = u_max ** (-1.0 / alpha)
    d = 1.0 - 0.5 * params.eps if mode is SolverMode.exponent else 1.0
    width = mu ** d
    if width < _PEAK_CELLS * float(np.max(g.h)):
        raise ResolutionError(
            "peak width {:.3g} is below {} cells of {:.3g}; refine the grid or stop at larger eps".format(
                width, _PEAK_CELLS, float(np.max(g.h))
            )
        )
    sol = DomainSolution(
        params=params,
        domain=box,
        mode=mode,
        grid=g,
        u_field=u,
        v_field=v,
        u_max=u_max,
        x_peak=g.nodes()[k],
        mu=mu,
        du_dn=np.concatenate(one_sided_normal_derivative(u, g.h)),
        dv_dn=np.concatenate(one_sided_normal_derivative(v, g.h)),
        int_u_q1=box_integral(g, u ** (q + 1.0)),
        int_u2=box_integral(g, u * u),
        int_v_p1=box_integral(g, v ** (p + 1.0)),
        residual=result.residual,
        iterations=result.iterations,
        boundary_rule=g.face_rule(),
    )
    logger.info("box solve eps=%g on %d^3: u_max=%.6g at %s", params.eps, grid, u_max, sol.x_peak)
    return sol
