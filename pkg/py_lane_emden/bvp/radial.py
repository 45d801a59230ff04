"""Radial solutions on a ball.

The unknowns are u and v at the nodes of a grid on [0, R] that is graded
towards the peak, r = R sinh(k s) / sinh(k) for uniform s. The radial
Laplacian is discretized by finite volumes (exact at the origin for
quadratics), u(R) = v(R) = 0, and the discrete system is solved by damped
Newton with sparse LU corrections. A converged grid solution is then
polished by collocation (`scipy.integrate.solve_bvp`, analytic Jacobian) on
the same mesh, which supplies the continuous profile and the boundary
derivatives; when the polish fails the finite-volume solution is kept and
the normal derivatives come from the flux balance

    -R^(N-1) u'(R) = int_0^R r^(N-1) v^p dr.
"""
from typing import Callable, Optional, Tuple
import logging
import math

import numpy as np
import scipy.sparse as sps
from scipy.integrate import simpson, solve_bvp
from scipy.optimize import brentq, minimize_scalar
from scipy.sparse.linalg import spsolve
from scipy.special import gamma, jv

from py_lane_emden.bvp.newton import NewtonResult, damped_newton
from py_lane_emden.bvp.solution import DomainSolution, SolverMode
from py_lane_emden.errors import BranchError, ContinuationError, DomainError, InfeasibilityError
from py_lane_emden.green.domains import Ball
from py_lane_emden.ground_state import GroundState
from py_lane_emden.hyperbola import SystemParams
from py_lane_emden.quadrature import radial_integral, sphere_area

__all__ = [
    "first_eigenpair_ball",
    "sample_grid",
    "radial_laplacian",
    "solve_ball_radial",
    "bump_guess",
    "ground_state_guess",
    "DEFAULT_NODES",
    "TRIVIAL_FRACTION",
]

logger = logging.getLogger(__name__)

DEFAULT_NODES = 2001
# first cell of the grid is the peak width over this
CELLS_PER_WIDTH = 50
# a solution whose maximum falls below this share of its guess's is the zero solution
TRIVIAL_FRACTION = 1e-3
MAX_REGRIDS = 3
# the polish is discarded when it moves u_max by more than this
POLISH_DRIFT = 0.05

Guess = Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]]


def first_eigenpair_ball(N: float, R: float = 1.0):
    """(lambda_1, phi, dphi) of -Laplace on the ball with phi(0) = 1.

    phi(r) = Gamma(nu+1) (2/(k r))^nu J_nu(k r), nu = N/2 - 1, k = sqrt(lambda_1).
    """
    nu = 0.5 * N - 1.0
    z = 0.5
    while jv(nu, z) * jv(nu, z + 0.1) > 0:
        z += 0.1
    j = brentq(lambda s: jv(nu, s), z, z + 0.1, xtol=1e-15)
    k = j / R
    norm = gamma(nu + 1.0) * 2.0 ** nu

    def phi(r):
        kr = k * np.asarray(r, dtype=float)
        safe = np.where(kr > 0, kr, 1.0)
        return np.where(kr > 0, norm * safe ** (-nu) * jv(nu, safe), 1.0)

    def dphi(r):
        kr = k * np.asarray(r, dtype=float)
        safe = np.where(kr > 0, kr, 1.0)
        return np.where(kr > 0, -k * norm * safe ** (-nu) * jv(nu + 1.0, safe), 0.0)

    return k * k, phi, dphi


def sample_grid(R: float, width: float, nodes: int = DEFAULT_NODES, graded: bool = False) -> np.ndarray:
    """nodes r = R sinh(k s)/sinh(k) on uniform s, with k chosen so the first
    cell is width / CELLS_PER_WIDTH (half of that when `graded`); wide peaks
    get the uniform grid.
    """
    cells = CELLS_PER_WIDTH * (2 if graded else 1)
    s = np.linspace(0.0, 1.0, nodes)
    target = (nodes - 1) * width / (cells * R)
    if target >= 1.0:
        return R * s
    target = max(target, 1e-250)
    k = brentq(lambda t: t / math.sinh(t) - target, 1e-9, 700.0)
    r = R * np.sinh(k * s) / math.sinh(k)
    r[-1] = R
    return r


def radial_laplacian(r: np.ndarray, N: float) -> sps.csr_matrix:
    """finite-volume -Laplacian of radial functions on the nodes r[:-1], the
    value at r[-1] being zero.

    Node i owns the shell between the midpoints of its cells; the flux
    through a midpoint is r_mid^(N-1) times the difference quotient.
    """
    h = np.diff(r)
    mid = r[:-1] + 0.5 * h
    cond = mid ** (N - 1.0) / h
    vol = np.diff(np.concatenate([[0.0], mid ** N])) / N
    left = np.concatenate([[0.0], cond[:-1]])
    return sps.diags(
        [-cond[:-1] / vol[1:], (cond + left) / vol, -cond[:-1] / vol[:-1]],
        [-1, 0, 1],
        format="csr",
    )


def _exponents(params: SystemParams, mode: SolverMode) -> Tuple[float, float]:
    """(q, coefficient of the linear term)."""
    if mode is SolverMode.exponent:
        return params.q_eps, 0.0
    return params.q, params.eps


def _scaling(params: SystemParams, mode: SolverMode) -> Tuple[float, float]:
    """(alpha, d): mu^alpha u_max = 1 and the peak width is mu^d."""
    if mode is SolverMode.exponent:
        return params.alpha_eps, 1.0 - 0.5 * params.eps
    return params.alpha, 1.0


def bump_guess(params: SystemParams, R: float, mode: SolverMode, r: np.ndarray) -> np.ndarray:
    """multiples of the first eigenfunction that balance both equations at
    the eigenvalue: lam A = B^p, lam B = A^q.
    """
    q, _ = _exponents(params, mode)
    p = params.p
    lam, phi, dphi = first_eigenpair_ball(params.N, R)
    B = lam ** ((q + 1.0) / (p * q - 1.0))
    A = B ** p / lam
    return np.vstack([A * phi(r), A * dphi(r), B * phi(r), B * dphi(r)])


def ground_state_guess(params: SystemParams, gs: GroundState, R: float, mode: SolverMode, r: np.ndarray) -> np.ndarray:
    """mu^-alpha U(r/mu^d), mu^-beta V(r/mu^d) shifted to vanish at R, with mu
    chosen so the Pohozaev balance of the guess is closest to exact.
    """
    alpha, d = _scaling(params, mode)
    beta = params.beta
    N = params.N
    sigma = sphere_area(N)
    mass = gs.int_Uq1 if mode is SolverMode.exponent else gs.int_U2
    if not math.isfinite(mass):
        return bump_guess(params, R, mode, r)

    def mismatch(log_mu):
        mu = math.exp(log_mu)
        s = R / mu ** d
        _, _, dU, dV = gs.evaluate(np.array([s]))
        flux = sigma * R ** N * mu ** (-alpha - beta - 2.0 * d) * float(dU[0] * dV[0])
        if mode is SolverMode.exponent:
            lhs = params.eps * mu ** (-0.5 * params.eps * N) * mass
        else:
            lhs = params.eps * (0.5 * N - params.alpha) * mu ** (N - 2.0 * alpha) * mass
        return math.log(max(lhs, 1e-300) / max(flux, 1e-300)) ** 2

    best = minimize_scalar(mismatch, bounds=(math.log(1e-6), 0.0), method="bounded")
    mu = math.exp(best.x)
    s = r / mu ** d
    U, V, dU, dV = gs.evaluate(s)
    U_R, V_R, _, _ = gs.evaluate(np.array([R / mu ** d]))
    logger.debug("ground-state guess with mu=%.6g", mu)
    return np.vstack([
        mu ** -alpha * (U - U_R[0]),
        mu ** (-alpha - d) * dU,
        mu ** -beta * (V - V_R[0]),
        mu ** (-beta - d) * dV,
    ])


def _power(x, e):
    return np.maximum(x, 0.0) ** e


def _dpower(x, e):
    pos = x > 0
    return np.where(pos, e * np.where(pos, x, 1.0) ** (e - 1.0), 0.0)


def _newton(params: SystemParams, mode: SolverMode, r: np.ndarray, u0: np.ndarray, v0: np.ndarray,
            tol: float) -> NewtonResult:
    L = radial_laplacian(r, params.N)
    n = L.shape[0]
    p = params.p
    q, lin = _exponents(params, mode)

    def split(x):
        return x[:n], x[n:]

    def residual(x):
        u, v = split(x)
        return np.concatenate([L @ u - _power(v, p), L @ v - _power(u, q) - lin * u])

    def scale(x):
        u, v = split(x)
        return max(1.0, float(np.max(_power(v, p))), float(np.max(_power(u, q))))

    def step(x, F):
        u, v = split(x)
        P = sps.diags(_dpower(v, p))
        Q = sps.diags(_dpower(u, q) + lin)
        J = sps.bmat([[L, -P], [-Q, L]], format="csc")
        return spsolve(J, -F)

    return damped_newton(residual, step, np.concatenate([u0[:n], v0[:n]]), tol, scale=scale)


def _grid_solve(params: SystemParams, R: float, mode: SolverMode, guess: Guess, tol: float,
                nodes: int, graded: bool):
    """finite-volume solution from `guess`, regridded while the peak comes
    out markedly narrower than the grid was built for.
    """
    alpha, d = _scaling(params, mode)
    u_top = float(guess(np.zeros(1))[0][0])
    if not u_top > 0:
        raise BranchError("initial guess at eps={} has u(0)={:.3g}".format(params.eps, u_top))
    width = min(R, u_top ** (-d / alpha))
    for _ in range(MAX_REGRIDS):
        r = sample_grid(R, width, nodes, graded)
        u0, v0 = guess(r)
        result = _newton(params, mode, r, u0, v0, tol)
        n = len(r) - 1
        u = np.append(result.x[:n], 0.0)
        v = np.append(result.x[n:], 0.0)
        u_max = float(np.max(u))
        if not u_max > TRIVIAL_FRACTION * u_top:
            raise BranchError("Newton at eps={} collapsed onto the zero solution (u_max={:.3g} from a guess of {:.3g})".format(
                params.eps, u_max, u_top))
        found = min(R, u_max ** (-d / alpha))
        if found >= 0.7 * width:
            return r, u, v, result
        logger.debug("peak width %.3g below the grid's %.3g at eps=%g; regridding", found, width, params.eps)
        width = found

        def guess(s, r=r, u=u, v=v):
            return np.interp(s, r, u), np.interp(s, r, v)
    return r, u, v, result


def _system(params: SystemParams, mode: SolverMode):
    p = params.p
    q, lin = _exponents(params, mode)

    def fun(r, y):
        u, du, v, dv = y
        return np.vstack([du, -_power(v, p), dv, -(_power(u, q) + lin * u)])

    def fun_jac(r, y):
        u, _, v, _ = y
        J = np.zeros((4, 4, y.shape[1]))
        J[0, 1] = 1.0
        J[1, 2] = -_dpower(v, p)
        J[2, 3] = 1.0
        J[3, 0] = -(_dpower(u, q) + lin)
        return J

    return fun, fun_jac


def _bc(ya, yb):
    return np.array([ya[1], ya[3], yb[0], yb[2]])


def _bc_jac(ya, yb):
    A = np.zeros((4, 4))
    B = np.zeros((4, 4))
    A[0, 1] = A[1, 3] = 1.0
    B[2, 0] = B[3, 2] = 1.0
    return A, B


def _polish(params: SystemParams, mode: SolverMode, r: np.ndarray, u: np.ndarray, v: np.ndarray,
            tol: float, max_nodes: int):
    du = np.gradient(u, r, edge_order=2)
    dv = np.gradient(v, r, edge_order=2)
    du[0] = dv[0] = 0.0
    N = params.N
    fun, fun_jac = _system(params, mode)
    S = np.diag([0.0, -(N - 1.0), 0.0, -(N - 1.0)])
    res = solve_bvp(fun, _bc, r, np.vstack([u, du, v, dv]), S=S, fun_jac=fun_jac, bc_jac=_bc_jac,
                    tol=tol, bc_tol=tol, max_nodes=max_nodes)
    if res.status != 0:
        logger.warning("collocation polish failed at eps=%g (%s); keeping the grid solution",
                       params.eps, res.message)
        return None
    u_max = float(res.sol(0.0)[0])
    if abs(u_max - u[0]) > POLISH_DRIFT * u[0]:
        logger.warning("collocation polish moved u_max from %.6g to %.6g at eps=%g; keeping the grid solution",
                       u[0], u_max, params.eps)
        return None
    return res


def _guesses(params: SystemParams, R: float, mode: SolverMode, init: Optional[DomainSolution],
             gs: Optional[GroundState]):
    if init is not None:
        def previous(r):
            if init.profile is not None:
                Y = init.profile(r)
                return Y[0], Y[2]
            return np.interp(r, init.grid, init.u_field), np.interp(r, init.grid, init.v_field)
        return [("previous solution", previous)]

    def bump(r):
        Y = bump_guess(params, R, mode, r)
        return Y[0], Y[2]

    out = [("eigenfunction bump", bump)]
    if gs is not None:
        def rescaled(r):
            Y = ground_state_guess(params, gs, R, mode, r)
            return Y[0], Y[2]
        out.append(("rescaled ground state", rescaled))
    return out


def solve_ball_radial(
        params: SystemParams,
        R: float = 1.0,
        mode: SolverMode = SolverMode.exponent,
        init: Optional[DomainSolution] = None,
        gs: Optional[GroundState] = None,
        tol: float = 1e-9,
        nodes: int = DEFAULT_NODES,
        graded: bool = False,
        max_nodes: int = 100000,
        center=None) -> DomainSolution:
    """the positive radial solution, started from `init` when given and
    otherwise from the eigenfunction bump, then from the rescaled ground
    state `gs` if the bump fails.
    """
    if not R > 0:
        raise DomainError("ball radius must be positive, got R={}".format(R))
    if not params.eps > 0:
        raise InfeasibilityError(
            "eps={} admits no positive solution on a bounded domain; need eps > 0".format(params.eps)
        )
    N = params.N
    if mode is SolverMode.perturbation and params.p == 1.0:
        lam, _, _ = first_eigenpair_ball(N, R)
        if params.eps >= lam * lam:
            raise InfeasibilityError(
                "eps={} is not below lambda_1^2={:.6g}; the perturbed problem has no positive solution".format(
                    params.eps, lam * lam
                )
            )
    domain = Ball(R, int(N), center) if float(N).is_integer() else None

    failure = None
    for name, guess in _guesses(params, R, mode, init, gs):
        try:
            r, u, v, result = _grid_solve(params, R, mode, guess, tol, nodes, graded)
            break
        except (ContinuationError, BranchError) as e:
            logger.info("%s guess failed at eps=%g: %s", name, params.eps, e)
            failure = e
    else:
        raise failure

    p = params.p
    q, lin = _exponents(params, mode)
    polished = _polish(params, mode, r, u, v, tol, max_nodes)
    if polished is not None:
        Y = polished.sol(r)
        u, v = Y[0], Y[2]
        u[-1] = v[-1] = 0.0
        end = polished.sol(R)
        du_dn, dv_dn = end[1], end[3]
        residual = float(np.max(polished.rms_residuals))
        profile = polished.sol
    else:
        weight = r ** (N - 1.0) / R ** (N - 1.0)
        du_dn = -float(simpson(weight * _power(v, p), x=r))
        dv_dn = -float(simpson(weight * (_power(u, q) + lin * u), x=r))
        residual = result.residual / max(1.0, float(np.max(_power(v, p))), float(np.max(_power(u, q))))
        profile = None
    if np.any(u[:-1] <= 0) or np.any(v[:-1] <= 0):
        raise BranchError("iterate left the positive cone at eps={} (min u={:.3g}, min v={:.3g})".format(
            params.eps, float(np.min(u[:-1])), float(np.min(v[:-1]))))
    if np.any(np.diff(u) >= 0) or np.any(np.diff(v) >= 0):
        logger.warning("radial solution at eps=%g is not strictly decreasing in r", params.eps)

    alpha, _ = _scaling(params, mode)
    u_max = float(u[0])
    sol = DomainSolution(
        params=params,
        domain=domain,
        mode=mode,
        grid=r,
        u_field=u,
        v_field=v,
        u_max=u_max,
        x_peak=np.asarray(domain.center) if domain is not None else np.zeros(int(round(N))),
        mu=u_max ** (-1.0 / alpha),
        du_dn=np.array([du_dn]),
        dv_dn=np.array([dv_dn]),
        int_u_q1=radial_integral(r, u ** (q + 1.0), N),
        int_u2=radial_integral(r, u * u, N),
        int_v_p1=radial_integral(r, v ** (p + 1.0), N),
        residual=residual,
        iterations=result.iterations,
        profile=profile,
    )
    logger.info("ball solve eps=%g: u_max=%.8g mu=%.4g (%d nodes, %s)", params.eps, u_max, sol.mu, len(r),
                "polished" if profile is not None else "grid only")
    return sol
