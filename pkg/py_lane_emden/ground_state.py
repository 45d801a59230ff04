"""Radial ground state (U, V) of the limit system on R^N

    -U'' - (N-1)/r U' = V^p,    -V'' - (N-1)/r V' = U^q,    U(0) = 1,

found by shooting on V(0) = v0.

The ODEs are integrated in t = log r with the state (U, r U', V, r V'),
launched from a fourth-order series at a small radius, so that the tails
out to r ~ 1e6 cost a few hundred steps. A shot is too small when V
reaches zero first and too large when U does; v0 is bisected on a log
scale down to adjacent floats, and the distance out to which the two
bracketing shots agree is the radius the profile is trusted to.

Tail constants come from Richardson plateaus of the weighted tails (the
correction exponents of each regime are known in closed form), except for
`b` in the logarithmic regime, where `r^(N-2) U` grows like `b log r` and
`b` is the slope of that line in `log r`, i.e. a linear extrapolation in
`1/log r` of `r^(N-2) U / log r`.
"""
from typing import List, Optional, Sequence, Tuple, Union
import logging
import math

import attr
import numpy as np
from scipy.integrate import cumulative_simpson, quad, simpson, solve_ivp

from py_lane_emden.errors import (
    BracketingError,
    DomainError,
    IntegrationFailure,
    TailExtractionError,
)
from py_lane_emden.hyperbola import Regime, SystemParams
from py_lane_emden.quadrature import richardson, sphere_area

__all__ = [
    "RadialProfile",
    "TailModel",
    "GroundState",
    "CrossedZero",
    "GrewBeyondBound",
    "Decayed",
    "ShootOutcome",
    "shoot",
    "radial_grid",
    "find_ground_state",
    "sobolev_constant",
    "dilate",
    "resample_profile",
    "flux_residuals",
    "tail_slopes",
]

logger = logging.getLogger(__name__)

CORE_NODES = 2001
NODES_PER_DECADE = 400
GROWTH_FACTOR = 10.0
AGREEMENT = 1e-8
DRIFT_FLOOR = 1e-8
MAX_RMAX_RAISES = 2
# innermost radius the tail constants are read at
R_END_FLOOR = 100.0

_RTOL = 1e-12
_ATOL = 1e-15


@attr.s(frozen=True)
class RadialProfile:
    grid = attr.ib()  # type: np.ndarray
    U_vals = attr.ib()  # type: np.ndarray
    V_vals = attr.ib()  # type: np.ndarray
    U_deriv = attr.ib()  # type: np.ndarray
    V_deriv = attr.ib()  # type: np.ndarray
    r_max = attr.ib()  # type: float

    def rows(self):
        return np.column_stack([self.grid, self.U_vals, self.V_vals, self.U_deriv, self.V_deriv])

    def U(self, r):
        return np.interp(r, self.grid, self.U_vals)

    def V(self, r):
        return np.interp(r, self.grid, self.V_vals)


@attr.s(frozen=True)
class TailModel:
    """asymptotic forms used beyond the end of the profile:

        V ~ a r^(2-N)
        U ~ b r^(2-N)                       (supercritical)
        U ~ r^(2-N) (b log r + c)           (logarithmic)
        U ~ b r^(-m) + c r^(2-N)            (subcritical, m = p(N-2) - 2)
    """
    regime = attr.ib()  # type: Regime
    N = attr.ib()  # type: float
    m = attr.ib()  # type: float
    a = attr.ib()  # type: float
    b = attr.ib()  # type: float
    c = attr.ib(default=0.0)  # type: float

    def V(self, r):
        return self.a * r ** (2.0 - self.N)

    def U(self, r):
        if self.regime is Regime.supercritical:
            return self.b * r ** (2.0 - self.N)
        if self.regime is Regime.logarithmic:
            return r ** (2.0 - self.N) * (self.b * np.log(r) + self.c)
        return self.b * r ** (-self.m) + self.c * r ** (2.0 - self.N)

    def dV(self, r):
        return (2.0 - self.N) * self.a * r ** (1.0 - self.N)

    def dU(self, r):
        N = self.N
        if self.regime is Regime.supercritical:
            return (2.0 - N) * self.b * r ** (1.0 - N)
        if self.regime is Regime.logarithmic:
            return r ** (1.0 - N) * ((2.0 - N) * (self.b * np.log(r) + self.c) + self.b)
        return -self.m * self.b * r ** (-self.m - 1.0) + (2.0 - N) * self.c * r ** (1.0 - N)

    def U_decay(self) -> float:
        if self.regime is Regime.subcritical:
            return self.m
        return self.N - 2.0

    def dilated(self, lam: float, alpha: float, beta: float) -> "TailModel":
        """tails of r -> (lam^alpha U(lam r), lam^beta V(lam r)).
        """
        N = self.N
        a = lam ** (beta + 2.0 - N) * self.a
        if self.regime is Regime.subcritical:
            return attr.evolve(self, a=a, b=lam ** (alpha - self.m) * self.b, c=lam ** (alpha + 2.0 - N) * self.c)
        scale = lam ** (alpha + 2.0 - N)
        if self.regime is Regime.logarithmic:
            return attr.evolve(self, a=a, b=scale * self.b, c=scale * (self.c + self.b * math.log(lam)))
        return attr.evolve(self, a=a, b=scale * self.b, c=scale * self.c)


@attr.s(frozen=True)
class GroundState:
    params = attr.ib()  # type: SystemParams
    profile = attr.ib()  # type: RadialProfile
    tail = attr.ib()  # type: TailModel
    v0 = attr.ib()  # type: float
    a = attr.ib()  # type: float
    b = attr.ib()  # type: float
    S = attr.ib()  # type: float
    int_Uq = attr.ib()  # type: float
    int_Vp = attr.ib()  # type: float
    int_Uq1 = attr.ib()  # type: float
    int_Vp1 = attr.ib()  # type: float
    int_U2 = attr.ib()  # type: float
    regime = attr.ib()  # type: Regime
    trusted_radius = attr.ib(default=math.inf)  # type: float
    a_error = attr.ib(default=0.0)  # type: float
    b_error = attr.ib(default=0.0)  # type: float
    b_extrapolation = attr.ib(default="richardson in 1/r")  # type: str
    tol = attr.ib(default=1e-10)  # type: float

    def evaluate(self, r):
        """U, V, U', V' at radii r, from the profile up to r_max and the
        tail model beyond.
        """
        r = np.asarray(r, dtype=float)
        prof, tail = self.profile, self.tail
        inside = r <= prof.r_max
        far = np.where(inside, prof.r_max, r)
        return (
            np.where(inside, prof.U(r), tail.U(far)),
            np.where(inside, prof.V(r), tail.V(far)),
            np.where(inside, np.interp(r, prof.grid, prof.U_deriv), tail.dU(far)),
            np.where(inside, np.interp(r, prof.grid, prof.V_deriv), tail.dV(far)),
        )

    def constants(self) -> dict:
        return dict(
            p=self.params.p,
            q=self.params.q,
            N=self.params.N,
            v0=self.v0,
            a=self.a,
            b=self.b,
            S=self.S,
            int_Uq=self.int_Uq,
            int_Vp=self.int_Vp,
            int_Uq1=self.int_Uq1,
            int_Vp1=self.int_Vp1,
            int_U2=self.int_U2,
            regime=self.regime.value,
            b_extrapolation=self.b_extrapolation,
            r_max=self.profile.r_max,
            trusted_radius=self.trusted_radius,
        )


@attr.s(frozen=True)
class CrossedZero:
    r = attr.ib()  # type: float
    which = attr.ib()  # type: str


@attr.s(frozen=True)
class GrewBeyondBound:
    r = attr.ib()  # type: float


@attr.s(frozen=True)
class Decayed:
    profile = attr.ib()  # type: RadialProfile
    # sign of the constant part of V at the end of the shot
    drift = attr.ib(default=0.0)  # type: float


ShootOutcome = Union[CrossedZero, GrewBeyondBound, Decayed]


def _series(params: SystemParams, v0: float, r: np.ndarray):
    """fourth-order expansion at the origin: (U, rU', V, rV').
    """
    N, p, q = params.N, params.p, params.q
    A = v0 ** p
    c4 = p * v0 ** (p - 1.0) / (8.0 * N * (N + 2.0))
    d4 = q * A / (8.0 * N * (N + 2.0))
    r2 = r * r
    U = 1.0 - A * r2 / (2.0 * N) + c4 * r2 * r2
    P = -A * r2 / N + 4.0 * c4 * r2 * r2
    V = v0 - r2 / (2.0 * N) + d4 * r2 * r2
    Q = -r2 / N + 4.0 * d4 * r2 * r2
    return U, P, V, Q


def _launch_radius(params: SystemParams, v0: float) -> float:
    return 1e-3 * min(1.0, math.sqrt(v0), v0 ** (-params.p / 2.0))


def _integrate(params: SystemParams, v0: float, r_max: float):
    N, p, q = params.N, params.p, params.q
    two_minus_n = 2.0 - N

    def rhs(t, y):
        U, P, V, Q = y
        e2 = math.exp(2.0 * t)
        return [
            P,
            two_minus_n * P - e2 * max(V, 0.0) ** p,
            Q,
            two_minus_n * Q - e2 * max(U, 0.0) ** q,
        ]

    def u_zero(t, y):
        return y[0]

    def v_zero(t, y):
        return y[2]

    def u_grows(t, y):
        return y[0] - GROWTH_FACTOR

    def v_grows(t, y):
        return y[2] - GROWTH_FACTOR * v0

    for event, direction in ((u_zero, -1), (v_zero, -1), (u_grows, 1), (v_grows, 1)):
        event.terminal = True
        event.direction = direction

    r_s = _launch_radius(params, v0)
    y0 = list(_series(params, v0, np.float64(r_s)))
    sol = solve_ivp(
        rhs,
        (math.log(r_s), math.log(r_max)),
        y0,
        method="DOP853",
        rtol=_RTOL,
        atol=_ATOL,
        dense_output=True,
        events=(u_zero, v_zero, u_grows, v_grows),
    )
    if sol.status == -1:
        raise IntegrationFailure("shooting integration failed: {}".format(sol.message), math.exp(sol.t[-1]))
    return sol, r_s


def _classify(sol) -> Optional[Tuple[str, float]]:
    names = ("U", "V", "U-growth", "V-growth")
    hits = [(t_ev[0], names[k]) for k, t_ev in enumerate(sol.t_events) if len(t_ev)]
    if not hits:
        return None
    t, which = min(hits)
    return which, math.exp(t)


def radial_grid(r_end: float, density: int = 1) -> np.ndarray:
    """uniform on [0, 1], logarithmic beyond; `density` multiplies both node counts.
    """
    core = np.linspace(0.0, 1.0, (CORE_NODES - 1) * density + 1)
    if r_end <= 1.0:
        return core * r_end
    decades = math.log10(r_end)
    outer = np.logspace(0.0, decades, int(math.ceil(NODES_PER_DECADE * density * decades)) + 1)
    outer[-1] = r_end
    return np.concatenate([core, outer[1:]])


def _sample(params: SystemParams, v0: float, sol, r_s: float, grid: np.ndarray) -> RadialProfile:
    U = np.empty_like(grid)
    P = np.empty_like(grid)
    V = np.empty_like(grid)
    Q = np.empty_like(grid)
    inner = grid < r_s
    U[inner], P[inner], V[inner], Q[inner] = _series(params, v0, grid[inner])
    Y = sol.sol(np.log(grid[~inner]))
    U[~inner], P[~inner], V[~inner], Q[~inner] = Y
    with np.errstate(divide="ignore", invalid="ignore"):
        dU = np.where(grid > 0, P / grid, 0.0)
        dV = np.where(grid > 0, Q / grid, 0.0)
    return RadialProfile(grid, U, V, dU, dV, float(grid[-1]))


def shoot(params: SystemParams, v0: float, r_max: float) -> ShootOutcome:
    if not v0 > 0:
        raise DomainError("shooting value must be positive, got v0={}".format(v0))
    if not r_max > 1:
        raise DomainError("shooting radius must exceed 1, got r_max={}".format(r_max))
    sol, r_s = _integrate(params, v0, r_max)
    hit = _classify(sol)
    if hit is not None:
        which, r = hit
        if which.endswith("growth"):
            return GrewBeyondBound(r)
        return CrossedZero(r, which)
    profile = _sample(params, v0, sol, r_s, radial_grid(r_max))
    U, P, V, Q = sol.y[:, -1]
    return Decayed(profile, V + Q / (params.N - 2.0))


def _too_large(outcome: ShootOutcome) -> bool:
    if isinstance(outcome, CrossedZero):
        return outcome.which == "U"
    if isinstance(outcome, GrewBeyondBound):
        return True
    return outcome.drift > 0.0


def _bracket(params: SystemParams, v0_range: Tuple[float, float], r_max: float) -> Tuple[float, float]:
    lo, hi = v0_range
    if _too_large(shoot(params, lo, r_max)):
        raise BracketingError("shot at v0={} already overshoots; widen the v0 range".format(lo))
    if not _too_large(shoot(params, hi, r_max)):
        raise BracketingError("shot at v0={} still undershoots; widen the v0 range".format(hi))
    steps = 0
    while hi - lo > 2.0 * np.spacing(hi):
        mid = math.sqrt(lo * hi)
        if mid <= lo or mid >= hi:
            break
        outcome = shoot(params, mid, r_max)
        if _too_large(outcome):
            hi = mid
        else:
            lo = mid
        steps += 1
        logger.debug("bisection step %d: v0 in [%.17g, %.17g] (%s)", steps, lo, hi, type(outcome).__name__)
    logger.info("v0 bracketed in [%.17g, %.17g] after %d shots", lo, hi, steps)
    return lo, hi


def _trusted_radius(params: SystemParams, lo: float, hi: float, r_limit: float) -> float:
    """largest radius out to which the two bracketing shots agree.
    """
    sol_lo, _ = _integrate(params, lo, r_limit)
    sol_hi, _ = _integrate(params, hi, r_limit)
    t_end = min(sol_lo.t[-1], sol_hi.t[-1])
    t = np.linspace(0.0, t_end, int(NODES_PER_DECADE * t_end / math.log(10.0)) + 2)
    Y_lo, Y_hi = sol_lo.sol(t), sol_hi.sol(t)
    scale = np.maximum(np.abs(Y_lo[[0, 2]]), 1e-300)
    gap = np.max(np.abs(Y_lo[[0, 2]] - Y_hi[[0, 2]]) / scale, axis=0)
    bad = np.nonzero(gap > AGREEMENT)[0]
    if len(bad) == 0:
        return math.exp(t_end)
    return math.exp(t[max(bad[0] - 1, 0)])


def _weights(params: SystemParams, regime: Regime):
    N, p, q = params.N, params.p, params.q
    m = p * (N - 2.0) - 2.0
    if regime is Regime.subcritical:
        s_u = N - p * (N - 2.0)
        e_u = m
    else:
        s_u = p * (N - 2.0) - N
        e_u = N - 2.0
    s_v = q * e_u - N
    return m, s_u, s_v


def _plateau(w: Sequence[float], s: float) -> Tuple[float, float]:
    ex = richardson(w, [s, 2.0 * s])
    return ex.value, ex.error


def _extract_tails(params: SystemParams, profile_at, r_end: float, regime: Regime):
    """a, b with error estimates from samples at r_end / 2^j, and the drift of
    each against the same extraction one decade further in.
    """
    N = params.N
    m, s_u, s_v = _weights(params, regime)

    def at(r_top):
        radii = np.array([r_top / 4.0, r_top / 2.0, r_top])
        U, V = profile_at(radii)
        a, a_err = _plateau(radii ** (N - 2.0) * V, s_v)
        if regime is Regime.logarithmic:
            w = radii ** (N - 2.0) * U
            b = (w[-1] - w[0]) / math.log(4.0)
            b_err = abs(b - (w[-1] - w[1]) / math.log(2.0))
            c = w[-1] - b * math.log(radii[-1])
        elif regime is Regime.subcritical:
            b, b_err = _plateau(radii ** m * U, s_u)
            c = (U[-1] - b * radii[-1] ** (-m)) * radii[-1] ** (N - 2.0)
        else:
            b, b_err = _plateau(radii ** (N - 2.0) * U, s_u)
            c = 0.0
        return a, a_err, b, b_err, c

    outer = at(r_end)
    inner = at(r_end / 10.0)
    drift = max(abs(outer[0] - inner[0]) / abs(outer[0]), abs(outer[2] - inner[2]) / abs(outer[2]))
    return outer, drift, m


def _settle_tails(params: SystemParams, profile_at, r_start: float, r_ceiling: float, regime: Regime):
    """tail extraction at the decade radius with the least drift.

    Truncation error shrinks as r_end grows while the unstable mode fed by
    integration error grows, so decades are scanned inward from r_start down
    to R_END_FLOOR and outward up to r_ceiling until the drift turns up.
    """
    def trial(r_end):
        tails, drift, m = _extract_tails(params, profile_at, r_end, regime)
        logger.debug("tail plateau at r_end=%.3g: a=%.12g b=%.12g drift=%.3g", r_end, tails[0], tails[2], drift)
        return r_end, tails, drift, m

    best = trial(r_start)
    for direction, limit in ((0.1, R_END_FLOOR), (10.0, r_ceiling)):
        previous = best
        for _ in range(MAX_RMAX_RAISES + 2):
            r_end = previous[0] * direction
            if (direction < 1.0 and r_end < limit) or (direction > 1.0 and r_end > limit * 1.0001):
                break
            current = trial(r_end)
            if current[2] < best[2]:
                best = current
            if current[2] > previous[2]:
                break
            previous = current
    return best


def _split(r: np.ndarray) -> Tuple[slice, slice]:
    """uniform core and logarithmic outer part of a `radial_grid`, sharing
    their junction node.
    """
    h = np.diff(r)
    off = np.nonzero(np.abs(h - h[0]) > 1e-6 * h[0])[0]
    j = int(off[0]) if len(off) else len(r) - 1
    return slice(0, j + 1), slice(j, len(r))


def _integrals(profile: RadialProfile, tail: TailModel, params: SystemParams) -> dict:
    N, p, q = params.N, params.p, params.q
    r, U, V = profile.grid, profile.U_vals, profile.V_vals
    r_end = profile.r_max
    core, outer = _split(r)
    sigma = sphere_area(N)

    def body(f):
        total = simpson(f[core] * r[core] ** (N - 1.0), x=r[core])
        if len(r[outer]) > 1:
            total += simpson(f[outer] * r[outer] ** N, x=np.log(r[outer]))
        return sigma * float(total)

    def tail_of(g):
        value, _ = quad(lambda s: g(s) * s ** (N - 1.0), r_end, np.inf, limit=200)
        return sigma * value

    e_u = tail.U_decay()

    def finite(power, decay):
        return power * decay > N

    Uq = body(U ** q) + tail_of(lambda s: tail.U(s) ** q)
    Uq1 = body(U ** (q + 1.0)) + tail_of(lambda s: tail.U(s) ** (q + 1.0))
    Vp1 = body(V ** (p + 1.0)) + tail_of(lambda s: tail.V(s) ** (p + 1.0))
    if params.regime is Regime.supercritical:
        Vp = body(V ** p) + tail_of(lambda s: tail.V(s) ** p)
    else:
        Vp = math.inf
    if params.regime is Regime.logarithmic:
        u2_finite = N > 4.0
    else:
        u2_finite = finite(2.0, e_u)
    U2 = body(U ** 2) + tail_of(lambda s: tail.U(s) ** 2) if u2_finite else math.inf
    return dict(int_Uq=Uq, int_Vp=Vp, int_Uq1=Uq1, int_Vp1=Vp1, int_U2=U2)


def sobolev_constant(gs: GroundState, params: SystemParams) -> float:
    p, q = params.p, params.q
    return gs.int_Vp1 / gs.int_Uq1 ** ((p + 1.0) / (p * (q + 1.0)))


def find_ground_state(
        params: SystemParams,
        tol: float = 1e-10,
        v0_range: Tuple[float, float] = (1e-3, 1e3),
        r_max: float = 1e4) -> GroundState:
    if not params.is_critical:
        raise DomainError("the ground state lives on the critical hyperbola; got eps={}".format(params.eps))
    if not tol > 0:
        raise DomainError("tolerance must be positive, got tol={}".format(tol))
    regime = params.regime
    lo, hi = _bracket(params, v0_range, min(r_max, 1e4))
    v0 = math.sqrt(lo * hi) if hi > lo else lo
    r_limit = r_max * 10.0 ** MAX_RMAX_RAISES
    trusted = _trusted_radius(params, lo, hi, r_limit)
    logger.info("profile trusted out to r = %.3g", trusted)

    sol, r_s = _integrate(params, v0, min(r_limit, trusted))
    r_reach = math.exp(sol.t[-1])

    def profile_at(radii):
        Y = sol.sol(np.log(radii))
        return Y[0], Y[2]

    threshold = max(10.0 * tol, DRIFT_FLOOR)
    r_end, (a, a_err, b, b_err, c), drift, m = _settle_tails(
        params, profile_at, min(r_max, trusted, r_reach), min(trusted, r_reach), regime)
    if drift > threshold:
        raise TailExtractionError(
            "tail plateau drifts by {:.3g} over a decade (threshold {:.3g}) at best, at r={:.3g}".format(
                drift, threshold, r_end
            ),
            drift,
        )

    if not (a > 0 and b > 0):
        raise TailExtractionError("tail constants must be positive, got a={}, b={}".format(a, b))
    profile = _sample(params, v0, sol, r_s, radial_grid(r_end))
    tail = TailModel(regime, params.N, m, a, b, c)
    integrals = _integrals(profile, tail, params)
    S = integrals["int_Vp1"] / integrals["int_Uq1"] ** ((params.p + 1.0) / (params.p * (params.q + 1.0)))
    gs = GroundState(
        params=params,
        profile=profile,
        tail=tail,
        v0=v0,
        a=a,
        b=b,
        S=S,
        regime=regime,
        trusted_radius=trusted,
        a_error=a_err,
        b_error=b_err,
        b_extrapolation="linear in 1/log r" if regime is Regime.logarithmic else "richardson in 1/r",
        tol=tol,
        **integrals
    )
    logger.info("ground state p=%g N=%g: v0=%.12g a=%.10g b=%.10g S=%.10g", params.p, params.N, v0, a, b, S)
    return gs


def resample_profile(gs: GroundState, params: SystemParams, density: int = 2) -> GroundState:
    """the ground state with its profile re-sampled on a `radial_grid` with
    `density` times the nodes and every integral recomputed; the tail model
    is kept.
    """
    r_end = gs.profile.r_max
    sol, r_s = _integrate(params, gs.v0, r_end)
    if sol.t[-1] < math.log(r_end) * (1.0 - 1e-12):
        raise IntegrationFailure("re-integration stopped short of the profile end", math.exp(sol.t[-1]))
    profile = _sample(params, gs.v0, sol, r_s, radial_grid(r_end, density))
    integrals = _integrals(profile, gs.tail, params)
    shadow = attr.evolve(gs, profile=profile, **integrals)
    return attr.evolve(shadow, S=sobolev_constant(shadow, params))


def dilate(gs: GroundState, params: SystemParams, lam: float) -> GroundState:
    """the ground state under the critical scaling U -> lam^alpha U(lam r),
    V -> lam^beta V(lam r), with every integral recomputed from the new profile.
    """
    alpha, beta = params.alpha, params.beta
    prof = gs.profile
    profile = RadialProfile(
        prof.grid / lam,
        lam ** alpha * prof.U_vals,
        lam ** beta * prof.V_vals,
        lam ** (alpha + 1.0) * prof.U_deriv,
        lam ** (beta + 1.0) * prof.V_deriv,
        prof.r_max / lam,
    )
    tail = gs.tail.dilated(lam, alpha, beta)
    integrals = _integrals(profile, tail, params)
    shadow = attr.evolve(gs, profile=profile, tail=tail, a=tail.a, b=tail.b, v0=lam ** beta * gs.v0, **integrals)
    return attr.evolve(shadow, S=sobolev_constant(shadow, params))


def flux_residuals(gs: GroundState, params: SystemParams, radii: Sequence[float]) -> List[Tuple[float, float, float]]:
    """(R, integral of U^q over B_R, -sigma_N R^(N-1) V'(R)) at the grid
    points nearest to each requested radius.
    """
    N, q = params.N, params.q
    prof = gs.profile
    r = prof.grid
    sigma = sphere_area(N)
    f = prof.U_vals ** q
    core, outer = _split(r)
    cum_core = cumulative_simpson(f[core] * r[core] ** (N - 1.0), x=r[core], initial=0.0)
    cum = np.empty_like(r)
    cum[core] = cum_core
    if len(r[outer]) > 1:
        cum_outer = cumulative_simpson(f[outer] * r[outer] ** N, x=np.log(r[outer]), initial=0.0)
        cum[outer] = cum_core[-1] + cum_outer
    out = []
    for R in radii:
        k = int(np.argmin(np.abs(r - R)))
        lhs = sigma * cum[k]
        rhs = -sigma * r[k] ** (N - 1.0) * prof.V_deriv[k]
        out.append((float(r[k]), float(lhs), float(rhs)))
    return out


def tail_slopes(gs: GroundState, params: SystemParams) -> Tuple[float, float]:
    """log-log slopes of U and V over the last decade of the profile.
    """
    prof = gs.profile
    r2 = prof.r_max
    r1 = r2 / 10.0
    span = math.log(r2 / r1)
    slope_u = math.log(prof.U(r2) / prof.U(r1)) / span
    slope_v = math.log(prof.V(r2) / prof.V(r1)) / span
    return slope_u, slope_v
