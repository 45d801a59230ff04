"""Blow-up rates: predictions assembled from the ground state and the Green's
functions, and fits of computed branches against them.

Every law has the form

    eps * u_max^gamma * (log u_max)^ell  ->  C        as eps -> 0,

with ell = -1 for the logarithmic tail regime, ell = +1 for the logarithmic
laws of the perturbed problem and ell = 0 otherwise. Logarithms are natural.

Constants are assembled from the Pohozaev identity and the boundary identities
(factor N-2 from the identity for G, factor N/(q+1) from the one for G~);
the constant in its closed textbook form is kept next to it as
`stated_constant`.
"""
from enum import Enum
from typing import List, Optional, Sequence
import logging
import math

import attr
import numpy as np

from py_lane_emden.bvp.continuation import ContinuationRun
from py_lane_emden.bvp.solution import SolverMode
from py_lane_emden.errors import CompositionError, DataError, PreconditionError, RegimeError, WindowError
from py_lane_emden.green.bundle import GreenBundle
from py_lane_emden.ground_state import GroundState
from py_lane_emden.hyperbola import Regime, SystemParams
from py_lane_emden.quadrature import sphere_area

__all__ = [
    "RateEntry",
    "RateSeries",
    "Prediction",
    "RateFit",
    "Window",
    "series_from_run",
    "blowup_rate_prediction",
    "perturbed_window",
    "perturbed_prediction",
    "rate_fit",
    "perturbed_rate_check",
    "v_norm_rate_prediction",
    "MIN_ENTRIES",
]

logger = logging.getLogger(__name__)

MIN_ENTRIES = 4


@attr.s(frozen=True)
class RateEntry:
    eps = attr.ib()  # type: float
    u_max = attr.ib()  # type: float
    mu = attr.ib()  # type: float
    phi_at_peak = attr.ib()  # type: float
    int_u_q1 = attr.ib()  # type: float


@attr.s
class RateSeries:
    entries = attr.ib()  # type: List[RateEntry]
    regime = attr.ib()  # type: Regime
    mode = attr.ib()  # type: SolverMode

    def validate(self):
        if len(self.entries) < MIN_ENTRIES:
            raise DataError("rate fits need at least {} entries, got {}".format(MIN_ENTRIES, len(self.entries)))
        eps = np.array([e.eps for e in self.entries])
        u = np.array([e.u_max for e in self.entries])
        if np.any(np.diff(eps) >= 0):
            raise DataError("eps must be strictly decreasing along the series")
        if np.any(np.diff(u) <= 0):
            raise DataError("u_max must be strictly increasing as eps decreases")

    @property
    def eps(self) -> np.ndarray:
        return np.array([e.eps for e in self.entries])

    @property
    def u_max(self) -> np.ndarray:
        return np.array([e.u_max for e in self.entries])


def series_from_run(run: ContinuationRun, regime: Regime, phi_at_peak: float = math.nan) -> RateSeries:
    if not run.solutions:
        raise DataError("continuation run holds no solutions")
    entries = [RateEntry(s.eps, s.u_max, s.mu, phi_at_peak, s.int_u_q1) for s in run.solutions]
    return RateSeries(entries, regime, run.solutions[0].mode)


class Window(Enum):
    power_supercritical = "power-supercritical"
    power_logarithmic = "power-logarithmic"
    power_subcritical = "power-subcritical"
    log_n4 = "log-n4"
    log_borderline = "log-borderline"


@attr.s(frozen=True)
class Prediction:
    exponent = attr.ib()  # type: float
    constant = attr.ib()  # type: float
    stated_constant = attr.ib()  # type: float
    log_power = attr.ib(default=0)  # type: int
    law = attr.ib(default="")  # type: str

    def scaled(self, eps, u_max) -> np.ndarray:
        eps, u_max = np.asarray(eps, dtype=float), np.asarray(u_max, dtype=float)
        return eps * u_max ** self.exponent * np.log(u_max) ** self.log_power

    def as_dict(self) -> dict:
        return attr.asdict(self)


def _check_pair(params: SystemParams, gs: GroundState):
    if gs.params.p != params.p or gs.params.N != params.N:
        raise CompositionError("ground state (p={}, N={}) does not belong to (p={}, N={})".format(
            gs.params.p, gs.params.N, params.p, params.N))


def _robin(green: GreenBundle, tilde: bool, params: SystemParams) -> float:
    if not tilde:
        return abs(green.g_diag)
    if green.gt_diag is None:
        raise CompositionError("tail-subcritical rates need phi~ in the Green bundle (build it with p)")
    if green.p != params.p:
        raise CompositionError("Green bundle was built with p={}, rates need p={}".format(green.p, params.p))
    return abs(green.gt_diag)


def blowup_rate_prediction(params: SystemParams, gs: GroundState, green: GreenBundle) -> Prediction:
    _check_pair(params, gs)
    p, q, N = params.p, params.q, params.N
    alpha = N / (q + 1.0)
    energy = gs.S ** ((1.0 - p * q) / (p * (q + 1.0)))
    regime = params.regime
    if regime is Regime.supercritical:
        stated = energy * gs.int_Uq * gs.int_Vp * _robin(green, False, params)
        return Prediction((N - 2.0) / alpha, (N - 2.0) * stated, stated, 0, "eps u^g")
    if regime is Regime.logarithmic:
        stated = energy * gs.a ** (N / (N - 2.0)) * gs.int_Uq * _robin(green, False, params) / alpha
        return Prediction((N - 2.0) / alpha, (N - 2.0) * stated, stated, -1, "eps u^g / log u")
    k = p * (N - 2.0)
    stated = energy * gs.int_Uq ** (p + 1.0) * _robin(green, True, params)
    return Prediction((k - 2.0) / alpha, alpha * stated, stated, 0, "eps u^g")


def perturbed_window(params: SystemParams, gs: Optional[GroundState] = None) -> Window:
    """the case of the perturbed-problem rate law that applies, or
    WindowError naming the violated inequality.
    """
    p, q, N = params.p, params.q, params.N
    alpha = N / (q + 1.0)
    k = p * (N - 2.0)
    tie = 1e-12
    if abs(N - 4.0) <= tie and abs(p - 3.0) <= tie and abs(q - 3.0) <= tie:
        return Window.log_n4
    threshold = N / (N - 2.0)
    borderline = (N + 4.0) / (2.0 * (N - 2.0))
    if params.regime is Regime.supercritical:
        if not N > 4.0:
            raise WindowError(Window.power_supercritical.value, "N > 4 fails (N={})".format(N))
        if not alpha > 1.0:
            raise WindowError(Window.power_supercritical.value, "alpha > 1 fails (alpha={:.6g})".format(alpha))
        window = Window.power_supercritical
    elif params.regime is Regime.logarithmic:
        if not 3.0 - threshold ** 2 > 0:
            raise WindowError(Window.power_logarithmic.value, "3 - (N/(N-2))^2 > 0 fails (N={})".format(N))
        window = Window.power_logarithmic
    elif abs(p - borderline) <= tie * borderline:
        if not q <= 3.0 + tie:
            raise WindowError(Window.log_borderline.value, "q <= 3 fails (q={:.6g})".format(q))
        return Window.log_borderline
    else:
        if not borderline < p:
            raise WindowError(Window.power_subcritical.value,
                              "(N+4)/(2(N-2)) = {:.6g} < p fails (p={})".format(borderline, p))
        if not alpha > (2.0 + N - k) / 2.0:
            raise WindowError(Window.power_subcritical.value,
                              "alpha > (2+N-p(N-2))/2 = {:.6g} fails (alpha={:.6g})".format((2.0 + N - k) / 2.0, alpha))
        window = Window.power_subcritical
    if gs is not None and not math.isfinite(gs.int_U2):
        raise WindowError(window.value, "the ground state has infinite L^2 norm")
    return window


def perturbed_prediction(params: SystemParams, gs: GroundState, green: GreenBundle) -> Prediction:
    _check_pair(params, gs)
    window = perturbed_window(params, gs)
    p, q, N = params.p, params.q, params.N
    alpha = N / (q + 1.0)
    k = p * (N - 2.0)
    lever = 0.5 * N - alpha
    if window is Window.power_supercritical:
        stated = gs.int_Uq * gs.int_Vp * _robin(green, False, params) / gs.int_U2
        return Prediction(2.0 - 2.0 / alpha, (N - 2.0) / lever * stated, stated, 0, window.value)
    if window is Window.power_logarithmic:
        stated = gs.a ** (N / (N - 2.0)) * gs.int_Uq * _robin(green, False, params) / (alpha * gs.int_U2)
        return Prediction(2.0 - 2.0 / alpha, (N - 2.0) / lever * stated, stated, -1, window.value)
    if window is Window.power_subcritical:
        stated = gs.int_Uq ** (p + 1.0) * _robin(green, True, params) / gs.int_U2
        return Prediction(2.0 - (2.0 + N - k) / alpha, alpha / lever * stated, stated, 0, window.value)
    sigma = sphere_area(N)
    b2 = gs.b * gs.b
    if window is Window.log_n4:
        stated = gs.int_Uq * gs.int_Vp * _robin(green, False, params) / b2
        return Prediction(0.0, (N - 2.0) * alpha / (lever * sigma) * stated, stated, 1, window.value)
    stated = gs.int_Uq ** (p + 1.0) * _robin(green, True, params) / b2
    return Prediction((3.0 - q) / 2.0, alpha * alpha / (lever * sigma) * stated, stated, 1, window.value)


@attr.s
class RateFit:
    fitted_exponent = attr.ib()  # type: float
    fitted_constant = attr.ib()  # type: float
    predicted_exponent = attr.ib()  # type: float
    predicted_constant = attr.ib()  # type: float
    extrapolated_constant = attr.ib()  # type: float
    exponent_error = attr.ib()  # type: float
    residuals = attr.ib()  # type: np.ndarray
    scaled = attr.ib()  # type: np.ndarray
    stated_constant = attr.ib(default=math.nan)  # type: float
    law = attr.ib(default="")  # type: str
    variable = attr.ib(default="eps")  # type: str

    def rows(self, series: RateSeries):
        """(eps, u_max, mu, scaled_value, extrapolated) per entry."""
        for e, s in zip(series.entries, self.scaled):
            yield e.eps, e.u_max, e.mu, float(s), self.extrapolated_constant

    def as_dict(self) -> dict:
        d = attr.asdict(self)
        d["residuals"] = [float(x) for x in self.residuals]
        d["scaled"] = [float(x) for x in self.scaled]
        d["log_base"] = "e"
        return d


def _extrapolate(scaled: np.ndarray, t: np.ndarray, weights: np.ndarray, tail: int = 3) -> float:
    """value at t = 0 of the weighted straight line through the last `tail` entries."""
    t, s, w = t[-tail:], scaled[-tail:], weights[-tail:]
    A = np.column_stack([np.ones_like(t), t]) * np.sqrt(w)[:, None]
    coef, *_ = np.linalg.lstsq(A, s * np.sqrt(w), rcond=None)
    return float(coef[0])


def rate_fit(series: RateSeries, prediction: Prediction, variable: str = "eps") -> RateFit:
    """weighted log-log regression of eps against u_max (weights proportional
    to 1/eps) and extrapolation of the scaled sequence to eps -> 0, linear in
    eps or in 1/log u_max (`variable` "eps" or "inv_log").
    """
    series.validate()
    if variable not in ("eps", "inv_log"):
        raise PreconditionError("extrapolation variable must be 'eps' or 'inv_log', got {!r}".format(variable))
    eps, u = series.eps, series.u_max
    x = np.log(u)
    y = np.log(eps) + prediction.log_power * np.log(np.log(u))
    w = 1.0 / eps
    coef, cov = np.polyfit(x, y, 1, w=np.sqrt(w), cov="unscaled")
    slope, intercept = coef
    fitted = np.polyval(coef, x)
    scaled = prediction.scaled(eps, u)
    t = eps if variable == "eps" else 1.0 / np.log(u)
    extrapolated = _extrapolate(scaled, t, w)
    fit = RateFit(
        fitted_exponent=float(-slope),
        fitted_constant=float(math.exp(intercept)),
        predicted_exponent=prediction.exponent,
        predicted_constant=prediction.constant,
        extrapolated_constant=extrapolated,
        exponent_error=float(math.sqrt(max(cov[0, 0], 0.0))),
        residuals=y - fitted,
        scaled=scaled,
        stated_constant=prediction.stated_constant,
        law=prediction.law,
        variable=variable,
    )
    logger.info("rate fit: exponent %.4f (predicted %.4f), constant %.6g extrapolated %.6g (predicted %.6g)",
                fit.fitted_exponent, fit.predicted_exponent, fit.fitted_constant, extrapolated, prediction.constant)
    return fit


def perturbed_rate_check(series: RateSeries, params: SystemParams, gs: GroundState, green: GreenBundle,
                         variable: str = "eps") -> RateFit:
    if series.mode is not SolverMode.perturbation:
        raise PreconditionError("perturbed rates need a series solved in linear-perturbation mode")
    prediction = perturbed_prediction(params, gs, green)
    logger.info("perturbed window %s: predicted exponent %.6g", prediction.law, prediction.exponent)
    return rate_fit(series, prediction, variable)


def v_norm_rate_prediction(params: SystemParams, gs: GroundState, prediction: Prediction) -> Prediction:
    """the same law written for |v|_inf = V(0) u_max^(beta/alpha); for p = 1
    this is eps |v|^(2(N-4)/N) -> C V(0)^(2(N-4)/N).
    """
    if prediction.log_power != 0:
        raise RegimeError("the |v| form is only derived for pure power laws")
    N = params.N
    alpha, beta = N / (params.q + 1.0), N / (params.p + 1.0)
    exponent = prediction.exponent * alpha / beta
    factor = gs.v0 ** exponent
    return Prediction(exponent, prediction.constant * factor, prediction.stated_constant * factor, 0,
                      prediction.law + " in |v|")
