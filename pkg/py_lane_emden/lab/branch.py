"""Branch-wide quantities: the energy limit of minimizers, the size of mu^eps
and the bound eps <= C mu^(N-2) h(mu) with

    h(mu) = 1              p > N/(N-2)
            |log mu|       p = N/(N-2)
            mu^(p(N-2)-N)  p < N/(N-2)

Only the range of the ratio eps / (mu^(N-2) h(mu)) is reported; its bound
is never asserted.
"""
import logging
import math

import attr
import numpy as np

from py_lane_emden.bvp.solution import ContinuationRun, SolverMode
from py_lane_emden.errors import DataError, PreconditionError
from py_lane_emden.ground_state import GroundState
from py_lane_emden.hyperbola import Regime, SystemParams, limit_energy

__all__ = [
    "EnergyReport",
    "MuReport",
    "RatioReport",
    "h_of_mu",
    "energy_limit_check",
    "mu_eps_report",
    "consistency_ratio",
]

logger = logging.getLogger(__name__)


def h_of_mu(params: SystemParams, mu):
    mu = np.asarray(mu, dtype=float)
    if params.regime is Regime.supercritical:
        return np.ones_like(mu)
    if params.regime is Regime.logarithmic:
        return np.abs(np.log(mu))
    return mu ** (params.p * (params.N - 2.0) - params.N)


def _require(run: ContinuationRun, least: int = 1):
    if len(run.solutions) < least:
        raise DataError("need at least {} accepted solutions, got {}".format(least, len(run.solutions)))


@attr.s
class EnergyReport:
    eps = attr.ib()  # type: np.ndarray
    energy = attr.ib()  # type: np.ndarray
    limit = attr.ib()  # type: float
    extrapolated = attr.ib()  # type: float

    @property
    def rel_error(self) -> float:
        return abs(self.extrapolated - self.limit) / self.limit

    def as_dict(self) -> dict:
        return dict(
            eps=[float(e) for e in self.eps],
            energy=[float(e) for e in self.energy],
            limit=self.limit,
            extrapolated=self.extrapolated,
            rel_error=self.rel_error,
        )


def energy_limit_check(run: ContinuationRun, gs: GroundState) -> EnergyReport:
    """int u^(q_eps+1) along an exponent-mode branch against S^(p(q+1)/(pq-1)),
    extrapolated linearly in eps through the last three solutions.
    """
    _require(run, 3)
    if run.solutions[0].mode is not SolverMode.exponent:
        raise PreconditionError("the energy limit concerns minimizers of the exponent family")
    eps = run.eps_values
    energy = np.array([s.int_u_q1 for s in run.solutions])
    coef = np.polyfit(eps[-3:], energy[-3:], 1)
    report = EnergyReport(eps, energy, limit_energy(gs.params, gs.S), float(coef[-1]))
    logger.info("energy: %.6g extrapolated, limit %.6g", report.extrapolated, report.limit)
    return report


@attr.s
class MuReport:
    eps = attr.ib()  # type: np.ndarray
    mu = attr.ib()  # type: np.ndarray
    mu_eps = attr.ib()  # type: np.ndarray
    bound = attr.ib()  # type: np.ndarray

    @property
    def min_mu_eps(self) -> float:
        return float(np.min(self.mu_eps))

    def as_dict(self) -> dict:
        return dict(
            eps=[float(e) for e in self.eps],
            mu=[float(m) for m in self.mu],
            mu_eps=[float(m) for m in self.mu_eps],
            deviation=[float(abs(m - 1.0)) for m in self.mu_eps],
            bound=[float(b) for b in self.bound],
            min_mu_eps=self.min_mu_eps,
        )


def mu_eps_report(run: ContinuationRun) -> MuReport:
    """mu^eps per solution, with mu^(N-2) h(mu) |log mu| as the scale its
    distance to 1 is compared with.
    """
    _require(run)
    params = run.solutions[0].params
    mu = np.array([s.mu for s in run.solutions])
    eps = run.eps_values
    bound = mu ** (params.N - 2.0) * h_of_mu(params, mu) * np.abs(np.log(mu))
    return MuReport(eps, mu, mu ** eps, bound)


@attr.s
class RatioReport:
    eps = attr.ib()  # type: np.ndarray
    ratio = attr.ib()  # type: np.ndarray

    @property
    def bounds(self):
        return float(np.min(self.ratio)), float(np.max(self.ratio))

    def as_dict(self) -> dict:
        lo, hi = self.bounds
        return dict(eps=[float(e) for e in self.eps], ratio=[float(r) for r in self.ratio], min=lo, max=hi)


def consistency_ratio(run: ContinuationRun) -> RatioReport:
    _require(run)
    params = run.solutions[0].params
    mu = np.array([s.mu for s in run.solutions])
    eps = run.eps_values
    ratio = eps / (mu ** (params.N - 2.0) * h_of_mu(params, mu))
    lo, hi = float(np.min(ratio)), float(np.max(ratio))
    if not math.isfinite(hi):
        logger.warning("eps / (mu^(N-2) h(mu)) is unbounded on this branch")
    logger.info("eps / (mu^(N-2) h(mu)) within [%.4g, %.4g]", lo, hi)
    return RatioReport(eps, ratio)
