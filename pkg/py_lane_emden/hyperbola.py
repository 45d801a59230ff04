"""Parameter algebra of the critical hyperbola

    N/(p+1) + N/(q+1) = N - 2

together with the subcritical exponent `q_eps` obtained from the defect

    eps = N/(p+1) + N/(q_eps+1) - (N - 2)

and the tail regime of the ground state, which selects the branch of every
downstream formula.

Exponents given as ratios of small integers (`5`, `2.5`, `13/5` typed as a
float) are handled by an exact rational fast path, so e.g. `p = N/(N-2)` is
recognized without tolerance games. Everything else is compared within a
`1e-12` band that routes ties to the logarithmic regime.
"""
from enum import Enum
from fractions import Fraction
from typing import Optional, Union
import math

import attr

from py_lane_emden.errors import DomainError, InfeasibilityError

__all__ = [
    "Regime",
    "SystemParams",
    "critical_q",
    "qeps_from_eps",
    "classify_regime",
    "lower_dimension_bound",
    "limit_energy",
    "TIE_BAND",
]

Real = Union[int, float, Fraction]

TIE_BAND = 1e-12

_MAX_DENOMINATOR = 64


class Regime(Enum):
    supercritical = "tail-supercritical"
    logarithmic = "tail-logarithmic"
    subcritical = "tail-subcritical"


def _exact(x: Real) -> Optional[Fraction]:
    """the small rational equal to `x`, if there is one.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        return None
    if isinstance(x, float) and not math.isfinite(x):
        return None
    fr = Fraction(x).limit_denominator(_MAX_DENOMINATOR)
    if float(fr) == float(x):
        return fr
    return None


def _check_dimension(N: Real):
    if not N > 2:
        raise DomainError("dimension must satisfy N > 2, got N={}".format(N))


def _check_exponent(p: Real, N: Real):
    _check_dimension(N)
    lower = 2.0 / (float(N) - 2.0)
    upper = (float(N) + 2.0) / (float(N) - 2.0)
    if not p > lower * (1 + TIE_BAND):
        raise DomainError(
            "exponent must satisfy p > 2/(N-2) = {:.12g}, got p={} (N={})".format(lower, p, N)
        )
    if not p <= upper * (1 + TIE_BAND):
        raise DomainError(
            "exponent must satisfy p <= (N+2)/(N-2) = {:.12g}, got p={} (N={})".format(upper, p, N)
        )


def critical_q(p: Real, N: Real) -> float:
    _check_exponent(p, N)
    ep, eN = _exact(p), _exact(N)
    if ep is not None and eN is not None:
        return float(eN / ((eN - 2) - eN / (ep + 1)) - 1)
    p, N = float(p), float(N)
    return N / ((N - 2.0) - N / (p + 1.0)) - 1.0


def qeps_from_eps(p: Real, N: Real, eps: Real) -> float:
    if not eps >= 0:
        raise DomainError("defect must satisfy eps >= 0, got eps={}".format(eps))
    _check_exponent(p, N)
    ep, eN, ee = _exact(p), _exact(N), _exact(eps)
    if ep is not None and eN is not None and ee is not None:
        denominator = ee + (eN - 2) - eN / (ep + 1)
        q_eps = float(eN / denominator - 1) if denominator > 0 else -1.0
    else:
        p_, N_ = float(p), float(N)
        denominator = float(eps) + (N_ - 2.0) - N_ / (p_ + 1.0)
        q_eps = N_ / denominator - 1.0 if denominator > 0 else -1.0
    if not float(p) * q_eps > 1.0:
        raise InfeasibilityError(
            "eps={} gives q_eps={:.6g} with p*q_eps <= 1; no positive solution branch".format(eps, q_eps)
        )
    return q_eps


def classify_regime(p: Real, N: Real) -> Regime:
    _check_exponent(p, N)
    ep, eN = _exact(p), _exact(N)
    if ep is not None and eN is not None:
        threshold = eN / (eN - 2)
        if ep > threshold:
            return Regime.supercritical
        if ep < threshold:
            return Regime.subcritical
        return Regime.logarithmic
    threshold = float(N) / (float(N) - 2.0)
    if abs(float(p) - threshold) <= TIE_BAND * threshold:
        return Regime.logarithmic
    return Regime.supercritical if p > threshold else Regime.subcritical


def lower_dimension_bound(p: Real) -> float:
    """smallest N (exclusive) for which p lies above 2/(N-2).
    """
    if not p > 0:
        raise DomainError("exponent must be positive, got p={}".format(p))
    return max(2.0, 2.0 * (float(p) + 1.0) / float(p))


@attr.s(frozen=True)
class SystemParams:
    p = attr.ib()  # type: float
    N = attr.ib()  # type: float
    q = attr.ib()  # type: float
    q_eps = attr.ib()  # type: float
    eps = attr.ib()  # type: float
    alpha = attr.ib()  # type: float
    beta = attr.ib()  # type: float
    alpha_eps = attr.ib()  # type: float
    regime = attr.ib()  # type: Regime

    @classmethod
    def from_eps(cls, p: Real, N: Real, eps: Real = 0.0) -> "SystemParams":
        q = critical_q(p, N)
        q_eps = qeps_from_eps(p, N, eps) if eps else q
        N_ = float(N)
        return cls(
            p=float(p),
            N=N_,
            q=q,
            q_eps=q_eps,
            eps=float(eps),
            alpha=N_ / (q + 1.0),
            beta=N_ / (float(p) + 1.0),
            alpha_eps=N_ / (q_eps + 1.0),
            regime=classify_regime(p, N),
        )

    @classmethod
    def critical(cls, p: Real, N: Real) -> "SystemParams":
        return cls.from_eps(p, N, 0.0)

    @classmethod
    def perturbed(cls, p: Real, N: Real, eps: Real) -> "SystemParams":
        """critical exponents with `eps` as the coefficient of the linear term
        u^q + eps u; `defect()` is zero for these.
        """
        if not eps >= 0:
            raise DomainError("perturbation coefficient must satisfy eps >= 0, got eps={}".format(eps))
        return attr.evolve(cls.critical(p, N), eps=float(eps))

    def at_eps(self, eps: Real) -> "SystemParams":
        return SystemParams.from_eps(self.p, self.N, eps)

    def critical_pair(self) -> "SystemParams":
        return self.at_eps(0.0)

    @property
    def is_critical(self) -> bool:
        return self.eps == 0.0

    def hyperbola_residual(self) -> float:
        return abs(self.N / (self.p + 1.0) + self.N / (self.q + 1.0) - (self.N - 2.0))

    def defect(self) -> float:
        """eps recomputed from the stored exponents.
        """
        return self.N / (self.p + 1.0) + self.N / (self.q_eps + 1.0) - (self.N - 2.0)

    def as_dict(self) -> dict:
        d = attr.asdict(self)
        d["regime"] = self.regime.value
        return d


def limit_energy(params: SystemParams, S: float) -> float:
    """limit of the integral of u_eps^(q_eps+1) for minimizers, S^(p(q+1)/(pq-1)).

    The ground state has int U^(q+1) = int V^(p+1) = E and S = E^(1 - (p+1)/(p(q+1))).
    """
    p, q = params.p, params.q
    return S ** (p * (q + 1.0) / (p * q - 1.0))
