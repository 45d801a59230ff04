from enum import Enum
from typing import List, Optional

import attr
import numpy as np

from py_lane_emden.hyperbola import SystemParams
from py_lane_emden.quadrature import SurfaceRule

__all__ = ["SolverMode", "DomainSolution", "StepLog", "ContinuationRun"]


class SolverMode(Enum):
    exponent = "nearly-critical-exponent"
    perturbation = "linear-perturbation"

    @classmethod
    def parse(cls, text: str) -> "SolverMode":
        aliases = {"exponent": cls.exponent, "perturbation": cls.perturbation}
        if text in aliases:
            return aliases[text]
        return cls(text)


@attr.s
class DomainSolution:
    """a converged positive solution of the Dirichlet system.

    On balls the fields live on the radial grid `grid`; on boxes they are
    full 3d node arrays and `grid` is the `BoxGrid`. Boundary traces are given
    on `boundary_rule`, or as one radial value when the rule is None.
    """
    params = attr.ib()  # type: SystemParams
    domain = attr.ib()
    mode = attr.ib()  # type: SolverMode
    grid = attr.ib()
    u_field = attr.ib()  # type: np.ndarray
    v_field = attr.ib()  # type: np.ndarray
    u_max = attr.ib()  # type: float
    x_peak = attr.ib()  # type: np.ndarray
    mu = attr.ib()  # type: float
    du_dn = attr.ib()  # type: np.ndarray
    dv_dn = attr.ib()  # type: np.ndarray
    int_u_q1 = attr.ib()  # type: float
    int_u2 = attr.ib()  # type: float
    int_v_p1 = attr.ib()  # type: float
    residual = attr.ib()  # type: float
    iterations = attr.ib()  # type: int
    boundary_rule = attr.ib(default=None)  # type: Optional[SurfaceRule]
    # continuous solution r -> (u, u', v, v') on balls
    profile = attr.ib(default=None)

    @property
    def eps(self) -> float:
        return self.params.eps

    @property
    def radial(self) -> bool:
        return self.boundary_rule is None

    @property
    def q_used(self) -> float:
        """exponent of u in the second equation.
        """
        return self.params.q_eps if self.mode is SolverMode.exponent else self.params.q

    @property
    def alpha_used(self) -> float:
        return self.params.alpha_eps if self.mode is SolverMode.exponent else self.params.alpha

    @property
    def dilation_exponent(self) -> float:
        """mu^(1 - eps/2) is the length scale of the peak in exponent mode, mu otherwise.
        """
        return 1.0 - 0.5 * self.eps if self.mode is SolverMode.exponent else 1.0

    @property
    def peak_width(self) -> float:
        return self.mu ** self.dilation_exponent

    @property
    def mu_eps(self) -> float:
        return self.mu ** self.eps

    def summary(self) -> dict:
        return dict(
            eps=self.eps,
            mode=self.mode.value,
            u_max=self.u_max,
            mu=self.mu,
            x_peak=[float(v) for v in self.x_peak],
            int_u_q1=self.int_u_q1,
            int_u2=self.int_u2,
            residual=self.residual,
            iterations=self.iterations,
        )


@attr.s(frozen=True)
class StepLog:
    eps = attr.ib()  # type: float
    accepted = attr.ib()  # type: bool
    iterations = attr.ib()  # type: int
    residual = attr.ib()  # type: float
    message = attr.ib(default="")  # type: str


@attr.s
class ContinuationRun:
    eps_schedule = attr.ib()  # type: tuple
    solutions = attr.ib(factory=list)  # type: List[DomainSolution]
    log = attr.ib(factory=list)  # type: List[StepLog]
    tol = attr.ib(default=1e-10)  # type: float

    @property
    def last_good_eps(self) -> Optional[float]:
        return self.solutions[-1].eps if self.solutions else None

    @property
    def eps_values(self) -> np.ndarray:
        return np.array([s.eps for s in self.solutions])

    @property
    def u_max_values(self) -> np.ndarray:
        return np.array([s.u_max for s in self.solutions])

    def monotone(self) -> bool:
        """u_max strictly increasing as eps decreases.
        """
        u = self.u_max_values
        return bool(np.all(np.diff(u) > 0))

    def inserted(self) -> List[float]:
        """accepted eps that were not in the requested schedule.
        """
        requested = set(self.eps_schedule)
        return [s.eps for s in self.solutions if s.eps not in requested]
