"""Damped Newton iteration shared by the radial and box discretizations.
"""
from typing import Callable
import logging

import attr
import numpy as np

from py_lane_emden.errors import ContinuationError

__all__ = ["NewtonResult", "damped_newton", "DAMPING_FLOOR"]

logger = logging.getLogger(__name__)

DAMPING_FLOOR = 2.0 ** -10

_ARMIJO = 1e-4


@attr.s(frozen=True)
class NewtonResult:
    x = attr.ib()  # type: np.ndarray
    residual = attr.ib()  # type: float
    iterations = attr.ib()  # type: int


def damped_newton(
        residual: Callable[[np.ndarray], np.ndarray],
        step: Callable[[np.ndarray, np.ndarray], np.ndarray],
        x0: np.ndarray,
        tol: float,
        scale: Callable[[np.ndarray], float] = lambda x: 1.0,
        max_iter: int = 60) -> NewtonResult:
    """solve residual(x) = 0 from x0.

    `step(x, F)` returns the Newton correction for the current residual F.
    Each correction is halved until the residual norm decreases by the
    Armijo factor; halving below `DAMPING_FLOOR` raises ContinuationError.
    Convergence is max|F| <= tol * scale(x).
    """
    x = np.array(x0, dtype=float, copy=True)
    F = residual(x)
    norm = float(np.linalg.norm(F))
    for it in range(1, max_iter + 1):
        dx = step(x, F)
        t = 1.0
        while True:
            trial = x + t * dx
            F_trial = residual(trial)
            trial_norm = float(np.linalg.norm(F_trial))
            if np.isfinite(trial_norm) and trial_norm <= (1.0 - _ARMIJO * t) * norm:
                break
            t *= 0.5
            if t < DAMPING_FLOOR:
                raise ContinuationError(
                    "Newton stalled at damping {} with residual {:.3g}".format(t, norm), last_good_eps=None
                )
        x, F, norm = trial, F_trial, trial_norm
        sup = float(np.max(np.abs(F)))
        logger.debug("newton %d: damping %.4g, residual %.3e", it, t, sup)
        if sup <= tol * scale(x):
            return NewtonResult(x, sup, it)
    raise ContinuationError(
        "Newton did not converge in {} iterations (residual {:.3g})".format(max_iter, norm),
        last_good_eps=None,
    )
