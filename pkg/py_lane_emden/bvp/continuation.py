"""Continuation in eps along the positive branch.
"""
from typing import Optional, Sequence
import logging
import math

from py_lane_emden.bvp.box import solve_box_fd
from py_lane_emden.bvp.radial import solve_ball_radial
from py_lane_emden.bvp.solution import ContinuationRun, DomainSolution, SolverMode, StepLog
from py_lane_emden.errors import BranchError, ContinuationError, DomainError, ResolutionError
from py_lane_emden.green.domains import Ball, Box, Domain
from py_lane_emden.ground_state import GroundState
from py_lane_emden.hyperbola import SystemParams

__all__ = ["geometric_schedule", "params_for", "solve_on", "continue_branch", "MAX_INSERTIONS"]

logger = logging.getLogger(__name__)

MAX_INSERTIONS = 4


def geometric_schedule(start: float = 0.5, end: float = 0.02, ratio: float = 0.8) -> tuple:
    """start, start*ratio, ... down to the last value not below `end`."""
    if not (start > 0 and end > 0 and 0 < ratio < 1 and end <= start):
        raise DomainError("need start >= end > 0 and 0 < ratio < 1, got {}:{}:geo{}".format(start, end, ratio))
    out = []
    eps = start
    while eps >= end * (1.0 - 1e-12):
        out.append(eps)
        eps *= ratio
    return tuple(out)


def params_for(p: float, N: float, eps: float, mode: SolverMode) -> SystemParams:
    if mode is SolverMode.exponent:
        return SystemParams.from_eps(p, N, eps)
    return SystemParams.perturbed(p, N, eps)


def solve_on(
        domain: Domain,
        params: SystemParams,
        mode: SolverMode,
        init: Optional[DomainSolution] = None,
        gs: Optional[GroundState] = None,
        grid: Optional[int] = None,
        tol: Optional[float] = None) -> DomainSolution:
    if isinstance(domain, Ball):
        return solve_ball_radial(params, domain.R, mode, init=init, gs=gs, tol=tol or 1e-9,
                                 nodes=grid or 2001, center=domain.center)
    if isinstance(domain, Box):
        return solve_box_fd(params, domain, mode, grid=grid or 65, init=init, tol=tol or 1e-9)
    raise DomainError("unsupported domain {!r}".format(domain))


def continue_branch(
        p: float,
        N: float,
        domain: Domain,
        schedule: Sequence[float],
        mode: SolverMode = SolverMode.exponent,
        gs: Optional[GroundState] = None,
        grid: Optional[int] = None,
        tol: Optional[float] = None,
        max_insertions: int = MAX_INSERTIONS) -> ContinuationRun:
    """solve at each eps of a strictly decreasing schedule, warm-starting from
    the previous solution. A failed step is retried from the last good eps
    through geometric midpoints, at most `max_insertions` midpoints per
    scheduled eps. A box grid too coarse for the peak stops the sweep at once.
    """
    schedule = tuple(float(e) for e in schedule)
    if not schedule or any(e <= 0 for e in schedule):
        raise DomainError("eps schedule must be non-empty and positive, got {}".format(schedule))
    if any(b >= a for a, b in zip(schedule, schedule[1:])):
        raise DomainError("eps schedule must be strictly decreasing, got {}".format(schedule))
    run = ContinuationRun(schedule, tol=tol or 1e-9)
    logger.info("continuation from eps=%g assumes the computed branch is the least-energy one", schedule[0])

    def attempt(eps, init):
        params = params_for(p, N, eps, mode)
        sol = solve_on(domain, params, mode, init=init, gs=gs if init is None else None, grid=grid, tol=tol)
        run.solutions.append(sol)
        run.log.append(StepLog(eps, True, sol.iterations, sol.residual))
        return sol

    previous = None
    for target in schedule:
        pending = [target]
        insertions = 0
        while pending:
            eps = pending[-1]
            try:
                previous = attempt(eps, previous)
                pending.pop()
            except ResolutionError as e:
                run.log.append(StepLog(eps, False, 0, math.nan, str(e)))
                raise ContinuationError(
                    "continuation stopped at eps={}: {}".format(eps, e), last_good_eps=run.last_good_eps, run=run
                )
            except (ContinuationError, BranchError) as e:
                run.log.append(StepLog(eps, False, 0, math.nan, str(e)))
                if previous is None or insertions >= max_insertions:
                    raise ContinuationError(
                        "continuation failed at eps={}: {}".format(eps, e), last_good_eps=run.last_good_eps, run=run
                    )
                insertions += 1
                middle = math.sqrt(previous.eps * eps)
                logger.info("step to eps=%g failed; inserting eps=%g", eps, middle)
                pending.append(middle)
    if not run.monotone():
        logger.warning("u_max is not strictly increasing along the branch")
    return run
