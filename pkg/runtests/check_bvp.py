import math

import attr
import numpy as np

from py_lane_emden.bvp import *
from py_lane_emden.errors import BranchError, ContinuationError, DomainError, InfeasibilityError
from py_lane_emden.green.domains import Ball, Box
from py_lane_emden.ground_state import find_ground_state
from py_lane_emden.hyperbola import SystemParams
from py_lane_emden.lab.pohozaev import base_point_drift, perturbed_copy, pohozaev_residual
from runtests.util import close, raises

assert np.allclose(geometric_schedule(0.5, 0.3, 0.8), (0.5, 0.4, 0.32), rtol=1e-14)
assert len(geometric_schedule(0.5, 0.02, 0.8)) == 15
raises(DomainError, geometric_schedule, 0.02, 0.5, 0.8)
raises(DomainError, geometric_schedule, 0.5, 0.02, 1.0)

assert SolverMode.parse("exponent") is SolverMode.exponent
assert SolverMode.parse("linear-perturbation") is SolverMode.perturbation
raises(ValueError, SolverMode.parse, "newton")

lam, phi, dphi = first_eigenpair_ball(3, 1.0)
assert close(lam, math.pi ** 2, rel=1e-12)
assert abs(float(phi(1.0))) < 1e-12 and close(float(phi(0.0)), 1.0)

raises(InfeasibilityError, solve_ball_radial, SystemParams.from_eps(5, 3, 0.0), 1.0)
# the first Dirichlet eigenvalue of the unit ball in R^9 squared is about 2390
raises(InfeasibilityError, solve_ball_radial, SystemParams.perturbed(1, 9, 3000.0), 1.0, SolverMode.perturbation)
raises(DomainError, continue_branch, 5, 3, Ball(1.0, 3), (0.1, 0.2))
raises(DomainError, continue_branch, 5, 3, Ball(1.0, 3), ())

# the finite-volume operator is exact on quadratics, the origin included
r = sample_grid(1.0, 0.01)
assert close(r[1], 0.01 / 50, rel=1e-2) and r[-1] == 1.0 and np.all(np.diff(r) > 0)
assert np.allclose(radial_laplacian(r, 3) @ (1.0 - r[:-1] ** 2), 6.0, rtol=1e-9)
assert np.array_equal(sample_grid(1.0, 1.0), np.linspace(0.0, 1.0, 2001))

gs = find_ground_state(SystemParams.critical(5, 3))
sol = solve_ball_radial(SystemParams.from_eps(5, 3, 0.2), 1.0, gs=gs)
assert sol.radial and sol.u_max > 1.0 and sol.profile is not None
assert close(sol.mu, sol.u_max ** (-1.0 / sol.alpha_used), rel=1e-12)
assert np.all(sol.u_field[:-1] > 0) and sol.u_field[-1] == 0.0
assert np.all(np.diff(sol.u_field) < 0) and np.all(np.diff(sol.v_field) < 0)
assert float(sol.du_dn[0]) < 0 and float(sol.dv_dn[0]) < 0
assert pohozaev_residual(sol).rel_residual < 1e-6
assert base_point_drift(sol) < 1e-6
assert pohozaev_residual(perturbed_copy(sol)).rel_residual > 1e-4

# Newton pulled onto the zero solution is refused, not returned
faint = attr.evolve(sol, u_field=1e-6 * sol.u_field, v_field=1e-6 * sol.v_field, u_max=1e-6 * sol.u_max,
                    profile=None)
raises(BranchError, solve_ball_radial, SystemParams.from_eps(5, 3, 0.2), 1.0, init=faint)

start = continue_branch(5, 3, Ball(1.0, 3), (0.5, 0.4), gs=gs)
assert all(s.u_max > 1.0 and s.int_u_q1 > 0.1 for s in start.solutions)

run = continue_branch(5, 3, Ball(1.0, 3), (0.3, 0.2, 0.15, 0.1, 0.07, 0.05, 0.035, 0.025, 0.02), gs=gs)
assert run.last_good_eps == 0.02
eps, u_max = run.eps_values, run.u_max_values
# u_max dips to a minimum near eps = 0.16 before it blows up
assert u_max[eps == 0.2][0] < u_max[eps == 0.3][0]
assert np.all(np.diff(u_max[eps <= 0.15]) > 0)
assert all(step.residual < run.tol for step in run.log if step.accepted)
assert pohozaev_residual(run.solutions[-1]).rel_residual < 1e-3

report = rescale_solution(run.solutions[-1], gs)
assert report.dom_u > 0 and report.dom_v > 0
assert 0 < report.mu_eps <= 1.0

cube = Box.unit_cube()
box_sol = solve_box_fd(SystemParams.from_eps(5, 3, 0.3), cube, grid=41)
h = float(np.max(box_sol.grid.h))
assert np.all(box_sol.u_field[1:-1, 1:-1, 1:-1] > 0) and box_sol.u_field[0, 0, 0] == 0.0
assert np.all(np.abs(box_sol.x_peak - 0.5) <= h + 1e-12)
peaks = local_maxima(box_sol)
assert len(peaks) == 1 and np.allclose(peaks[0], box_sol.x_peak)
# 9 nodes per axis cannot resolve the peak; the sweep stops and keeps its log
stopped = raises(ContinuationError, continue_branch, 5, 3, cube, (0.3, 0.2), grid=9)
assert stopped.run is not None and not stopped.run.log[-1].accepted
