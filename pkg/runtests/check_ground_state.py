import math

import numpy as np

from py_lane_emden.errors import DomainError
from py_lane_emden.ground_state import *
from py_lane_emden.hyperbola import Regime, SystemParams, limit_energy
from runtests.util import close, raises

bubble = SystemParams.critical(5, 3)
small = shoot(bubble, 0.5, 100.0)
assert isinstance(small, CrossedZero) and small.which == "V"
raises(DomainError, shoot, bubble, -1.0, 100.0)
raises(DomainError, find_ground_state, SystemParams.from_eps(5, 3, 0.1))

gs = find_ground_state(bubble)
assert gs.regime is Regime.supercritical
assert abs(gs.v0 - 1.0) < 1e-8
r = gs.profile.grid[gs.profile.grid <= 100.0]
assert np.max(np.abs(gs.profile.U(r) - (1.0 + r * r / 3.0) ** -0.5)) < 1e-6
assert abs(gs.a - math.sqrt(3.0)) < 1e-4
assert close(gs.int_Uq, 4.0 * math.pi * math.sqrt(3.0), rel=1e-3)
assert close(gs.int_Vp, gs.int_Uq, rel=1e-6)
assert close(sobolev_constant(gs, bubble), gs.S, rel=1e-12)
# int U^6 = 3 sqrt(3) pi^2 / 4 and the branch energy limit is the same number
assert close(gs.int_Uq1, 0.75 * math.sqrt(3.0) * math.pi ** 2, rel=1e-4)
assert close(limit_energy(bubble, gs.S), gs.int_Uq1, rel=1e-6)
assert np.all(np.diff(gs.profile.U_vals) < 0) and np.all(np.diff(gs.profile.V_vals) < 0)
assert np.max(np.abs(gs.profile.U_vals - gs.profile.V_vals)) < 1e-6

# started far out, the tail constants are read further in where the plateau is flat
far = find_ground_state(bubble, r_max=1e5)
assert far.profile.r_max < 1e5 and abs(far.a - math.sqrt(3.0)) < 1e-6

fine = resample_profile(gs, bubble, 2)
assert len(fine.profile.grid) > 1.9 * len(gs.profile.grid)
assert close(fine.S, gs.S, rel=1e-8) and close(fine.int_Uq, gs.int_Uq, rel=1e-8)

for R, lhs, rhs in flux_residuals(gs, bubble, (1.0, 10.0, 100.0)):
    assert close(lhs, rhs, rel=1e-6), (R, lhs, rhs)

# the critical scaling leaves the quotient unchanged
assert close(dilate(gs, bubble, 2.0).S, gs.S, rel=1e-5)

slope_u, slope_v = tail_slopes(gs, bubble)
assert abs(slope_u + 1.0) < 1e-2 and abs(slope_v + 1.0) < 1e-2

U, V, dU, dV = gs.evaluate(np.array([0.0, 1.0, 10.0 * gs.profile.r_max]))
assert close(float(U[0]), 1.0, rel=1e-9)
assert close(float(V[2]), gs.a / (10.0 * gs.profile.r_max), rel=1e-3)
assert float(dU[1]) < 0 and float(dV[2]) < 0

log_gs = find_ground_state(SystemParams.critical(3, 3))
assert log_gs.regime is Regime.logarithmic
assert log_gs.b_extrapolation == "linear in 1/log r"
assert math.isinf(log_gs.int_U2)
assert np.all(np.diff(log_gs.profile.U_vals) < 0) and np.all(np.diff(log_gs.profile.V_vals) < 0)
for R, lhs, rhs in flux_residuals(log_gs, log_gs.params, (1.0, 10.0, 100.0)):
    assert close(lhs, rhs, rel=1e-6), (R, lhs, rhs)

sub_gs = find_ground_state(SystemParams.critical(2.5, 3))
assert sub_gs.regime is Regime.subcritical
assert np.all(np.diff(sub_gs.profile.U_vals) < 0) and np.all(np.diff(sub_gs.profile.V_vals) < 0)
# U ~ b r^(2 - p(N-2)) = b r^(-1/2)
slope_u, _ = tail_slopes(sub_gs, sub_gs.params)
assert abs(slope_u + 0.5) < 5e-2
