from types import SimpleNamespace
import math

import numpy as np

from py_lane_emden.bvp import SolverMode, continue_branch
from py_lane_emden.errors import CompositionError, DataError, PreconditionError, RegimeError, WindowError
from py_lane_emden.green.domains import Ball
from py_lane_emden.ground_state import find_ground_state
from py_lane_emden.hyperbola import Regime, SystemParams
from py_lane_emden.lab import *
from runtests.util import close, raises


def series(eps, u, mode=SolverMode.exponent):
    entries = [RateEntry(e, m, m ** -2.0, math.nan, 1.0) for e, m in zip(eps, u)]
    return RateSeries(entries, Regime.supercritical, mode)


m = np.array([10.0, 20.0, 40.0, 80.0, 160.0])
pure = series(3.0 * m ** -2.0, m)
fit = rate_fit(pure, Prediction(2.0, 3.0, 3.0))
assert close(fit.fitted_exponent, 2.0, rel=1e-10)
assert close(fit.fitted_constant, 3.0, rel=1e-10)
assert close(fit.extrapolated_constant, 3.0, rel=1e-10)
assert np.max(np.abs(fit.residuals)) < 1e-10
rows = list(fit.rows(pure))
assert len(rows) == 5 and close(rows[0][0], 0.03, rel=1e-12) and rows[0][1] == 10.0
assert fit.as_dict()["log_base"] == "e"

# a 1/log correction vanishes only in the 1/log u extrapolation
corrected = series(3.0 * m ** -2.0 * (1.0 + 1.0 / np.log(m)), m)
fit = rate_fit(corrected, Prediction(2.0, 3.0, 3.0), variable="inv_log")
assert close(fit.extrapolated_constant, 3.0, rel=1e-8)
assert abs(rate_fit(corrected, Prediction(2.0, 3.0, 3.0)).extrapolated_constant - 3.0) > 1e-3
raises(PreconditionError, rate_fit, corrected, Prediction(2.0, 3.0, 3.0), "log")

raises(DataError, rate_fit, series(3.0 * m[:3] ** -2.0, m[:3]), Prediction(2.0, 3.0, 3.0))
raises(DataError, rate_fit, series(3.0 * m ** -2.0, m[::-1]), Prediction(2.0, 3.0, 3.0))
raises(DataError, rate_fit, series(np.full(5, 0.1), m), Prediction(2.0, 3.0, 3.0))

bubble = SystemParams.critical(5, 3)
gs = SimpleNamespace(params=bubble, S=2.0, int_Uq=3.0, int_Vp=3.0, a=1.5, v0=1.0, int_U2=math.inf, b=1.0)
green = SimpleNamespace(g_diag=-0.5, gt_diag=None, p=None)
prediction = blowup_rate_prediction(bubble, gs, green)
assert close(prediction.exponent, 2.0)
assert close(prediction.stated_constant, 2.0 ** -0.8 * 9.0 * 0.5)
assert close(prediction.constant, prediction.stated_constant)
raises(CompositionError, blowup_rate_prediction, SystemParams.critical(3, 3), gs, green)

sub = SystemParams.critical(2.5, 3)
gs_sub = SimpleNamespace(params=sub, S=2.0, int_Uq=3.0, int_Vp=math.inf, a=1.5, v0=2.0, int_U2=1.0, b=1.0)
raises(CompositionError, blowup_rate_prediction, sub, gs_sub, green)
raises(CompositionError, blowup_rate_prediction, sub, gs_sub, SimpleNamespace(g_diag=-0.5, gt_diag=-0.1, p=5.0))
prediction = blowup_rate_prediction(sub, gs_sub, SimpleNamespace(g_diag=-0.5, gt_diag=-0.1, p=2.5))
assert close(prediction.exponent, 3.5, rel=1e-12)
assert close(prediction.constant, prediction.stated_constant / 7.0, rel=1e-12)

assert perturbed_window(SystemParams.critical(1, 9)) is Window.power_subcritical
assert perturbed_window(SystemParams.critical(1, 8)) is Window.log_borderline
assert perturbed_window(SystemParams.critical(3, 4)) is Window.log_n4
assert perturbed_window(SystemParams.critical(2, 5)) is Window.power_supercritical
raises(WindowError, perturbed_window, bubble)
raises(WindowError, perturbed_window, SystemParams.critical(2, 5), gs)

nine = SystemParams.critical(1, 9)
gs_nine = SimpleNamespace(params=nine, S=2.0, int_Uq=3.0, int_Vp=math.inf, a=1.5, v0=2.0, int_U2=4.0, b=1.0)
green_nine = SimpleNamespace(g_diag=-0.5, gt_diag=-0.1, p=1.0)
prediction = perturbed_prediction(nine, gs_nine, green_nine)
assert close(prediction.exponent, 0.4, rel=1e-12) and prediction.log_power == 0

exponent_law = blowup_rate_prediction(nine, gs_nine, green_nine)
v_law = v_norm_rate_prediction(nine, gs_nine, exponent_law)
assert close(v_law.exponent, 2.0 * (9 - 4) / 9.0, rel=1e-12)
assert close(v_law.constant, exponent_law.constant * 2.0 ** v_law.exponent, rel=1e-12)
raises(RegimeError, v_norm_rate_prediction, nine, gs_nine, Prediction(1.0, 1.0, 1.0, -1))

assert np.all(h_of_mu(bubble, [0.1, 0.01]) == 1.0)
assert close(float(h_of_mu(SystemParams.critical(3, 3), 0.01)), math.log(100.0))
assert close(float(h_of_mu(sub, 0.01)), 0.01 ** -0.5)

report = CheckReport.compare("demo", dict(eps=np.float64(0.1)), 1.01, 1.0, 0.05)
assert report.passed and close(report.residual, 0.01, rel=1e-9)
assert report.as_dict()["pass"] is True and isinstance(report.as_dict()["inputs"]["eps"], float)
assert plain(np.arange(3)) == [0, 1, 2]

points = annulus_points(Ball(2.0, 9), 0.5, 0.9, n=4)
assert points.shape == (26 * 4, 9)
radii = np.linalg.norm(points, axis=-1)
assert np.min(radii) >= 1.0 - 1e-12 and np.max(radii) <= 1.8 + 1e-12

ground = find_ground_state(bubble)
run = continue_branch(5, 3, Ball(1.0, 3), (0.3, 0.25, 0.2, 0.15), gs=ground)
raises(PreconditionError, perturbed_rate_check, series_from_run(run, bubble.regime), bubble, ground, green)
energy = energy_limit_check(run, ground)
assert energy.rel_error < 0.2
mu = mu_eps_report(run)
assert np.all(mu.mu_eps < 1.0) and mu.min_mu_eps > 0.1
ratio = consistency_ratio(run)
assert 0 < ratio.bounds[0] <= ratio.bounds[1] < math.inf
decay = decay_away_report(run)
assert decay.decreasing
concentration = concentration_report(run, ground)
assert concentration.mass_fraction[-1] >= concentration.mass_fraction[0]
assert concentration.domination > 0

# linear perturbation u^q + eps u at the critical pair (p, N) = (1, 9)
pert = continue_branch(1, 9, Ball(1.0, 9), (100.0, 60.0, 36.0, 20.0, 12.0), mode=SolverMode.perturbation)
assert pert.last_good_eps == 12.0
assert all(s.mode is SolverMode.perturbation for s in pert.solutions)
assert pert.solutions[-1].u_max > pert.solutions[0].u_max
assert pohozaev_residual(pert.solutions[-1]).rel_residual < 1e-3
pert_series = series_from_run(pert, nine.regime)
pert_fit = perturbed_rate_check(pert_series, nine, gs_nine, green_nine)
assert close(pert_fit.predicted_exponent, 0.4, rel=1e-12)
assert pert_fit.fitted_exponent > 0
