from py_lane_emden.errors import DomainError, InfeasibilityError
from py_lane_emden.hyperbola import *
from runtests.util import close, raises

assert critical_q(5, 3) == 5.0
assert critical_q(2.5, 3) == 20.0
assert close(critical_q(1, 9), 2.6)
assert critical_q(1, 8) == 3.0
assert critical_q(3, 4) == 3.0

assert close(qeps_from_eps(5, 3, 0.2), 3.0 / 0.7 - 1.0)
assert qeps_from_eps(5, 3, 0.0) == 5.0
raises(InfeasibilityError, qeps_from_eps, 5, 3, 2.5)
raises(DomainError, qeps_from_eps, 5, 3, -0.1)

assert classify_regime(5, 3) is Regime.supercritical
assert classify_regime(3, 3) is Regime.logarithmic
assert classify_regime(2.5, 3) is Regime.subcritical
assert classify_regime(2, 4) is Regime.logarithmic

e = raises(DomainError, critical_q, 0.5, 3)
assert "2/(N-2)" in str(e)
raises(DomainError, critical_q, 6, 3)
raises(DomainError, critical_q, 5, 2)

params = SystemParams.from_eps(5, 3, 0.2)
assert params.q == 5.0 and params.alpha == 0.5 and params.beta == 0.5
assert close(params.defect(), 0.2)
assert params.critical_pair().is_critical
assert params.at_eps(0.1).eps == 0.1
assert params.hyperbola_residual() < 1e-14

sub = SystemParams.critical(2.5, 3)
assert close(sub.alpha, 1.0 / 7.0)

perturbed = SystemParams.perturbed(1, 9, 3.0)
assert perturbed.eps == 3.0 and close(perturbed.q, 2.6)
assert abs(perturbed.defect()) < 1e-12
raises(DomainError, SystemParams.perturbed, 1, 9, -1.0)

assert lower_dimension_bound(1) == 4.0
assert close(limit_energy(SystemParams.critical(5, 3), 2.0), 2.0 ** (30.0 / 24.0))
