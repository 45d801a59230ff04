import math

import numpy as np

from py_lane_emden.errors import DomainError, SingularityError
from py_lane_emden.green import *
from py_lane_emden.quadrature import integrate_on_sphere
from runtests.util import close, raises

x = np.array([0.3, -0.2, 0.1])
y = np.array([-0.4, 0.25, 0.5])
assert close(float(green_ball(x, y, 1.0, 3)), float(green_ball(y, x, 1.0, 3)), rel=1e-13)
assert float(green_ball(x, y, 1.0, 3)) > 0
on_sphere = y / np.linalg.norm(y)
assert abs(float(green_ball(x, on_sphere, 1.0, 3))) < 1e-12
raises(SingularityError, green_ball, x, x, 1.0, 3)
raises(DomainError, green_ball, x, 2.0 * on_sphere, 1.0, 3)
raises(DomainError, robin_ball, on_sphere, 1.0, 3)

assert close(float(robin_ball(np.zeros(3), 1.0, 3)), -1.0 / (4.0 * math.pi), rel=1e-14)
# N = 5, R = 2 at the center: -(1/R)^3 / (3 * 8 pi^2 / 3)
assert close(float(robin_ball(np.zeros(5), 2.0, 5)), -1.0 / (8.0 * 8.0 * math.pi ** 2), rel=1e-12)

h = 1e-6
grad = robin_ball_gradient(x, 1.0, 3)
for k in range(3):
    step = np.zeros(3)
    step[k] = h
    fd = (float(robin_ball(x + step, 1.0, 3)) - float(robin_ball(x - step, 1.0, 3))) / (2.0 * h)
    assert close(grad[k], fd, rel=1e-6, abs_=1e-9), (k, grad[k], fd)

# harmonic measure of the whole sphere
total, err = integrate_on_sphere(lambda z, n: poisson_kernel_ball(x, z, 1.0, 3), (0.0, 0.0, 0.0), 1.0)
assert close(float(total), -1.0, rel=1e-8) and err < 1e-6

# normal component of grad_y G on the sphere is the Poisson kernel
normal_derivative = float(np.sum(green_ball_gradient(x, on_sphere, 1.0, 3) * on_sphere))
assert close(normal_derivative, float(poisson_kernel_ball(x, on_sphere, 1.0, 3)), rel=1e-10)

shifted = Ball(1.0, 3, (2.0, 0.0, 0.0))
green = BallGreen(shifted, (2.3, -0.2, 0.1))
assert close(green.phi, float(robin_ball(x, 1.0, 3)), rel=1e-13)
assert np.allclose(2.0 * green.grad_g_diag, green.grad_phi, rtol=1e-10, atol=1e-14)
raises(DomainError, BallGreen, shifted, (0.0, 0.0, 0.0))

report = boundary_identity_check(Ball(1.0, 3), (0.0, 0.0, 0.0), "i")
assert close(float(report.lhs), 1.0 / (4.0 * math.pi), rel=1e-6)
assert report.passed(1e-6)
raises(DomainError, boundary_identity_check, Ball(1.0, 3), (0.0, 0.0, 0.0), "ii")
raises(DomainError, boundary_identity_check, Ball(1.0, 3), (0.0, 0.0, 0.0), "iii")

# G~ against direct volume quadrature, centered and off-center
fields = {}
for x0 in ((0.0, 0.0, 0.0), (0.2, 0.0, 0.0)):
    field = fields[x0] = iterated_green(Ball(1.0, 3), 2.5, x0)
    target = np.array([0.0, 0.5, 0.0])
    direct = iterated_green_quadrature(Ball(1.0, 3), 2.5, x0, target)
    assert close(float(field.Gt(target[None, :])[0]), direct, rel=5e-3), x0

radial = iterated_green(Ball(1.0, 3), 2.5, (0.0, 0.0, 0.0))
assert isinstance(radial, RadialIterated)
assert radial.laplacian_residual((0.3, 0.6)) < 1e-3

off = (0.2, 0.0, 0.0)
tilde = tilde_robin(Ball(1.0, 3), 2.5, off, field=fields[off])
assert math.isfinite(tilde.phi_t) and close(tilde.phi_t, tilde.phi_direct, rel=1e-2)
# the x axis is a symmetry axis of the off-center problem
assert abs(tilde.grad_phi_t[0]) > 0 and np.all(np.abs(tilde.grad_phi_t[1:]) < 1e-3 * abs(tilde.grad_phi_t[0]) + 1e-8)
for which in ("ii", "vec4"):
    report = boundary_identity_check(Ball(1.0, 3), off, which, p=2.5, field=fields[off], tilde=tilde)
    assert report.rel_residual < 1e-2, (which, report.rel_residual)

bundle = build_bundle(Ball(1.0, 3), (0.0, 0.0, 0.0), p=2.5, checks=("i", "ii"))
assert bundle.q is not None and close(3.0 / (bundle.p + 1.0) + 3.0 / (bundle.q + 1.0), 1.0, rel=1e-12)
assert bundle.phi < 0 and bundle.phi_t is not None
assert bundle.residuals["i"] < 1e-6 and bundle.residuals["ii"] < 1e-3
assert bundle.field_header() == ("x", "y", "z", "G", "Gt")
assert bundle.field_rows().shape == (len(bundle.points), 5)
assert not bundle.outside_smoothness_hypotheses
summary = bundle.to_summary()
assert summary["domain"]["kind"] == "ball" and summary["phi_t"] == bundle.gt_diag

assert parse_domain(dict(kind="box")) == Box.unit_cube()
raises(DomainError, parse_domain, dict(kind="torus"))
raises(DomainError, Box, (0.0, 0.0, 0.0), (1.0, 0.0, 1.0))
