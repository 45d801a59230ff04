import math

import numpy as np

from py_lane_emden.errors import ExtractionError
from py_lane_emden.quadrature import *
from runtests.util import close, raises

assert close(sphere_area(3), 4.0 * math.pi)
assert close(sphere_area(2), 2.0 * math.pi)
assert close(sphere_area(4), 2.0 * math.pi ** 2)

r = np.linspace(0.0, 1.0, 2001)
assert close(radial_integral(r, np.ones_like(r), 3), 4.0 * math.pi / 3.0, rel=1e-10)

# f(h) = 1 + h^2 + h^4 sampled at h = 1, 1/2, 1/4
values = [1.0 + h ** 2 + h ** 4 for h in (1.0, 0.5, 0.25)]
extrapolated = richardson(values, [2, 4])
assert close(extrapolated.value, 1.0, abs_=1e-12)
raises(ExtractionError, richardson, [1.0], [2])

order = estimate_order(*[1.0 + h ** 2 for h in (0.4, 0.2, 0.1)])
assert close(order, 2.0, rel=1e-10)
assert estimate_order(1.0, 1.0, 1.0) is None

fine, coarse = sphere_rule((0.0, 0.0, 0.0), 2.0, 24)
assert close(fine.integrate(np.ones(len(fine.weights))), 16.0 * math.pi, rel=1e-12)
assert np.allclose(fine.integrate(fine.normals), 0.0, atol=1e-12)
value, err = integrate_on_sphere(lambda x, n: x[:, 2] ** 2, (0.0, 0.0, 0.0), 1.0, 16)
assert close(float(value), 4.0 * math.pi / 3.0, rel=1e-12) and err < 1e-10

rule = box_face_rule((0, 0, 0), (1, 2, 3), (5, 9, 13))
assert close(float(rule.integrate(np.ones(len(rule.weights)))), 2.0 * (2.0 + 3.0 + 6.0), rel=1e-12)
