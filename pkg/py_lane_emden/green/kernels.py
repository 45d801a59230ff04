"""Free-space fundamental solution and the near-field expansion of the
iterated Green's function.

With Gamma = c |y-x0|^(2-N), c = 1/((N-2) sigma_N), k = p(N-2), g0 the
Robin value and `a` the gradient in y of the regular part at the diagonal,

    G^p = Gamma^p + p Gamma^(p-1) (g0 + a.d) + p(p-1)/2 Gamma^(p-2) g0^2 + f_rem,

and each of the first four sources has an exact radial potential

    S1 = c^p r^(2-k) / ((k-2)(N-k))
    S2 = -p g0 c^(p-1) r^(N-k) / ((N-k)(2N-k-2))
    S3 = -p c^(p-1) r^(N-k) (a.d) / ((N-k)(2N-k))
    S4 = -B r^(2-m) / ((2-m)(3N-k-4)),   B = p(p-1) c^(p-2) g0^2 / 2,  m = (p-2)(N-2)

leaving a bounded, continuous remainder f_rem that vanishes at x0.
"""
import attr
import numpy as np

from py_lane_emden.errors import RegimeError
from py_lane_emden.quadrature import sphere_area

__all__ = [
    "fundamental_coefficient",
    "fundamental",
    "fundamental_gradient",
    "SingularExpansion",
    "singular_coefficient",
]


def fundamental_coefficient(N: float) -> float:
    return 1.0 / ((N - 2.0) * sphere_area(N))


def fundamental(r, N: float):
    return fundamental_coefficient(N) * np.asarray(r, dtype=float) ** (2.0 - N)


def fundamental_gradient(d: np.ndarray, N: float) -> np.ndarray:
    """gradient in y of Gamma(x, y), with d = y - x of shape (..., N).
    """
    r = np.linalg.norm(d, axis=-1)[..., None]
    return -(N - 2.0) * fundamental_coefficient(N) * d / r ** N


@attr.s(frozen=True)
class SingularExpansion:
    p = attr.ib()  # type: float
    N = attr.ib()  # type: float
    g0 = attr.ib()  # type: float
    a = attr.ib()  # type: np.ndarray

    def __attrs_post_init__(self):
        p, N = self.p, self.N
        if not 2.0 / (N - 2.0) < p < N / (N - 2.0):
            raise RegimeError(
                "iterated Green's function needs 2/(N-2) < p < N/(N-2), got p={} (N={})".format(p, N)
            )

    @property
    def c(self) -> float:
        return fundamental_coefficient(self.N)

    @property
    def k(self) -> float:
        return self.p * (self.N - 2.0)

    @property
    def m(self) -> float:
        return (self.p - 2.0) * (self.N - 2.0)

    @property
    def C1(self) -> float:
        k, N = self.k, self.N
        return self.c ** self.p / ((k - 2.0) * (N - k))

    @property
    def C2(self) -> float:
        k, N, p = self.k, self.N, self.p
        return -p * self.g0 * self.c ** (p - 1.0) / ((N - k) * (2.0 * N - k - 2.0))

    @property
    def C3(self) -> float:
        k, N, p = self.k, self.N, self.p
        return -p * self.c ** (p - 1.0) / ((N - k) * (2.0 * N - k))

    @property
    def C4(self) -> float:
        k, N, p, m = self.k, self.N, self.p, self.m
        B = 0.5 * p * (p - 1.0) * self.c ** (p - 2.0) * self.g0 ** 2
        return -B / ((2.0 - m) * (3.0 * N - k - 4.0))

    def S1(self, r):
        return self.C1 * r ** (2.0 - self.k)

    def S2(self, r):
        return self.C2 * r ** (self.N - self.k)

    def S3(self, r, ad):
        return self.C3 * r ** (self.N - self.k) * ad

    def S4(self, r):
        return self.C4 * r ** (2.0 - self.m)

    def split(self, d: np.ndarray):
        d = np.asarray(d, dtype=float)
        return np.linalg.norm(d, axis=-1), d @ np.asarray(self.a, dtype=float)

    def singular(self, d: np.ndarray) -> np.ndarray:
        """S1 + S2 + S3 + S4 at y = x0 + d.
        """
        r, ad = self.split(d)
        return self.S1(r) + self.S2(r) + self.S3(r, ad) + self.S4(r)

    def singular_gradient(self, d: np.ndarray) -> np.ndarray:
        d = np.asarray(d, dtype=float)
        r, ad = self.split(d)
        N, k, m = self.N, self.k, self.m
        rr = r[..., None]
        a = np.asarray(self.a, dtype=float)
        radial = (
            self.C1 * (2.0 - k) * rr ** (-k)
            + self.C2 * (N - k) * rr ** (N - k - 2.0)
            + self.C3 * (N - k) * rr ** (N - k - 2.0) * ad[..., None]
            + self.C4 * (2.0 - m) * rr ** (-m)
        )
        return radial * d + self.C3 * rr ** (N - k) * a

    def remainder_source(self, d: np.ndarray, g: np.ndarray) -> np.ndarray:
        """f_rem at y = x0 + d given the regular part g(x0, y); zero at d = 0.
        """
        p = self.p
        r, ad = (np.asarray(v) for v in self.split(d))
        g = np.asarray(g, dtype=float)
        out = np.zeros(r.shape)
        live = r > 0.0
        r, ad, g = r[live], ad[live], g[live]
        gamma = self.c * r ** (2.0 - self.N)
        u = g / gamma
        cubic = np.expm1(p * np.log1p(u)) - p * u - 0.5 * p * (p - 1.0) * u * u
        out[live] = (
            gamma ** p * cubic
            + p * gamma ** (p - 1.0) * (g - self.g0 - ad)
            + 0.5 * p * (p - 1.0) * gamma ** (p - 2.0) * (g * g - self.g0 * self.g0)
        )
        return out


def singular_coefficient(p: float, N: float) -> float:
    """1/((p(N-2)-2)(N-p(N-2))(N-2)^p sigma_N^p)
    """
    k = p * (N - 2.0)
    return 1.0 / ((k - 2.0) * (N - k) * ((N - 2.0) * sphere_area(N)) ** p)

