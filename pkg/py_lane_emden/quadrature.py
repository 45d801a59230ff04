"""Quadrature and extrapolation helpers shared by every module.
"""
from typing import Callable, List, Optional, Sequence, Tuple
import math

import attr
import numpy as np
from scipy.integrate import simpson
from scipy.special import gamma

from py_lane_emden.errors import ExtractionError

__all__ = [
    "sphere_area",
    "radial_integral",
    "Richardson",
    "richardson",
    "estimate_order",
    "SurfaceRule",
    "sphere_rule",
    "box_face_rule",
    "integrate_on_sphere",
]


def sphere_area(N: float) -> float:
    """sigma_N, the area of the unit sphere in R^N.
    """
    return 2.0 * math.pi ** (N / 2.0) / float(gamma(N / 2.0))


def radial_integral(r: np.ndarray, f: np.ndarray, N: float) -> float:
    """integral over the ball B_{r[-1]} of a radial function sampled at `r`.
    """
    return sphere_area(N) * float(simpson(f * r ** (N - 1.0), x=r))


@attr.s(frozen=True)
class Richardson:
    value = attr.ib()  # type: float
    error = attr.ib()  # type: float
    table = attr.ib()  # type: List[List[float]]


def richardson(values: Sequence[float], exponents: Sequence[float], ratio: float = 2.0) -> Richardson:
    """Eliminate error terms h^e_1, h^e_2, ... from values taken at
    h_k = h_0 / ratio^k.

    The error estimate is the gap between the two most extrapolated entries.
    """
    column = [float(v) for v in values]
    if len(column) < 2:
        raise ExtractionError("richardson extrapolation needs at least two samples")
    table = [column]
    for e in exponents:
        if len(column) < 2:
            break
        factor = ratio ** e
        column = [(factor * column[k + 1] - column[k]) / (factor - 1.0) for k in range(len(column) - 1)]
        table.append(column)
    best = table[-1][-1]
    if len(table[-1]) >= 2:
        error = abs(table[-1][-1] - table[-1][-2])
    else:
        error = abs(table[-1][-1] - table[-2][-1])
    return Richardson(best, error, table)


def estimate_order(w1: float, w2: float, w3: float, ratio: float = 2.0) -> Optional[float]:
    """observed convergence order of three successive samples.
    """
    d1, d2 = w1 - w2, w2 - w3
    if d1 == 0.0 or d2 == 0.0 or d1 * d2 < 0.0:
        return None
    return math.log(abs(d1 / d2)) / math.log(ratio)


@attr.s(frozen=True)
class SurfaceRule:
    points = attr.ib()  # type: np.ndarray
    normals = attr.ib()  # type: np.ndarray
    weights = attr.ib()  # type: np.ndarray

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """scalar (shape (M,)) or vector (shape (M, d)) integrand.
        """
        values = np.asarray(values)
        if values.ndim == 1:
            return np.dot(self.weights, values)
        return np.einsum("m,m...->...", self.weights, values)


def _gauss_sphere(center: np.ndarray, R: float, n_theta: int, n_phi: int) -> SurfaceRule:
    x, w = np.polynomial.legendre.leggauss(n_theta)
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    ct, ph = np.meshgrid(x, phi, indexing="ij")
    st = np.sqrt(1.0 - ct ** 2)
    normals = np.stack([st * np.cos(ph), st * np.sin(ph), ct], axis=-1).reshape(-1, 3)
    weights = (np.outer(w, np.full(n_phi, 2.0 * math.pi / n_phi)) * R * R).reshape(-1)
    return SurfaceRule(center + R * normals, normals, weights)


def sphere_rule(center: Sequence[float], R: float, degree: int = 48) -> Tuple[SurfaceRule, SurfaceRule]:
    """product Gauss-Legendre (in cos theta) times trapezoid (in azimuth) on
    the sphere of radius R in R^3, at `degree` and at half of it.

    The pair is used for the surface-integration error estimate.
    """
    center = np.asarray(center, dtype=float)
    fine = _gauss_sphere(center, R, degree, 2 * degree)
    coarse = _gauss_sphere(center, R, max(degree // 2, 4), max(degree, 8))
    return fine, coarse


def _trapezoid_weights(n: int, h: float) -> np.ndarray:
    w = np.full(n, h)
    w[0] = w[-1] = h / 2.0
    return w


def box_face_rule(lower: Sequence[float], upper: Sequence[float], n: Sequence[int]) -> SurfaceRule:
    """face-wise tensor trapezoid rule on the boundary of an axis-aligned box
    with `n[k]` nodes along axis k; edge and corner nodes belong to every
    face touching them, each with its face's trapezoid weight.
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    axes = [np.linspace(lower[k], upper[k], n[k]) for k in range(3)]
    steps = [(upper[k] - lower[k]) / (n[k] - 1) for k in range(3)]
    points, normals, weights = [], [], []
    for k in range(3):
        i, j = [a for a in range(3) if a != k]
        A, B = np.meshgrid(axes[i], axes[j], indexing="ij")
        W = np.outer(_trapezoid_weights(n[i], steps[i]), _trapezoid_weights(n[j], steps[j]))
        for side, value in ((-1.0, lower[k]), (1.0, upper[k])):
            P = np.empty(A.shape + (3,))
            P[..., i], P[..., j], P[..., k] = A, B, value
            nrm = np.zeros(3)
            nrm[k] = side
            points.append(P.reshape(-1, 3))
            normals.append(np.tile(nrm, (A.size, 1)))
            weights.append(W.reshape(-1))
    return SurfaceRule(np.concatenate(points), np.concatenate(normals), np.concatenate(weights))


def integrate_on_sphere(
        f: Callable[[np.ndarray, np.ndarray], np.ndarray],
        center: Sequence[float],
        R: float,
        degree: int = 48) -> Tuple[np.ndarray, float]:
    """integrate f(points, normals) over a sphere, with an error estimate
    from the half-degree rule.
    """
    fine, coarse = sphere_rule(center, R, degree)
    value = fine.integrate(f(fine.points, fine.normals))
    rough = coarse.integrate(f(coarse.points, coarse.normals))
    return value, float(np.max(np.abs(np.asarray(value) - np.asarray(rough))))

