from typing import Tuple, Union

import attr
import numpy as np

from py_lane_emden.errors import DomainError

__all__ = ["Ball", "Box", "Domain", "parse_domain", "as_point", "require_interior"]


def as_point(x, dim: int) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape != (dim,):
        raise DomainError("expected a point in R^{}, got {}".format(dim, list(x)))
    return x


@attr.s(frozen=True)
class Ball:
    R = attr.ib(converter=float)  # type: float
    N = attr.ib(default=3, converter=int)  # type: int
    center = attr.ib(default=None)  # type: Tuple[float, ...]

    def __attrs_post_init__(self):
        if not self.R > 0:
            raise DomainError("ball radius must be positive, got R={}".format(self.R))
        if self.N < 3:
            raise DomainError("ball dimension must be at least 3, got N={}".format(self.N))
        if self.center is None:
            object.__setattr__(self, "center", (0.0,) * self.N)
        elif len(self.center) != self.N:
            raise DomainError("ball center must have {} coordinates".format(self.N))

    kind = "ball"
    smooth = True

    @property
    def dim(self) -> int:
        return self.N

    @property
    def diameter(self) -> float:
        return 2.0 * self.R

    def local(self, x) -> np.ndarray:
        return np.asarray(x, dtype=float) - np.asarray(self.center)

    def distance_to_boundary(self, x) -> float:
        return self.R - float(np.linalg.norm(self.local(as_point(x, self.N))))

    def contains(self, x) -> bool:
        return self.distance_to_boundary(x) > 0.0

    def is_centered(self, x, atol: float = 1e-14) -> bool:
        return float(np.linalg.norm(self.local(as_point(x, self.N)))) <= atol * self.R

    def to_dict(self) -> dict:
        return dict(kind="ball", R=self.R, N=self.N, center=list(self.center))


@attr.s(frozen=True)
class Box:
    lower = attr.ib(converter=lambda v: tuple(float(x) for x in v))  # type: Tuple[float, float, float]
    upper = attr.ib(converter=lambda v: tuple(float(x) for x in v))  # type: Tuple[float, float, float]

    def __attrs_post_init__(self):
        if len(self.lower) != 3 or len(self.upper) != 3:
            raise DomainError("boxes are three dimensional")
        if not all(u > l for l, u in zip(self.lower, self.upper)):
            raise DomainError("box must have positive side lengths, got {} .. {}".format(self.lower, self.upper))

    kind = "box"
    smooth = False
    N = 3

    @classmethod
    def unit_cube(cls) -> "Box":
        return cls((0.0, 0.0, 0.0), (1.0, 1.0, 1.0))

    @property
    def dim(self) -> int:
        return 3

    @property
    def sides(self) -> np.ndarray:
        return np.asarray(self.upper) - np.asarray(self.lower)

    @property
    def center(self) -> Tuple[float, float, float]:
        return tuple(0.5 * (l + u) for l, u in zip(self.lower, self.upper))

    @property
    def diameter(self) -> float:
        return float(np.linalg.norm(self.sides))

    def distance_to_boundary(self, x) -> float:
        x = as_point(x, 3)
        return float(min(np.min(x - np.asarray(self.lower)), np.min(np.asarray(self.upper) - x)))

    def contains(self, x) -> bool:
        return self.distance_to_boundary(x) > 0.0

    def to_dict(self) -> dict:
        return dict(kind="box", lower=list(self.lower), upper=list(self.upper), N=3)


Domain = Union[Ball, Box]


def parse_domain(spec: dict) -> Domain:
    kind = spec.get("kind", "ball")
    if kind == "ball":
        return Ball(spec.get("R", 1.0), spec.get("N", 3), tuple(spec["center"]) if spec.get("center") else None)
    if kind == "box":
        return Box(spec.get("lower", (0.0, 0.0, 0.0)), spec.get("upper", (1.0, 1.0, 1.0)))
    raise DomainError("unknown domain kind {!r}; expected 'ball' or 'box'".format(kind))


def require_interior(domain: Domain, x0) -> np.ndarray:
    x0 = as_point(x0, domain.dim)
    if not domain.contains(x0):
        raise DomainError("source point {} is not inside the {}".format(list(x0), domain.kind))
    return x0

