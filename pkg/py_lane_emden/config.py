"""Run configuration: one JSON object with the sections `ground`, `solver`,
`sweep` and `green`, overridden field by field from the command line and
serialized back into the run manifest.
"""
from pathlib import Path
from typing import List, Optional, Tuple
import datetime
import hashlib
import json
import re

import attr

from py_lane_emden.bvp.continuation import geometric_schedule
from py_lane_emden.bvp.solution import SolverMode
from py_lane_emden.errors import DomainError
from py_lane_emden.green.domains import Ball, Box, Domain

__all__ = [
    "GroundConfig",
    "SolverConfig",
    "SweepConfig",
    "GreenConfig",
    "RunConfig",
    "RunManifest",
    "parse_schedule",
    "parse_point",
    "load_config",
    "config_digest",
    "VERSION",
]

VERSION = "0.1"

_SCHEDULE = re.compile(r"^\s*([^:]+):([^:]+):geo([^:]+)\s*$")


def _positive(instance, attribute, value):
    if value is not None and not value > 0:
        raise DomainError("{} must be positive, got {}".format(attribute.name, value))


def _grid(instance, attribute, value):
    if value is not None and (value < 9 or value % 2 == 0):
        raise DomainError("{} must be an odd node count >= 9, got {}".format(attribute.name, value))


def _optional_float(value):
    return None if value is None else float(value)


def parse_schedule(text: str) -> Tuple[float, ...]:
    """`start:end:geoR` into the decreasing tuple start, start*R, ... down to
    end; a comma list is taken as given and must itself decrease.
    """
    match = _SCHEDULE.match(text)
    if match:
        try:
            start, end, ratio = (float(g) for g in match.groups())
        except ValueError:
            raise DomainError("malformed eps schedule {!r}".format(text))
        if not start > end:
            raise DomainError("eps schedule must decrease, got {!r}".format(text))
        return geometric_schedule(start, end, ratio)
    try:
        values = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise DomainError("eps schedule must be start:end:geoR or a comma list, got {!r}".format(text))
    if any(not v > 0 for v in values) or any(b >= a for a, b in zip(values, values[1:])):
        raise DomainError("eps schedule must be positive and strictly decreasing, got {!r}".format(text))
    return values


def parse_point(text) -> Tuple[float, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(float(v) for v in text)
    try:
        return tuple(float(v) for v in str(text).split(","))
    except ValueError:
        raise DomainError("point must be comma separated numbers, got {!r}".format(text))


def _mode(value) -> SolverMode:
    if isinstance(value, SolverMode):
        return value
    try:
        return SolverMode.parse(value)
    except ValueError:
        raise DomainError("unknown solver mode {!r}".format(value))


@attr.s
class GroundConfig:
    p = attr.ib(default=None, converter=_optional_float, validator=_positive)  # type: Optional[float]
    N = attr.ib(default=3, converter=int)  # type: int
    tol = attr.ib(default=1e-10, converter=float, validator=_positive)  # type: float
    rmax = attr.ib(default=1e4, converter=float, validator=_positive)  # type: float

    @N.validator
    def _dimension(self, attribute, value):
        if not value > 2:
            raise DomainError("dimension must satisfy N > 2, got N={}".format(value))


@attr.s
class SolverConfig:
    domain = attr.ib(default="ball")  # type: str
    R = attr.ib(default=1.0, converter=float, validator=_positive)  # type: float
    side = attr.ib(default=1.0, converter=float, validator=_positive)  # type: float
    mode = attr.ib(default=SolverMode.exponent, converter=_mode)  # type: SolverMode
    grid = attr.ib(default=None, validator=_grid)  # type: Optional[int]
    tol = attr.ib(default=1e-9, converter=float, validator=_positive)  # type: float

    @domain.validator
    def _known(self, attribute, value):
        if value not in ("ball", "box"):
            raise DomainError("domain must be 'ball' or 'box', got {!r}".format(value))

    def build(self, N: int) -> Domain:
        if self.domain == "ball":
            return Ball(self.R, N)
        if N != 3:
            raise DomainError("boxes are three dimensional, got N={}".format(N))
        return Box((0.0, 0.0, 0.0), (self.side,) * 3)


@attr.s
class SweepConfig:
    schedule = attr.ib(default="0.5:0.02:geo0.8")  # type: str
    extrapolation = attr.ib(default="eps")  # type: str
    max_insertions = attr.ib(default=4, converter=int)  # type: int

    @schedule.validator
    def _parses(self, attribute, value):
        parse_schedule(value)

    @extrapolation.validator
    def _variable(self, attribute, value):
        if value not in ("eps", "inv_log"):
            raise DomainError("extrapolation must be 'eps' or 'inv_log', got {!r}".format(value))

    @property
    def eps_values(self) -> Tuple[float, ...]:
        return parse_schedule(self.schedule)


@attr.s
class GreenConfig:
    x0 = attr.ib(default=None)  # type: Optional[Tuple[float, ...]]
    identities = attr.ib(default=False, converter=bool)  # type: bool
    tol = attr.ib(default=None, converter=_optional_float, validator=_positive)  # type: Optional[float]
    grid = attr.ib(default=None, validator=_grid)  # type: Optional[int]

    def point(self, N: int) -> Tuple[float, ...]:
        return (0.0,) * N if self.x0 is None else parse_point(self.x0)


@attr.s
class RunConfig:
    command = attr.ib()  # type: str
    ground = attr.ib(factory=GroundConfig)  # type: GroundConfig
    solver = attr.ib(factory=SolverConfig)  # type: SolverConfig
    sweep = attr.ib(factory=SweepConfig)  # type: SweepConfig
    green = attr.ib(factory=GreenConfig)  # type: GreenConfig
    eps = attr.ib(default=None, converter=_optional_float, validator=_positive)  # type: Optional[float]
    suite = attr.ib(default=None)  # type: Optional[str]

    def to_dict(self) -> dict:
        def value(inst, a, v):
            return v.value if isinstance(v, SolverMode) else v
        return attr.asdict(self, value_serializer=value)


def config_digest(config: RunConfig) -> str:
    canonical = json.dumps(config.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


_SECTIONS = dict(ground=GroundConfig, solver=SolverConfig, sweep=SweepConfig, green=GreenConfig)

_NEEDS_P = ("ground", "solve", "sweep")


def _names(cls) -> set:
    return {a.name for a in attr.fields(cls)}


def load_config(command: str, path: Optional[Path] = None, overrides: Optional[dict] = None) -> RunConfig:
    """a RunConfig from an optional JSON file, then `overrides`, a mapping of
    section name (or "run" for the top level) to the flags given on the
    command line; None values mean "not given". Unknown keys are errors.
    """
    data = {}
    if path is not None:
        try:
            with Path(path).open(encoding="utf-8") as f:
                data = json.load(f)
        except (OSError, ValueError) as e:
            raise DomainError("cannot read config {}: {}".format(path, e))
        if not isinstance(data, dict):
            raise DomainError("config file must hold one JSON object")
    sections = {name: dict(data.get(name) or {}) for name in _SECTIONS}
    top = {k: v for k, v in data.items() if k not in _SECTIONS and k != "command"}
    for name, values in (overrides or {}).items():
        target = top if name == "run" else sections[name]
        target.update({k: v for k, v in values.items() if v is not None})
    for name, cls in _SECTIONS.items():
        unknown = set(sections[name]) - _names(cls)
        if unknown:
            raise DomainError("unknown keys in section {}: {}".format(name, sorted(unknown)))
    unknown = set(top) - _names(RunConfig)
    if unknown:
        raise DomainError("unknown configuration keys: {}".format(sorted(unknown)))
    if command in _NEEDS_P and sections["ground"].get("p") is None:
        raise DomainError("the exponent p is required for {}".format(command))
    built = {name: cls(**sections[name]) for name, cls in _SECTIONS.items()}
    return RunConfig(command=command, **built, **top)


@attr.s
class RunManifest:
    command = attr.ib()  # type: str
    config = attr.ib()  # type: dict
    digest = attr.ib()  # type: str
    version = attr.ib(default=VERSION)  # type: str
    started = attr.ib(factory=lambda: datetime.datetime.now(datetime.timezone.utc).isoformat())  # type: str
    finished = attr.ib(default=None)  # type: Optional[str]
    wall_time = attr.ib(default=None)  # type: Optional[float]
    threads = attr.ib(default=None)  # type: Optional[int]
    outputs = attr.ib(factory=list)  # type: List[str]
    checks = attr.ib(factory=dict)  # type: dict
    status = attr.ib(default="running")  # type: str
    exit_code = attr.ib(default=None)  # type: Optional[int]
    last_good_eps = attr.ib(default=None)  # type: Optional[float]
    error = attr.ib(default=None)  # type: Optional[str]

    def record_check(self, name: str, passed: bool, tolerance: Optional[float] = None):
        self.checks[name] = dict(passed=bool(passed), tolerance=tolerance)

    @property
    def all_passed(self) -> bool:
        return all(c["passed"] for c in self.checks.values())

    def finish(self, exit_code: int, wall_time: float):
        self.exit_code = exit_code
        self.wall_time = wall_time
        self.finished = datetime.datetime.now(datetime.timezone.utc).isoformat()
        self.status = "ok" if exit_code == 0 else "failed"

    def as_dict(self) -> dict:
        return attr.asdict(self)
