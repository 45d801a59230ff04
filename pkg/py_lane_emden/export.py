"""Plot-ready files: comma-separated tables with a header row and one JSON
object per file.
"""
from pathlib import Path
from typing import Iterable, Sequence
import json
import logging

import numpy as np

from py_lane_emden.bvp.solution import DomainSolution
from py_lane_emden.green.bundle import GreenBundle
from py_lane_emden.ground_state import GroundState
from py_lane_emden.lab.rates import RateFit, RateSeries
from py_lane_emden.lab.reports import plain

__all__ = [
    "write_table",
    "write_json",
    "write_profile",
    "write_constants",
    "write_solution",
    "write_branch",
    "write_bundle",
    "write_field",
]

logger = logging.getLogger(__name__)


def write_table(path: Path, header: Sequence[str], rows: Iterable[Sequence[float]]) -> Path:
    path = Path(path)
    data = np.array([tuple(r) for r in rows], dtype=float)
    if data.size == 0:
        data = data.reshape(0, len(header))
    np.savetxt(path, data, delimiter=",", header=",".join(header), comments="", fmt="%.17g")
    logger.info("wrote %s (%d rows)", path, len(data))
    return path


def write_json(path: Path, obj) -> Path:
    path = Path(path)
    with path.open("w", encoding="utf-8") as f:
        json.dump(plain(obj), f, indent=2, sort_keys=True)
        f.write("\n")
    logger.info("wrote %s", path)
    return path


def write_profile(path: Path, gs: GroundState) -> Path:
    return write_table(path, ("r", "U", "V", "dU", "dV"), gs.profile.rows())


def write_constants(path: Path, gs: GroundState, tolerances: dict) -> Path:
    out = gs.constants()
    out["tolerances"] = dict(tolerances)
    out["log_base"] = "e"
    return write_json(path, out)


def write_solution(path: Path, sol: DomainSolution) -> Path:
    if sol.radial:
        return write_table(path, ("r", "u", "v"), zip(sol.grid, sol.u_field, sol.v_field))
    X = sol.grid.nodes().reshape(-1, 3)
    rows = np.column_stack([X, sol.u_field.reshape(-1), sol.v_field.reshape(-1)])
    return write_table(path, ("x", "y", "z", "u", "v"), rows)


def write_branch(path: Path, series: RateSeries, fit: RateFit) -> Path:
    return write_table(path, ("eps", "u_max", "mu", "scaled_value", "extrapolated"), fit.rows(series))


def write_bundle(path: Path, bundle: GreenBundle) -> Path:
    out = bundle.to_summary()
    out["identities"] = [r.as_dict() for r in bundle.reports]
    return write_json(path, out)


def write_field(path: Path, bundle: GreenBundle) -> Path:
    return write_table(path, bundle.field_header(), bundle.field_rows())
