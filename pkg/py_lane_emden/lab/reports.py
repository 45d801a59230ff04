from typing import Any, Optional

import attr
import numpy as np

__all__ = ["CheckReport", "plain"]


def plain(value: Any) -> Any:
    """numpy scalars and arrays as JSON-ready python values."""
    if isinstance(value, dict):
        return {k: plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [plain(v) for v in value.tolist()]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.bool_):
        return bool(value)
    return value


@attr.s
class CheckReport:
    check = attr.ib()  # type: str
    inputs = attr.ib()  # type: dict
    lhs = attr.ib()  # type: Any
    rhs = attr.ib()  # type: Any
    residual = attr.ib()  # type: float
    passed = attr.ib()  # type: bool
    tolerance = attr.ib()  # type: Optional[float]
    notes = attr.ib(default="")  # type: str

    @classmethod
    def compare(cls, check: str, inputs: dict, lhs: float, rhs: float, tolerance: float, notes: str = ""):
        """relative comparison |lhs - rhs| / |rhs| <= tolerance."""
        residual = abs(lhs - rhs) / abs(rhs) if rhs else abs(lhs - rhs)
        return cls(check, inputs, lhs, rhs, residual, bool(residual <= tolerance), tolerance, notes)

    def as_dict(self) -> dict:
        out = {
            "check": self.check,
            "inputs": plain(self.inputs),
            "lhs": plain(self.lhs),
            "rhs": plain(self.rhs),
            "residual": plain(self.residual),
            "pass": bool(self.passed),
            "tolerance": self.tolerance,
        }
        if self.notes:
            out["notes"] = self.notes
        return out
