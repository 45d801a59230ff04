"""Exception hierarchy of the laboratory.

Every error knows the exit code the command line maps it to:
usage and precondition failures exit with 64, numerical failures with 2.
"""
from typing import Optional

__all__ = [
    "LaneEmdenError",
    "DomainError",
    "InfeasibilityError",
    "RegimeError",
    "WindowError",
    "SingularityError",
    "PreconditionError",
    "CompositionError",
    "ContractError",
    "NumericalError",
    "IntegrationFailure",
    "BracketingError",
    "TailExtractionError",
    "ResolutionError",
    "ExtractionError",
    "AccuracyError",
    "ContinuationError",
    "BranchError",
    "DataError",
    "EXIT_OK",
    "EXIT_CHECK_FAILED",
    "EXIT_NUMERICAL",
    "EXIT_USAGE",
]

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_NUMERICAL = 2
EXIT_USAGE = 64


class LaneEmdenError(Exception):
    exit_code = EXIT_NUMERICAL


class DomainError(LaneEmdenError, ValueError):
    """parameters or inputs outside the admissible set.
    """
    exit_code = EXIT_USAGE


class InfeasibilityError(DomainError):
    pass


class RegimeError(DomainError):
    pass


class WindowError(DomainError):
    def __init__(self, window: str, violated: str):
        super().__init__("{} window violated: {}".format(window, violated))
        self.window = window
        self.violated = violated


class SingularityError(DomainError):
    pass


class PreconditionError(DomainError):
    pass


class CompositionError(DomainError):
    pass


class ContractError(DomainError):
    pass


class NumericalError(LaneEmdenError):
    exit_code = EXIT_NUMERICAL


class IntegrationFailure(NumericalError):
    def __init__(self, message: str, r_last: float):
        super().__init__("{} (last radius {:.6g})".format(message, r_last))
        self.r_last = r_last


class BracketingError(NumericalError):
    pass


class TailExtractionError(NumericalError):
    def __init__(self, message: str, drift: Optional[float] = None):
        super().__init__(message)
        self.drift = drift


class ResolutionError(NumericalError):
    pass


class ExtractionError(NumericalError):
    pass


class AccuracyError(NumericalError):
    def __init__(self, message: str, estimate: Optional[float] = None):
        super().__init__(message)
        self.estimate = estimate


class ContinuationError(NumericalError):
    def __init__(self, message: str, last_good_eps: Optional[float] = None, run=None):
        super().__init__(message)
        self.last_good_eps = last_good_eps
        # partial ContinuationRun, when one exists
        self.run = run


class BranchError(NumericalError):
    pass


class DataError(NumericalError):
    pass
