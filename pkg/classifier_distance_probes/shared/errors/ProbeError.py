from typing import List, Optional


class ProbeError(Exception):
    """Base class for every error raised by classifier_distance_probes."""
    pass


class DimensionError(ProbeError):
    def __init__(self, message, axis: int, size: int):
        super().__init__(message)
        self.axis = axis
        self.size = size


class NumericConsistencyError(ProbeError):
    def __init__(self, message, max_residue: float):
        super().__init__(message)
        self.max_residue = max_residue


class ContractError(ProbeError):
    """Raised when an input violates an operation's precondition."""
    pass


class PsdViolationError(ContractError):
    def __init__(self, message, min_eigenvalue: float):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class BoundsError(ContractError):
    pass


class SpecError(ProbeError):
    """Raised when a filter, distribution, model or experiment spec is invalid."""
    pass


class FormatError(ProbeError):
    pass


class ImageIOError(ProbeError, OSError):
    def __init__(self, message, path: str):
        super().__init__(message)
        self.path = path


class DataError(ProbeError):
    pass


class TrainingError(ProbeError):
    def __init__(self, message, epoch: int, loss_curve: Optional[List[float]] = None):
        super().__init__(message)
        self.epoch = epoch
        self.loss_curve = list(loss_curve or [])


class UnsupportedError(ProbeError):
    pass


class UsageError(ProbeError):
    pass
