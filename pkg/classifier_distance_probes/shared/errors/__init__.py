from .ProbeError import (ProbeError, DimensionError, NumericConsistencyError, ContractError, PsdViolationError,
                         BoundsError, SpecError, FormatError, ImageIOError, DataError, TrainingError,
                         UnsupportedError, UsageError)
