from dataclasses import dataclass

import numpy as np

from classifier_distance_probes.shared.errors import ContractError


@dataclass(frozen=True, eq=False)
class FrequencyMask:
    """A binary M×N mask over the centred spectrum."""
    rows: int
    cols: int
    values: np.ndarray
    description: str = ''

    def __post_init__(self):
        if self.values.shape != (self.rows, self.cols):
            raise ContractError(f'Mask values have shape {self.values.shape}, expected {(self.rows, self.cols)}')
        if not np.all((self.values == 0.0) | (self.values == 1.0)):
            raise ContractError('Frequency masks must be binary')

    @property
    def passed(self) -> int:
        return int(self.values.sum())
