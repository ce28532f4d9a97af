from dataclasses import dataclass

import numpy as np

from classifier_distance_probes.shared.errors import DataError


@dataclass(eq=False)
class ClassDataset:
    """Train and held-out samples of one class, each stacked as N×(input shape)."""
    name: str
    train: np.ndarray
    heldout: np.ndarray

    def __post_init__(self):
        self.train = np.asarray(self.train, dtype=np.float64)
        self.heldout = np.asarray(self.heldout, dtype=np.float64)
        if self.train.shape[0] == 0 or self.heldout.shape[0] == 0:
            raise DataError(f"Class '{self.name}' has an empty split "
                            f"(train {self.train.shape[0]}, held-out {self.heldout.shape[0]})")
        if self.train.shape[1:] != self.heldout.shape[1:]:
            raise DataError(f"Class '{self.name}' splits disagree on sample shape: "
                            f"{self.train.shape[1:]} vs {self.heldout.shape[1:]}")

    @property
    def sample_shape(self):
        return self.train.shape[1:]
