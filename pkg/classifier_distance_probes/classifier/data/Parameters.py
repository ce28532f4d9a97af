from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from classifier_distance_probes.classifier.data.ModelSpec import ModelSpec
from classifier_distance_probes.classifier.data.Normalizer import Normalizer
from classifier_distance_probes.shared.errors import ContractError


@dataclass(eq=False)
class Parameters:
    """A flat float64 vector with named views, plus the input normalizer fitted alongside it."""
    vector: np.ndarray
    layout: Dict[str, Tuple[int, Tuple[int, ...]]]
    normalizer: Normalizer = field(default_factory=Normalizer)

    @classmethod
    def zeros(cls, spec: ModelSpec) -> 'Parameters':
        layout = {}
        offset = 0
        for name, shape, _ in spec.layer_layout():
            layout[name] = (offset, tuple(shape))
            offset += int(np.prod(shape))
        return cls(vector=np.zeros(offset), layout=layout)

    def __post_init__(self):
        self.vector = np.asarray(self.vector, dtype=np.float64)
        expected = sum(int(np.prod(shape)) for _, shape in self.layout.values())
        if self.vector.shape != (expected,):
            raise ContractError(f'Parameter vector has shape {self.vector.shape}, layout needs ({expected},)')

    def __getitem__(self, name: str) -> np.ndarray:
        offset, shape = self.layout[name]
        return self.vector[offset:offset + int(np.prod(shape))].reshape(shape)

    def __len__(self) -> int:
        return self.vector.size

    def with_vector(self, vector: np.ndarray) -> 'Parameters':
        return Parameters(vector=np.array(vector, dtype=np.float64), layout=self.layout, normalizer=self.normalizer)

    def with_normalizer(self, normalizer: Normalizer) -> 'Parameters':
        return Parameters(vector=self.vector.copy(), layout=self.layout, normalizer=normalizer)

    def matches(self, spec: ModelSpec) -> bool:
        return len(self) == spec.parameter_count
