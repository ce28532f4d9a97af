from dataclasses import dataclass

from classifier_distance_probes.shared.models import JsonDataClass
from classifier_distance_probes.shared.errors import SpecError


@dataclass
class DenoiserConfig(JsonDataClass):
    hidden_width: int = 128
    embedding_dim: int = 16
    learning_rate: float = 0.01
    momentum: float = 0.9
    batch_size: int = 128
    iterations: int = 3000

    def __post_init__(self):
        if self.hidden_width < 1 or self.batch_size < 1 or self.iterations < 1:
            raise SpecError('Denoiser hidden width, batch size and iterations must be positive')
        if self.embedding_dim < 2 or self.embedding_dim % 2:
            raise SpecError(f'Timestep embedding dimension must be an even number >= 2, got {self.embedding_dim}')
        if self.learning_rate <= 0 or not 0.0 <= self.momentum < 1.0:
            raise SpecError(f'Invalid optimizer settings lr={self.learning_rate}, momentum={self.momentum}')
