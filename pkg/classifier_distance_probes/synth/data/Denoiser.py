from dataclasses import dataclass
from typing import Tuple

from classifier_distance_probes.classifier.data import ModelSpec, Parameters
from classifier_distance_probes.synth.data.NoiseSchedule import NoiseSchedule


@dataclass(eq=False)
class Denoiser:
    """An mlp ε-predictor over [flattened z_t, sinusoidal embedding of t]; output width = sample size."""
    spec: ModelSpec
    params: Parameters
    sample_shape: Tuple[int, ...]
    embedding_dim: int
    schedule: NoiseSchedule

    @property
    def dimension(self) -> int:
        return self.spec.num_classes

    def with_params(self, params: Parameters) -> 'Denoiser':
        return Denoiser(self.spec, params, self.sample_shape, self.embedding_dim, self.schedule)
