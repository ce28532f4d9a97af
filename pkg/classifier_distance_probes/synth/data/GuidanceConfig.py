from dataclasses import dataclass

from classifier_distance_probes.synth.data.NoisedClassifier import NoisedClassifier
from classifier_distance_probes.shared.errors import SpecError


@dataclass(eq=False)
class GuidanceConfig:
    """Classifier guidance toward the real class; scale 0 reproduces unguided sampling exactly."""
    scale: float
    classifier: NoisedClassifier

    def __post_init__(self):
        if self.scale < 0:
            raise SpecError(f'Guidance scale must be non-negative, got {self.scale}')
