from dataclasses import dataclass, field
from typing import List, Optional

from classifier_distance_probes.classifier.data import ProbeReport
from classifier_distance_probes.shared.models import JsonDataClass


@dataclass
class GenerationRecord(JsonDataClass):
    generation: int
    frechet_distance: float
    probe_accuracy: float
    training_size: int
    real_in_training: int
    regularized: bool = False
    generator_weights: List[float] = field(default_factory=list)
    generator_means: List[List[float]] = field(default_factory=list)
    generator_covs: List[List[List[float]]] = field(default_factory=list)
    probe: Optional[ProbeReport] = None
