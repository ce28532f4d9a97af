from dataclasses import dataclass
from typing import Optional

from classifier_distance_probes.classifier.data import ModelSpec, Parameters, ProbeReport
from classifier_distance_probes.synth.data.NoiseSchedule import NoiseSchedule

REAL = 0
GENERATED = 1


@dataclass(eq=False)
class NoisedClassifier:
    """Timestep-conditioned real (class 0) vs generated (class 1) classifier over [z_t, emb(t)]."""
    spec: ModelSpec
    params: Parameters
    dimension: int
    embedding_dim: int
    schedule: NoiseSchedule
    report: Optional[ProbeReport] = None
