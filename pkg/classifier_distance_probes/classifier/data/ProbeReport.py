from dataclasses import dataclass, field
from typing import List, Optional

from classifier_distance_probes.classifier.data.DivergenceEstimate import DivergenceEstimate
from classifier_distance_probes.shared.models import JsonDataClass


@dataclass
class ProbeReport(JsonDataClass):
    """Held-out result of one trained probe. Losses are in nats; confusion rows are true classes."""
    class_names: List[str]
    train_counts: List[int]
    heldout_counts: List[int]
    accuracy: float
    cross_entropy_nats: float
    confusion: List[List[int]]
    preprocessing: str
    model: str
    seed: int
    stream_id: int
    loss_curve: List[float] = field(default_factory=list)
    loss_monotone: bool = True
    divergence: Optional[DivergenceEstimate] = None
    wall_clock_seconds: float = 0.0
