from dataclasses import dataclass

from classifier_distance_probes.shared.models import JsonDataClass


@dataclass
class DivergenceEstimate(JsonDataClass):
    """Classifier-limited lower approximations of TV (from accuracy) and JSD (from cross-entropy)."""
    tv_lower: float
    jsd_estimate: float
    source: str = 'accuracy+cross_entropy'
    binary_cross_entropy_nats: float = 0.0
    classifier_limited: bool = True
