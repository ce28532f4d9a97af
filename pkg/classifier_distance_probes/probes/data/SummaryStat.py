from dataclasses import dataclass

from classifier_distance_probes.shared.models import JsonDataClass


@dataclass
class SummaryStat(JsonDataClass):
    label: str
    abscissa: float
    metric: str
    mean: float
    sd: float
    count: int
