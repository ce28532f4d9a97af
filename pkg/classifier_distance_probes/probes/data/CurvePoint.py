from dataclasses import dataclass, field
from typing import Dict, Optional

from classifier_distance_probes.classifier.data import ProbeReport
from classifier_distance_probes.shared.models import JsonDataClass


@dataclass
class CurvePoint(JsonDataClass):
    """One trial at one ladder position; ``label`` separates series sharing an abscissa."""
    abscissa: float
    label: str
    trial: int
    seed: int
    stream_id: int
    report: Optional[ProbeReport] = None
    extras: Dict[str, float] = field(default_factory=dict)

    @property
    def accuracy(self) -> Optional[float]:
        return None if self.report is None else self.report.accuracy
