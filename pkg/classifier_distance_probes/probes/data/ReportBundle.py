from dataclasses import dataclass, field
from typing import Dict, List

from classifier_distance_probes.probes.data.ExperimentSpec import ExperimentSpec
from classifier_distance_probes.probes.data.CurvePoint import CurvePoint
from classifier_distance_probes.probes.data.SummaryStat import SummaryStat
from classifier_distance_probes.synth.data import GenerationRecord
from classifier_distance_probes.shared.models import JsonDataClass


@dataclass
class ReportBundle(JsonDataClass):
    experiment: ExperimentSpec
    points: List[CurvePoint]
    summary: List[SummaryStat] = field(default_factory=list)
    oracle: Dict[str, float] = field(default_factory=dict)
    records: List[GenerationRecord] = field(default_factory=list)
    flags: List[str] = field(default_factory=list)
    effective_config: Dict[str, str] = field(default_factory=dict)
    wall_clock_seconds: float = 0.0

    def series(self, label: str) -> List[CurvePoint]:
        return [point for point in self.points if point.label == label]

    def mean_of(self, label: str, abscissa: float, metric: str = 'accuracy') -> float:
        for stat in self.summary:
            if stat.label == label and stat.abscissa == abscissa and stat.metric == metric:
                return stat.mean
        raise KeyError(f'No summary for {label}@{abscissa} ({metric})')
