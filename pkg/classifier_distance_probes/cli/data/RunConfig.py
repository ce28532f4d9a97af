from dataclasses import dataclass, field
from typing import Dict, List, Optional

from classifier_distance_probes.probes.data import ExperimentSpec, DistributionSource
from classifier_distance_probes.shared.models import JsonDataClass


@dataclass
class RunConfig(JsonDataClass):
    """A parsed command line: the experiment to run plus where and how to run it.

    ``experiment`` is None for the ``synth`` command, which only materializes ``sources``.
    ``effective`` holds every resolved setting as text, echoed into the outputs.
    """
    command: str
    sources: List[DistributionSource]
    master_seed: int
    output_dir: str
    experiment: Optional[ExperimentSpec] = None
    jobs: int = 1
    log_level: str = 'INFO'
    image_format: str = 'ntf'
    config_overlay: Dict[str, str] = field(default_factory=dict)
    effective: Dict[str, str] = field(default_factory=dict)

    @property
    def run_dir_name(self) -> str:
        return f'{self.command}-seed{self.master_seed}'
