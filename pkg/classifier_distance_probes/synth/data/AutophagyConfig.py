from dataclasses import dataclass, field

from classifier_distance_probes.synth.data.DenoiserConfig import DenoiserConfig
from classifier_distance_probes.shared.models import JsonDataClass
from classifier_distance_probes.shared.errors import SpecError

AUTOPHAGY_POLICIES = ('replace', 'augment')
GENERATOR_KINDS = ('gaussian_fit', 'denoiser')


@dataclass
class AutophagyConfig(JsonDataClass):
    """Self-consuming retraining loop settings; generations are numbered 0…G−1."""
    generations: int = 6
    samples_per_generation: int = 100
    policy: str = 'replace'
    real_fraction: float = 0.5
    generator: str = 'gaussian_fit'
    eval_samples: int = 4000
    probe_samples: int = 100
    probe_heldout: int = 500
    denoiser: DenoiserConfig = field(default_factory=DenoiserConfig)

    def __post_init__(self):
        if self.generations < 1:
            raise SpecError(f'Autophagy needs at least one generation, got {self.generations}')
        if self.policy not in AUTOPHAGY_POLICIES:
            raise SpecError(f"Unsupported policy '{self.policy}'. Supported policies: {', '.join(AUTOPHAGY_POLICIES)}")
        if not 0.0 < self.real_fraction <= 1.0:
            raise SpecError(f'Real fraction must be in (0,1], got {self.real_fraction}')
        if self.generator not in GENERATOR_KINDS:
            raise SpecError(f"Unsupported generator '{self.generator}'. Supported: {', '.join(GENERATOR_KINDS)}")
        if min(self.samples_per_generation, self.eval_samples, self.probe_samples, self.probe_heldout) < 2:
            raise SpecError('Autophagy sample counts must be at least 2')

    def describe(self) -> str:
        if self.policy == 'augment':
            return f'augment(rho={self.real_fraction:g})'
        return 'replace'
