from dataclasses import dataclass

from classifier_distance_probes.shared.models import JsonDataClass
from classifier_distance_probes.shared.errors import SpecError

MIX_MODES = ('replace', 'augment')
MAX_AUGMENT_ALPHA = 3.0


@dataclass
class MixSpec(JsonDataClass):
    """Replace a fraction α of each real class with generated samples, or add α·|real| generated samples."""
    alpha: float
    mode: str

    def __post_init__(self):
        if self.mode not in MIX_MODES:
            raise SpecError(f"Unsupported mix mode '{self.mode}'. Supported modes: {', '.join(MIX_MODES)}")
        if self.mode == 'replace' and not 0.0 <= self.alpha <= 1.0:
            raise SpecError(f'Replace mixing needs alpha in [0,1], got {self.alpha}')
        if self.mode == 'augment' and not 0.0 <= self.alpha <= MAX_AUGMENT_ALPHA:
            raise SpecError(f'Augment mixing needs alpha in [0,{MAX_AUGMENT_ALPHA:g}], got {self.alpha}')

    def generated_count(self, real_count: int) -> int:
        return int(round(self.alpha * real_count))

    def describe(self) -> str:
        if self.alpha == 0.0:
            return 'identity'
        return f'mix:{self.mode}:{self.alpha:g}'
