from dataclasses import dataclass
from classifier_distance_probes.shared.models import JsonDataClass
from classifier_distance_probes.shared.errors import SpecError

CROP_MODES = ('center', 'random')


@dataclass
class CropSpec(JsonDataClass):
    mode: str
    size: int

    def __post_init__(self):
        if self.mode not in CROP_MODES:
            raise SpecError(f"Unsupported crop mode '{self.mode}'. Supported modes: {', '.join(CROP_MODES)}")
        if self.size < 1:
            raise SpecError(f'Crop size must be at least 1, got {self.size}')

    def describe(self) -> str:
        return f'{self.mode}_crop:{self.size}'
