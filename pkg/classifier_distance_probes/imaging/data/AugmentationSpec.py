from dataclasses import dataclass
from typing import Optional
from classifier_distance_probes.shared.models import JsonDataClass
from classifier_distance_probes.shared.errors import SpecError


@dataclass
class AugmentationSpec(JsonDataClass):
    """Zero-pad then random-crop (when crop_size is set), then horizontal flip."""
    crop_pad: Optional[int] = None
    crop_size: Optional[int] = None
    horizontal_flip_prob: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.horizontal_flip_prob <= 1.0:
            raise SpecError(f'Flip probability must be in [0,1], got {self.horizontal_flip_prob}')
        if self.crop_pad is not None and self.crop_pad < 0:
            raise SpecError(f'Crop padding must be non-negative, got {self.crop_pad}')
        if self.crop_size is not None and self.crop_size < 1:
            raise SpecError(f'Crop size must be at least 1, got {self.crop_size}')

    @property
    def is_identity(self) -> bool:
        return self.crop_size is None and self.horizontal_flip_prob == 0.0

    def describe(self) -> str:
        parts = []
        if self.crop_size is not None:
            parts.append(f'pad{self.crop_pad or 0}-crop{self.crop_size}')
        if self.horizontal_flip_prob > 0:
            parts.append(f'hflip{self.horizontal_flip_prob:g}')
        return '+'.join(parts) if parts else 'none'
