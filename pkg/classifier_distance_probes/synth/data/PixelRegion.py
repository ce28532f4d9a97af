from dataclasses import dataclass

from classifier_distance_probes.shared.models import JsonDataClass
from classifier_distance_probes.shared.errors import SpecError


@dataclass
class PixelRegion(JsonDataClass):
    """A rectangle of a bernoulli_pixels image whose on-probability is ``theta`` instead of the global one."""
    top: int
    left: int
    height: int
    width: int
    theta: float

    def __post_init__(self):
        if min(self.top, self.left) < 0 or min(self.height, self.width) < 1:
            raise SpecError(f'Region {self.describe()} must have a non-negative corner and positive extents')
        if not 0.0 <= self.theta <= 1.0:
            raise SpecError(f'Region theta must be in [0,1], got {self.theta}')

    def describe(self) -> str:
        return f'{self.top}x{self.left}x{self.height}x{self.width}x{self.theta:g}'
