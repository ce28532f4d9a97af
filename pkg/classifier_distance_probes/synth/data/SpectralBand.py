from dataclasses import dataclass

from classifier_distance_probes.shared.models import JsonDataClass
from classifier_distance_probes.shared.errors import SpecError


@dataclass
class SpectralBand(JsonDataClass):
    """Amplitude ``sigma`` for every integer L∞ frequency radius in [r_low, r_high]."""
    r_low: int
    r_high: int
    sigma: float

    def __post_init__(self):
        if self.r_low < 0 or self.r_low > self.r_high:
            raise SpecError(f'Band radii must satisfy 0 <= r_low <= r_high, got {self.r_low}-{self.r_high}')
        if self.sigma < 0:
            raise SpecError(f'Band sigma must be non-negative, got {self.sigma}')

    def describe(self) -> str:
        return f'{self.r_low}-{self.r_high}@{self.sigma:g}'
