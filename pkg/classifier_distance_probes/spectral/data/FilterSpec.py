import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple

from classifier_distance_probes.shared.models import JsonDataClass
from classifier_distance_probes.shared.errors import SpecError

FILTER_KINDS = ('lowpass', 'highpass', 'bandpass')
MASK_SHAPES = ('rectangular', 'circular')


@dataclass
class FilterSpec(JsonDataClass):
    """An ideal frequency filter.

    Thresholds are either absolute frequency-index radii (``threshold`` or ``band_low``/``band_high``)
    or fractions of max(M,N)/2 (``fraction`` or ``band_low_fraction``/``band_high_fraction``), resolved
    against a grid by :meth:`resolve`.
    """
    kind: str
    shape: str = 'rectangular'
    threshold: Optional[int] = None
    band_low: Optional[int] = None
    band_high: Optional[int] = None
    fraction: Optional[float] = None
    band_low_fraction: Optional[float] = None
    band_high_fraction: Optional[float] = None

    def __post_init__(self):
        if self.kind not in FILTER_KINDS:
            raise SpecError(f"Unsupported filter kind '{self.kind}'. Supported kinds: {', '.join(FILTER_KINDS)}")
        if self.shape not in MASK_SHAPES:
            raise SpecError(f"Unsupported mask shape '{self.shape}'. Supported shapes: {', '.join(MASK_SHAPES)}")
        if self.kind == 'bandpass':
            absolute = self.band_low is not None and self.band_high is not None
            fractional = self.band_low_fraction is not None and self.band_high_fraction is not None
            if absolute == fractional:
                raise SpecError('A bandpass filter needs exactly one of (band_low, band_high) or fractional bounds')
            low, high = (self.band_low, self.band_high) if absolute else (self.band_low_fraction,
                                                                          self.band_high_fraction)
            if low < 0 or high < 0:
                raise SpecError(f'Band thresholds must be non-negative, got {low}-{high}')
            if low > high:
                raise SpecError(f'Band lower threshold {low} exceeds upper threshold {high}')
        else:
            if (self.threshold is None) == (self.fraction is None):
                raise SpecError(f'A {self.kind} filter needs exactly one of threshold or fraction')
            value = self.threshold if self.threshold is not None else self.fraction
            if value < 0:
                raise SpecError(f'Filter threshold must be non-negative, got {value}')

    @property
    def is_fractional(self) -> bool:
        return self.fraction is not None or self.band_low_fraction is not None

    def resolve(self, rows: int, cols: int) -> 'FilterSpec':
        """Absolute thresholds for an M×N grid: floor(fraction · max(M,N)/2). Absolute specs return self."""
        if not self.is_fractional:
            return self
        half = max(rows, cols) / 2
        if self.kind == 'bandpass':
            return replace(self, band_low=math.floor(self.band_low_fraction * half),
                           band_high=math.floor(self.band_high_fraction * half),
                           band_low_fraction=None, band_high_fraction=None)
        return replace(self, threshold=math.floor(self.fraction * half), fraction=None)

    def bounds(self) -> Tuple[int, int]:
        """(lowest, highest) passed radius for an absolute spec; highpass has no upper bound."""
        if self.kind == 'lowpass':
            return 0, self.threshold
        if self.kind == 'highpass':
            return self.threshold, -1
        return self.band_low, self.band_high

    def describe(self) -> str:
        shape = 'rect' if self.shape == 'rectangular' else 'circle'
        short = {'lowpass': 'low', 'highpass': 'high', 'bandpass': 'band'}[self.kind]
        if self.kind == 'bandpass':
            if self.band_low_fraction is not None:
                return f'{short}:frac:{self.band_low_fraction:g}-{self.band_high_fraction:g}@{shape}'
            return f'{short}:{self.band_low}-{self.band_high}@{shape}'
        if self.fraction is not None:
            return f'{short}:frac:{self.fraction:g}@{shape}'
        return f'{short}:{self.threshold}@{shape}'
