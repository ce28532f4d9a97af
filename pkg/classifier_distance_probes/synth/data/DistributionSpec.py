from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from classifier_distance_probes.synth.data.PixelRegion import PixelRegion
from classifier_distance_probes.synth.data.SpectralBand import SpectralBand
from classifier_distance_probes.shared.models import JsonDataClass
from classifier_distance_probes.shared.errors import SpecError

DISTRIBUTION_FAMILIES = ('bernoulli_pixels', 'spectral_noise', 'blob_image', 'point2d_mixture')
WEIGHT_TOLERANCE = 1e-12


def _check_mixture(weights, means, covs, label: str):
    if len(weights) == 0 or not (len(weights) == len(means) == len(covs)):
        raise SpecError(f'{label} needs equally many weights, means and covariances, got '
                        f'{len(weights)}, {len(means)}, {len(covs)}')
    if any(w < 0 for w in weights) or abs(sum(weights) - 1.0) > WEIGHT_TOLERANCE:
        raise SpecError(f'{label} weights must be non-negative and sum to 1, got {weights}')
    for mean, cov in zip(means, covs):
        matrix = np.asarray(cov, dtype=np.float64)
        if len(mean) != 2 or matrix.shape != (2, 2):
            raise SpecError(f'{label} components must be 2-D, got mean {mean} and covariance {cov}')
        if not np.allclose(matrix, matrix.T) or np.linalg.eigvalsh(matrix).min() < -1e-10:
            raise SpecError(f'{label} covariance {cov} is not symmetric positive semi-definite')


@dataclass
class DistributionSpec(JsonDataClass):
    """A named synthetic distribution.

    Image families (bernoulli_pixels, spectral_noise, blob_image) produce C×H×W samples;
    point2d_mixture produces 2-vectors. Fields that do not belong to the family are ignored.
    """
    name: str
    family: str
    channels: int = 1
    height: int = 8
    width: int = 8
    theta: float = 0.5
    regions: List[PixelRegion] = field(default_factory=list)
    bands: List[SpectralBand] = field(default_factory=list)
    count: int = 1
    amplitude: float = 0.6
    blob_width: float = 1.0
    background: float = 0.0
    pixel_noise: float = 0.05
    weights: List[float] = field(default_factory=list)
    means: List[List[float]] = field(default_factory=list)
    covs: List[List[List[float]]] = field(default_factory=list)

    def __post_init__(self):
        if self.family not in DISTRIBUTION_FAMILIES:
            raise SpecError(f"Unsupported distribution family '{self.family}'. "
                            f"Supported families: {', '.join(DISTRIBUTION_FAMILIES)}")
        if self.family == 'point2d_mixture':
            _check_mixture(self.weights, self.means, self.covs, f"Distribution '{self.name}'")
            return
        if self.channels not in (1, 3) or self.height < 1 or self.width < 1:
            raise SpecError(f"Distribution '{self.name}' has invalid shape "
                            f"{self.channels}x{self.height}x{self.width}")
        if self.family == 'bernoulli_pixels':
            if not 0.0 <= self.theta <= 1.0:
                raise SpecError(f'theta must be in [0,1], got {self.theta}')
            for region in self.regions:
                if region.top + region.height > self.height or region.left + region.width > self.width:
                    raise SpecError(f'Region {region.describe()} exceeds the {self.height}x{self.width} image')
        elif self.family == 'spectral_noise':
            if not self.bands:
                raise SpecError(f"spectral_noise distribution '{self.name}' needs at least one band")
        elif self.family == 'blob_image':
            if self.count < 1 or self.blob_width <= 0 or self.pixel_noise < 0:
                raise SpecError(f"blob_image distribution '{self.name}' needs count >= 1, blob_width > 0 and "
                                f"pixel_noise >= 0")
            _check_mixture(self.weights, self.means, self.covs, f"Distribution '{self.name}' blob positions")

    @property
    def is_image(self) -> bool:
        return self.family != 'point2d_mixture'

    @property
    def sample_shape(self) -> Tuple[int, ...]:
        if self.is_image:
            return self.channels, self.height, self.width
        return (2,)

    def theta_map(self) -> np.ndarray:
        """Per-pixel on-probabilities of a bernoulli_pixels spec, C×H×W."""
        values = np.full(self.sample_shape, float(self.theta))
        for region in self.regions:
            values[:, region.top:region.top + region.height, region.left:region.left + region.width] = region.theta
        return values

    def sigma_profile(self) -> np.ndarray:
        """Centred H×W amplitude map of a spectral_noise spec over the integer L∞ radius."""
        du = np.abs(np.arange(self.height) - self.height / 2)[:, None]
        dv = np.abs(np.arange(self.width) - self.width / 2)[None, :]
        radii = np.maximum(du, dv)
        profile = np.zeros((self.height, self.width))
        for band in self.bands:
            profile[(radii >= band.r_low) & (radii <= band.r_high)] = band.sigma
        return profile
