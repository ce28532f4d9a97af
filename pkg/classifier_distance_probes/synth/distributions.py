"""Synthetic distribution samplers, the spec-string grammar and exact density oracles.

Spec strings read ``family:key=value,key=value``. Lists are separated by ``/`` and tuples
by ``x``, e.g. ``bernoulli:theta=0.3,shape=1x8x8,regions=0x0x4x8x0.9`` or
``spectral:shape=1x32x32,bands=0-7@1/8-12@0/13-16@1``.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.special import logsumexp, rel_entr
from scipy.stats import multivariate_normal

from classifier_distance_probes.numerics import RngStream, fft2, ifft2, ifftshift
from classifier_distance_probes.synth.data import DistributionSpec, PixelRegion, SpectralBand
from classifier_distance_probes.shared.errors import ContractError, SpecError, UnsupportedError

logger = logging.getLogger(__name__)

SPECTRAL_MEAN = 0.5
SPECTRAL_SCALE = 0.15
MAX_ENUMERATED_PIXELS = 20
FAMILY_ALIASES = {
    'bernoulli': 'bernoulli_pixels', 'bernoulli_pixels': 'bernoulli_pixels',
    'spectral': 'spectral_noise', 'spectral_noise': 'spectral_noise',
    'blob': 'blob_image', 'blob_image': 'blob_image',
    'point2d': 'point2d_mixture', 'point2d_mixture': 'point2d_mixture',
}


def _sample_mixture(weights, means, covs, n: int, rng: RngStream) -> Tuple[np.ndarray, np.ndarray]:
    labels = rng.choice(len(weights), size=n, p=weights)
    points = np.zeros((n, 2))
    for component in range(len(weights)):
        index = np.flatnonzero(labels == component)
        if index.size:
            points[index] = rng.multivariate_normal(means[component], covs[component], size=index.size)
    return points, labels


def _sample_bernoulli(spec: DistributionSpec, n: int, rng: RngStream) -> np.ndarray:
    theta = spec.theta_map()
    return (rng.random((n, *spec.sample_shape)) < theta[None]).astype(np.float64)


def sample_with_stats(spec: DistributionSpec, n: int, rng: RngStream) -> Tuple[np.ndarray, float]:
    """Samples plus the fraction of pixels clamped to [0,1] (0 for families that do not clamp).

    spectral_noise pixels are 0.5 + 0.15 times the filtered white noise with no re-standardization,
    so band-limited profiles have a marginal standard deviation below 0.15.
    """
    if n < 1:
        raise ContractError(f'Sample count must be at least 1, got {n}')
    if spec.family == 'bernoulli_pixels':
        return _sample_bernoulli(spec, n, rng), 0.0
    if spec.family == 'point2d_mixture':
        return _sample_mixture(spec.weights, spec.means, spec.covs, n, rng)[0], 0.0
    if spec.family == 'spectral_noise':
        white = rng.normal(size=(n, *spec.sample_shape))
        shaped = ifft2(fft2(white) * ifftshift(spec.sigma_profile()))
        raw = SPECTRAL_MEAN + SPECTRAL_SCALE * shaped
    else:
        raw = _render_blobs(spec, n, rng)
    clamped = np.clip(raw, 0.0, 1.0)
    clamp_rate = float(np.mean(clamped != raw))
    logger.debug(f"'{spec.name}': clamped {clamp_rate:.4%} of {raw.size} pixels")
    return clamped, clamp_rate


def _render_blobs(spec: DistributionSpec, n: int, rng: RngStream) -> np.ndarray:
    centres, _ = _sample_mixture(spec.weights, spec.means, spec.covs, n * spec.count, rng)
    centres = centres.reshape(n, spec.count, 2)
    rows = np.arange(spec.height)[None, None, :, None]
    cols = np.arange(spec.width)[None, None, None, :]
    distance = (rows - centres[:, :, 0, None, None]) ** 2 + (cols - centres[:, :, 1, None, None]) ** 2
    bumps = spec.amplitude * np.exp(-distance / (2.0 * spec.blob_width ** 2))
    image = spec.background + bumps.sum(axis=1)
    image = image + spec.pixel_noise * rng.normal(size=image.shape)
    return np.repeat(image[:, None], spec.channels, axis=1)


def sample(spec: DistributionSpec, n: int, rng: RngStream) -> np.ndarray:
    """n i.i.d. samples stacked as n×C×H×W (image families) or n×2 (point2d_mixture)."""
    return sample_with_stats(spec, n, rng)[0]


def sample_labeled(spec: DistributionSpec, n: int, rng: RngStream) -> Tuple[np.ndarray, np.ndarray]:
    """point2d_mixture samples with their mixture-component labels."""
    if spec.family != 'point2d_mixture':
        raise UnsupportedError(f"Component labels exist only for point2d_mixture, not '{spec.family}'")
    return _sample_mixture(spec.weights, spec.means, spec.covs, n, rng)


@dataclass(eq=False)
class DensityOracle:
    """Exact densities of a distribution: enumerated probabilities for small Bernoulli images,
    pointwise densities for point mixtures."""
    spec: DistributionSpec
    support: str
    probabilities: Optional[np.ndarray] = None

    def log_density(self, samples) -> np.ndarray:
        samples = np.asarray(samples, dtype=np.float64)
        if self.spec.family == 'bernoulli_pixels':
            theta = self.spec.theta_map().reshape(-1)
            flat = samples.reshape(samples.shape[0], -1)
            with np.errstate(divide='ignore'):
                on = np.where(flat > 0.5, np.log(theta), np.log1p(-theta))
            return on.sum(axis=1)
        if self.spec.family == 'point2d_mixture':
            terms = [math.log(w) + multivariate_normal(mean, cov, allow_singular=True).logpdf(samples)
                     for w, mean, cov in zip(self.spec.weights, self.spec.means, self.spec.covs) if w > 0]
            return logsumexp(np.stack([np.atleast_1d(t) for t in terms]), axis=0)
        raise UnsupportedError(f"No closed-form density for family '{self.spec.family}'")


def enumerate_bernoulli(theta) -> np.ndarray:
    """Probabilities of all 2^D binary images; pixel i (row-major) carries bit weight 2^i."""
    probabilities = np.ones(1)
    for value in np.asarray(theta, dtype=np.float64).reshape(-1):
        probabilities = np.kron([1.0 - value, value], probabilities)
    return probabilities


def oracle_for(spec: DistributionSpec) -> DensityOracle:
    if spec.family == 'bernoulli_pixels':
        pixels = int(np.prod(spec.sample_shape))
        if pixels <= MAX_ENUMERATED_PIXELS:
            return DensityOracle(spec, 'finite', enumerate_bernoulli(spec.theta_map()))
    return DensityOracle(spec, 'continuous')


def _check_finite_pair(p: DensityOracle, q: DensityOracle):
    if p.support != 'finite' or q.support != 'finite':
        raise ContractError('Exact divergences need two finite-support oracles')
    if p.probabilities.shape != q.probabilities.shape:
        raise ContractError(f'Oracle supports differ: {p.probabilities.size} vs {q.probabilities.size} outcomes')


def divergences_from_probabilities(p, q) -> Tuple[float, float]:
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    m = 0.5 * (p + q)
    tv = 0.5 * float(np.abs(p - q).sum())
    jsd = 0.5 * float(rel_entr(p, m).sum()) + 0.5 * float(rel_entr(q, m).sum())
    return tv, jsd


def exact_divergences(p: DensityOracle, q: DensityOracle) -> Tuple[float, float]:
    """(TV, JSD in nats) by enumeration; 0·log 0 = 0.

    Raises:
        ContractError: If either oracle is continuous or the supports differ
    """
    _check_finite_pair(p, q)
    return divergences_from_probabilities(p.probabilities, q.probabilities)


def bayes_accuracy(p: DensityOracle, q: DensityOracle) -> float:
    """½Σ max(p, q) under equal priors."""
    _check_finite_pair(p, q)
    return 0.5 * float(np.maximum(p.probabilities, q.probabilities).sum())


def monte_carlo_divergences(p: DensityOracle, q: DensityOracle, n: int, rng: RngStream) -> Tuple[float, float]:
    """(TV, JSD) estimated from n samples of each side using pointwise densities.

    TV = E_m[|p−q|/(p+q)] and JSD = ½E_p[log 2p/(p+q)] + ½E_q[log 2q/(p+q)].
    """
    from_p = sample(p.spec, n, rng)
    from_q = sample(q.spec, n, rng)
    tv_terms, jsd_terms = [], []
    for samples, own_is_p in ((from_p, True), (from_q, False)):
        log_p = p.log_density(samples)
        log_q = q.log_density(samples)
        log_sum = np.logaddexp(log_p, log_q)
        tv_terms.append(np.abs(np.tanh(0.5 * (log_p - log_q))))
        own = log_p if own_is_p else log_q
        jsd_terms.append(math.log(2.0) + own - log_sum)
    tv = 0.5 * (tv_terms[0].mean() + tv_terms[1].mean())
    jsd = 0.5 * (jsd_terms[0].mean() + jsd_terms[1].mean())
    return float(tv), float(np.clip(jsd, 0.0, math.log(2.0)))


def _shape(value: str):
    dims = [int(d) for d in value.split('x')]
    if len(dims) == 2:
        dims = [1] + dims
    if len(dims) != 3:
        raise SpecError(f"Shape '{value}' must be HxW or CxHxW")
    return {'channels': dims[0], 'height': dims[1], 'width': dims[2]}


def _floats(value: str):
    return [float(v) for v in value.split('/')]


def _vectors(value: str):
    return [[float(x) for x in item.split('x')] for item in value.split('/')]


def _matrices(value: str):
    matrices = []
    for item in value.split('/'):
        entries = [float(x) for x in item.split('x')]
        if len(entries) == 1:
            entries = [entries[0], 0.0, 0.0, entries[0]]
        if len(entries) != 4:
            raise SpecError(f"Covariance '{item}' must be a scalar or 4 entries axbxcxd")
        matrices.append([entries[0:2], entries[2:4]])
    return matrices


def _regions(value: str):
    regions = []
    for item in value.split('/'):
        parts = item.split('x')
        if len(parts) != 5:
            raise SpecError(f"Region '{item}' must be top x left x height x width x theta")
        regions.append(PixelRegion(int(parts[0]), int(parts[1]), int(parts[2]), int(parts[3]), float(parts[4])))
    return regions


def _bands(value: str):
    bands = []
    for item in value.split('/'):
        try:
            radii, sigma = item.split('@')
            low, high = radii.split('-')
            bands.append(SpectralBand(int(low), int(high), float(sigma)))
        except ValueError:
            raise SpecError(f"Band '{item}' must read LOW-HIGH@SIGMA")
    return bands


_KEYS = {
    'shape': ('shape', _shape),
    'theta': ('theta', float),
    'regions': ('regions', _regions),
    'bands': ('bands', _bands),
    'count': ('count', int),
    'amplitude': ('amplitude', float),
    'width': ('blob_width', float),
    'background': ('background', float),
    'noise': ('pixel_noise', float),
    'weights': ('weights', _floats),
    'means': ('means', _vectors),
    'covs': ('covs', _matrices),
}


def parse_distribution(name: str, text: str) -> DistributionSpec:
    """Parse a ``family:key=value,...`` spec string into a named DistributionSpec.

    Raises:
        SpecError: On an unknown family or key, or a malformed value
    """
    family_text, _, body = text.strip().partition(':')
    if family_text not in FAMILY_ALIASES:
        raise SpecError(f"Unknown distribution family '{family_text}'. "
                        f"Supported: bernoulli, spectral, blob, point2d")
    values = {}
    for item in filter(None, body.split(',')):
        key, separator, raw = item.partition('=')
        key = key.strip()
        if not separator or key not in _KEYS:
            raise SpecError(f"Unknown or malformed key '{item}' in distribution '{name}'. "
                            f"Supported keys: {', '.join(sorted(_KEYS))}")
        field_name, convert = _KEYS[key]
        try:
            converted = convert(raw.strip())
        except ValueError as e:
            raise SpecError(f"Bad value for '{key}' in distribution '{name}': {e}")
        if field_name == 'shape':
            values.update(converted)
        else:
            values[field_name] = converted
    return DistributionSpec(name=name, family=FAMILY_ALIASES[family_text], **values)
