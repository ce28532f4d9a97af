"""Ideal frequency-domain filters over the centred spectrum.

Radii are measured from the exact real centre (M/2, N/2): the L∞ distance for rectangular
masks and the Euclidean distance for circular ones. Masks pass lowpass r ≤ t, highpass r > t
and bandpass t_low ≤ r ≤ t_high, so bandpass(0, t) equals lowpass(t).
"""
import logging
import math
import re
from functools import lru_cache

import numpy as np

from classifier_distance_probes.imaging import Image
from classifier_distance_probes.numerics import fft2, ifft2, fftshift, ifftshift
from classifier_distance_probes.spectral.data import FilterSpec, FrequencyMask, MASK_SHAPES
from classifier_distance_probes.shared.errors import SpecError

logger = logging.getLogger(__name__)

SHAPE_ALIASES = {'rect': 'rectangular', 'rectangular': 'rectangular', 'circle': 'circular', 'circular': 'circular'}
KIND_ALIASES = {'low': 'lowpass', 'high': 'highpass', 'band': 'bandpass'}
_FILTER_PATTERN = re.compile(r'^(low|high|band):(frac:)?([0-9.]+)(?:-([0-9.]+))?$')


def radius(u: float, v: float, rows: int, cols: int, shape: str = 'rectangular') -> float:
    du = abs(u - rows / 2)
    dv = abs(v - cols / 2)
    if shape == 'rectangular':
        return max(du, dv)
    if shape == 'circular':
        return math.hypot(du, dv)
    raise SpecError(f"Unsupported mask shape '{shape}'. Supported shapes: {', '.join(MASK_SHAPES)}")


def radius_grid(rows: int, cols: int, shape: str = 'rectangular') -> np.ndarray:
    du = np.abs(np.arange(rows) - rows / 2)[:, None]
    dv = np.abs(np.arange(cols) - cols / 2)[None, :]
    if shape == 'rectangular':
        return np.maximum(du, dv)
    if shape == 'circular':
        return np.hypot(du, dv)
    raise SpecError(f"Unsupported mask shape '{shape}'. Supported shapes: {', '.join(MASK_SHAPES)}")


def max_radius(rows: int, cols: int, shape: str = 'rectangular') -> float:
    return float(radius_grid(rows, cols, shape).max())


@lru_cache(maxsize=256)
def _mask_values(kind: str, shape: str, low: int, high: int, rows: int, cols: int) -> np.ndarray:
    r = radius_grid(rows, cols, shape)
    if kind == 'lowpass':
        values = r <= high
    elif kind == 'highpass':
        values = r > low
    else:
        values = (r >= low) & (r <= high)
    values = values.astype(np.float64)
    values.setflags(write=False)
    return values


def make_mask(spec: FilterSpec, rows: int, cols: int) -> FrequencyMask:
    """Realize a filter against an M×N grid.

    Raises:
        SpecError: If a realized threshold exceeds ceil(max_radius) of the grid
    """
    resolved = spec.resolve(rows, cols)
    low, high = resolved.bounds()
    limit = math.ceil(max_radius(rows, cols, resolved.shape))
    for value in (low, high):
        if value > limit:
            raise SpecError(f'Threshold {value} exceeds the largest radius {limit} of a {rows}×{cols} '
                            f'{resolved.shape} grid')
    values = _mask_values(resolved.kind, resolved.shape, low, high, rows, cols)
    return FrequencyMask(rows=rows, cols=cols, values=values, description=spec.describe())


def filter_batch(pixels: np.ndarray, spec: FilterSpec) -> np.ndarray:
    """Filter the last two axes of ``pixels``: fft2 → fftshift → mask → ifftshift → ifft2."""
    rows, cols = pixels.shape[-2:]
    mask = make_mask(spec, rows, cols)
    spectrum = fftshift(fft2(pixels)) * mask.values
    return ifft2(ifftshift(spectrum))


def apply_filter(image: Image, spec: FilterSpec) -> Image:
    """Filter every channel of an image; the result is unclamped.

    Raises:
        DimensionError: If H or W is not a power of two
        NumericConsistencyError: If the inverse transform leaves an imaginary residue above 1e-6
    """
    return image.with_pixels(filter_batch(image.pixels, spec), clamped=False)


def band_energy(image: Image, spec: FilterSpec) -> float:
    """Spatial energy Σx² of the filtered image."""
    return float(np.sum(filter_batch(image.pixels, spec) ** 2))


def parse_filter(text: str, shape: str = 'rectangular') -> FilterSpec:
    """Parse ``low:10 | high:30 | band:10-30 | low:frac:0.04 | band:frac:0.1-0.2``.

    Raises:
        SpecError: If the text does not follow the grammar
    """
    if shape not in SHAPE_ALIASES:
        raise SpecError(f"Unsupported mask shape '{shape}'. Supported shapes: rect, circle")
    match = _FILTER_PATTERN.match(text.strip())
    if match is None:
        raise SpecError(f"Could not parse filter '{text}'. Expected low:T, high:T, band:A-B or low:frac:F")
    short, fractional, first, second = match.groups()
    kind = KIND_ALIASES[short]
    mask_shape = SHAPE_ALIASES[shape]
    if (kind == 'bandpass') != (second is not None):
        raise SpecError(f"Filter '{text}': band filters take A-B, low/high filters take a single threshold")

    def number(raw: str):
        if fractional:
            return float(raw)
        if not raw.isdigit():
            raise SpecError(f"Filter '{text}': absolute thresholds must be integers, got '{raw}'")
        return int(raw)

    if kind == 'bandpass':
        if fractional:
            return FilterSpec(kind=kind, shape=mask_shape, band_low_fraction=number(first),
                              band_high_fraction=number(second))
        return FilterSpec(kind=kind, shape=mask_shape, band_low=number(first), band_high=number(second))
    if fractional:
        return FilterSpec(kind=kind, shape=mask_shape, fraction=number(first))
    return FilterSpec(kind=kind, shape=mask_shape, threshold=number(first))
