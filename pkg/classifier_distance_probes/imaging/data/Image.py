from dataclasses import dataclass

import numpy as np

from classifier_distance_probes.shared.errors import ContractError

CLAMP_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class Image:
    """A C×H×W image of float64 intensities.

    Clamped images hold values in [0,1]; filtered images may leave that range and are created
    with ``clamped=False``.
    """
    pixels: np.ndarray
    clamped: bool = True

    def __post_init__(self):
        pixels = np.array(self.pixels, dtype=np.float64, copy=True)
        if pixels.ndim == 2:
            pixels = pixels[None, :, :]
        if pixels.ndim != 3 or pixels.shape[0] not in (1, 3):
            raise ContractError(f'Image pixels must be C×H×W with C in (1, 3), got shape {pixels.shape}')
        if pixels.shape[1] < 1 or pixels.shape[2] < 1:
            raise ContractError(f'Image extents must be positive, got shape {pixels.shape}')
        if not np.all(np.isfinite(pixels)):
            raise ContractError('Image pixels must be finite')
        if self.clamped and (pixels.min() < -CLAMP_TOLERANCE or pixels.max() > 1 + CLAMP_TOLERANCE):
            raise ContractError(f'Clamped image has values outside [0,1]: [{pixels.min():.4g}, {pixels.max():.4g}]')
        pixels.setflags(write=False)
        object.__setattr__(self, 'pixels', pixels)

    @property
    def channels(self) -> int:
        return self.pixels.shape[0]

    @property
    def height(self) -> int:
        return self.pixels.shape[1]

    @property
    def width(self) -> int:
        return self.pixels.shape[2]

    @property
    def shape(self):
        return self.pixels.shape

    def with_pixels(self, pixels, clamped: bool = None) -> 'Image':
        return Image(pixels, self.clamped if clamped is None else clamped)
