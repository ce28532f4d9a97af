"""Crops, flips, resizing and the training-time augmentation pipeline.

Array helpers (``*_pixels``) act on the last two axes, so they apply equally to a single
C×H×W image and to an N×C×H×W batch; the Image-level functions wrap them.
"""
import numpy as np

from classifier_distance_probes.imaging.data import Image, AugmentationSpec
from classifier_distance_probes.numerics import RngStream
from classifier_distance_probes.shared.errors import BoundsError, ContractError


def _check_crop(height: int, width: int, size: int):
    if size < 1 or size > min(height, width):
        raise BoundsError(f'Crop size {size} does not fit an image of {height}×{width}')


def center_crop_pixels(pixels: np.ndarray, size: int) -> np.ndarray:
    height, width = pixels.shape[-2:]
    _check_crop(height, width, size)
    top = (height - size) // 2
    left = (width - size) // 2
    return pixels[..., top:top + size, left:left + size]


def center_crop(image: Image, size: int) -> Image:
    """Crop the size×size window whose top-left corner is (⌊(H−s)/2⌋, ⌊(W−s)/2⌋).

    Raises:
        BoundsError: If size exceeds min(H, W)
    """
    return image.with_pixels(center_crop_pixels(image.pixels, size))


def random_crop_pixels(pixels: np.ndarray, size: int, rng: RngStream) -> np.ndarray:
    """Random crop of every image in an N×C×H×W batch, one uniform corner per image."""
    height, width = pixels.shape[-2:]
    _check_crop(height, width, size)
    count = pixels.shape[0]
    tops = rng.integers(0, height - size + 1, size=count)
    lefts = rng.integers(0, width - size + 1, size=count)
    rows = tops[:, None] + np.arange(size)[None, :]
    cols = lefts[:, None] + np.arange(size)[None, :]
    index = np.arange(count)[:, None, None, None]
    channel = np.arange(pixels.shape[1])[None, :, None, None]
    return pixels[index, channel, rows[:, None, :, None], cols[:, None, None, :]]


def random_crop(image: Image, size: int, rng: RngStream) -> Image:
    """Crop a size×size window with its corner drawn uniformly from the (H−s+1)×(W−s+1) grid."""
    return image.with_pixels(random_crop_pixels(image.pixels[None], size, rng)[0])


def horizontal_flip(image: Image) -> Image:
    return image.with_pixels(image.pixels[..., ::-1])


def pad_pixels(pixels: np.ndarray, pad: int) -> np.ndarray:
    if pad == 0:
        return pixels
    widths = [(0, 0)] * (pixels.ndim - 2) + [(pad, pad), (pad, pad)]
    return np.pad(pixels, widths, mode='constant', constant_values=0.0)


def pad(image: Image, pad_width: int) -> Image:
    return image.with_pixels(pad_pixels(image.pixels, pad_width))


def _bilinear_axis(in_size: int, out_size: int):
    # half-pixel centres (corner-aligned=false), clamped at the borders
    scale = in_size / out_size
    source = (np.arange(out_size) + 0.5) * scale - 0.5
    source = np.clip(source, 0.0, in_size - 1)
    lower = np.floor(source).astype(int)
    upper = np.minimum(lower + 1, in_size - 1)
    weight = source - lower
    return lower, upper, weight


def resize_bilinear_pixels(pixels: np.ndarray, new_height: int, new_width: int) -> np.ndarray:
    if new_height < 1 or new_width < 1:
        raise ContractError(f'Resize target must be at least 1×1, got {new_height}×{new_width}')
    height, width = pixels.shape[-2:]
    top, bottom, row_weight = _bilinear_axis(height, new_height)
    left, right, col_weight = _bilinear_axis(width, new_width)
    rows = (pixels[..., top, :] * (1.0 - row_weight)[:, None]
            + pixels[..., bottom, :] * row_weight[:, None])
    return rows[..., left] * (1.0 - col_weight) + rows[..., right] * col_weight


def resize_bilinear(image: Image, new_height: int, new_width: int) -> Image:
    """Bilinear resize with half-pixel sampling; constant images stay constant."""
    resized = resize_bilinear_pixels(image.pixels, new_height, new_width)
    if image.clamped:
        resized = np.clip(resized, 0.0, 1.0)
    return image.with_pixels(resized)


def resize_shorter_side(image: Image, size: int) -> Image:
    """Resize so the shorter side equals ``size``, preserving the aspect ratio."""
    if image.height <= image.width:
        new_height, new_width = size, max(1, int(round(image.width * size / image.height)))
    else:
        new_height, new_width = max(1, int(round(image.height * size / image.width))), size
    return resize_bilinear(image, new_height, new_width)


def augment_batch(pixels: np.ndarray, spec: AugmentationSpec, rng: RngStream) -> np.ndarray:
    """Apply pad + random crop (if configured) then per-image horizontal flips to an N×C×H×W batch.

    Raises:
        BoundsError: If the crop size exceeds the padded extent
    """
    out = pixels
    if spec.crop_size is not None:
        padded = pad_pixels(out, spec.crop_pad or 0)
        out = random_crop_pixels(padded, spec.crop_size, rng)
    if spec.horizontal_flip_prob > 0.0:
        flips = rng.random(out.shape[0]) < spec.horizontal_flip_prob
        if np.any(flips):
            out = out.copy()
            out[flips] = out[flips][..., ::-1]
    return out


def augment(image: Image, spec: AugmentationSpec, rng: RngStream) -> Image:
    """Single-image form of :func:`augment_batch`; deterministic given the stream state."""
    return image.with_pixels(augment_batch(image.pixels[None], spec, rng)[0])
