"""Image file I/O: 8-bit PNG through Pillow and the NTF raw-tensor format.

NTF layout: magic ``NTF1``, u32 little-endian rank, rank×u32 dims, then the float32
little-endian payload in row-major order.
"""
import logging
import os
from typing import Union

import numpy as np
from PIL import Image as PilImage, UnidentifiedImageError

from classifier_distance_probes.imaging.data import Image
from classifier_distance_probes.shared.errors import FormatError, ImageIOError

logger = logging.getLogger(__name__)

NTF_MAGIC = b'NTF1'
SUPPORTED_PNG_MODES = ('L', 'RGB')
PathLike = Union[str, os.PathLike]


def _format_of(path: PathLike) -> str:
    suffix = os.path.splitext(str(path))[1].lower()
    if suffix not in ('.png', '.ntf'):
        raise FormatError(f"Unsupported image file extension '{suffix}' for {path}. Supported: .png, .ntf")
    return suffix[1:]


def load_image(path: PathLike) -> Image:
    """Load a PNG (8-bit L or RGB, v/255) or NTF file.

    Raises:
        ImageIOError: If the file is missing or cannot be decoded
        FormatError: If the PNG mode or NTF header is not supported
    """
    if _format_of(path) == 'ntf':
        return read_ntf(path)
    try:
        with PilImage.open(path) as handle:
            mode = handle.mode
            if mode not in SUPPORTED_PNG_MODES:
                raise FormatError(f"Unsupported PNG mode '{mode}' in {path}. Supported modes: "
                                  f"{', '.join(SUPPORTED_PNG_MODES)}")
            raw = np.asarray(handle, dtype=np.uint8)
    except (UnidentifiedImageError, OSError) as e:
        raise ImageIOError(f'Could not read image {path}: {e}', path=str(path)) from e
    pixels = raw.astype(np.float64) / 255.0
    if pixels.ndim == 3:
        pixels = np.transpose(pixels, (2, 0, 1))
    return Image(pixels)


def save_image(image: Image, path: PathLike):
    """Write an image; PNG stores round(v·255) after clamping, NTF stores float32."""
    if _format_of(path) == 'ntf':
        write_ntf(image.pixels, path)
        return
    quantized = np.clip(np.round(image.pixels * 255.0), 0, 255).astype(np.uint8)
    try:
        if image.channels == 1:
            PilImage.fromarray(quantized[0]).save(path, format='PNG')
        else:
            PilImage.fromarray(np.ascontiguousarray(np.transpose(quantized, (1, 2, 0)))).save(path, format='PNG')
    except OSError as e:
        raise ImageIOError(f'Could not write image {path}: {e}', path=str(path)) from e


def write_ntf(tensor: np.ndarray, path: PathLike):
    array = np.ascontiguousarray(tensor, dtype='<f4')
    header = NTF_MAGIC + np.asarray([array.ndim, *array.shape], dtype='<u4').tobytes()
    try:
        with open(path, 'wb') as handle:
            handle.write(header)
            handle.write(array.tobytes(order='C'))
    except OSError as e:
        raise ImageIOError(f'Could not write tensor {path}: {e}', path=str(path)) from e


def read_ntf_tensor(path: PathLike) -> np.ndarray:
    """Read an NTF file into a float64 array of its recorded shape."""
    try:
        with open(path, 'rb') as handle:
            payload = handle.read()
    except OSError as e:
        raise ImageIOError(f'Could not read tensor {path}: {e}', path=str(path)) from e
    if payload[:4] != NTF_MAGIC or len(payload) < 8:
        raise FormatError(f'{path} is not an NTF file (bad magic {payload[:4]!r})')
    rank = int(np.frombuffer(payload, dtype='<u4', count=1, offset=4)[0])
    header_size = 8 + 4 * rank
    if len(payload) < header_size:
        raise FormatError(f'{path} has a truncated NTF header (rank {rank})')
    dims = tuple(int(d) for d in np.frombuffer(payload, dtype='<u4', count=rank, offset=8))
    expected = int(np.prod(dims, dtype=np.int64)) * 4
    if len(payload) - header_size != expected:
        raise FormatError(f'{path} payload holds {len(payload) - header_size} bytes, expected {expected} for dims {dims}')
    data = np.frombuffer(payload, dtype='<f4', offset=header_size)
    return data.reshape(dims).astype(np.float64)


def read_ntf(path: PathLike) -> Image:
    pixels = read_ntf_tensor(path)
    in_range = bool(np.all((pixels >= 0.0) & (pixels <= 1.0)))
    return Image(pixels, clamped=in_range)
