"""Dataset directory layout: ``<root>/<distribution_name>/{train,val}/*.{png,ntf}``."""
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import List, Sequence

import numpy as np

from classifier_distance_probes.imaging.data import Image
from classifier_distance_probes.imaging.io import load_image, save_image
from classifier_distance_probes.shared.errors import DataError, FormatError

logger = logging.getLogger(__name__)

SPLITS = ('train', 'val')
IMAGE_SUFFIXES = ('.png', '.ntf')


def _check_split(split: str):
    if split not in SPLITS:
        raise DataError(f"Unknown split '{split}'. Supported splits: {', '.join(SPLITS)}")


def split_dir(root: str, name: str, split: str) -> str:
    _check_split(split)
    return os.path.join(root, name, split)


def list_distributions(root: str) -> List[str]:
    """Names of the distribution directories under ``root`` that hold at least one split."""
    if not os.path.isdir(root):
        raise DataError(f'Dataset root {root} is not a directory')
    names = []
    for entry in sorted(os.listdir(root)):
        if any(os.path.isdir(os.path.join(root, entry, split)) for split in SPLITS):
            names.append(entry)
    return names


def load_directory(directory: str, max_workers: int = 4) -> List[Image]:
    """Load every image file in ``directory`` in lexicographic filename order.

    Raises:
        DataError: If the directory is missing, empty, or mixes channel counts or sizes
    """
    if not os.path.isdir(directory):
        raise DataError(f'Image directory {directory} does not exist')
    files = sorted(f for f in os.listdir(directory) if os.path.splitext(f)[1].lower() in IMAGE_SUFFIXES)
    if not files:
        raise DataError(f'Image directory {directory} holds no .png or .ntf files')
    paths = [os.path.join(directory, f) for f in files]
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        # map preserves input order regardless of completion order
        images = list(executor.map(load_image, paths))
    shapes = {image.shape for image in images}
    if len(shapes) != 1:
        raise DataError(f'Images in {directory} have mixed shapes: {sorted(shapes)}')
    logger.debug(f'Loaded {len(images)} images of shape {images[0].shape} from {directory}')
    return images


def load_split(root: str, name: str, split: str, max_workers: int = 4) -> List[Image]:
    return load_directory(split_dir(root, name, split), max_workers=max_workers)


def write_split(root: str, name: str, split: str, images: Sequence[Image], fmt: str = 'ntf') -> str:
    """Write images as zero-padded ``00000.<fmt>`` files so lexicographic order is sample order.

    Returns:
        str: The split directory written
    """
    if fmt not in ('png', 'ntf'):
        raise FormatError(f"Unsupported dataset format '{fmt}'. Supported formats: png, ntf")
    directory = split_dir(root, name, split)
    os.makedirs(directory, exist_ok=True)
    width = max(5, len(str(len(images))))
    for index, image in enumerate(images):
        save_image(image, os.path.join(directory, f'{index:0{width}d}.{fmt}'))
    logger.info(f'Wrote {len(images)} {fmt} images to {directory}')
    return directory


def stack_images(images: Sequence[Image]) -> np.ndarray:
    """Stack images into an N×C×H×W float64 array."""
    if len(images) == 0:
        raise DataError('Cannot stack an empty image list')
    return np.stack([image.pixels for image in images])
