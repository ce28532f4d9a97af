from .data import Image, CropSpec, AugmentationSpec
from .io import load_image, save_image, read_ntf, write_ntf, read_ntf_tensor
from .transforms import (center_crop, center_crop_pixels, random_crop, random_crop_pixels, horizontal_flip, pad,
                         pad_pixels, resize_bilinear, resize_bilinear_pixels, resize_shorter_side, augment,
                         augment_batch)
from .datasets import load_split, write_split, list_distributions, load_directory, stack_images, SPLITS
