#  a class must be imported before any classes that references it
from .Image import Image
from .CropSpec import CropSpec
from .AugmentationSpec import AugmentationSpec
