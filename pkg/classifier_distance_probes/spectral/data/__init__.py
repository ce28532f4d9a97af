#  a class must be imported before any classes that references it
from .FilterSpec import FilterSpec, FILTER_KINDS, MASK_SHAPES
from .FrequencyMask import FrequencyMask
