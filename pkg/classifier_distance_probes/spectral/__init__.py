from .data import FilterSpec, FrequencyMask
from .filters import (radius, radius_grid, max_radius, make_mask, apply_filter, filter_batch, band_energy,
                      parse_filter)
