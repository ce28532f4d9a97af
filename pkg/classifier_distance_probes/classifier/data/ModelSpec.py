from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from classifier_distance_probes.shared.models import JsonDataClass
from classifier_distance_probes.shared.errors import SpecError

MODEL_FAMILIES = ('logistic', 'mlp', 'smallconv')


@dataclass
class ModelSpec(JsonDataClass):
    """Architecture descriptor.

    ``input_shape`` is C×H×W for images (any shape for logistic/mlp, which flatten) and
    ``num_classes`` is the output width: the class count for probes, or the ε dimension when an
    mlp is used as a regression head.
    """
    family: str
    input_shape: List[int]
    num_classes: int = 2
    hidden_width: int = 128
    conv_channels: List[int] = field(default_factory=lambda: [8, 16])

    def __post_init__(self):
        if self.family not in MODEL_FAMILIES:
            raise SpecError(f"Unsupported model family '{self.family}'. Supported families: {', '.join(MODEL_FAMILIES)}")
        self.input_shape = [int(d) for d in self.input_shape]
        if not self.input_shape or any(d < 1 for d in self.input_shape):
            raise SpecError(f'Input shape must have positive extents, got {self.input_shape}')
        if self.num_classes < 2:
            raise SpecError(f'A classifier needs at least 2 outputs, got {self.num_classes}')
        if self.hidden_width < 1:
            raise SpecError(f'Hidden width must be at least 1, got {self.hidden_width}')
        if self.family == 'smallconv':
            if len(self.input_shape) != 3:
                raise SpecError(f'smallconv needs a C×H×W input shape, got {self.input_shape}')
            if self.input_shape[1] < 2 or self.input_shape[2] < 2:
                raise SpecError(f'smallconv needs H, W >= 2 for pooling, got {self.input_shape}')
            if len(self.conv_channels) != 2 or any(c < 1 for c in self.conv_channels):
                raise SpecError(f'smallconv channel plan must be two positive widths, got {self.conv_channels}')

    @property
    def input_dim(self) -> int:
        return int(np.prod(self.input_shape))

    def layer_layout(self) -> List[Tuple[str, Tuple[int, ...], int]]:
        """(name, shape, fan_in) per parameter block in storage order; biases have fan_in 0."""
        k = self.num_classes
        if self.family == 'logistic':
            return [('W', (self.input_dim, k), self.input_dim), ('b', (k,), 0)]
        if self.family == 'mlp':
            h = self.hidden_width
            return [('W1', (self.input_dim, h), self.input_dim), ('b1', (h,), 0),
                    ('W2', (h, k), h), ('b2', (k,), 0)]
        channels = self.input_shape[0]
        first, second = self.conv_channels
        return [('K1', (first, channels, 3, 3), channels * 9), ('c1', (first,), 0),
                ('K2', (second, first, 3, 3), first * 9), ('c2', (second,), 0),
                ('W', (second, k), second), ('b', (k,), 0)]

    @property
    def parameter_count(self) -> int:
        return sum(int(np.prod(shape)) for _, shape, _ in self.layer_layout())

    @property
    def feature_dim(self) -> int:
        if self.family == 'mlp':
            return self.hidden_width
        if self.family == 'smallconv':
            return self.conv_channels[1]
        return 0

    def describe(self) -> str:
        shape = 'x'.join(str(d) for d in self.input_shape)
        if self.family == 'mlp':
            return f'mlp[{shape}->{self.hidden_width}->{self.num_classes}]'
        if self.family == 'smallconv':
            return f'smallconv[{shape}:{self.conv_channels[0]}->{self.conv_channels[1]}->{self.num_classes}]'
        return f'logistic[{shape}->{self.num_classes}]'
