from dataclasses import dataclass, field
from typing import List

import numpy as np

from classifier_distance_probes.shared.models import JsonDataClass
from classifier_distance_probes.shared.errors import SpecError

NORMALIZATION_MODES = ('none', 'per_channel_standardize', 'clamp01')
STD_FLOOR = 1e-8


@dataclass
class Normalizer(JsonDataClass):
    """Input normalization fitted on pooled training inputs and reused at evaluation.

    Channels are axis 1 of C×H×W inputs; other input shapes are treated as a single channel.
    """
    mode: str = 'none'
    mean: List[float] = field(default_factory=list)
    std: List[float] = field(default_factory=list)

    def __post_init__(self):
        if self.mode not in NORMALIZATION_MODES:
            raise SpecError(f"Unsupported normalization '{self.mode}'. "
                            f"Supported modes: {', '.join(NORMALIZATION_MODES)}")

    @staticmethod
    def _channels(inputs: np.ndarray) -> np.ndarray:
        if inputs.ndim == 4:
            return inputs.reshape(inputs.shape[0], inputs.shape[1], -1)
        return inputs.reshape(inputs.shape[0], 1, -1)

    @classmethod
    def fit(cls, mode: str, inputs: np.ndarray) -> 'Normalizer':
        if mode != 'per_channel_standardize':
            return cls(mode=mode)
        grouped = cls._channels(inputs)
        mean = grouped.mean(axis=(0, 2))
        std = np.maximum(grouped.std(axis=(0, 2)), STD_FLOOR)
        return cls(mode=mode, mean=[float(m) for m in mean], std=[float(s) for s in std])

    def apply(self, inputs: np.ndarray) -> np.ndarray:
        if self.mode == 'none':
            return inputs
        if self.mode == 'clamp01':
            return np.clip(inputs, 0.0, 1.0)
        grouped = self._channels(inputs)
        mean = np.asarray(self.mean)[None, :, None]
        std = np.asarray(self.std)[None, :, None]
        return ((grouped - mean) / std).reshape(inputs.shape)

    def backward(self, inputs: np.ndarray, grad_normalized: np.ndarray) -> np.ndarray:
        """Gradient w.r.t. the raw inputs given the gradient w.r.t. the normalized inputs."""
        if self.mode == 'none':
            return grad_normalized
        if self.mode == 'clamp01':
            return grad_normalized * ((inputs >= 0.0) & (inputs <= 1.0))
        grouped = self._channels(grad_normalized)
        std = np.asarray(self.std)[None, :, None]
        return (grouped / std).reshape(grad_normalized.shape)
