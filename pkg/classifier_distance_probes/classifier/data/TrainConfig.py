from dataclasses import dataclass, field

from classifier_distance_probes.classifier.data.Normalizer import NORMALIZATION_MODES
from classifier_distance_probes.imaging.data import AugmentationSpec
from classifier_distance_probes.shared.models import JsonDataClass
from classifier_distance_probes.shared.errors import SpecError

OPTIMIZERS = ('sgd_momentum',)


@dataclass
class TrainConfig(JsonDataClass):
    optimizer: str = 'sgd_momentum'
    learning_rate: float = 0.05
    momentum: float = 0.9
    batch_size: int = 64
    epochs: int = 30
    label_smoothing: float = 0.1
    augmentation: AugmentationSpec = field(default_factory=AugmentationSpec)
    seed: int = 0
    stream_id: int = 0
    normalization: str = 'per_channel_standardize'

    def __post_init__(self):
        if self.optimizer not in OPTIMIZERS:
            raise SpecError(f"Unsupported optimizer '{self.optimizer}'. Supported optimizers: {', '.join(OPTIMIZERS)}")
        if self.learning_rate <= 0:
            raise SpecError(f'Learning rate must be positive, got {self.learning_rate}')
        if not 0.0 <= self.momentum < 1.0:
            raise SpecError(f'Momentum must be in [0,1), got {self.momentum}')
        if self.batch_size < 1:
            raise SpecError(f'Batch size must be at least 1, got {self.batch_size}')
        if self.epochs < 1:
            raise SpecError(f'Epochs must be at least 1, got {self.epochs}')
        if not 0.0 <= self.label_smoothing < 1.0:
            raise SpecError(f'Label smoothing must be in [0,1), got {self.label_smoothing}')
        if self.normalization not in NORMALIZATION_MODES:
            raise SpecError(f"Unsupported normalization '{self.normalization}'. "
                            f"Supported modes: {', '.join(NORMALIZATION_MODES)}")
        if self.seed < 0 or self.stream_id < 0:
            raise SpecError(f'Seeds must be non-negative, got seed={self.seed}, stream_id={self.stream_id}')
