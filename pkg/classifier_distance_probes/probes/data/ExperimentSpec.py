from dataclasses import dataclass, field
from typing import List, Optional

from classifier_distance_probes.classifier.data import TrainConfig, MODEL_FAMILIES
from classifier_distance_probes.imaging.data import CropSpec
from classifier_distance_probes.probes.data.DistributionSource import DistributionSource, blob_task_sources
from classifier_distance_probes.spectral.data import FilterSpec
from classifier_distance_probes.synth.data import AutophagyConfig, DenoiserConfig, NoiseSchedule
from classifier_distance_probes.shared.models import JsonDataClass
from classifier_distance_probes.shared.errors import SpecError

EXPERIMENT_KINDS = ('probe', 'same_dist', 'scale_curve', 'freq_sweep', 'crop_sweep', 'mix_eval', 'multiway', 'mad',
                    'guide_demo', 'frechet_compare', 'family')
FEATURE_SOURCES = ('raw', 'classifier_penultimate')
MIN_SOURCES = {'probe': 2, 'multiway': 3, 'scale_curve': 2, 'freq_sweep': 2, 'crop_sweep': 2, 'frechet_compare': 2,
               'family': 2, 'same_dist': 1, 'mix_eval': 2, 'mad': 1, 'guide_demo': 1}


def _strictly_increasing(values, label: str):
    if any(b <= a for a, b in zip(values, values[1:])):
        raise SpecError(f'{label} ladder must be strictly increasing, got {values}')


@dataclass
class ExperimentSpec(JsonDataClass):
    """Everything needed to reproduce an experiment from a master seed.

    ``model_family`` 'auto' picks smallconv for images and mlp for 2-D points. ``resize_shorter``
    and ``center_crop`` form the preprocessing chain applied to every distribution at load time.
    A mix_eval spec without sources runs on the three-class task of :func:`blob_task_sources`.
    """
    kind: str
    sources: List[DistributionSource]
    model_family: str = 'auto'
    hidden_width: int = 128
    conv_channels: List[int] = field(default_factory=lambda: [8, 16])
    train: TrainConfig = field(default_factory=TrainConfig)
    master_seed: int = 0
    trials: int = 1
    train_samples: Optional[int] = 500
    heldout_samples: Optional[int] = 500
    resize_shorter: Optional[int] = None
    center_crop: Optional[int] = None
    filters: List[FilterSpec] = field(default_factory=list)
    clamp_filtered: bool = False
    crop_sizes: List[int] = field(default_factory=list)
    crop_mode: str = 'center'
    sample_sizes: List[int] = field(default_factory=list)
    alphas: List[float] = field(default_factory=list)
    generator_temperature: float = 0.25
    autophagy: AutophagyConfig = field(default_factory=AutophagyConfig)
    guidance_scales: List[float] = field(default_factory=list)
    generated_samples: int = 1000
    schedule: NoiseSchedule = field(default_factory=NoiseSchedule)
    denoiser: DenoiserConfig = field(default_factory=DenoiserConfig)
    feature_source: str = 'raw'
    families: List[str] = field(default_factory=list)

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise SpecError(f"Unsupported experiment kind '{self.kind}'. Supported kinds: {', '.join(EXPERIMENT_KINDS)}")
        if self.kind == 'mix_eval' and not self.sources:
            self.sources = blob_task_sources()
        needed = MIN_SOURCES[self.kind]
        if len(self.sources) < needed:
            raise SpecError(f'{self.kind} needs at least {needed} distributions, got {len(self.sources)}')
        names = [source.name for source in self.sources]
        if len(set(names)) != len(names):
            raise SpecError(f'Distribution names must be unique, got {names}')
        if self.model_family != 'auto' and self.model_family not in MODEL_FAMILIES:
            raise SpecError(f"Unsupported model family '{self.model_family}'. "
                            f"Supported families: auto, {', '.join(MODEL_FAMILIES)}")
        if self.trials < 1:
            raise SpecError(f'Trials must be at least 1, got {self.trials}')
        for label, value in (('train_samples', self.train_samples), ('heldout_samples', self.heldout_samples)):
            if value is not None and value < 1:
                raise SpecError(f'{label} must be at least 1, got {value}')
        if self.crop_mode not in ('center', 'random'):
            raise SpecError(f"Unsupported crop mode '{self.crop_mode}'. Supported modes: center, random")
        if self.feature_source not in FEATURE_SOURCES:
            raise SpecError(f"Unsupported feature source '{self.feature_source}'. "
                            f"Supported sources: {', '.join(FEATURE_SOURCES)}")
        for family in self.families:
            if family not in MODEL_FAMILIES:
                raise SpecError(f"Unsupported model family '{family}' in sweep")
        _strictly_increasing(self.crop_sizes, 'Crop size')
        _strictly_increasing(self.sample_sizes, 'Sample size')
        _strictly_increasing(self.alphas, 'Alpha')
        _strictly_increasing(self.guidance_scales, 'Guidance scale')
        described = [f.describe() for f in self.filters]
        if len(set(described)) != len(described):
            raise SpecError(f'Filter ladder has duplicates: {described}')
        if self.generator_temperature <= 0:
            raise SpecError(f'Generator temperature must be positive, got {self.generator_temperature}')

    def base_chain(self) -> str:
        steps = []
        if self.resize_shorter is not None:
            steps.append(f'resize_shorter:{self.resize_shorter}')
        if self.center_crop is not None:
            steps.append(CropSpec('center', self.center_crop).describe())
        return '+'.join(steps) if steps else 'identity'
