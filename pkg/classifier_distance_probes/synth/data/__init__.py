#  a class must be imported before any classes that references it
from .PixelRegion import PixelRegion
from .SpectralBand import SpectralBand
from .DistributionSpec import DistributionSpec, DISTRIBUTION_FAMILIES
from .NoiseSchedule import NoiseSchedule
from .DenoiserConfig import DenoiserConfig
from .Denoiser import Denoiser
from .NoisedClassifier import NoisedClassifier, REAL, GENERATED
from .GuidanceConfig import GuidanceConfig
from .AutophagyConfig import AutophagyConfig, AUTOPHAGY_POLICIES, GENERATOR_KINDS
from .GenerationRecord import GenerationRecord
