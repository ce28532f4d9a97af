#  a class must be imported before any classes that references it
from .ModelSpec import ModelSpec, MODEL_FAMILIES
from .Normalizer import Normalizer, NORMALIZATION_MODES
from .Parameters import Parameters
from .TrainConfig import TrainConfig
from .DivergenceEstimate import DivergenceEstimate
from .ProbeReport import ProbeReport
from .ClassDataset import ClassDataset
