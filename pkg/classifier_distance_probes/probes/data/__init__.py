#  a class must be imported before any classes that references it
from .DistributionSource import DistributionSource, SOURCE_KINDS, blob_task_sources
from .MixSpec import MixSpec, MIX_MODES
from .ExperimentSpec import ExperimentSpec, EXPERIMENT_KINDS, FEATURE_SOURCES
from .CurvePoint import CurvePoint
from .SummaryStat import SummaryStat
from .ReportBundle import ReportBundle
