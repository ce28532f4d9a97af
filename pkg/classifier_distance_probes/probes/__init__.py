from .data import (ExperimentSpec, DistributionSource, MixSpec, CurvePoint, SummaryStat, ReportBundle,
                   EXPERIMENT_KINDS, FEATURE_SOURCES, MIX_MODES, SOURCE_KINDS, blob_task_sources)
from .experiments import (ProbeHarness, run_experiment, run_probe, multiway_probe, frechet_compare, summarize,
                          materialize, RANDOM_CROP_TRIALS)
from .reports import write_bundle, write_curve_csv, write_effective_config, curve_rows, load_report, strip_wall_clock
