"""Command-line front end: ``distprobe <command> --dist NAME=dir:PATH|synth:SPEC ...``.

Every run writes into ``<out>/<command>-seed<seed>/``. Setting precedence is command-line flag,
then ``--config`` file, then ``DISTPROBE_*`` environment, then the built-in default.
"""
import argparse
import logging
import os
import sys
from typing import Any, Dict, List, Optional, Sequence

from classifier_distance_probes.classifier import TrainConfig
from classifier_distance_probes.cli.data import RunConfig
from classifier_distance_probes.imaging import AugmentationSpec
from classifier_distance_probes.probes import (ExperimentSpec, DistributionSource, run_experiment, write_bundle, materialize,
                                               blob_task_sources)
from classifier_distance_probes.probes.reports import write_effective_config
from classifier_distance_probes.spectral import parse_filter
from classifier_distance_probes.synth import parse_distribution, AutophagyConfig, DenoiserConfig, NoiseSchedule
from classifier_distance_probes.shared.errors import ProbeError, SpecError, UsageError
from classifier_distance_probes.shared.run_config import RunSettings, load_config_file, merge_overlays

logger = logging.getLogger(__name__)

COMMAND_KINDS = {
    'probe': 'probe',
    'same-dist': 'same_dist',
    'scale-curve': 'scale_curve',
    'freq-sweep': 'freq_sweep',
    'crop-sweep': 'crop_sweep',
    'mix-eval': 'mix_eval',
    'multiway': 'multiway',
    'mad-sim': 'mad',
    'guide-demo': 'guide_demo',
    'frechet': 'frechet_compare',
    'family': 'family',
    'synth': None,
}
REQUIRED = {
    'freq-sweep': 'filter',
    'scale-curve': 'sample_sizes',
    'crop-sweep': 'crop_sizes',
}
SYNTH_SAMPLES = 500
LIST_SEPARATOR = ';'

# zero means "not set" for the optional integer settings
DEFAULTS: Dict[str, Any] = {
    'dist': '',
    'trials': 1,
    'train_samples': 0,
    'heldout_samples': 0,
    'model': 'auto',
    'hidden_width': 128,
    'conv_channels': '8,16',
    'epochs': 30,
    'batch_size': 64,
    'learning_rate': 0.05,
    'momentum': 0.9,
    'label_smoothing': 0.1,
    'normalization': 'per_channel_standardize',
    'crop_pad': 0,
    'aug_crop_size': 0,
    'flip_prob': 0.0,
    'resize_shorter': 0,
    'center_crop': 0,
    'filter': '',
    'mask_shape': 'rect',
    'clamp_filtered': False,
    'crop_sizes': '',
    'crop_mode': 'center',
    'sample_sizes': '',
    'alphas': '0,0.5,1',
    'generator_temperature': 0.25,
    'generations': 6,
    'samples_per_generation': 100,
    'policy': 'replace',
    'real_fraction': 0.5,
    'generator': 'gaussian_fit',
    'eval_samples': 4000,
    'probe_samples': 100,
    'probe_heldout': 500,
    'scales': '0,1',
    'generated_samples': 1000,
    'steps': 100,
    'denoiser_iterations': 3000,
    'denoiser_width': 128,
    'features': 'raw',
    'families': 'logistic,mlp,smallconv',
    'format': 'ntf',
}


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f'{self.prog}: {message}')


def _common_options() -> argparse.ArgumentParser:
    parent = _ArgumentParser(add_help=False)
    run = parent.add_argument_group('run')
    run.add_argument('--dist', action='append', metavar='NAME=dir:PATH|synth:SPEC',
                     help='A distribution; repeat for every class')
    run.add_argument('--config', help='key=value config file; flags override its values')
    run.add_argument('--out', help='Output root (env DISTPROBE_OUTPUT_DIR, default runs)')
    run.add_argument('--jobs', type=int, help='Ladder points trained concurrently (env DISTPROBE_JOBS)')
    run.add_argument('--log-level', choices=RunSettings.SUPPORTED_LOG_LEVELS, type=str.upper)
    run.add_argument('--seed', type=int, help='Master seed (env DISTPROBE_MASTER_SEED)')
    run.add_argument('--trials', type=int)
    run.add_argument('--train-samples', type=int, help='Per-class training samples (default: all, or 500 synthetic)')
    run.add_argument('--heldout-samples', type=int)
    run.add_argument('--resize-shorter', type=int)
    run.add_argument('--center-crop', type=int)
    model = parent.add_argument_group('model')
    model.add_argument('--model', choices=['auto', 'logistic', 'mlp', 'smallconv'])
    model.add_argument('--hidden-width', type=int)
    model.add_argument('--conv-channels', metavar='C1,C2')
    model.add_argument('--epochs', type=int)
    model.add_argument('--batch-size', type=int)
    model.add_argument('--learning-rate', type=float)
    model.add_argument('--momentum', type=float)
    model.add_argument('--label-smoothing', type=float)
    model.add_argument('--normalization', choices=['none', 'per_channel_standardize', 'clamp01'])
    model.add_argument('--crop-pad', type=int, help='Training augmentation: zero padding before the random crop')
    model.add_argument('--aug-crop-size', type=int, help='Training augmentation: random crop size')
    model.add_argument('--flip-prob', type=float, help='Training augmentation: horizontal flip probability')
    return parent


def build_parser() -> argparse.ArgumentParser:
    parent = _common_options()
    parser = _ArgumentParser(prog='distprobe', description='Classifier-based distribution distance probes')
    commands = parser.add_subparsers(dest='command', metavar='COMMAND', parser_class=_ArgumentParser)
    commands.required = True

    def command(name: str, text: str) -> argparse.ArgumentParser:
        return commands.add_parser(name, parents=[parent], help=text, description=text)

    command('probe', 'Train a classifier to tell the distributions apart')
    command('same-dist', 'Probe a distribution against an independent sample of itself')
    command('multiway', 'Probe three or more distributions at once')
    sub = command('scale-curve', 'Probe accuracy against the number of training samples')
    sub.add_argument('--sample-sizes', metavar='N1,N2,...')
    sub = command('freq-sweep', 'Probe after ideal frequency filtering')
    sub.add_argument('--filter', action='append', metavar='low:T|high:T|band:A-B|low:frac:F')
    sub.add_argument('--mask-shape', choices=['rect', 'circle'])
    sub.add_argument('--clamp-filtered', action='store_const', const=True)
    sub = command('crop-sweep', 'Probe after cropping every sample')
    sub.add_argument('--crop-sizes', metavar='S1,S2,...')
    sub.add_argument('--crop-mode', choices=['center', 'random'])
    sub = command('mix-eval', 'Mix generated samples into a labeled real training set (default: three blob classes)')
    sub.add_argument('--alphas', metavar='A1,A2,...')
    sub.add_argument('--generator-temperature', type=float)
    sub = command('mad-sim', 'Self-consuming generator loop with a per-generation probe')
    sub.add_argument('--generations', type=int)
    sub.add_argument('--samples-per-generation', type=int)
    sub.add_argument('--policy', choices=['replace', 'augment'])
    sub.add_argument('--real-fraction', type=float)
    sub.add_argument('--generator', choices=['gaussian_fit', 'denoiser'])
    sub.add_argument('--eval-samples', type=int)
    sub.add_argument('--probe-samples', type=int)
    sub.add_argument('--probe-heldout', type=int)
    sub.add_argument('--steps', type=int)
    sub.add_argument('--denoiser-iterations', type=int)
    sub.add_argument('--denoiser-width', type=int)
    sub = command('guide-demo', 'Classifier-guided toy diffusion judged by a real-vs-generated probe')
    sub.add_argument('--scales', metavar='S1,S2,...')
    sub.add_argument('--generated-samples', type=int)
    sub.add_argument('--steps', type=int)
    sub.add_argument('--denoiser-iterations', type=int)
    sub.add_argument('--denoiser-width', type=int)
    sub = command('frechet', 'Gaussian Fréchet distance next to a probe')
    sub.add_argument('--features', choices=['raw', 'classifier_penultimate'])
    sub = command('family', 'The same probe under every model family')
    sub.add_argument('--families', metavar='F1,F2,...')
    sub = command('synth', 'Write synthetic distributions as dataset directories')
    sub.add_argument('--format', choices=['png', 'ntf'])
    return parser


def _split(text: str, separator: str = ',') -> List[str]:
    return [item.strip() for item in str(text).split(separator) if item.strip()]


def _ints(key: str, text: str) -> List[int]:
    try:
        return [int(item) for item in _split(text)]
    except ValueError:
        raise UsageError(f"--{key.replace('_', '-')} expects comma-separated integers, got {text!r}")


def _floats(key: str, text: str) -> List[float]:
    try:
        return [float(item) for item in _split(text)]
    except ValueError:
        raise UsageError(f"--{key.replace('_', '-')} expects comma-separated numbers, got {text!r}")


def parse_source(text: str) -> DistributionSource:
    """``NAME=dir:PATH`` or ``NAME=synth:SPEC``."""
    name, separator, body = text.partition('=')
    kind, _, rest = body.partition(':')
    if not separator or not name.strip() or kind not in ('dir', 'synth') or not rest:
        raise UsageError(f"--dist expects NAME=dir:PATH or NAME=synth:SPEC, got {text!r}")
    name = name.strip()
    if kind == 'dir':
        return DistributionSource.directory(name, rest)
    return DistributionSource.synthetic(parse_distribution(name, rest))


def _flag_values(namespace: argparse.Namespace) -> Dict[str, Any]:
    flags = {key: value for key, value in vars(namespace).items() if key not in ('command', 'config')}
    for key in ('dist', 'filter'):
        if flags.get(key) is not None:
            flags[key] = LIST_SEPARATOR.join(flags[key])
    return flags


def _sample_count(value: int, sources: Sequence[DistributionSource]) -> Optional[int]:
    if value > 0:
        return value
    return SYNTH_SAMPLES if any(source.kind == 'synth' for source in sources) else None


def _experiment(command: str, values: Dict[str, Any], sources: List[DistributionSource],
                seed: int) -> ExperimentSpec:
    augmentation = AugmentationSpec(crop_pad=values['crop_pad'] or None, crop_size=values['aug_crop_size'] or None,
                                    horizontal_flip_prob=values['flip_prob'])
    train = TrainConfig(learning_rate=values['learning_rate'], momentum=values['momentum'],
                        batch_size=values['batch_size'], epochs=values['epochs'],
                        label_smoothing=values['label_smoothing'], augmentation=augmentation, seed=seed,
                        normalization=values['normalization'])
    denoiser = DenoiserConfig(hidden_width=values['denoiser_width'], iterations=values['denoiser_iterations'])
    autophagy = AutophagyConfig(generations=values['generations'], samples_per_generation=values['samples_per_generation'],
                                policy=values['policy'], real_fraction=values['real_fraction'],
                                generator=values['generator'], eval_samples=values['eval_samples'],
                                probe_samples=values['probe_samples'], probe_heldout=values['probe_heldout'],
                                denoiser=denoiser)
    filters = [parse_filter(text, values['mask_shape']) for text in _split(values['filter'], LIST_SEPARATOR)]
    return ExperimentSpec(
        kind=COMMAND_KINDS[command],
        sources=sources,
        model_family=values['model'],
        hidden_width=values['hidden_width'],
        conv_channels=_ints('conv_channels', values['conv_channels']),
        train=train,
        master_seed=seed,
        trials=values['trials'],
        train_samples=_sample_count(values['train_samples'], sources),
        heldout_samples=_sample_count(values['heldout_samples'], sources),
        resize_shorter=values['resize_shorter'] or None,
        center_crop=values['center_crop'] or None,
        filters=filters,
        clamp_filtered=values['clamp_filtered'],
        crop_sizes=_ints('crop_sizes', values['crop_sizes']),
        crop_mode=values['crop_mode'],
        sample_sizes=_ints('sample_sizes', values['sample_sizes']),
        alphas=_floats('alphas', values['alphas']),
        generator_temperature=values['generator_temperature'],
        autophagy=autophagy,
        guidance_scales=_floats('scales', values['scales']),
        generated_samples=values['generated_samples'],
        schedule=NoiseSchedule(steps=values['steps']),
        denoiser=denoiser,
        feature_source=values['features'],
        families=_split(values['families']),
    )


def _echo(values: Dict[str, Any], experiment: Optional[ExperimentSpec]) -> Dict[str, str]:
    effective = {key: str(value) for key, value in values.items()}
    if experiment is not None:
        effective['train_samples'] = str(experiment.train_samples or 'all')
        effective['heldout_samples'] = str(experiment.heldout_samples or 'all')
        effective['kind'] = experiment.kind
    return effective


def parse(argv: Optional[Sequence[str]] = None, env_file: Optional[str] = None) -> RunConfig:
    """Parse a command line into a RunConfig.

    Args:
        argv: Arguments after the program name (defaults to ``sys.argv[1:]``)
        env_file: Optional .env file for the ``DISTPROBE_*`` settings

    Raises:
        UsageError: For unknown or missing flags, malformed values or invalid settings
    """
    namespace = build_parser().parse_args(argv)
    command = namespace.command
    try:
        settings = RunSettings(env_file)
        overlay = load_config_file(namespace.config) if namespace.config else {}
        defaults = dict(DEFAULTS, out=settings.output_dir, jobs=settings.jobs, log_level=settings.log_level,
                        seed=settings.master_seed)
        values = merge_overlays(_flag_values(namespace), overlay, defaults)
        if values['jobs'] < 1:
            raise UsageError(f"--jobs must be at least 1, got {values['jobs']}")
        values['log_level'] = str(values['log_level']).upper()
        if values['log_level'] not in RunSettings.SUPPORTED_LOG_LEVELS:
            raise UsageError(f"Unsupported log level '{values['log_level']}'")
        if not _split(values['dist'], LIST_SEPARATOR) and command != 'mix-eval':
            raise UsageError(f'{command}: the following arguments are required: --dist')
        required = REQUIRED.get(command)
        if required and not _split(values[required], LIST_SEPARATOR):
            raise UsageError(f"{command}: the following arguments are required: --{required.replace('_', '-')}")
        sources = [parse_source(text) for text in _split(values['dist'], LIST_SEPARATOR)]
        if not sources:
            sources = blob_task_sources()
        seed = values['seed']
        if seed < 0:
            raise UsageError(f'--seed must be non-negative, got {seed}')
        experiment = None
        if command == 'synth':
            if any(source.kind != 'synth' for source in sources):
                raise UsageError('synth only accepts synth: distributions')
        else:
            experiment = _experiment(command, values, sources, seed)
    except (SpecError, FileNotFoundError) as e:
        raise UsageError(str(e)) from e
    return RunConfig(command=command, sources=sources, master_seed=seed, output_dir=values['out'],
                     experiment=experiment, jobs=values['jobs'], log_level=values['log_level'],
                     image_format=values['format'], config_overlay=overlay, effective=_echo(values, experiment))


def execute(config: RunConfig) -> int:
    """Run the configured command and write its outputs.

    Returns:
        int: 0 on success, 1 on an experiment or I/O failure, 2 on a usage error
    """
    run_dir = os.path.join(config.output_dir, config.run_dir_name)
    try:
        if config.command == 'synth':
            train_samples = int(config.effective.get('train_samples', '0')) or SYNTH_SAMPLES
            heldout_samples = int(config.effective.get('heldout_samples', '0')) or SYNTH_SAMPLES
            materialize(config.sources, run_dir, config.master_seed, train_samples, heldout_samples,
                        config.image_format)
            write_effective_config(config.effective, os.path.join(run_dir, 'effective-config.txt'))
        else:
            bundle = run_experiment(config.experiment, jobs=config.jobs)
            bundle.effective_config = dict(config.effective)
            write_bundle(bundle, run_dir)
    except UsageError as e:
        logger.error(str(e))
        return 2
    except (ProbeError, OSError) as e:
        logger.error(f'{config.command} failed: {type(e).__name__}: {e}')
        return 1
    print(f'📁 Results written to {run_dir}')
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        config = parse(argv)
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return 2
    logging.basicConfig(level=config.log_level, format='%(asctime)s %(levelname)s %(name)s: %(message)s')
    return execute(config)


if __name__ == '__main__':
    sys.exit(main())
