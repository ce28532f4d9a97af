import os

import pytest

from classifier_distance_probes.cli import parse, main, parse_source
from classifier_distance_probes.probes import load_report
from classifier_distance_probes.shared.errors import UsageError

DIM = 'dim=synth:bernoulli:theta=0.2,shape=1x4x4'
BRIGHT = 'bright=synth:bernoulli:theta=0.8,shape=1x4x4'
MID = 'mid=synth:bernoulli:theta=0.5,shape=1x4x4'
LEFT = 'left=synth:point2d:weights=0.5/0.5,means=-2x0/2x0,covs=0.3/0.3'
RIGHT = 'right=synth:point2d:weights=1,means=0x1,covs=0.5'
TINY = ['--seed', '1', '--train-samples', '40', '--heldout-samples', '40', '--epochs', '2', '--model', 'mlp',
        '--hidden-width', '8', '--batch-size', '16']


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch, tmp_path):
    for name in ('DISTPROBE_OUTPUT_DIR', 'DISTPROBE_JOBS', 'DISTPROBE_LOG_LEVEL', 'DISTPROBE_MASTER_SEED'):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.chdir(tmp_path)


def dists(*texts):
    return [arg for text in texts for arg in ('--dist', text)]


class TestParse:

    def test_probe_defaults(self):
        config = parse(['probe'] + dists(DIM, BRIGHT))
        assert config.command == 'probe'
        assert config.run_dir_name == 'probe-seed0'
        assert config.output_dir == 'runs'
        experiment = config.experiment
        assert experiment.kind == 'probe'
        assert [s.name for s in experiment.sources] == ['dim', 'bright']
        assert experiment.train_samples == 500
        assert experiment.model_family == 'auto'
        assert experiment.train.label_smoothing == 0.1
        assert config.effective['kind'] == 'probe'

    def test_directory_sources_default_to_all_samples(self):
        config = parse(['probe', '--dist', 'a=dir:/data/a', '--dist', 'b=dir:/data/b'])
        assert config.experiment.train_samples is None
        assert config.effective['train_samples'] == 'all'
        assert config.experiment.sources[1].path == '/data/b'

    def test_command_specific_options(self):
        config = parse(['freq-sweep', '--filter', 'low:2', '--filter', 'band:frac:0.1-0.5', '--mask-shape', 'circle',
                        '--clamp-filtered'] + dists(DIM, BRIGHT))
        filters = config.experiment.filters
        assert [f.kind for f in filters] == ['lowpass', 'bandpass']
        assert filters[0].shape == 'circular'
        assert config.experiment.clamp_filtered
        mad = parse(['mad-sim', '--generations', '3', '--policy', 'augment', '--real-fraction', '0.25'] + dists(LEFT))
        assert mad.experiment.kind == 'mad'
        assert mad.experiment.autophagy.describe() == 'augment(rho=0.25)'
        scale = parse(['scale-curve', '--sample-sizes', '10,100,1000'] + dists(DIM, BRIGHT))
        assert scale.experiment.sample_sizes == [10, 100, 1000]

    def test_parse_source(self):
        source = parse_source('x=synth:spectral:shape=8x8,bands=0-4@1')
        assert source.kind == 'synth'
        assert source.spec.family == 'spectral_noise'
        with pytest.raises(UsageError):
            parse_source('x=file:/tmp')

    @pytest.mark.parametrize('argv, needle', [
        (['probe'], '--dist'),
        (['freq-sweep', '--dist', DIM, '--dist', BRIGHT], '--filter'),
        (['scale-curve', '--dist', DIM, '--dist', BRIGHT], '--sample-sizes'),
        (['probe', '--dist', DIM, '--dist', BRIGHT, '--jobs', '0'], '--jobs'),
        (['probe', '--dist', DIM, '--dist', BRIGHT, '--colour', 'red'], 'unrecognized'),
        (['probe', '--dist', 'dim=synth:bernoulli:theta=2', '--dist', BRIGHT], 'theta'),
        (['multiway', '--dist', DIM, '--dist', BRIGHT], 'at least 3'),
        (['crop-sweep', '--crop-sizes', '4,2', '--dist', DIM, '--dist', BRIGHT], 'strictly increasing'),
        (['synth', '--dist', 'a=dir:/data/a'], 'synth'),
    ])
    def test_usage_errors(self, argv, needle):
        with pytest.raises(UsageError) as exc_info:
            parse(argv)
        assert needle in str(exc_info.value)

    def test_usage_error_exit_code(self, capsys):
        assert main(['probe']) == 2
        assert '--dist' in capsys.readouterr().err
        assert main(['teleport']) == 2


class TestPrecedence:

    def test_flag_over_config_over_env(self, tmp_path, monkeypatch):
        config_file = tmp_path / 'run.cfg'
        config_file.write_text('# tiny run\nepochs=7\ntrain-samples=40\nseed=8\n'
                               f'dist={DIM};{BRIGHT}\n', encoding='utf-8')
        monkeypatch.setenv('DISTPROBE_MASTER_SEED', '11')
        monkeypatch.setenv('DISTPROBE_JOBS', '3')
        config = parse(['probe', '--config', str(config_file), '--epochs', '9'])
        assert config.experiment.train.epochs == 9
        assert config.experiment.train_samples == 40
        assert config.master_seed == 8
        assert config.jobs == 3
        assert config.config_overlay['train_samples'] == '40'
        assert [s.name for s in config.sources] == ['dim', 'bright']

    def test_env_seed(self, monkeypatch):
        monkeypatch.setenv('DISTPROBE_MASTER_SEED', '11')
        assert parse(['probe'] + dists(DIM, BRIGHT)).master_seed == 11
        assert parse(['probe', '--seed', '2'] + dists(DIM, BRIGHT)).master_seed == 2

    def test_bad_environment_is_a_usage_error(self, monkeypatch):
        monkeypatch.setenv('DISTPROBE_JOBS', 'many')
        with pytest.raises(UsageError):
            parse(['probe'] + dists(DIM, BRIGHT))

    def test_missing_config_file(self, tmp_path):
        with pytest.raises(UsageError) as exc_info:
            parse(['probe', '--config', str(tmp_path / 'absent.cfg')] + dists(DIM, BRIGHT))
        assert 'absent.cfg' in str(exc_info.value)

    def test_unknown_config_key(self, tmp_path):
        config_file = tmp_path / 'run.cfg'
        config_file.write_text('colour=red\n', encoding='utf-8')
        with pytest.raises(UsageError) as exc_info:
            parse(['probe', '--config', str(config_file)] + dists(DIM, BRIGHT))
        assert 'colour' in str(exc_info.value)


class TestCommands:

    @pytest.mark.parametrize('argv', [
        ['probe'] + dists(DIM, BRIGHT),
        ['same-dist'] + dists(MID),
        ['multiway'] + dists(DIM, MID, BRIGHT),
        ['scale-curve', '--sample-sizes', '20,40'] + dists(DIM, BRIGHT),
        ['freq-sweep', '--filter', 'low:1', '--filter', 'high:0'] + dists(DIM, BRIGHT),
        ['crop-sweep', '--crop-sizes', '2,4'] + dists(DIM, BRIGHT),
        ['mix-eval', '--alphas', '0,0.5'] + dists(DIM, BRIGHT),
        ['mix-eval', '--alphas', '0.5'],
        ['family', '--families', 'logistic,mlp'] + dists(DIM, BRIGHT),
        ['frechet'] + dists(LEFT, RIGHT),
        ['mad-sim', '--generations', '2', '--samples-per-generation', '20', '--eval-samples', '50',
         '--probe-samples', '20', '--probe-heldout', '30'] + dists(LEFT),
        ['guide-demo', '--steps', '10', '--denoiser-iterations', '30', '--denoiser-width', '8',
         '--generated-samples', '30', '--scales', '0,1'] + dists(LEFT),
    ])
    def test_command_writes_outputs(self, argv, tmp_path, capsys):
        assert main(argv + TINY + ['--out', str(tmp_path / 'out')]) == 0
        run_dir = tmp_path / 'out' / f'{argv[0]}-seed1'
        assert str(run_dir) in capsys.readouterr().out
        assert (run_dir / 'report.json').is_file()
        assert (run_dir / 'curve.csv').is_file()
        effective = (run_dir / 'effective-config.txt').read_text(encoding='utf-8').splitlines()
        assert effective == sorted(effective)
        assert 'train_samples=40' in effective
        assert load_report(str(run_dir / 'report.json'))['points']

    def test_report_is_deterministic(self, tmp_path):
        argv = ['scale-curve', '--sample-sizes', '20,40', '--trials', '2'] + dists(DIM, BRIGHT) + TINY
        assert main(argv + ['--out', str(tmp_path / 'first')]) == 0
        assert main(argv + ['--out', str(tmp_path / 'second'), '--jobs', '2']) == 0
        first = load_report(str(tmp_path / 'first' / 'scale-curve-seed1' / 'report.json'))
        second = load_report(str(tmp_path / 'second' / 'scale-curve-seed1' / 'report.json'))
        assert first['points'] == second['points']
        assert first['summary'] == second['summary']
        csv_first = (tmp_path / 'first' / 'scale-curve-seed1' / 'curve.csv').read_bytes()
        assert csv_first == (tmp_path / 'second' / 'scale-curve-seed1' / 'curve.csv').read_bytes()

    def test_unwritable_output_exits_with_one(self, tmp_path):
        blocker = tmp_path / 'blocker'
        blocker.write_text('not a directory', encoding='utf-8')
        assert main(['probe'] + dists(DIM, BRIGHT) + TINY + ['--out', str(blocker)]) == 1

    def test_missing_directory_exits_with_one(self, tmp_path):
        argv = ['probe', '--dist', f'a=dir:{tmp_path / "nowhere"}', '--dist', f'b=dir:{tmp_path / "nowhere"}']
        assert main(argv + ['--out', str(tmp_path / 'out')]) == 1

    def test_synth_then_directory_probe_matches_in_memory_probe(self, tmp_path):
        sizes = ['--train-samples', '60', '--heldout-samples', '40']
        assert main(['synth', '--seed', '5', '--out', str(tmp_path)] + dists(DIM, BRIGHT) + sizes) == 0
        root = tmp_path / 'synth-seed5'
        assert len(os.listdir(root / 'dim' / 'train')) == 60
        assert (root / 'effective-config.txt').is_file()
        model = ['--seed', '5', '--epochs', '2', '--model', 'mlp', '--hidden-width', '8']
        on_disk = ['probe', '--dist', f'dim=dir:{root / "dim"}', '--dist', f'bright=dir:{root / "bright"}']
        assert main(on_disk + model + ['--out', str(tmp_path / 'disk')]) == 0
        assert main(['probe'] + dists(DIM, BRIGHT) + sizes + model + ['--out', str(tmp_path / 'memory')]) == 0
        disk = load_report(str(tmp_path / 'disk' / 'probe-seed5' / 'report.json'))
        memory = load_report(str(tmp_path / 'memory' / 'probe-seed5' / 'report.json'))
        assert [p['report'] for p in disk['points']] == [p['report'] for p in memory['points']]

    def test_synth_png_format(self, tmp_path):
        assert main(['synth', '--format', 'png', '--train-samples', '3', '--heldout-samples', '2', '--out',
                     str(tmp_path)] + dists(DIM)) == 0
        assert sorted(os.listdir(tmp_path / 'synth-seed0' / 'dim' / 'val')) == ['00000.png', '00001.png']
