"""Seed-majority acceptance suites at desk scale. Run with ``pytest -m acceptance``."""
import json
import math

import pytest

from classifier_distance_probes.classifier import TrainConfig
from classifier_distance_probes.cli import main
from classifier_distance_probes.probes import (ExperimentSpec, DistributionSource, run_experiment, frechet_compare,
                                               load_report)
from classifier_distance_probes.spectral import FilterSpec
from classifier_distance_probes.synth import AutophagyConfig, DenoiserConfig, NoiseSchedule, parse_distribution

pytestmark = pytest.mark.acceptance


def source(name, text):
    return DistributionSource.synthetic(parse_distribution(name, text))


def experiment(kind, sources, train=None, **overrides):
    settings = dict(kind=kind, sources=sources, model_family='mlp', hidden_width=32,
                    train=train or TrainConfig(epochs=15, label_smoothing=0.0), train_samples=500,
                    heldout_samples=500)
    settings.update(overrides)
    return ExperimentSpec(**settings)


def at_least(flags, fraction):
    return sum(flags) >= math.ceil(fraction * len(flags))


class TestSameDistributionNull:

    @pytest.mark.parametrize('text', [
        'bernoulli:theta=0.3,shape=1x4x4',
        'spectral:shape=8x8,bands=0-4@1',
        'point2d:weights=0.5/0.5,means=-1x0/1x0,covs=0.2/0.2',
    ])
    def test_chance_accuracy(self, text):
        spec = experiment('same_dist', [source('null', text)], train=TrainConfig(epochs=10, label_smoothing=0.0),
                          train_samples=300, heldout_samples=1000, trials=20)
        bundle = run_experiment(spec)
        accuracies = [point.report.accuracy for point in bundle.points]
        assert len(accuracies) == 20
        assert at_least([0.45 <= a <= 0.55 for a in accuracies], 0.9), accuracies


class TestDivergenceOracle:

    @pytest.mark.parametrize('shape', ['1x1x1', '1x2x2', '1x4x4'])
    @pytest.mark.parametrize('gap', [0.1, 0.4, 0.9])
    def test_probe_tracks_exact_divergences(self, shape, gap):
        low, high = 0.5 - gap / 2, 0.5 + gap / 2
        sources = [source('low', f'bernoulli:theta={low:g},shape={shape}'),
                   source('high', f'bernoulli:theta={high:g},shape={shape}')]
        spec = experiment('probe', sources, model_family='logistic',
                          train=TrainConfig(epochs=30, label_smoothing=0.0), train_samples=5000,
                          heldout_samples=5000)
        bundle = run_experiment(spec)
        report = bundle.points[0].report
        oracle = bundle.oracle
        assert abs(report.accuracy - oracle['bayes_accuracy']) <= 0.03
        assert abs(report.divergence.jsd_estimate - oracle['exact_jsd']) <= 0.05
        assert report.divergence.jsd_estimate <= oracle['exact_jsd'] + 0.01
        assert report.divergence.tv_lower <= oracle['exact_tv'] + 0.03


class TestFrequencyLocalization:

    def test_only_the_differing_band_separates(self):
        sources = [source('full', 'spectral:shape=32x32,bands=0-16@1'),
                   source('notched', 'spectral:shape=32x32,bands=0-7@1/13-16@1')]
        filters = [FilterSpec(kind='bandpass', band_low=8, band_high=12), FilterSpec(kind='lowpass', threshold=7)]
        spec = experiment('freq_sweep', sources, hidden_width=64, train_samples=400, filters=filters, trials=5)
        bundle = run_experiment(spec)
        in_band = [p.report.accuracy for p in bundle.points if p.abscissa == 0.0]
        out_of_band = [p.report.accuracy for p in bundle.points if p.abscissa == 1.0]
        assert len(in_band) == len(out_of_band) == 5
        assert all(a >= 0.9 for a in in_band), in_band
        assert all(a <= 0.6 for a in out_of_band), out_of_band


class TestCropSweep:

    def test_global_difference_survives_small_crops(self):
        sources = [source('dim', 'bernoulli:theta=0.2,shape=1x16x16'),
                   source('bright', 'bernoulli:theta=0.8,shape=1x16x16')]
        bundle = run_experiment(experiment('crop_sweep', sources, crop_sizes=[4, 8, 16]))
        assert all(p.report.accuracy >= 0.95 for p in bundle.points)

    def test_local_difference_needs_the_center(self):
        sources = [source('on', 'bernoulli:theta=0.5,shape=1x16x16,regions=6x6x4x4x0.9'),
                   source('off', 'bernoulli:theta=0.5,shape=1x16x16,regions=6x6x4x4x0.1')]
        center = run_experiment(experiment('crop_sweep', sources, crop_sizes=[4]))
        random = run_experiment(experiment('crop_sweep', sources, crop_sizes=[4], crop_mode='random'))
        assert len(random.points) == 4
        assert center.mean_of('center', 4.0) - random.mean_of('random', 4.0) >= 0.1


class TestScaling:

    def test_accuracy_grows_with_training_samples(self):
        sources = [source('a', 'bernoulli:theta=0.4,shape=1x4x4'), source('b', 'bernoulli:theta=0.6,shape=1x4x4')]
        spec = experiment('scale_curve', sources, train=TrainConfig(epochs=20, label_smoothing=0.0),
                          sample_sizes=[50, 200, 1000], heldout_samples=1000, trials=5)
        bundle = run_experiment(spec)
        means = [bundle.mean_of('samples', float(n)) for n in (50, 200, 1000)]
        assert all(later >= earlier - 0.02 for earlier, later in zip(means, means[1:])), means


class TestReplaceVersusAugment:

    def setup_class(self):
        self.sources = [source('pair', 'point2d:weights=0.5/0.5,means=-2x0/2x0,covs=0.3/0.3'),
                        source('single', 'point2d:weights=1,means=0x0,covs=0.3')]

    def test_augment_beats_replace(self):
        bundle = run_experiment(experiment('mix_eval', self.sources, alphas=[0.5, 1.0], heldout_samples=1000,
                                           trials=10))
        for alpha in (0.5, 1.0):
            replace = {p.trial: p.report.accuracy for p in bundle.series('replace') if p.abscissa == alpha}
            augment = {p.trial: p.report.accuracy for p in bundle.series('augment') if p.abscissa == alpha}
            assert at_least([augment[t] >= replace[t] for t in range(10)], 0.8), (alpha, replace, augment)

    def test_zero_alpha_is_the_baseline(self):
        bundle = run_experiment(experiment('mix_eval', self.sources, alphas=[0.0]))
        documents = {p.label: json.loads(p.report.to_json()) for p in bundle.points}
        for document in documents.values():
            document.pop('wall_clock_seconds')
        assert documents['replace'] == documents['baseline'] == documents['augment']


class TestAutophagyDrift:

    def drift(self, seed, policy):
        autophagy = AutophagyConfig(generations=6, samples_per_generation=20, policy=policy, real_fraction=0.5,
                                    eval_samples=2000, probe_samples=100, probe_heldout=200)
        spec = experiment('mad', [source('real', 'point2d:weights=0.5/0.5,means=-2x0/2x0,covs=0.3/0.3')],
                          model_family='auto', train_samples=200, heldout_samples=300, autophagy=autophagy,
                          master_seed=seed)
        records = run_experiment(spec).records
        return records[0].frechet_distance, records[5].frechet_distance

    def test_replace_drifts_and_augment_drifts_less(self):
        replace = [self.drift(seed, 'replace') for seed in range(10)]
        augment = [self.drift(seed, 'augment') for seed in range(10)]
        assert at_least([last > first for first, last in replace], 0.8), replace
        assert at_least([a[1] < r[1] for a, r in zip(augment, replace)], 0.8), (replace, augment)


class TestGuidance:

    def test_guidance_lowers_the_fake_rate(self):
        fake_rates = []
        for seed in range(10):
            spec = experiment('guide_demo', [source('real', 'point2d:weights=0.5/0.5,means=-1.5x0/1.5x0,'
                                                             'covs=0.05/0.05')],
                              hidden_width=64, train=TrainConfig(epochs=10, label_smoothing=0.0),
                              train_samples=400, heldout_samples=400, generated_samples=1000,
                              schedule=NoiseSchedule(steps=50),
                              denoiser=DenoiserConfig(hidden_width=64, iterations=400),
                              guidance_scales=[0.0, 1.0], master_seed=seed)
            points = run_experiment(spec).points
            fake_rates.append((points[0].extras['fake_rate'], points[1].extras['fake_rate']))
        assert at_least([guided < unguided for unguided, guided in fake_rates], 0.8), fake_rates


class TestMomentMatchedCounterexample:

    def test_frechet_blind_probe_not(self):
        sources = [source('bimodal', 'point2d:weights=0.5/0.5,means=-2x0/2x0,covs=0.1/0.1'),
                   source('gaussian', 'point2d:weights=1,means=0x0,covs=4.1x0x0x0.1')]
        distance, report = frechet_compare(experiment('frechet_compare', sources, heldout_samples=4000))
        assert distance < 0.05
        assert report.accuracy >= 0.7


class TestDeterminism:

    TINY = ['--seed', '4', '--train-samples', '40', '--heldout-samples', '40', '--epochs', '2', '--model', 'mlp',
            '--hidden-width', '8']
    IMAGES = ['--dist', 'a=synth:bernoulli:theta=0.3,shape=1x4x4', '--dist', 'b=synth:bernoulli:theta=0.7,shape=1x4x4']
    POINTS = ['--dist', 'p=synth:point2d:weights=0.5/0.5,means=-2x0/2x0,covs=0.3/0.3',
              '--dist', 'q=synth:point2d:weights=1,means=0x0,covs=1']

    @pytest.mark.parametrize('argv', [
        ['probe'] + IMAGES,
        ['same-dist'] + IMAGES[:2],
        ['multiway'] + IMAGES + ['--dist', 'c=synth:bernoulli:theta=0.5,shape=1x4x4'],
        ['scale-curve', '--sample-sizes', '10,40'] + IMAGES,
        ['freq-sweep', '--filter', 'low:1', '--filter', 'band:1-2'] + IMAGES,
        ['crop-sweep', '--crop-sizes', '2,4', '--crop-mode', 'random'] + IMAGES,
        ['mix-eval', '--alphas', '0.5,2'] + IMAGES,
        ['family'] + IMAGES,
        ['frechet', '--features', 'classifier_penultimate'] + POINTS,
        ['mad-sim', '--generations', '3', '--samples-per-generation', '20', '--eval-samples', '40',
         '--probe-samples', '10', '--probe-heldout', '20'] + POINTS[:2],
        ['guide-demo', '--steps', '10', '--denoiser-iterations', '20', '--denoiser-width', '8',
         '--generated-samples', '20'] + POINTS[:2],
    ])
    def test_rerun_reproduces_report(self, argv, tmp_path):
        out = ['--out', str(tmp_path), '--jobs', '2']
        report = tmp_path / f'{argv[0]}-seed4' / 'report.json'
        assert main(argv + self.TINY + out) == 0
        first = load_report(str(report))
        first_csv = (tmp_path / f'{argv[0]}-seed4' / 'curve.csv').read_bytes()
        assert main(argv + self.TINY + out) == 0
        assert load_report(str(report)) == first
        assert (tmp_path / f'{argv[0]}-seed4' / 'curve.csv').read_bytes() == first_csv
