"""Experiment harness: probes, sanity checks, ladders and the generator diagnostics.

Seed policy: the data of distribution ``name`` for ``split`` in trial ``trial`` come from stream
``stream_id_for('data', name, split, trial)`` under the master seed, so held-out sets are shared
by every ladder point. Each trained probe uses
``stream_id_for('point', chain, train_counts, trial)`` where ``chain`` canonically describes the
point's preprocessing; identity transforms (a full-size crop, an all-pass filter, α = 0 mixing)
describe as the plain chain and therefore reproduce the plain probe exactly.
"""
import logging
import math
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from classifier_distance_probes.classifier import (ModelSpec, ProbeReport, ClassDataset, train, predict_logits,
                                                   extract_features)
from classifier_distance_probes.imaging import (Image, load_split, write_split, stack_images, center_crop_pixels,
                                                random_crop_pixels, resize_bilinear_pixels)
from classifier_distance_probes.numerics import RngStream, stream_id_for, frechet_gaussian_distance, fit_gaussian
from classifier_distance_probes.probes.data import (ExperimentSpec, DistributionSource, MixSpec, CurvePoint,
                                                    SummaryStat, ReportBundle, MIX_MODES)
from classifier_distance_probes.spectral import FilterSpec, filter_batch, make_mask
from classifier_distance_probes.synth import (sample, sample_labeled, oracle_for, exact_divergences, bayes_accuracy,
                                              monte_carlo_divergences, autophagy_loop, default_probe,
                                              GaussianFitGenerator, train_denoiser, ancestral_sample,
                                              train_noised_classifier, GuidanceConfig, GENERATED)
from classifier_distance_probes.shared.errors import DataError, SpecError

logger = logging.getLogger(__name__)

RANDOM_CROP_TRIALS = 4
OVERGUIDANCE_MARGIN = 0.05
ORACLE_SAMPLES = 20000
Transform = Callable[[np.ndarray, str, str], np.ndarray]


class ProbeHarness:
    """Runs the experiment described by an :class:`ExperimentSpec`.

    Ladder points are independent jobs run on a thread pool of ``jobs`` workers; the assembled
    bundle orders them by (abscissa, trial, label). Loaded and sampled data are cached per
    (distribution, split, trial, count) and shared across points.

    Args:
        spec: The experiment to run
        jobs: Maximum number of ladder points trained concurrently
    """

    def __init__(self, spec: ExperimentSpec, jobs: int = 1):
        if jobs < 1:
            raise SpecError(f'jobs must be at least 1, got {jobs}')
        self.spec = spec
        self.jobs = jobs
        self._cache: Dict[Tuple, np.ndarray] = {}
        self._lock = threading.Lock()

    # data

    def data_stream(self, name: str, split: str, trial: int) -> RngStream:
        return RngStream(self.spec.master_seed, stream_id_for('data', name, split, trial))

    def _default_count(self, split: str) -> Optional[int]:
        return self.spec.train_samples if split == 'train' else self.spec.heldout_samples

    def _preprocess(self, data: np.ndarray) -> np.ndarray:
        if data.ndim != 4:
            return data
        if self.spec.resize_shorter is not None:
            height, width = data.shape[-2:]
            size = self.spec.resize_shorter
            if height <= width:
                shape = size, max(1, int(round(width * size / height)))
            else:
                shape = max(1, int(round(height * size / width))), size
            data = np.clip(resize_bilinear_pixels(data, *shape), 0.0, 1.0)
        if self.spec.center_crop is not None:
            data = center_crop_pixels(data, self.spec.center_crop)
        return data

    def class_split(self, source: DistributionSource, split: str, trial: int = 0,
                    count: Optional[int] = None) -> np.ndarray:
        """Samples of one distribution split after the experiment's preprocessing chain.

        Raises:
            DataError: If a directory source holds fewer samples than requested
        """
        count = self._default_count(split) if count is None else count
        key = (source.name, split, trial if source.kind == 'synth' else 0, count)
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        if source.kind == 'synth':
            if count is None:
                raise DataError(f"Synthetic source '{source.name}' needs an explicit {split} sample count")
            data = sample(source.spec, count, self.data_stream(source.name, split, trial))
        else:
            data = self._directory_split(source, split)
            if count is not None:
                if count > data.shape[0]:
                    raise DataError(f"Distribution '{source.name}' has {data.shape[0]} {split} samples, "
                                    f"{count} requested")
                data = data[:count]
        data = self._preprocess(data)
        data.setflags(write=False)
        with self._lock:
            self._cache[key] = data
        return data

    def _directory_split(self, source: DistributionSource, split: str) -> np.ndarray:
        directory_split = 'val' if split == 'heldout' else split
        if os.path.isdir(os.path.join(source.path, directory_split)):
            root, name = os.path.dirname(os.path.normpath(source.path)), os.path.basename(os.path.normpath(source.path))
        else:
            root, name = source.path, source.name
        return stack_images(load_split(root, name, directory_split))

    def datasets(self, sources: Sequence[DistributionSource], trial: int, train_count: Optional[int] = None,
                 transform: Optional[Transform] = None) -> List[ClassDataset]:
        result = []
        for source in sources:
            train_split = self.class_split(source, 'train', trial, count=train_count)
            heldout_split = self.class_split(source, 'heldout', trial)
            if transform is not None:
                train_split = transform(train_split, source.name, 'train')
                heldout_split = transform(heldout_split, source.name, 'heldout')
            result.append(ClassDataset(source.name, train_split, heldout_split))
        return result

    # points

    def chain(self, step: str = 'identity') -> str:
        base = self.spec.base_chain()
        if step == 'identity':
            return base
        return step if base == 'identity' else f'{base}+{step}'

    def model_spec(self, sample_shape, num_classes: int, family: Optional[str] = None) -> ModelSpec:
        family = family or self.spec.model_family
        shape = list(sample_shape)
        if family == 'auto':
            family = 'smallconv' if len(shape) == 3 else 'mlp'
        crop = self.spec.train.augmentation.crop_size
        if crop is not None and len(shape) == 3:
            shape = [shape[0], crop, crop]
        return ModelSpec(family=family, input_shape=shape, num_classes=num_classes,
                         hidden_width=self.spec.hidden_width, conv_channels=list(self.spec.conv_channels))

    def train_point(self, datasets: List[ClassDataset], chain: str, trial: int,
                    family: Optional[str] = None) -> Tuple[ModelSpec, object, ProbeReport]:
        counts = tuple(int(d.train.shape[0]) for d in datasets)
        stream_id = stream_id_for('point', chain, counts, trial)
        config = replace(self.spec.train, seed=self.spec.master_seed, stream_id=stream_id)
        model = self.model_spec(datasets[0].sample_shape, len(datasets), family)
        params, report = train(model, datasets, config, preprocessing=chain)
        return model, params, report

    def probe_point(self, datasets: List[ClassDataset], chain: str, trial: int, abscissa: float, label: str,
                    family: Optional[str] = None) -> CurvePoint:
        _, _, report = self.train_point(datasets, chain, trial, family)
        return CurvePoint(abscissa=float(abscissa), label=label, trial=trial, seed=self.spec.master_seed,
                          stream_id=report.stream_id, report=report)

    def execute(self, jobs: Sequence[Callable[[], object]]) -> List:
        if self.jobs == 1 or len(jobs) <= 1:
            results = [job() for job in jobs]
        else:
            with ThreadPoolExecutor(max_workers=self.jobs) as executor:
                results = list(executor.map(lambda job: job(), jobs))
        flat = []
        for result in results:
            flat.extend(result if isinstance(result, list) else [result])
        return sorted(flat, key=lambda p: (p.abscissa, p.trial, p.label))

    def bundle(self, points: List[CurvePoint], started: float, **extra) -> ReportBundle:
        bundle = ReportBundle(experiment=self.spec, points=points, summary=summarize(points), **extra)
        bundle.wall_clock_seconds = time.perf_counter() - started
        logger.info(f'{self.spec.kind}: {len(points)} points in {bundle.wall_clock_seconds:.1f}s')
        return bundle

    def finite_oracle(self, sources: Sequence[DistributionSource]) -> Dict[str, float]:
        """Exact TV/JSD/Bayes accuracy when both sources are small synthetic Bernoulli images."""
        if len(sources) != 2 or any(s.kind != 'synth' for s in sources):
            return {}
        if self.spec.base_chain() != 'identity':
            return {}
        p, q = oracle_for(sources[0].spec), oracle_for(sources[1].spec)
        if p.support != 'finite' or q.support != 'finite' or p.probabilities.shape != q.probabilities.shape:
            return {}
        tv, jsd = exact_divergences(p, q)
        return {'exact_tv': tv, 'exact_jsd': jsd, 'bayes_accuracy': bayes_accuracy(p, q)}

    # experiments

    def run_probe(self, trial: int = 0) -> ProbeReport:
        """Train one classifier on all sources; binary probes carry TV and JSD estimates."""
        return self.probe_point(self.datasets(self.spec.sources, trial), self.chain(), trial, 0, 'probe').report

    def probe(self) -> ReportBundle:
        started = time.perf_counter()
        label = 'multiway' if self.spec.kind == 'multiway' else 'probe'
        jobs = [lambda t=t: self.probe_point(self.datasets(self.spec.sources, t), self.chain(), t,
                                             self.spec.train_samples or 0, label)
                for t in range(self.spec.trials)]
        return self.bundle(self.execute(jobs), started, oracle=self.finite_oracle(self.spec.sources))

    def multiway_probe(self, trial: int = 0) -> ProbeReport:
        if len(self.spec.sources) < 3:
            raise SpecError(f'A multi-way probe needs at least 3 distributions, got {len(self.spec.sources)}')
        return self.run_probe(trial)

    def same_dist(self) -> ReportBundle:
        """Probe the first source against an independent sample of itself."""
        started = time.perf_counter()
        source = self.spec.sources[0]

        def point(trial: int) -> CurvePoint:
            if source.kind == 'synth':
                copies = [replace(source, name=f'{source.name}#{i}', spec=replace(source.spec, name=f'{source.name}#{i}'))
                          for i in (1, 2)]
                datasets = self.datasets(copies, trial)
            else:
                train_split = self.class_split(source, 'train', trial)
                heldout_split = self.class_split(source, 'heldout', trial)
                datasets = [ClassDataset(f'{source.name}#{i + 1}', train_split[i::2], heldout_split[i::2])
                            for i in (0, 1)]
            return self.probe_point(datasets, self.chain('same_dist'), trial, 0, 'same_dist')

        points = self.execute([lambda t=t: point(t) for t in range(self.spec.trials)])
        return self.bundle(points, started, oracle={'bayes_accuracy': 0.5, 'exact_tv': 0.0, 'exact_jsd': 0.0})

    def scale_curve(self) -> ReportBundle:
        """Independent probes on nested prefixes of one training pool; held-out data fixed."""
        started = time.perf_counter()
        ladder = self.spec.sample_sizes
        if not ladder:
            raise SpecError('scale_curve needs a sample-size ladder')
        pool = max(ladder)

        def point(size: int, trial: int) -> CurvePoint:
            datasets = []
            for source in self.spec.sources:
                train_split = self.class_split(source, 'train', trial, count=pool)[:size]
                datasets.append(ClassDataset(source.name, train_split, self.class_split(source, 'heldout', trial)))
            return self.probe_point(datasets, self.chain(), trial, size, 'samples')

        jobs = [lambda s=s, t=t: point(s, t) for s in ladder for t in range(self.spec.trials)]
        return self.bundle(self.execute(jobs), started, oracle=self.finite_oracle(self.spec.sources))

    def _filter_step(self, spec: FilterSpec, rows: int, cols: int) -> str:
        mask = make_mask(spec, rows, cols)
        return 'identity' if mask.passed == rows * cols else f'filter:{spec.describe()}'

    def freq_sweep(self) -> ReportBundle:
        """Filter every distribution identically, then probe, once per filter in the ladder."""
        started = time.perf_counter()
        if not self.spec.filters:
            raise SpecError('freq_sweep needs at least one filter')
        probe_shape = self.class_split(self.spec.sources[0], 'heldout', 0).shape

        def transform_for(spec: FilterSpec) -> Transform:
            def transform(data: np.ndarray, name: str, split: str) -> np.ndarray:
                filtered = filter_batch(data, spec)
                return np.clip(filtered, 0.0, 1.0) if self.spec.clamp_filtered else filtered
            return transform

        def point(index: int, spec: FilterSpec, trial: int) -> CurvePoint:
            step = self._filter_step(spec, *probe_shape[-2:])
            transform = None if step == 'identity' else transform_for(spec)
            datasets = self.datasets(self.spec.sources, trial, transform=transform)
            return self.probe_point(datasets, self.chain(step), trial, index, spec.describe())

        jobs = [lambda i=i, f=f, t=t: point(i, f, t)
                for i, f in enumerate(self.spec.filters) for t in range(self.spec.trials)]
        return self.bundle(self.execute(jobs), started)

    def crop_sweep(self) -> ReportBundle:
        """Centre crops (deterministic) or random crops (at least four trials per size) of every sample."""
        started = time.perf_counter()
        if not self.spec.crop_sizes:
            raise SpecError('crop_sweep needs a crop-size ladder')
        mode = self.spec.crop_mode
        trials = self.spec.trials if mode == 'center' else max(self.spec.trials, RANDOM_CROP_TRIALS)
        height, width = self.class_split(self.spec.sources[0], 'heldout', 0).shape[-2:]

        def point(size: int, trial: int) -> CurvePoint:
            def transform(data: np.ndarray, name: str, split: str) -> np.ndarray:
                if mode == 'center':
                    return center_crop_pixels(data, size)
                crop_rng = RngStream(self.spec.master_seed, stream_id_for('crop', name, split, size, trial))
                return random_crop_pixels(data, size, crop_rng)

            full = size == height == width
            step = 'identity' if full else f'{mode}_crop:{size}'
            datasets = self.datasets(self.spec.sources, trial, transform=None if full else transform)
            return self.probe_point(datasets, self.chain(step), trial, size, mode)

        jobs = [lambda s=s, t=t: point(s, t) for s in self.spec.crop_sizes for t in range(trials)]
        return self.bundle(self.execute(jobs), started)

    def mix_eval(self) -> ReportBundle:
        """Replace-vs-augment mixing of generated samples into a labeled real training set.

        The generator is a per-class Gaussian fit of the real training data, sampled at
        ``generator_temperature``. Every point is evaluated on the real held-out sets.
        """
        started = time.perf_counter()
        alphas = self.spec.alphas
        if not alphas:
            raise SpecError('mix_eval needs an alpha ladder')
        sources = self.spec.sources

        def generated_pool(source: DistributionSource, trial: int, count: int) -> np.ndarray:
            real = self.class_split(source, 'train', trial)
            generator = GaussianFitGenerator.fit(real, temperature=self.spec.generator_temperature,
                                                 clip_unit=real.ndim == 4)
            stream = RngStream(self.spec.master_seed, stream_id_for('generated', source.name, trial))
            return generator.sample(count, stream)[0]

        def point(mix: Optional[MixSpec], trial: int) -> CurvePoint:
            datasets = []
            for source in sources:
                real = self.class_split(source, 'train', trial)
                heldout = self.class_split(source, 'heldout', trial)
                if mix is None or mix.alpha == 0.0:
                    training = real
                else:
                    pool = generated_pool(source, trial, int(math.ceil(3.0 * real.shape[0])))
                    count = mix.generated_count(real.shape[0])
                    if mix.mode == 'replace':
                        training = np.concatenate([real[:real.shape[0] - count], pool[:count]], axis=0)
                    else:
                        training = np.concatenate([real, pool[:count]], axis=0)
                datasets.append(ClassDataset(source.name, training, heldout))
            step = 'identity' if mix is None else mix.describe()
            label = 'baseline' if mix is None else mix.mode
            abscissa = 0.0 if mix is None else mix.alpha
            return self.probe_point(datasets, self.chain(step), trial, abscissa, label)

        mixes = [None] + [MixSpec(alpha, mode) for alpha in alphas for mode in MIX_MODES
                          if mode == 'augment' or alpha <= 1.0]
        jobs = [lambda m=m, t=t: point(m, t) for m in mixes for t in range(self.spec.trials)]
        return self.bundle(self.execute(jobs), started)

    def _real_points(self, source: DistributionSource, heldout_count: int):
        if source.kind == 'synth' and source.spec.family == 'point2d_mixture':
            real_train, labels = sample_labeled(source.spec, self.spec.train_samples,
                                                self.data_stream(source.name, 'train', 0))
        else:
            real_train, labels = self.class_split(source, 'train', 0), None
        real_heldout = self.class_split(source, 'heldout', 0, count=heldout_count)
        return real_train, labels, real_heldout

    def mad_probe(self) -> ReportBundle:
        """Autophagy drift per generation: Fréchet distance and probe accuracy against real data."""
        started = time.perf_counter()
        config = self.spec.autophagy
        source = self.spec.sources[0]
        needed = max(self.spec.heldout_samples or 0, config.probe_samples + config.probe_heldout)
        real_train, labels, real_heldout = self._real_points(source, needed)
        dimension = int(np.prod(real_train.shape[1:]))
        if self.spec.model_family == 'auto':
            probe_spec, probe_config = default_probe(dimension)
        else:
            probe_spec = self.model_spec([dimension], 2)
            probe_config = self.spec.train

        def run(trial: int) -> List[CurvePoint]:
            stream = RngStream(self.spec.master_seed, stream_id_for('autophagy', trial))
            records = autophagy_loop(real_train, real_heldout, config, stream, real_labels=labels,
                                     probe_spec=probe_spec, probe_config=probe_config, schedule=self.spec.schedule)
            return [CurvePoint(abscissa=float(r.generation), label=config.describe(), trial=trial,
                               seed=self.spec.master_seed, stream_id=stream.stream_id, report=r.probe,
                               extras={'frechet_distance': r.frechet_distance,
                                       'regularized': float(r.regularized)})
                    for r in records], records

        results = [run(t) for t in range(self.spec.trials)]
        points = sorted([p for pts, _ in results for p in pts], key=lambda p: (p.abscissa, p.trial, p.label))
        records = [r for _, recs in results for r in recs]
        return self.bundle(points, started, records=records)

    def guide_demo(self) -> ReportBundle:
        """Fake-rate of guided samples under a judge trained on real vs unguided samples, per scale."""
        started = time.perf_counter()
        scales = self.spec.guidance_scales or [0.0, 1.0]
        source = self.spec.sources[0]
        n = self.spec.generated_samples
        schedule = self.spec.schedule
        flags = []

        def run(trial: int) -> List[CurvePoint]:
            real_train = self.class_split(source, 'train', trial)
            real_heldout = self.class_split(source, 'heldout', trial)
            flat_train = real_train.reshape(len(real_train), -1)
            flat_heldout = real_heldout.reshape(len(real_heldout), -1)

            def stream(purpose: str) -> RngStream:
                return RngStream(self.spec.master_seed, stream_id_for('guide', purpose, trial))

            denoiser = train_denoiser(flat_train, schedule, self.spec.denoiser, stream('denoiser'))
            classifier_pool = ancestral_sample(denoiser, schedule, len(flat_train), stream('classifier-pool'))
            noised_config = replace(self.spec.train, normalization='none', seed=self.spec.master_seed,
                                    stream_id=stream_id_for('guide', 'noised-classifier', trial))
            classifier = train_noised_classifier(flat_train, classifier_pool, schedule, noised_config,
                                                 stream('noised-data'), hidden_width=self.spec.hidden_width,
                                                 embedding_dim=self.spec.denoiser.embedding_dim)
            judge_pool = ancestral_sample(denoiser, schedule, len(flat_train) + len(flat_heldout), stream('judge-pool'))
            judge_sets = [ClassDataset('real', flat_train, flat_heldout),
                          ClassDataset('generated', judge_pool[:len(flat_train)], judge_pool[len(flat_train):])]
            judge_model, judge_params, judge_report = self.train_point(judge_sets, self.chain('judge'), trial,
                                                                       family='mlp')
            points = []
            for scale in scales:
                guidance = GuidanceConfig(scale, classifier) if scale > 0 else None
                generated = ancestral_sample(denoiser, schedule, n, stream('samples'), guidance=guidance)
                predictions = np.argmax(predict_logits(judge_model, judge_params, generated.reshape(n, -1)), axis=1)
                fake_rate = float(np.mean(predictions == GENERATED))
                points.append(CurvePoint(abscissa=float(scale), label='guided', trial=trial,
                                         seed=self.spec.master_seed, stream_id=stream('samples').stream_id,
                                         extras={'fake_rate': fake_rate, 'judge_accuracy': judge_report.accuracy,
                                                 'guidance_classifier_accuracy': classifier.report.accuracy}))
            best = min(range(len(points)), key=lambda i: points[i].extras['fake_rate'])
            for later in points[best + 1:]:
                if later.extras['fake_rate'] > points[best].extras['fake_rate'] + OVERGUIDANCE_MARGIN:
                    message = (f'trial {trial}: fake-rate rises from {points[best].extras["fake_rate"]:.3f} at '
                               f's={points[best].abscissa:g} to {later.extras["fake_rate"]:.3f} at '
                               f's={later.abscissa:g} (over-guidance)')
                    logger.warning(message)
                    flags.append(message)
            return points

        points = self.execute([lambda t=t: run(t) for t in range(self.spec.trials)])
        return self.bundle(points, started, flags=sorted(flags))

    def frechet_compare(self, trial: int = 0) -> Tuple[float, ProbeReport]:
        """Gaussian Fréchet distance between the held-out sets of two distributions, next to a probe.

        Features are the raw flattened samples or the trained probe's penultimate activations.

        Raises:
            ContractError: If the feature dimension exceeds 64
            UnsupportedError: For penultimate features of a logistic probe
        """
        datasets = self.datasets(self.spec.sources[:2], trial)
        model, params, report = self.train_point(datasets, self.chain(), trial)
        features = []
        for dataset in datasets:
            heldout = dataset.heldout
            if self.spec.feature_source == 'raw':
                features.append(heldout.reshape(len(heldout), -1))
            else:
                features.append(extract_features(model, params, heldout))
        mean_a, cov_a = fit_gaussian(features[0])
        mean_b, cov_b = fit_gaussian(features[1])
        return frechet_gaussian_distance(mean_a, cov_a, mean_b, cov_b), report

    def frechet(self) -> ReportBundle:
        started = time.perf_counter()

        def point(trial: int) -> CurvePoint:
            distance, report = self.frechet_compare(trial)
            return CurvePoint(abscissa=0.0, label=self.spec.feature_source, trial=trial,
                              seed=self.spec.master_seed, stream_id=report.stream_id, report=report,
                              extras={'frechet_distance': distance})

        points = self.execute([lambda t=t: point(t) for t in range(self.spec.trials)])
        return self.bundle(points, started, oracle=self.continuous_oracle(self.spec.sources[:2]))

    def continuous_oracle(self, sources: Sequence[DistributionSource]) -> Dict[str, float]:
        oracle = self.finite_oracle(sources)
        if oracle or any(s.kind != 'synth' or s.spec.family != 'point2d_mixture' for s in sources):
            return oracle
        p, q = oracle_for(sources[0].spec), oracle_for(sources[1].spec)
        stream = RngStream(self.spec.master_seed, stream_id_for('oracle', sources[0].name, sources[1].name))
        tv, jsd = monte_carlo_divergences(p, q, ORACLE_SAMPLES, stream)
        return {'monte_carlo_tv': tv, 'monte_carlo_jsd': jsd, 'monte_carlo_bayes_accuracy': 0.5 * (1.0 + tv)}

    def family_sweep(self) -> ReportBundle:
        """The same pair probed by every model family in ``families`` (all families when empty)."""
        started = time.perf_counter()
        families = self.spec.families or ['logistic', 'mlp', 'smallconv']
        sample_rank = len(self.class_split(self.spec.sources[0], 'heldout', 0).shape) - 1
        if sample_rank != 3:
            families = [f for f in families if f != 'smallconv']
        jobs = [lambda i=i, f=f, t=t: self.probe_point(self.datasets(self.spec.sources, t), self.chain(), t, i, f,
                                                       family=f)
                for i, f in enumerate(families) for t in range(self.spec.trials)]
        return self.bundle(self.execute(jobs), started, oracle=self.finite_oracle(self.spec.sources))


def summarize(points: Sequence[CurvePoint]) -> List[SummaryStat]:
    """Mean and sample standard deviation per (label, abscissa) of accuracy and every extra metric."""
    groups: Dict[Tuple[str, float], List[CurvePoint]] = {}
    for point in points:
        groups.setdefault((point.label, point.abscissa), []).append(point)
    stats = []
    for (label, abscissa), members in sorted(groups.items(), key=lambda item: (item[0][1], item[0][0])):
        metrics: Dict[str, List[float]] = {}
        for member in members:
            if member.report is not None:
                metrics.setdefault('accuracy', []).append(member.report.accuracy)
                if member.report.divergence is not None:
                    metrics.setdefault('jsd_estimate', []).append(member.report.divergence.jsd_estimate)
            for key, value in member.extras.items():
                metrics.setdefault(key, []).append(value)
        for metric, values in sorted(metrics.items()):
            sd = float(np.std(values, ddof=1)) if len(values) > 1 else 0.0
            stats.append(SummaryStat(label=label, abscissa=abscissa, metric=metric, mean=float(np.mean(values)),
                                     sd=sd, count=len(values)))
    return stats


def run_experiment(spec: ExperimentSpec, jobs: int = 1) -> ReportBundle:
    """Run any experiment kind and return its bundle."""
    harness = ProbeHarness(spec, jobs)
    logger.info(f'Running {spec.kind} with master seed {spec.master_seed} over '
                f'{", ".join(s.describe() for s in spec.sources)}')
    runners = {
        'probe': harness.probe,
        'multiway': harness.probe,
        'same_dist': harness.same_dist,
        'scale_curve': harness.scale_curve,
        'freq_sweep': harness.freq_sweep,
        'crop_sweep': harness.crop_sweep,
        'mix_eval': harness.mix_eval,
        'mad': harness.mad_probe,
        'guide_demo': harness.guide_demo,
        'frechet_compare': harness.frechet,
        'family': harness.family_sweep,
    }
    return runners[spec.kind]()


def run_probe(spec: ExperimentSpec, trial: int = 0) -> ProbeReport:
    return ProbeHarness(spec).run_probe(trial)


def multiway_probe(spec: ExperimentSpec, trial: int = 0) -> ProbeReport:
    return ProbeHarness(spec).multiway_probe(trial)


def frechet_compare(spec: ExperimentSpec, trial: int = 0) -> Tuple[float, ProbeReport]:
    return ProbeHarness(spec).frechet_compare(trial)


def materialize(sources: Sequence[DistributionSource], root: str, master_seed: int, train_samples: int,
                heldout_samples: int, fmt: str = 'ntf') -> List[str]:
    """Write synthetic sources as dataset directories ``<root>/<name>/{train,val}``.

    The samples come from the same data streams a probe of these sources draws in trial 0, so a
    directory probe over the written files reproduces the in-memory probe (exactly for NTF).

    Returns:
        list: The distribution directories written
    """
    written = []
    for source in sources:
        if source.kind != 'synth' or not source.spec.is_image:
            raise SpecError(f"Only synthetic image distributions can be materialized, got '{source.describe()}'")
        for split, directory_split, count in (('train', 'train', train_samples), ('heldout', 'val', heldout_samples)):
            stream = RngStream(master_seed, stream_id_for('data', source.name, split, 0))
            data = sample(source.spec, count, stream)
            write_split(root, source.name, directory_split, [Image(pixels) for pixels in data], fmt)
        written.append(os.path.join(root, source.name))
        logger.info(f"Materialized '{source.name}' ({train_samples} train, {heldout_samples} val) as {fmt}")
    return written
