"""Self-consuming generator loops.

Generation 0 fits the toy generator to real data; generation g ≥ 1 fits to samples of
generation g−1 (replace) or to a mixture holding a fraction ρ of real samples (augment).
"""
import logging
from dataclasses import replace
from typing import List, Optional, Tuple

import numpy as np

from classifier_distance_probes.classifier import ModelSpec, TrainConfig, ClassDataset, train
from classifier_distance_probes.numerics import RngStream, fit_gaussian, frechet_gaussian_distance
from classifier_distance_probes.synth.data import AutophagyConfig, GenerationRecord, NoiseSchedule
from classifier_distance_probes.synth.diffusion import train_denoiser, ancestral_sample
from classifier_distance_probes.shared.errors import DataError

logger = logging.getLogger(__name__)

DEGENERATE_EIGENVALUE = 1e-9
REGULARIZATION = 1e-6


class GaussianFitGenerator:
    """Per-class Gaussian fit of flattened samples; sampling draws multinomial class counts.

    ``temperature`` scales every covariance at sampling time (values below 1 give an
    over-concentrated, imperfect generator).
    """

    def __init__(self, weights, means, covs, sample_shape: Tuple[int, ...], temperature: float = 1.0,
                 clip_unit: bool = False, regularized: bool = False):
        self.weights = np.asarray(weights, dtype=np.float64)
        self.means = np.asarray(means, dtype=np.float64)
        self.covs = np.asarray(covs, dtype=np.float64)
        self.sample_shape = tuple(sample_shape)
        self.temperature = temperature
        self.clip_unit = clip_unit
        self.regularized = regularized

    @classmethod
    def fit(cls, samples, labels=None, num_classes: Optional[int] = None, temperature: float = 1.0,
            clip_unit: bool = False) -> 'GaussianFitGenerator':
        """Fit one Gaussian per label value (a single Gaussian when labels is None).

        Covariances with an eigenvalue below 1e-9 get +1e-6·I and mark the generator regularized.
        """
        samples = np.asarray(samples, dtype=np.float64)
        if samples.shape[0] < 1:
            raise DataError('Cannot fit a generator to an empty sample')
        flat = samples.reshape(samples.shape[0], -1)
        labels = np.zeros(flat.shape[0], dtype=np.int64) if labels is None else np.asarray(labels, dtype=np.int64)
        classes = num_classes if num_classes is not None else int(labels.max()) + 1
        dimension = flat.shape[1]
        weights, means, covs = [], [], []
        regularized = False
        for label in range(classes):
            members = flat[labels == label]
            weights.append(members.shape[0] / flat.shape[0])
            if members.shape[0] == 0:
                means.append(np.zeros(dimension))
                covs.append(REGULARIZATION * np.eye(dimension))
                continue
            if members.shape[0] == 1:
                mean, cov = members[0], np.zeros((dimension, dimension))
            else:
                mean, cov = fit_gaussian(members)
            smallest = float(np.linalg.eigvalsh(cov).min())
            if smallest < DEGENERATE_EIGENVALUE:
                logger.warning(f'Class {label} covariance is degenerate (smallest eigenvalue {smallest:.3e}); '
                               f'adding {REGULARIZATION:g}·I')
                cov = cov + REGULARIZATION * np.eye(dimension)
                regularized = True
            means.append(mean)
            covs.append(cov)
        return cls(weights, means, covs, samples.shape[1:], temperature, clip_unit, regularized)

    def sample(self, n: int, rng: RngStream) -> Tuple[np.ndarray, np.ndarray]:
        """n samples (reshaped to the fitted sample shape) and their class labels, ordered by class."""
        counts = rng.multinomial(n, self.weights)
        chunks, labels = [], []
        for label, count in enumerate(counts):
            if count == 0:
                continue
            chunks.append(rng.multivariate_normal(self.means[label], self.temperature * self.covs[label],
                                                  size=int(count)))
            labels.append(np.full(int(count), label, dtype=np.int64))
        samples = np.concatenate(chunks, axis=0)
        if self.clip_unit:
            samples = np.clip(samples, 0.0, 1.0)
        return samples.reshape((n, *self.sample_shape)), np.concatenate(labels)

    def record_fields(self) -> dict:
        return {
            'regularized': self.regularized,
            'generator_weights': self.weights.tolist(),
            'generator_means': self.means.tolist(),
            'generator_covs': self.covs.tolist(),
        }


def frechet_to_reference(samples, reference) -> float:
    mean_a, cov_a = fit_gaussian(np.asarray(samples).reshape(len(samples), -1))
    mean_b, cov_b = fit_gaussian(np.asarray(reference).reshape(len(reference), -1))
    return frechet_gaussian_distance(mean_a, cov_a, mean_b, cov_b)


def default_probe(dimension: int) -> Tuple[ModelSpec, TrainConfig]:
    spec = ModelSpec(family='mlp', input_shape=[dimension], num_classes=2, hidden_width=16)
    config = TrainConfig(epochs=20, batch_size=32, learning_rate=0.05, label_smoothing=0.0)
    return spec, config


def autophagy_loop(real_train, real_heldout, config: AutophagyConfig, rng: RngStream, real_labels=None,
                   probe_spec: Optional[ModelSpec] = None, probe_config: Optional[TrainConfig] = None,
                   schedule: Optional[NoiseSchedule] = None) -> List[GenerationRecord]:
    """Run generations 0…G−1 and record drift against fixed real held-out data.

    Each record holds the Fréchet distance between ``eval_samples`` fresh generator samples and
    ``real_heldout``, and the accuracy of a probe separating generated samples from real ones
    (the first ``probe_samples + probe_heldout`` rows of ``real_heldout``).

    Raises:
        DataError: If the real sets are too small for the requested counts
    """
    real_train = np.asarray(real_train, dtype=np.float64)
    real_heldout = np.asarray(real_heldout, dtype=np.float64)
    if real_heldout.shape[0] < config.probe_samples + config.probe_heldout:
        raise DataError(f'Real held-out set has {real_heldout.shape[0]} samples, probes need '
                        f'{config.probe_samples + config.probe_heldout}')
    if real_train.shape[0] < 2:
        raise DataError('Autophagy needs at least 2 real training samples')
    dimension = int(np.prod(real_train.shape[1:]))
    if probe_spec is None or probe_config is None:
        probe_spec, probe_config = default_probe(dimension)
    schedule = schedule or NoiseSchedule()
    num_classes = None if real_labels is None else int(np.max(real_labels)) + 1
    real_probe_train = real_heldout[:config.probe_samples]
    real_probe_heldout = real_heldout[config.probe_samples:config.probe_samples + config.probe_heldout]

    training, training_labels, real_count = real_train, real_labels, real_train.shape[0]
    records = []
    for generation in range(config.generations):
        stream = rng.child('generation', generation)
        if config.generator == 'gaussian_fit':
            generator = GaussianFitGenerator.fit(training, training_labels, num_classes=num_classes)

            def draw(n, purpose):
                return generator.sample(n, stream.child(purpose))
            parameters = generator.record_fields()
        else:
            denoiser = train_denoiser(training, schedule, config.denoiser, stream.child('fit'))

            def draw(n, purpose):
                return ancestral_sample(denoiser, schedule, n, stream.child(purpose)), None
            parameters = {}

        evaluation, _ = draw(config.eval_samples, 'eval')
        distance = frechet_to_reference(evaluation, real_heldout)
        probe_samples, _ = draw(config.probe_samples + config.probe_heldout, 'probe')
        datasets = [
            ClassDataset('real', real_probe_train.reshape(len(real_probe_train), -1),
                         real_probe_heldout.reshape(len(real_probe_heldout), -1)),
            ClassDataset(f'generation{generation}', probe_samples[:config.probe_samples].reshape(config.probe_samples, -1),
                         probe_samples[config.probe_samples:].reshape(config.probe_heldout, -1)),
        ]
        probe_run = replace(probe_config, stream_id=stream.child('probe-train').stream_id)
        _, report = train(probe_spec, datasets, probe_run, preprocessing=f'autophagy:{config.describe()}')
        records.append(GenerationRecord(generation=generation, frechet_distance=distance,
                                        probe_accuracy=report.accuracy, training_size=int(training.shape[0]),
                                        real_in_training=int(real_count), probe=report, **parameters))
        logger.info(f'generation {generation} ({config.describe()}): Fréchet {distance:.4f}, '
                    f'probe accuracy {report.accuracy:.4f}')

        if generation + 1 == config.generations:
            break
        produced, produced_labels = draw(config.samples_per_generation, 'next')
        if config.policy == 'replace':
            training, training_labels, real_count = produced, produced_labels, 0
        else:
            training, training_labels, real_count = _augment_with_real(
                produced, produced_labels, real_train, real_labels, config.real_fraction, stream.child('mix'))
    return records


def _augment_with_real(produced, produced_labels, real, real_labels, real_fraction: float, rng: RngStream):
    total = produced.shape[0]
    real_count = min(real.shape[0], int(round(real_fraction * total)))
    real_index = rng.permutation(real.shape[0])[:real_count]
    produced_index = rng.permutation(total)[:total - real_count]
    mixed = np.concatenate([real[real_index], produced[produced_index]], axis=0)
    if real_labels is None or produced_labels is None:
        return mixed, None, real_count
    labels = np.concatenate([np.asarray(real_labels)[real_index], produced_labels[produced_index]])
    return mixed, labels, real_count
