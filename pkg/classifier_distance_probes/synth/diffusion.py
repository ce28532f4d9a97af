"""Toy diffusion: forward noising, the noise-prediction objective, a small mlp ε-predictor, DDPM
ancestral sampling and classifier guidance toward the real class.

Samples are flattened to n-vectors inside the networks; the network input is
[z_t, sinusoidal embedding of t].
"""
import logging
import math
from typing import Optional, Tuple

import numpy as np
from scipy.special import softmax

from classifier_distance_probes.classifier import (ModelSpec, TrainConfig, ClassDataset, init_params,
                                                   forward, forward_cached, backward, input_gradient, train,
                                                   SgdMomentum)
from classifier_distance_probes.numerics import RngStream
from classifier_distance_probes.synth.data import (NoiseSchedule, Denoiser, DenoiserConfig, NoisedClassifier,
                                                   GuidanceConfig, REAL)
from classifier_distance_probes.shared.errors import ContractError, TrainingError

logger = logging.getLogger(__name__)

HELDOUT_FRACTION = 0.2


def timestep_embedding(t, dim: int = 16, max_period: float = 10000.0) -> np.ndarray:
    """Sinusoidal embedding [cos(t·f_i), sin(t·f_i)] with f_i = max_period^(−i/(dim/2))."""
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    half = dim // 2
    freqs = np.exp(-math.log(max_period) * np.arange(half) / half)
    args = t[:, None] * freqs[None, :]
    return np.concatenate([np.cos(args), np.sin(args)], axis=1)


def network_input(z: np.ndarray, t, embedding_dim: int) -> np.ndarray:
    flat = z.reshape(z.shape[0], -1)
    t = np.broadcast_to(np.asarray(t), (flat.shape[0],))
    return np.concatenate([flat, timestep_embedding(t, embedding_dim)], axis=1)


def forward_diffuse(x, t, schedule: NoiseSchedule, rng: RngStream) -> Tuple[np.ndarray, np.ndarray]:
    """z_t = √ᾱ_t·x + √(1−ᾱ_t)·ε with ε ~ N(0, I); t may be a scalar or one timestep per sample.

    t = 0 is the clean-data convention (ᾱ_0 = 1, z = x).

    Returns:
        tuple: (z_t, ε)

    Raises:
        ContractError: If any t lies outside [0, T]
    """
    x = np.asarray(x, dtype=np.float64)
    t = schedule.check_timestep(t)
    alpha_bar = schedule.alpha_bars[t]
    if alpha_bar.ndim == 1:
        alpha_bar = alpha_bar.reshape((-1,) + (1,) * (x.ndim - 1))
    noise = rng.normal(size=x.shape)
    return np.sqrt(alpha_bar) * x + np.sqrt(1.0 - alpha_bar) * noise, noise


def build_denoiser(sample_shape, schedule: NoiseSchedule, config: DenoiserConfig, rng: RngStream) -> Denoiser:
    dimension = int(np.prod(sample_shape))
    if dimension < 2:
        raise ContractError(f'Denoiser samples need at least 2 coordinates, got {dimension}')
    spec = ModelSpec(family='mlp', input_shape=[dimension + config.embedding_dim], num_classes=dimension,
                     hidden_width=config.hidden_width)
    return Denoiser(spec, init_params(spec, rng), tuple(sample_shape), config.embedding_dim, schedule)


def predict_noise(denoiser: Denoiser, z: np.ndarray, t) -> np.ndarray:
    """ε̂(z_t, t) as an N×n array."""
    return forward(denoiser.spec, denoiser.params, network_input(z, t, denoiser.embedding_dim))


def _noised_batch(batch: np.ndarray, schedule: NoiseSchedule, rng: RngStream):
    flat = np.asarray(batch, dtype=np.float64).reshape(batch.shape[0], -1)
    t = rng.integers(1, schedule.steps + 1, size=flat.shape[0])
    z, noise = forward_diffuse(flat, t, schedule, rng)
    return z, t, noise


def noise_prediction_loss(denoiser, batch, schedule: NoiseSchedule, rng: RngStream) -> float:
    """Mean over the batch of ‖ε̂(z_t, t) − ε‖² with t ~ U{1..T}.

    ``denoiser`` is a :class:`Denoiser` or any object with ``predict(z, t)``.
    """
    batch = np.asarray(batch, dtype=np.float64)
    if batch.shape[0] == 0:
        raise ContractError('Noise prediction loss needs a nonempty batch')
    z, t, noise = _noised_batch(batch, schedule, rng)
    predicted = denoiser.predict(z, t) if hasattr(denoiser, 'predict') else predict_noise(denoiser, z, t)
    return float(np.mean(np.sum((predicted - noise) ** 2, axis=1)))


def noise_prediction_loss_and_grad(denoiser: Denoiser, batch, schedule: NoiseSchedule,
                                   rng: RngStream) -> Tuple[float, np.ndarray]:
    z, t, noise = _noised_batch(np.asarray(batch, dtype=np.float64), schedule, rng)
    predicted, cache = forward_cached(denoiser.spec, denoiser.params, network_input(z, t, denoiser.embedding_dim))
    residual = predicted - noise
    loss = float(np.mean(np.sum(residual ** 2, axis=1)))
    gradient, _ = backward(denoiser.spec, denoiser.params, cache, 2.0 * residual / residual.shape[0])
    return loss, gradient


def train_denoiser(samples, schedule: NoiseSchedule, config: DenoiserConfig, rng: RngStream) -> Denoiser:
    """Fit an ε-predictor to ``samples`` (N×sample shape) with SGD momentum on the noise-prediction loss.

    Raises:
        TrainingError: If the loss becomes NaN or infinite
    """
    samples = np.asarray(samples, dtype=np.float64)
    denoiser = build_denoiser(samples.shape[1:], schedule, config, rng.child('init'))
    batch_rng = rng.child('batches')
    noise_rng = rng.child('noise')
    optimizer = SgdMomentum(len(denoiser.params), config.learning_rate, config.momentum)
    losses = []
    for iteration in range(1, config.iterations + 1):
        index = batch_rng.integers(0, samples.shape[0], size=min(config.batch_size, samples.shape[0]))
        loss, gradient = noise_prediction_loss_and_grad(denoiser, samples[index], schedule, noise_rng)
        if not math.isfinite(loss):
            raise TrainingError(f'Denoiser training diverged at iteration {iteration}', epoch=iteration,
                                loss_curve=losses)
        denoiser = denoiser.with_params(denoiser.params.with_vector(optimizer.step(denoiser.params.vector, gradient)))
        losses.append(loss)
        if iteration % 500 == 0:
            logger.debug(f'denoiser iteration {iteration}: loss {np.mean(losses[-500:]):.4f}')
    logger.info(f'Trained denoiser on {samples.shape[0]} samples, final loss {np.mean(losses[-100:]):.4f}')
    return denoiser


def guidance_gradient(classifier: NoisedClassifier, z: np.ndarray, t: int) -> np.ndarray:
    """∇_z log C_real(z, t) by backpropagation through the guidance classifier."""
    inputs = network_input(z, t, classifier.embedding_dim)
    logits = forward(classifier.spec, classifier.params, inputs)
    grad_logits = -softmax(logits, axis=1)
    grad_logits[:, REAL] += 1.0
    return input_gradient(classifier.spec, classifier.params, inputs, grad_logits)[:, :classifier.dimension]


def ancestral_sample(denoiser: Denoiser, schedule: NoiseSchedule, n: int, rng: RngStream,
                     guidance: Optional[GuidanceConfig] = None) -> np.ndarray:
    """DDPM reverse chain from z_T ~ N(0, I) with posterior variance β̃_t.

    With guidance, the mean at step t moves by scale·β̃_t·∇_z log C_real(z, t). Scale 0 skips
    the classifier entirely, so the result is bit-identical to unguided sampling on equal streams.

    Returns:
        np.ndarray: n samples of the denoiser's sample shape

    Raises:
        ContractError: If the guidance classifier's dimension differs from the denoiser's
    """
    dimension = denoiser.dimension
    if guidance is not None and guidance.classifier.dimension != dimension:
        raise ContractError(f'Guidance classifier works on {guidance.classifier.dimension}-vectors, '
                            f'denoiser on {dimension}-vectors')
    guided = guidance is not None and guidance.scale != 0.0
    z = rng.normal(size=(n, dimension))
    for t in range(schedule.steps, 0, -1):
        beta = schedule.betas[t]
        alpha_bar = schedule.alpha_bars[t]
        predicted = predict_noise(denoiser, z, t)
        mean = (z - beta / math.sqrt(1.0 - alpha_bar) * predicted) / math.sqrt(1.0 - beta)
        variance = schedule.posterior_variance(t)
        if guided:
            mean = mean + guidance.scale * variance * guidance_gradient(guidance.classifier, z, t)
        if t > 1:
            z = mean + math.sqrt(variance) * rng.normal(size=z.shape)
        else:
            z = mean
    return z.reshape((n, *denoiser.sample_shape))


def train_noised_classifier(real, generated, schedule: NoiseSchedule, config: TrainConfig, rng: RngStream,
                            hidden_width: int = 64, embedding_dim: int = 16, replicas: int = 4,
                            max_timestep: Optional[int] = None, clean: bool = False) -> NoisedClassifier:
    """Train a real-vs-generated classifier on noised copies (t ~ U{1..t_max}) of both sets.

    Each sample contributes ``replicas`` noised copies. The last fifth of each set is held out.
    With ``clean=True`` every t is 0 and the classifier is an ordinary probe on [x, emb(0)].

    Raises:
        DataError: If either set is empty
    """
    real = np.asarray(real, dtype=np.float64).reshape(len(real), -1)
    generated = np.asarray(generated, dtype=np.float64).reshape(len(generated), -1)
    dimension = real.shape[1]
    top = schedule.steps if max_timestep is None else max_timestep
    noise_rng = rng.child('noise')

    def noised(samples: np.ndarray) -> np.ndarray:
        copies = np.repeat(samples, replicas, axis=0)
        if clean:
            t = np.zeros(copies.shape[0], dtype=np.int64)
        else:
            t = noise_rng.integers(1, top + 1, size=copies.shape[0])
        z, _ = forward_diffuse(copies, t, schedule, noise_rng)
        return network_input(z, t, embedding_dim)

    datasets = []
    for name, samples in (('real', real), ('generated', generated)):
        cut = len(samples) - max(1, int(round(HELDOUT_FRACTION * len(samples))))
        datasets.append(ClassDataset(name, noised(samples[:cut]), noised(samples[cut:])))
    spec = ModelSpec(family='mlp', input_shape=[dimension + embedding_dim], num_classes=2, hidden_width=hidden_width)
    params, report = train(spec, datasets, config, preprocessing='clean' if clean else f'noised(t<={top})')
    logger.info(f'Noised classifier held-out accuracy {report.accuracy:.4f}')
    return NoisedClassifier(spec, params, dimension, embedding_dim, schedule, report)
