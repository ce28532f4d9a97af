import logging
import math
import time
from typing import List, Sequence, Tuple

import numpy as np

from classifier_distance_probes.classifier.data import (ModelSpec, Parameters, Normalizer, TrainConfig, ProbeReport,
                                                        ClassDataset)
from classifier_distance_probes.classifier.divergence import estimate_divergences
from classifier_distance_probes.classifier.losses import loss_and_grad, per_sample_cross_entropy, binary_two_term_loss
from classifier_distance_probes.classifier.networks import init_params, forward
from classifier_distance_probes.imaging import AugmentationSpec, augment_batch, center_crop_pixels, pad_pixels
from classifier_distance_probes.numerics import RngStream
from classifier_distance_probes.shared.errors import DataError, TrainingError

logger = logging.getLogger(__name__)

EVAL_CHUNK = 512


class SgdMomentum:
    """velocity ← momentum·velocity + lr·grad; params ← params − velocity."""

    def __init__(self, size: int, learning_rate: float, momentum: float):
        self.learning_rate = learning_rate
        self.momentum = momentum
        self.velocity = np.zeros(size)

    def step(self, vector: np.ndarray, gradient: np.ndarray) -> np.ndarray:
        self.velocity = self.momentum * self.velocity + self.learning_rate * gradient
        return vector - self.velocity


def heldout_view(inputs: np.ndarray, augmentation: AugmentationSpec) -> np.ndarray:
    """Deterministic counterpart of the training augmentation: pad then centre crop, no flips."""
    if augmentation.crop_size is None:
        return inputs
    return center_crop_pixels(pad_pixels(inputs, augmentation.crop_pad or 0), augmentation.crop_size)


def balanced_batches(counts: Sequence[int], batch_size: int, rng: RngStream) -> List[List[np.ndarray]]:
    """Per-step index arrays for each class: batch_size//k samples per class per step.

    One epoch covers the largest class once; smaller classes cycle through fresh permutations.
    """
    per_class = max(1, batch_size // len(counts))
    steps = math.ceil(max(counts) / per_class)
    needed = steps * per_class
    orders = []
    for count in counts:
        chunks = []
        total = 0
        while total < needed:
            chunks.append(rng.permutation(count))
            total += count
        orders.append(np.concatenate(chunks)[:needed])
    return [[order[s * per_class:(s + 1) * per_class] for order in orders] for s in range(steps)]


def predict_logits(spec: ModelSpec, params: Parameters, inputs: np.ndarray) -> np.ndarray:
    chunks = [forward(spec, params, inputs[start:start + EVAL_CHUNK])
              for start in range(0, inputs.shape[0], EVAL_CHUNK)]
    return np.concatenate(chunks, axis=0)


def evaluate(spec: ModelSpec, params: Parameters, inputs: np.ndarray, labels) -> Tuple[float, float, np.ndarray]:
    """Single deterministic pass over a labeled set.

    Argmax ties break toward the lower class index.

    Returns:
        tuple: (accuracy, mean cross-entropy in nats, k×k confusion matrix with true classes as rows)
    """
    labels = np.asarray(labels, dtype=np.int64)
    if labels.size == 0:
        raise DataError('Cannot evaluate on an empty dataset')
    logits = predict_logits(spec, params, inputs)
    return _score(logits, labels, spec.num_classes)


def _score(logits: np.ndarray, labels: np.ndarray, num_classes: int) -> Tuple[float, float, np.ndarray]:
    predictions = np.argmax(logits, axis=1)
    confusion = np.zeros((num_classes, num_classes), dtype=np.int64)
    np.add.at(confusion, (labels, predictions), 1)
    accuracy = float(np.trace(confusion) / labels.size)
    cross_entropy = float(np.mean(per_sample_cross_entropy(logits, labels)))
    return accuracy, cross_entropy, confusion


def stack_classes(splits: Sequence[np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
    inputs = np.concatenate(splits, axis=0)
    labels = np.concatenate([np.full(split.shape[0], c, dtype=np.int64) for c, split in enumerate(splits)])
    return inputs, labels


def train(spec: ModelSpec, datasets: Sequence[ClassDataset], config: TrainConfig,
          preprocessing: str = 'identity') -> Tuple[Parameters, ProbeReport]:
    """Train a probe with balanced minibatch SGD and report on the held-out splits.

    Randomness comes from ``RngStream(config.seed, config.stream_id)``: one child stream for
    initialization, one for batch order and one for augmentation.

    Args:
        spec: Model architecture; its input shape must match the (augmented) training samples
        datasets: One ClassDataset per class, class index = list position
        config: Optimizer and training settings
        preprocessing: Description of the preprocessing chain applied before training, for the report

    Returns:
        tuple: (trained Parameters, ProbeReport on the held-out splits)

    Raises:
        DataError: If fewer than two classes are given or a class is empty
        TrainingError: If the loss becomes NaN or infinite
    """
    started = time.perf_counter()
    if len(datasets) < 2:
        raise DataError(f'A probe needs at least 2 classes, got {len(datasets)}')
    if len(datasets) != spec.num_classes:
        raise DataError(f'Model has {spec.num_classes} outputs but {len(datasets)} classes were given')
    for dataset in datasets:
        if dataset.train.shape[0] == 0 or dataset.heldout.shape[0] == 0:
            raise DataError(f"Class '{dataset.name}' is empty")

    stream = RngStream(config.seed, config.stream_id)
    init_rng = stream.child('init')
    batch_rng = stream.child('batches')
    augment_rng = stream.child('augment')

    augmentation = config.augmentation
    train_sets = [dataset.train for dataset in datasets]
    pooled, _ = stack_classes([heldout_view(split, augmentation) for split in train_sets])
    params = init_params(spec, init_rng).with_normalizer(Normalizer.fit(config.normalization, pooled))
    optimizer = SgdMomentum(len(params), config.learning_rate, config.momentum)

    logger.info(f'Training {spec.describe()} on {len(datasets)} classes '
                f'({", ".join(str(s.shape[0]) for s in train_sets)} samples), seed={config.seed}, '
                f'stream={config.stream_id}')
    loss_curve = []
    for epoch in range(1, config.epochs + 1):
        epoch_losses = []
        for step in balanced_batches([s.shape[0] for s in train_sets], config.batch_size, batch_rng):
            batch, labels = stack_classes([split[index] for split, index in zip(train_sets, step)])
            if not augmentation.is_identity:
                batch = augment_batch(batch, augmentation, augment_rng)
            loss, gradient = loss_and_grad(spec, params, batch, labels, config.label_smoothing)
            if not math.isfinite(loss) or not np.all(np.isfinite(gradient)):
                raise TrainingError(f'Training diverged at epoch {epoch} (loss {loss})', epoch=epoch,
                                    loss_curve=loss_curve)
            params = params.with_vector(optimizer.step(params.vector, gradient))
            epoch_losses.append(loss)
        loss_curve.append(float(np.mean(epoch_losses)))
        logger.debug(f'epoch {epoch}: mean training loss {loss_curve[-1]:.6f}')
        if not np.all(np.isfinite(params.vector)):
            raise TrainingError(f'Parameters became non-finite at epoch {epoch}', epoch=epoch,
                                loss_curve=loss_curve)

    heldout_sets = [heldout_view(dataset.heldout, augmentation) for dataset in datasets]
    inputs, labels = stack_classes(heldout_sets)
    logits = predict_logits(spec, params, inputs)
    accuracy, cross_entropy, confusion = _score(logits, labels, spec.num_classes)
    divergence = None
    if spec.num_classes == 2:
        divergence = estimate_divergences(accuracy, binary_two_term_loss(logits, labels))
    loss_monotone = loss_curve[-1] <= loss_curve[0]
    if not loss_monotone:
        logger.warning(f'Final training loss {loss_curve[-1]:.6f} exceeds first-epoch loss {loss_curve[0]:.6f}')

    report = ProbeReport(
        class_names=[dataset.name for dataset in datasets],
        train_counts=[int(s.shape[0]) for s in train_sets],
        heldout_counts=[int(s.shape[0]) for s in heldout_sets],
        accuracy=accuracy,
        cross_entropy_nats=cross_entropy,
        confusion=confusion.tolist(),
        preprocessing=preprocessing if augmentation.is_identity else f'{preprocessing}+{augmentation.describe()}',
        model=spec.describe(),
        seed=config.seed,
        stream_id=config.stream_id,
        loss_curve=loss_curve,
        loss_monotone=bool(loss_monotone),
        divergence=divergence,
        wall_clock_seconds=time.perf_counter() - started,
    )
    logger.info(f'Held-out accuracy {accuracy:.4f}, cross-entropy {cross_entropy:.4f} nats')
    return params, report
