"""Softmax cross-entropy in nats with label smoothing, and the two-term binary form.

Smoothing gives the true class 1−ε and each of the k−1 other classes ε/(k−1), so
ε = (k−1)/k is the uniform target.
"""
from typing import Tuple

import numpy as np
from scipy.special import log_softmax, softmax

from classifier_distance_probes.classifier.data import ModelSpec, Parameters
from classifier_distance_probes.classifier.networks import forward_cached, backward
from classifier_distance_probes.shared.errors import ContractError, UnsupportedError


def smoothed_targets(labels, num_classes: int, label_smoothing: float = 0.0) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    if labels.size and (labels.min() < 0 or labels.max() >= num_classes):
        raise ContractError(f'Labels must lie in [0, {num_classes}), got range [{labels.min()}, {labels.max()}]')
    off_value = label_smoothing / (num_classes - 1)
    targets = np.full((labels.shape[0], num_classes), off_value)
    targets[np.arange(labels.shape[0]), labels] = 1.0 - label_smoothing
    return targets


def per_sample_cross_entropy(logits, labels, label_smoothing: float = 0.0) -> np.ndarray:
    logits = np.asarray(logits, dtype=np.float64)
    targets = smoothed_targets(labels, logits.shape[1], label_smoothing)
    return -np.sum(targets * log_softmax(logits, axis=1), axis=1)


def cross_entropy_loss(logits, labels, label_smoothing: float = 0.0) -> float:
    """Mean over the batch of −Σ_c q_c log softmax_c, log-sum-exp stabilized."""
    return float(np.mean(per_sample_cross_entropy(logits, labels, label_smoothing)))


def cross_entropy_grad_logits(logits, labels, label_smoothing: float = 0.0) -> np.ndarray:
    logits = np.asarray(logits, dtype=np.float64)
    targets = smoothed_targets(labels, logits.shape[1], label_smoothing)
    return (softmax(logits, axis=1) - targets) / logits.shape[0]


def loss_and_grad(spec: ModelSpec, params: Parameters, batch, labels,
                  label_smoothing: float = 0.0) -> Tuple[float, np.ndarray]:
    """Mean smoothed cross-entropy of the batch and its exact gradient w.r.t. the flat parameters."""
    logits, cache = forward_cached(spec, params, batch)
    loss = cross_entropy_loss(logits, labels, label_smoothing)
    grad_vector, _ = backward(spec, params, cache, cross_entropy_grad_logits(logits, labels, label_smoothing))
    return loss, grad_vector


def grad(spec: ModelSpec, params: Parameters, batch, labels, label_smoothing: float = 0.0) -> np.ndarray:
    return loss_and_grad(spec, params, batch, labels, label_smoothing)[1]


def binary_two_term_loss(logits, labels) -> float:
    """−E_real[log C(x)] − E_generated[log(1−C(x))] with C = softmax probability of class 0.

    Each expectation is the mean over that class's samples, so chance level is ln 4.

    Raises:
        UnsupportedError: If the logits are not binary
        ContractError: If either class is absent
    """
    logits = np.asarray(logits, dtype=np.float64)
    if logits.shape[1] != 2:
        raise UnsupportedError(f'The two-term loss needs binary logits, got {logits.shape[1]} classes')
    labels = np.asarray(labels, dtype=np.int64)
    log_probs = log_softmax(logits, axis=1)
    real, generated = labels == 0, labels == 1
    if not real.any() or not generated.any():
        raise ContractError('The two-term loss needs samples from both classes')
    return float(-log_probs[real, 0].mean() - log_probs[generated, 1].mean())
