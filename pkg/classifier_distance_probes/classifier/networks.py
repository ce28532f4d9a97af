"""Pure-numpy model families with exact backpropagation.

logistic:  flatten → affine
mlp:       flatten → affine → ReLU → affine
smallconv: 3×3 conv (zero pad 1) → ReLU → 2×2 mean pool → 3×3 conv → ReLU → global mean → affine

Every forward pass first applies the :class:`Normalizer` carried by the parameters.
"""
import math
from typing import Dict, Tuple

import numpy as np

from classifier_distance_probes.classifier.data import ModelSpec, Parameters
from classifier_distance_probes.numerics import RngStream
from classifier_distance_probes.shared.errors import ContractError, UnsupportedError


def init_params(spec: ModelSpec, rng: RngStream) -> Parameters:
    """Weights uniform in ±√(6/fan_in), biases zero, drawn block by block in layout order."""
    params = Parameters.zeros(spec)
    vector = params.vector
    for name, shape, fan_in in spec.layer_layout():
        if fan_in == 0:
            continue
        offset, _ = params.layout[name]
        size = int(np.prod(shape))
        limit = math.sqrt(6.0 / fan_in)
        vector[offset:offset + size] = rng.uniform(-limit, limit, size=size)
    return params


def check_batch(spec: ModelSpec, batch: np.ndarray) -> np.ndarray:
    batch = np.asarray(batch, dtype=np.float64)
    if batch.ndim < 1 or tuple(batch.shape[1:]) != tuple(spec.input_shape):
        raise ContractError(f'Batch of shape {batch.shape} does not match model input shape {spec.input_shape}')
    return batch


def _conv3x3(x: np.ndarray, kernels: np.ndarray, bias: np.ndarray) -> np.ndarray:
    _, _, height, width = x.shape
    padded = np.pad(x, ((0, 0), (0, 0), (1, 1), (1, 1)))
    out = np.zeros((x.shape[0], kernels.shape[0], height, width))
    for i in range(3):
        for j in range(3):
            window = padded[:, :, i:i + height, j:j + width]
            out += np.einsum('nchw,oc->nohw', window, kernels[:, :, i, j], optimize=True)
    return out + bias[None, :, None, None]


def _conv3x3_backward(x: np.ndarray, kernels: np.ndarray, grad_out: np.ndarray):
    _, _, height, width = x.shape
    padded = np.pad(x, ((0, 0), (0, 0), (1, 1), (1, 1)))
    grad_padded = np.zeros_like(padded)
    grad_kernels = np.zeros_like(kernels)
    for i in range(3):
        for j in range(3):
            window = padded[:, :, i:i + height, j:j + width]
            grad_kernels[:, :, i, j] = np.einsum('nohw,nchw->oc', grad_out, window, optimize=True)
            grad_padded[:, :, i:i + height, j:j + width] += np.einsum('nohw,oc->nchw', grad_out,
                                                                      kernels[:, :, i, j], optimize=True)
    grad_bias = grad_out.sum(axis=(0, 2, 3))
    return grad_kernels, grad_bias, grad_padded[:, :, 1:-1, 1:-1]


def _mean_pool2(x: np.ndarray) -> np.ndarray:
    n, c, height, width = x.shape
    h2, w2 = height // 2, width // 2
    return x[:, :, :h2 * 2, :w2 * 2].reshape(n, c, h2, 2, w2, 2).mean(axis=(3, 5))


def _mean_pool2_backward(shape, grad_out: np.ndarray) -> np.ndarray:
    grad = np.zeros(shape)
    h2, w2 = grad_out.shape[2:]
    grad[:, :, :h2 * 2, :w2 * 2] = np.repeat(np.repeat(grad_out, 2, axis=2), 2, axis=3) / 4.0
    return grad


def forward_cached(spec: ModelSpec, params: Parameters, batch: np.ndarray) -> Tuple[np.ndarray, Dict]:
    """Logits plus the activations :func:`backward` needs."""
    raw = check_batch(spec, batch)
    x = params.normalizer.apply(raw)
    cache = {'raw': raw}
    n = x.shape[0]
    if spec.family == 'logistic':
        flat = x.reshape(n, -1)
        cache['flat'] = flat
        return flat @ params['W'] + params['b'], cache
    if spec.family == 'mlp':
        flat = x.reshape(n, -1)
        pre = flat @ params['W1'] + params['b1']
        hidden = np.maximum(pre, 0.0)
        cache.update(flat=flat, pre=pre, hidden=hidden)
        return hidden @ params['W2'] + params['b2'], cache
    pre1 = _conv3x3(x, params['K1'], params['c1'])
    act1 = np.maximum(pre1, 0.0)
    pooled = _mean_pool2(act1)
    pre2 = _conv3x3(pooled, params['K2'], params['c2'])
    act2 = np.maximum(pre2, 0.0)
    features = act2.mean(axis=(2, 3))
    cache.update(x=x, pre1=pre1, act1=act1, pooled=pooled, pre2=pre2, features=features)
    return features @ params['W'] + params['b'], cache


def forward(spec: ModelSpec, params: Parameters, batch: np.ndarray) -> np.ndarray:
    """Logits (batch×k) for a batch whose trailing shape equals ``spec.input_shape``.

    Raises:
        ContractError: If the batch shape does not match the model input
    """
    logits, _ = forward_cached(spec, params, batch)
    return logits


def backward(spec: ModelSpec, params: Parameters, cache: Dict, grad_logits: np.ndarray,
             need_input: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """Backpropagate ``grad_logits`` (batch×k).

    Returns:
        tuple: (flat parameter gradient, gradient w.r.t. the raw batch or None)
    """
    grads = Parameters.zeros(spec)
    raw = cache['raw']
    n = raw.shape[0]
    if spec.family == 'logistic':
        grads['W'][...] = cache['flat'].T @ grad_logits
        grads['b'][...] = grad_logits.sum(axis=0)
        grad_x = (grad_logits @ params['W'].T).reshape(raw.shape) if need_input else None
    elif spec.family == 'mlp':
        grads['W2'][...] = cache['hidden'].T @ grad_logits
        grads['b2'][...] = grad_logits.sum(axis=0)
        grad_hidden = (grad_logits @ params['W2'].T) * (cache['pre'] > 0)
        grads['W1'][...] = cache['flat'].T @ grad_hidden
        grads['b1'][...] = grad_hidden.sum(axis=0)
        grad_x = (grad_hidden @ params['W1'].T).reshape(raw.shape) if need_input else None
    else:
        grads['W'][...] = cache['features'].T @ grad_logits
        grads['b'][...] = grad_logits.sum(axis=0)
        grad_features = grad_logits @ params['W'].T
        height, width = cache['pre2'].shape[2:]
        grad_act2 = np.broadcast_to(grad_features[:, :, None, None] / (height * width), cache['pre2'].shape)
        grad_pre2 = grad_act2 * (cache['pre2'] > 0)
        grad_k2, grad_c2, grad_pooled = _conv3x3_backward(cache['pooled'], params['K2'], grad_pre2)
        grads['K2'][...] = grad_k2
        grads['c2'][...] = grad_c2
        grad_pre1 = _mean_pool2_backward(cache['act1'].shape, grad_pooled) * (cache['pre1'] > 0)
        grad_k1, grad_c1, grad_x = _conv3x3_backward(cache['x'], params['K1'], grad_pre1)
        grads['K1'][...] = grad_k1
        grads['c1'][...] = grad_c1
        if not need_input:
            grad_x = None
    if grad_x is not None:
        grad_x = params.normalizer.backward(raw, grad_x.reshape(n, *spec.input_shape))
    return grads.vector, grad_x


def input_gradient(spec: ModelSpec, params: Parameters, batch: np.ndarray, grad_logits) -> np.ndarray:
    """Gradient of Σ grad_logits·logits with respect to the raw input batch."""
    _, cache = forward_cached(spec, params, batch)
    _, grad_x = backward(spec, params, cache, np.asarray(grad_logits, dtype=np.float64), need_input=True)
    return grad_x


def extract_features(spec: ModelSpec, params: Parameters, images: np.ndarray) -> np.ndarray:
    """Penultimate activations: the mlp hidden layer or the smallconv pooled vector.

    Accepts a single input of shape ``spec.input_shape`` (returns a d-vector) or a batch.

    Raises:
        UnsupportedError: For the logistic family, which has no penultimate layer
    """
    if spec.family == 'logistic':
        raise UnsupportedError('The logistic family has no penultimate layer to extract features from')
    images = np.asarray(images, dtype=np.float64)
    single = images.shape == tuple(spec.input_shape)
    batch = images[None] if single else images
    _, cache = forward_cached(spec, params, batch)
    features = cache['hidden'] if spec.family == 'mlp' else cache['features']
    return features[0] if single else features
