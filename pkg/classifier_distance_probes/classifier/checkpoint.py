"""Checkpoint directories: one NTF tensor per named parameter block plus ``manifest.txt``.

The manifest is key=value text holding the model spec, the training config and the normalizer
as JSON values.
"""
import json
import logging
import os
from typing import Optional, Tuple

import numpy as np
from dotenv import dotenv_values

from classifier_distance_probes.classifier.data import ModelSpec, Parameters, Normalizer, TrainConfig
from classifier_distance_probes.imaging.io import write_ntf, read_ntf_tensor
from classifier_distance_probes.shared.errors import FormatError

logger = logging.getLogger(__name__)

MANIFEST = 'manifest.txt'


def save_checkpoint(directory: str, spec: ModelSpec, params: Parameters, config: Optional[TrainConfig] = None):
    """Write a checkpoint. NTF stores float32, so reloaded weights are rounded to single precision."""
    os.makedirs(directory, exist_ok=True)
    for name in params.layout:
        write_ntf(params[name], os.path.join(directory, f'{name}.ntf'))
    lines = [
        f"spec='{spec.to_json()}'",
        f"normalizer='{params.normalizer.to_json()}'",
        f"layers={','.join(params.layout)}",
    ]
    if config is not None:
        lines.append(f"config='{config.to_json()}'")
    with open(os.path.join(directory, MANIFEST), 'w', encoding='utf-8') as handle:
        handle.write('\n'.join(lines) + '\n')
    logger.info(f'Saved {spec.describe()} checkpoint to {directory}')


def load_checkpoint(directory: str) -> Tuple[ModelSpec, Parameters, Optional[TrainConfig]]:
    """Read a checkpoint written by :func:`save_checkpoint`.

    Raises:
        FormatError: If the manifest is missing keys or a layer has the wrong shape
    """
    manifest_path = os.path.join(directory, MANIFEST)
    if not os.path.isfile(manifest_path):
        raise FormatError(f'No {MANIFEST} in checkpoint directory {directory}')
    manifest = dotenv_values(manifest_path)
    for key in ('spec', 'normalizer', 'layers'):
        if not manifest.get(key):
            raise FormatError(f"Checkpoint manifest {manifest_path} lacks '{key}'")
    spec = ModelSpec.load(json.loads(manifest['spec']))
    params = Parameters.zeros(spec).with_normalizer(Normalizer.load(json.loads(manifest['normalizer'])))
    for name in manifest['layers'].split(','):
        if name not in params.layout:
            raise FormatError(f"Checkpoint layer '{name}' is not part of {spec.describe()}")
        tensor = read_ntf_tensor(os.path.join(directory, f'{name}.ntf'))
        if tensor.shape != params[name].shape:
            raise FormatError(f"Checkpoint layer '{name}' has shape {tensor.shape}, expected {params[name].shape}")
        params[name][...] = tensor
    config = TrainConfig.load(json.loads(manifest['config'])) if manifest.get('config') else None
    return spec, params, config
