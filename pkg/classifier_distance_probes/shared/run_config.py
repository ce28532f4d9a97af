"""
Run Configuration Module

This module provides centralized run configuration for classifier_distance_probes.
It reads settings from environment variables (optionally loaded from a .env file) and from
key=value config files, and merges them with command-line values.

Environment Variables:
- DISTPROBE_OUTPUT_DIR: Root directory for experiment outputs (defaults to ./runs)
- DISTPROBE_JOBS: Maximum number of ladder points run concurrently (defaults to 1)
- DISTPROBE_LOG_LEVEL: Logging level name (defaults to INFO)
- DISTPROBE_MASTER_SEED: Master seed used when no --seed is given (defaults to 0)

Config files:
- UTF-8 lines of key=value, '#' starts a comment. Keys are the long command-line flag names
  with dashes or underscores (e.g. ``epochs=10``, ``train-samples=500``).
"""

import logging
import os
from typing import Dict, Any, Optional, Mapping
from dotenv import load_dotenv, dotenv_values

from classifier_distance_probes.shared.errors import SpecError


logger = logging.getLogger(__name__)


class RunSettings:
    """Process-wide settings taken from the environment."""

    SUPPORTED_LOG_LEVELS = ['DEBUG', 'INFO', 'WARNING', 'ERROR']

    def __init__(self, env_file: Optional[str] = None):
        """Initialize run settings.

        Args:
            env_file: Path to .env file. If None, uses default .env discovery.
        """
        if env_file:
            load_dotenv(env_file)
        else:
            load_dotenv()

        self.output_dir = os.getenv('DISTPROBE_OUTPUT_DIR', 'runs')
        self.jobs = self._parse_positive_int('DISTPROBE_JOBS', 1)
        self.log_level = self._get_log_level()
        self.master_seed = self._parse_nonnegative_int('DISTPROBE_MASTER_SEED', 0)

    def _get_log_level(self) -> str:
        level = os.getenv('DISTPROBE_LOG_LEVEL', 'INFO').upper()
        if level not in self.SUPPORTED_LOG_LEVELS:
            raise SpecError(
                f"Unsupported log level '{level}'. "
                f"Supported levels: {', '.join(self.SUPPORTED_LOG_LEVELS)}"
            )
        return level

    def _parse_positive_int(self, var_name: str, default: int) -> int:
        value = self._parse_nonnegative_int(var_name, default)
        if value < 1:
            raise SpecError(f'{var_name} must be at least 1, got {value}')
        return value

    def _parse_nonnegative_int(self, var_name: str, default: int) -> int:
        raw = os.getenv(var_name)
        if raw is None or raw.strip() == '':
            return default
        try:
            value = int(raw)
        except ValueError:
            raise SpecError(f'{var_name} must be an integer, got {raw!r}')
        if value < 0:
            raise SpecError(f'{var_name} must be non-negative, got {value}')
        return value

    def get_info(self) -> Dict[str, Any]:
        """Get the effective environment settings.

        Returns:
            Dictionary with every setting this object resolved
        """
        return {
            'output_dir': self.output_dir,
            'jobs': self.jobs,
            'log_level': self.log_level,
            'master_seed': self.master_seed
        }


def normalize_key(key: str) -> str:
    return key.strip().lstrip('-').replace('-', '_').lower()


def load_config_file(path: str) -> Dict[str, str]:
    """Read a key=value config file.

    Args:
        path: Path to the config file

    Returns:
        Mapping of normalized keys (underscores, lower case) to raw string values

    Raises:
        OSError: If the file cannot be read
        SpecError: If a line has no value
    """
    if not os.path.isfile(path):
        raise FileNotFoundError(f'Config file not found: {path}')
    values = dotenv_values(path, encoding='utf-8')
    overlay = {}
    for key, value in values.items():
        if value is None:
            raise SpecError(f"Config file {path}: key '{key}' has no value")
        overlay[normalize_key(key)] = value
    return overlay


def merge_overlays(flags: Mapping[str, Any], config_file: Mapping[str, str],
                   defaults: Mapping[str, Any]) -> Dict[str, Any]:
    """Merge flag values over config-file values over defaults.

    A flag counts as given when its value is not None. Config-file values are strings and are
    converted to the type of the corresponding default.

    Returns:
        The effective value for every key in ``defaults``
    """
    unknown = sorted(set(config_file) - set(defaults))
    if unknown:
        raise SpecError(f"Unknown config keys: {', '.join(unknown)}")
    effective = {}
    for key, default in defaults.items():
        if flags.get(key) is not None:
            effective[key] = flags[key]
        elif key in config_file:
            effective[key] = _coerce(key, config_file[key], default)
        else:
            effective[key] = default
    return effective


def _coerce(key: str, raw: str, default: Any) -> Any:
    try:
        if isinstance(default, bool):
            return raw.strip().lower() in ('true', '1', 'yes', 'on')
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
        if isinstance(default, list):
            return [item.strip() for item in raw.split(',') if item.strip()]
    except ValueError:
        raise SpecError(f"Config key '{key}' has invalid value {raw!r}")
    return raw
