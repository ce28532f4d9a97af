from dataclasses import dataclass

import numpy as np

from classifier_distance_probes.shared.models import JsonDataClass
from classifier_distance_probes.shared.errors import SpecError, ContractError


@dataclass
class NoiseSchedule(JsonDataClass):
    """Linear β schedule extended to any T: both ends are scaled by reference_steps/T.

    When the scaled range would reach β = 1 (T ≤ 20 for the defaults) the unscaled range is used
    instead, so every β lies in (0, 1).

    Arrays are indexed by timestep: ``betas[t]`` for 1 ≤ t ≤ T (``betas[0]`` is 0) and
    ``alpha_bars[t]`` with ``alpha_bars[0] = 1``.
    """
    steps: int = 100
    beta_start: float = 1e-4
    beta_end: float = 0.02
    reference_steps: int = 1000

    def __post_init__(self):
        if self.steps < 1:
            raise SpecError(f'Noise schedule needs at least one step, got {self.steps}')
        if not 0.0 < self.beta_start <= self.beta_end < 1.0:
            raise SpecError(f'Betas must satisfy 0 < beta_start <= beta_end < 1, got {self.beta_start}, {self.beta_end}')
        scale = self.reference_steps / self.steps
        if scale * self.beta_end >= 1.0:
            scale = 1.0
        betas = np.linspace(scale * self.beta_start, scale * self.beta_end, self.steps, dtype=np.float64)
        self._betas = np.concatenate([[0.0], betas])
        self._alpha_bars = np.cumprod(1.0 - self._betas)

    @property
    def betas(self) -> np.ndarray:
        return self._betas

    @property
    def alpha_bars(self) -> np.ndarray:
        return self._alpha_bars

    def check_timestep(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=np.int64)
        if t.size and (t.min() < 0 or t.max() > self.steps):
            raise ContractError(f'Timesteps must lie in [0, {self.steps}], got range [{t.min()}, {t.max()}]')
        return t

    def posterior_variance(self, t: int) -> float:
        """β̃_t = β_t(1−ᾱ_{t−1})/(1−ᾱ_t); zero at t = 1."""
        return float(self._betas[t] * (1.0 - self._alpha_bars[t - 1]) / (1.0 - self._alpha_bars[t]))
