import math

import numpy as np

from classifier_distance_probes.classifier.data import DivergenceEstimate
from classifier_distance_probes.shared.errors import UnsupportedError, ContractError

LN2 = math.log(2.0)
LN4 = math.log(4.0)


def tv_lower_bound(accuracy: float, k: int = 2) -> float:
    """clamp(2·accuracy − 1, 0, 1); a lower bound on total variation since Bayes accuracy = (1+TV)/2.

    Raises:
        UnsupportedError: For k ≠ 2
    """
    if k != 2:
        raise UnsupportedError(f'The TV bound is defined for binary probes only, got k={k}')
    if not 0.0 <= accuracy <= 1.0:
        raise ContractError(f'Accuracy must be in [0,1], got {accuracy}')
    return float(np.clip(2.0 * accuracy - 1.0, 0.0, 1.0))


def jsd_estimate(mean_cross_entropy: float) -> float:
    """clamp((ln 4 − L)/2, 0, ln 2), from L(C*) = ln 4 − 2·JSD for the two-term binary loss in nats."""
    return float(np.clip((LN4 - mean_cross_entropy) / 2.0, 0.0, LN2))


def estimate_divergences(accuracy: float, two_term_loss: float) -> DivergenceEstimate:
    return DivergenceEstimate(tv_lower=tv_lower_bound(accuracy), jsd_estimate=jsd_estimate(two_term_loss),
                              binary_cross_entropy_nats=float(two_term_loss))
