import logging
from typing import Tuple

import numpy as np

from classifier_distance_probes.shared.errors import ContractError, PsdViolationError

logger = logging.getLogger(__name__)

MAX_DIMENSION = 64
SYMMETRY_TOLERANCE = 1e-10
PSD_TOLERANCE = -1e-10


def as_symmetric(matrix) -> np.ndarray:
    """Validate a square symmetric matrix and return it as float64.

    Raises:
        ContractError: If the matrix is not square, exceeds 64×64 or is asymmetric beyond 1e-10
    """
    m = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ContractError(f'Expected a square matrix, got shape {m.shape}')
    if m.shape[0] > MAX_DIMENSION:
        raise ContractError(f'Matrix dimension {m.shape[0]} exceeds the supported maximum of {MAX_DIMENSION}')
    asymmetry = float(np.max(np.abs(m - m.T))) if m.size else 0.0
    if asymmetry > SYMMETRY_TOLERANCE:
        raise ContractError(f'Matrix is not symmetric: max |m - m^T| = {asymmetry:.3e}')
    return m


def eig_sym(matrix) -> Tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix.

    Returns:
        (eigenvalues in descending order, orthonormal eigenvectors as columns)
    """
    m = as_symmetric(matrix)
    # eigh reads one triangle only; symmetrize so both triangles contribute equally
    values, vectors = np.linalg.eigh((m + m.T) / 2.0)
    order = np.argsort(values)[::-1]
    return values[order], vectors[:, order]


def psd_sqrt(matrix) -> np.ndarray:
    """Symmetric square root of a PSD matrix, clamping eigenvalues at zero.

    Raises:
        PsdViolationError: If an eigenvalue is below -1e-10
    """
    values, vectors = eig_sym(matrix)
    smallest = float(values[-1])
    if smallest < PSD_TOLERANCE:
        raise PsdViolationError(f'Matrix is not positive semi-definite: smallest eigenvalue {smallest:.3e}',
                                min_eigenvalue=smallest)
    root = (vectors * np.sqrt(np.clip(values, 0.0, None))) @ vectors.T
    return (root + root.T) / 2.0


def frechet_gaussian_distance(mu1, sigma1, mu2, sigma2) -> float:
    """Fréchet distance between two Gaussians.

    ‖mu1 − mu2‖² + Tr(sigma1 + sigma2 − 2·(sigma1·sigma2)^½), with the trace of the cross
    term taken through the symmetric product √sigma1·sigma2·√sigma1.

    Raises:
        ContractError: On shape mismatch or asymmetric covariances
        PsdViolationError: If either covariance has an eigenvalue below -1e-10
    """
    mu1 = np.atleast_1d(np.asarray(mu1, dtype=np.float64))
    mu2 = np.atleast_1d(np.asarray(mu2, dtype=np.float64))
    s1 = as_symmetric(sigma1)
    s2 = as_symmetric(sigma2)
    if not (mu1.shape == mu2.shape and s1.shape == s2.shape == (mu1.size, mu1.size)):
        raise ContractError(f'Shape mismatch: means {mu1.shape}/{mu2.shape}, covariances {s1.shape}/{s2.shape}')
    root1 = psd_sqrt(s1)
    psd_sqrt(s2)  # validates sigma2
    cross = root1 @ s2 @ root1
    cross_values = np.linalg.eigvalsh((cross + cross.T) / 2.0)
    cross_trace = float(np.sum(np.sqrt(np.clip(cross_values, 0.0, None))))
    mean_term = float(np.sum((mu1 - mu2) ** 2))
    distance = mean_term + float(np.trace(s1) + np.trace(s2)) - 2.0 * cross_trace
    return max(distance, 0.0)


def fit_gaussian(features) -> Tuple[np.ndarray, np.ndarray]:
    """Mean and unbiased covariance of an n×d feature matrix; covariance is always d×d."""
    x = np.asarray(features, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    if x.shape[0] < 2:
        raise ContractError(f'Need at least two samples to fit a Gaussian, got {x.shape[0]}')
    mean = x.mean(axis=0)
    covariance = np.atleast_2d(np.cov(x, rowvar=False))
    return mean, (covariance + covariance.T) / 2.0
