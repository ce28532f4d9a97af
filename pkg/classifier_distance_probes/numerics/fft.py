"""Two-dimensional discrete Fourier transforms on power-of-two grids.

Convention: the forward transform is unnormalized and the inverse divides by M·N. All
functions transform the last two axes, so a C×H×W stack is transformed per channel.
"""
import numpy as np

from classifier_distance_probes.shared.errors import DimensionError, NumericConsistencyError

IMAGINARY_RESIDUE_LIMIT = 1e-6


def is_power_of_two(n: int) -> bool:
    return n >= 2 and (n & (n - 1)) == 0


def check_power_of_two(shape) -> None:
    """Raise DimensionError unless the last two extents are powers of two (each ≥ 2)."""
    if len(shape) < 2:
        raise DimensionError(f'Expected a grid with at least two axes, got shape {tuple(shape)}', axis=0,
                             size=len(shape))
    for axis in (len(shape) - 2, len(shape) - 1):
        if not is_power_of_two(shape[axis]):
            name = 'rows' if axis == len(shape) - 2 else 'cols'
            raise DimensionError(f'FFT {name} extent must be a power of two >= 2, got {shape[axis]} on axis {axis}',
                                 axis=axis, size=shape[axis])


def fft2(grid) -> np.ndarray:
    """Unnormalized forward 2-D DFT of a real grid.

    Args:
        grid: Real array of shape (..., M, N) with M, N powers of two

    Returns:
        Complex array of the same shape

    Raises:
        DimensionError: If M or N is not a power of two
    """
    values = np.asarray(grid, dtype=np.float64)
    check_power_of_two(values.shape)
    return np.fft.fft2(values, axes=(-2, -1))


def ifft2(spectrum) -> np.ndarray:
    """Normalized inverse 2-D DFT returning the real part.

    Raises:
        DimensionError: If M or N is not a power of two
        NumericConsistencyError: If the imaginary residue exceeds 1e-6
    """
    values = np.asarray(spectrum, dtype=np.complex128)
    check_power_of_two(values.shape)
    signal = np.fft.ifft2(values, axes=(-2, -1))
    residue = float(np.max(np.abs(signal.imag))) if signal.size else 0.0
    if residue > IMAGINARY_RESIDUE_LIMIT:
        raise NumericConsistencyError(
            f'Inverse transform left an imaginary residue of {residue:.3e} (limit {IMAGINARY_RESIDUE_LIMIT:g})',
            max_residue=residue
        )
    return np.ascontiguousarray(signal.real)


def fftshift(spectrum) -> np.ndarray:
    """Move bin (0,0) to (M//2, N//2)."""
    return np.fft.fftshift(np.asarray(spectrum), axes=(-2, -1))


def ifftshift(spectrum) -> np.ndarray:
    """Inverse of :func:`fftshift` for even and odd extents."""
    return np.fft.ifftshift(np.asarray(spectrum), axes=(-2, -1))
