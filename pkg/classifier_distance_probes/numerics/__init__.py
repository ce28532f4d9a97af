from .rng import RngStream, stream_id_for
from .fft import fft2, ifft2, fftshift, ifftshift, is_power_of_two
from .linalg import eig_sym, psd_sqrt, frechet_gaussian_distance, fit_gaussian
