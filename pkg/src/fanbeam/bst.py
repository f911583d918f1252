"""Fast parallel backprojection through the polar frequency domain.

The 2-D spectrum of the backprojected image, written in polar
coordinates, is the detector-direction spectrum of the sinogram divided
by the radial frequency.  With the angular-frequency transform pair used
throughout this library (kernel exp(-i t sigma)) and full-circle data q,

    F2[B q](sigma xi_theta) = (2*pi/sigma) * (q^(sigma, theta) + conj(q^(sigma, theta+pi)))

which for evenness-consistent data reduces to (4*pi/sigma) q^.  The
implementation builds (4*pi/sigma) q^ on the polar grid and lets the
Hermitian symmetrization of the Cartesian resampling average in the
conjugate term, so the same code is exact for arbitrary real input.

Stages: 1-D FFTs along the detector rows (zero padded), the 1/sigma
weight with a zeroed DC bin, bilinear polar-to-Cartesian resampling, an
inverse 2-D FFT on a domain padded to twice the image extent, and an
additive DC restoration.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import fft as sfft

from ._dc import restore_dc
from ._interp import bilinear_periodic_rows
from ._threads import get_workers
from .core import ImageGrid, ParallelSinogram, PolarSpectrum

__all__ = ["bst_backproject", "polar_to_cartesian", "sinogram_polar_spectrum"]

# Detector-axis FFT zero-padding and image-domain padding factors.  The
# finer radial grid and doubled image extent keep the bilinear
# resampling and periodization errors of the 1/sigma kernel small.
_PAD_T = 4
_PAD_IMAGE = 2


def _detector_spectrum(data: np.ndarray, t0: float, dt: float, pad: int = _PAD_T):
    """Angular-frequency spectra of the rows: qhat(sigma_m, theta_row)."""
    n_t = data.shape[1]
    length = sfft.next_fast_len(pad * n_t, real=True)
    qhat = sfft.rfft(data, n=length, axis=1, workers=get_workers())
    sigma = 2.0 * math.pi * np.arange(qhat.shape[1]) / (length * dt)
    qhat = qhat * (dt * np.exp(-1j * sigma * t0))[None, :]
    return sigma, qhat


def sinogram_polar_spectrum(q: ParallelSinogram, sigma_max: float) -> PolarSpectrum:
    """Polar spectrum (4*pi/sigma) qhat of a full-circle sinogram, DC zeroed."""
    if not q.full_circle:
        raise ValueError("expected a full-circle sinogram")
    dt = 2.0 / (q.n_t - 1)
    sigma, qhat = _detector_spectrum(q.data, -1.0, dt)
    keep = int(np.searchsorted(sigma, sigma_max * (1.0 + 1e-12), side="right"))
    keep = max(2, min(keep, sigma.size))
    spec = np.zeros((q.n_theta, keep), dtype=np.complex128)
    spec[:, 1:] = 4.0 * math.pi / sigma[1:keep][None, :] * qhat[:, 1:keep]
    return PolarSpectrum(spec, sigma_max=float(sigma[keep - 1]))


def polar_to_cartesian(spectrum: PolarSpectrum, n: int, step: float = math.pi) -> np.ndarray:
    """Resample a polar spectrum onto an n x n Cartesian frequency grid.

    The grid holds frequencies m*step for m in [-n//2, n - n//2); radii
    beyond sigma_max are zero filled and Hermitian symmetry is enforced
    so the inverse transform is real.
    """
    m = np.arange(n) - n // 2
    k1 = step * m[None, :]
    k2 = step * m[:, None]
    sigma = np.hypot(k1, k2)
    phi = np.mod(np.arctan2(k2, k1), 2.0 * math.pi)
    dsig = spectrum.sigma_max / (spectrum.n_sigma - 1)
    dth = 2.0 * math.pi / spectrum.n_theta
    re = bilinear_periodic_rows(spectrum.data.real, phi / dth, sigma / dsig)
    im = bilinear_periodic_rows(spectrum.data.imag, phi / dth, sigma / dsig)
    grid = re + 1j * im
    if n % 2 == 0:
        # the -n/2 frequency line has no +n/2 partner
        grid[0, :] = 0.0
        grid[:, 0] = 0.0
    flipped = grid[::-1, ::-1]
    if n % 2 == 0:
        flipped = np.roll(np.roll(flipped, 1, axis=0), 1, axis=1)
    return 0.5 * (grid + np.conj(flipped))


def spectrum_to_image(spectrum: PolarSpectrum, n: int) -> np.ndarray:
    """Inverse 2-D transform of a polar spectrum onto the n x n pixel grid.

    Synthesizes on a grid padded to _PAD_IMAGE times the image extent and
    crops, which keeps the periodization alias of slowly decaying
    backprojections away from the unit disk.
    """
    n2 = _PAD_IMAGE * n
    h = 2.0 / n
    step = 2.0 * math.pi / (n2 * h)
    grid = polar_to_cartesian(spectrum, n2, step=step)
    x0 = -1.0 + h / 2.0 - (n // 2) * h
    m = np.arange(n2) - n2 // 2
    phase = np.exp(1j * step * m * x0)
    grid = grid * phase[None, :] * phase[:, None]
    img = sfft.ifft2(sfft.ifftshift(grid), workers=get_workers()).real
    img *= n2 * n2 * (step / (2.0 * math.pi)) ** 2
    q0 = n // 2
    return np.ascontiguousarray(img[q0 : q0 + n, q0 : q0 + n])


def _even_extend(p: ParallelSinogram) -> ParallelSinogram:
    ext = np.vstack([p.data, p.data[:, ::-1]])
    return ParallelSinogram(ext, theta_span=2.0 * math.pi)


def bst_backproject(p: ParallelSinogram, n: int, dc="mass") -> ImageGrid:
    """Backproject a parallel sinogram through the polar frequency domain.

    Half-range input is extended to [0, 2*pi) by evenness, which realizes
    the factor 2 of the direct formula.  ``dc`` selects the zero-frequency
    policy ("mass", "none", or an explicit constant).
    """
    q = p if p.full_circle else _even_extend(p)
    sigma_max = math.pi * n / 2.0
    spec = sinogram_polar_spectrum(q, sigma_max)
    img = spectrum_to_image(spec, n)
    return ImageGrid(restore_dc(img, p, dc))
