"""Fan-beam backprojection as a Bessel-Neumann series in the polar
frequency domain.

For a standard fan sinogram w, the sheared field
Z(gamma, theta) = w(gamma, theta - gamma) is 2*pi-periodic in gamma with
Fourier coefficients c_n(theta), and the detector-direction spectrum of
the adjoint-rebinned sinogram collapses to

    qhat(sigma, theta) = int Z(gamma, theta) exp(-i D sigma sin gamma) dgamma
                       = sum_n b_n(theta) J_n(D sigma)

with b_0 = 2*pi c_0 and b_n = 2*pi (c_n + (-1)^n c_{-n}) for n >= 1
(Jacobi-Anger expansion folded with J_{-n} = (-1)^n J_n).  Weighting by
1/sigma and resampling polar -> Cartesian as in :mod:`fanbeam.bst` then
yields the fan backprojection without ever forming the rebinned
parallel sinogram.  The flat-detector case reduces to the equiangular
one through the geometry switch L and the weight tau = D sec^2 gamma.

The truncated series is evaluated as a dense matrix product against a
table of Bessel values J_n(D sigma) computed once per setup by downward
(Miller) recurrence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import fft as sfft
from scipy.special import gammaln

from ._dc import restore_dc
from ._interp import interp_or_zero
from ._threads import get_workers
from .bst import spectrum_to_image
from .core import FanGeometry, ImageGrid, LinearFanSinogram, PolarSpectrum, StandardFanSinogram
from .rebinning import apply_tau, linear_to_standard, shear_to_theta

__all__ = [
    "SeriesCoefficients",
    "BesselTable",
    "choose_truncation",
    "bessel_table",
    "fourier_coefficients_gamma",
    "evaluate_series",
    "standard_fan_backproject",
    "linear_fan_backproject",
    "estimate_dc",
]

_RESCALE = 2.0**832  # exact power of two near 1e250
_THETA_CHUNK = 128


@dataclass(frozen=True)
class SeriesCoefficients:
    """Fourier coefficients of Z in gamma and the folded series weights.

    ``b`` has shape (n_terms, n_theta).  ``c``, when kept, has shape
    (2*n_terms - 1, n_theta) with row i holding order i - (n_terms - 1).
    """

    n_terms: int
    b: np.ndarray
    c: np.ndarray | None = None

    def c_order(self, n: int) -> np.ndarray:
        if self.c is None:
            raise ValueError("coefficients were computed with keep_c=False")
        if abs(n) >= self.n_terms:
            raise IndexError(f"order {n} outside +-{self.n_terms - 1}")
        return self.c[n + self.n_terms - 1]


@dataclass(frozen=True)
class BesselTable:
    """Lookup table values[n, k] = J_n(D * sigma_k) for n = 0 .. n_terms-1."""

    orders: np.ndarray
    sigmas: np.ndarray
    values: np.ndarray


def choose_truncation(geom: FanGeometry, sigma_max: float, eps: float) -> int:
    """Number of series terms needed at radial frequency sigma_max.

    Smallest N such that the envelope |J_n(x)| <= (x/2)^n / n! stays
    below ``eps`` for every n >= N with x = D*sigma_max, but never fewer
    terms than the gamma-direction Nyquist count of the series kernel.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    x = geom.d * float(sigma_max)
    nyquist = math.ceil(2.0 * geom.gamma_max * x / math.pi)
    if x == 0.0:
        return max(1, nyquist)
    log_eps = math.log(eps)
    # envelope is increasing up to n ~ x/2 and strictly decreasing after
    n = max(0, math.ceil(x / 2.0) - 1)
    block = 1024
    while True:
        ns = np.arange(n, n + block, dtype=np.float64)
        logs = ns * math.log(x / 2.0) - gammaln(ns + 1.0)
        hit = np.nonzero(logs < log_eps)[0]
        if hit.size:
            return max(int(ns[hit[0]]), nyquist, 1)
        n += block


def _bessel_matrix(x: np.ndarray, n_terms: int) -> np.ndarray:
    """J_n(x) for n = 0..n_terms-1 by normalized downward recurrence.

    The recurrence starts well above both the requested orders and the
    turning point n ~ x, where J_n has decayed far below working
    precision, and is normalized with J_0 + 2*sum J_{2k} = 1.  Columns
    are rescaled by an exact power of two whenever the running values
    approach overflow; orders whose true magnitude underflows come out
    as exact zeros.
    """
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros((n_terms, x.size))
    zero = x == 0.0
    out[0, zero] = 1.0
    live = ~zero
    if not live.any():
        return out
    xl = x[live]
    top = max(n_terms, math.ceil(float(xl.max())))
    n_start = top + max(50, top // 5)
    jp = np.zeros(xl.size)  # J_{n+1}, column-wise running scale
    jc = np.full(xl.size, 1e-30)  # J_{n_start} seed
    norm = np.zeros(xl.size)
    raw = np.zeros((n_terms, xl.size))
    for n in range(n_start, -1, -1):
        if n < n_terms:
            raw[n] = jc
        if n == 0:
            norm += jc
        elif n % 2 == 0:
            norm += 2.0 * jc
        if n > 0:
            jm = (2.0 * n / xl) * jc - jp
            jp, jc = jc, jm
            big = np.abs(jc) > 1e250
            if big.any():
                inv = 1.0 / _RESCALE
                jc[big] *= inv
                jp[big] *= inv
                norm[big] *= inv
                if n < n_terms:
                    raw[n:][:, big] *= inv
    out[:, live] = raw / norm[None, :]
    return out


def bessel_table(geom: FanGeometry, n_terms: int, sigma_grid) -> BesselTable:
    """Tabulate J_n(D*sigma) for the series evaluation (>= 1e-12 absolute)."""
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    sigmas = np.asarray(sigma_grid, dtype=np.float64)
    values = _bessel_matrix(geom.d * sigmas, n_terms)
    return BesselTable(orders=np.arange(n_terms), sigmas=sigmas, values=values)


@lru_cache(maxsize=8)
def _cached_table_values(d: float, n_terms: int, n_sigma: int, sigma_max: float) -> np.ndarray:
    sigma = np.linspace(0.0, sigma_max, n_sigma)
    return _bessel_matrix(d * sigma, n_terms)


def _circle_embedding(Z: np.ndarray, gamma: np.ndarray, padding_factor: int, n_terms: int):
    """Return (resampled support block, left width, circle size M)."""
    gamma = np.asarray(gamma, dtype=np.float64)
    step = gamma[1] - gamma[0]
    span = gamma.size * step
    if abs(span - 2.0 * math.pi) < 1e-9 * 2.0 * math.pi and abs(gamma[0]) < 1e-12:
        # already a full-circle grid in FFT order; no resampling
        return Z, 0, gamma.size
    m_min = max(int(round(padding_factor * 2.0 * math.pi / step)), 2 * n_terms + 2)
    m = sfft.next_fast_len(m_min, real=not np.iscomplexobj(Z))
    step_f = 2.0 * math.pi / m
    k = math.floor((gamma[-1] + 1e-12 * step) / step_f)
    gamma_f = step_f * np.arange(-k, k + 1)
    block = interp_or_zero(gamma_f, gamma[0], step, Z)
    return block, k, m


def fourier_coefficients_gamma(
    Z: np.ndarray,
    gamma: np.ndarray,
    n_terms: int,
    padding_factor: int = 4,
    keep_c: bool = True,
) -> SeriesCoefficients:
    """Continuous Fourier-series coefficients of Z along gamma.

    ``Z`` has shape (n_theta, n_gamma).  A symmetric support grid on
    [-gamma_max, gamma_max] is embedded into a zero-padded 2*pi-periodic
    grid (``padding_factor`` times the minimal full-circle grid at the
    input resolution, and at least 2*n_terms+2 samples); a grid already
    spanning the circle in FFT order (gamma_k = 2*pi*k/M) is used as is.
    """
    Z = np.asarray(Z)
    if Z.ndim != 2:
        raise ValueError("Z must be 2-D (n_theta, n_gamma)")
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    block, k, m = _circle_embedding(Z, np.asarray(gamma, dtype=np.float64), padding_factor, n_terms)
    if 2 * n_terms > m:
        raise ValueError(f"n_terms={n_terms} exceeds half the padded grid ({m})")
    n_theta = Z.shape[0]
    is_complex = np.iscomplexobj(block)
    b = np.empty((n_terms, n_theta), dtype=np.complex128)
    c = np.empty((2 * n_terms - 1, n_theta), dtype=np.complex128) if keep_c else None
    signs = np.where(np.arange(n_terms) % 2 == 0, 1.0, -1.0)[:, None]
    for lo in range(0, n_theta, _THETA_CHUNK):
        hi = min(lo + _THETA_CHUNK, n_theta)
        pad = np.zeros((hi - lo, m), dtype=np.complex128 if is_complex else np.float64)
        if k == 0 and block.shape[1] == m:
            pad[:] = block[lo:hi]
        else:
            pad[:, : k + 1] = block[lo:hi, k:]
            pad[:, m - k :] = block[lo:hi, :k]
        if is_complex:
            spec = sfft.fft(pad, axis=1, workers=get_workers()) / m
            c_pos = spec[:, :n_terms].T
            c_neg = np.concatenate([spec[:, :1], spec[:, m - n_terms + 1 :][:, ::-1]], axis=1).T
        else:
            spec = sfft.rfft(pad, axis=1, workers=get_workers()) / m
            c_pos = spec[:, :n_terms].T
            c_neg = np.conj(c_pos)
        b[0, lo:hi] = 2.0 * math.pi * c_pos[0]
        b[1:, lo:hi] = 2.0 * math.pi * (c_pos[1:] + signs[1:] * c_neg[1:])
        if keep_c:
            c[n_terms - 1 :, lo:hi] = c_pos
            c[: n_terms - 1, lo:hi] = c_neg[1:][::-1]
    return SeriesCoefficients(n_terms=n_terms, b=b, c=c)


def evaluate_series(coeffs: SeriesCoefficients, table: BesselTable) -> np.ndarray:
    """Truncated series sum_n b_n(theta) J_n(D sigma) as a matrix product.

    Returns a complex array of shape (n_theta, n_sigma).
    """
    if table.values.shape[0] < coeffs.n_terms:
        raise ValueError("Bessel table has fewer orders than the coefficients")
    J = table.values[: coeffs.n_terms]
    # contiguous operands keep the products on the fast BLAS path
    b_re = np.ascontiguousarray(coeffs.b.real)
    b_im = np.ascontiguousarray(coeffs.b.imag)
    return (J.T @ b_re).T + 1j * (J.T @ b_im).T


def _series_image(
    z: StandardFanSinogram, source_sino, n: int, eps: float, padding_factor: int, dc
) -> ImageGrid:
    geom = z.geometry
    n_theta2 = 2 * z.n_beta
    Z = shear_to_theta(z, n_theta2)
    sigma_max = math.pi * n / 2.0
    n_sigma = 2 * n + 1
    n_terms = choose_truncation(geom, sigma_max, eps)
    coeffs = fourier_coefficients_gamma(Z, z.gamma_grid, n_terms, padding_factor, keep_c=False)
    values = _cached_table_values(geom.d, n_terms, n_sigma, sigma_max)
    table = BesselTable(np.arange(n_terms), np.linspace(0.0, sigma_max, n_sigma), values)
    S = evaluate_series(coeffs, table)
    sigma = table.sigmas
    spec = np.zeros_like(S)
    spec[:, 1:] = 4.0 * math.pi / sigma[1:][None, :] * S[:, 1:]
    img = spectrum_to_image(PolarSpectrum(spec, sigma_max), n)
    return ImageGrid(restore_dc(img, source_sino, dc))


def standard_fan_backproject(
    w: StandardFanSinogram, n: int, eps: float = 1e-9, padding_factor: int = 4, dc="mass"
) -> ImageGrid:
    """Series backprojection of an equiangular fan sinogram."""
    return _series_image(w, w, n, eps, padding_factor, dc)


def linear_fan_backproject(
    g: LinearFanSinogram, n: int, eps: float = 1e-9, padding_factor: int = 4, dc="mass"
) -> ImageGrid:
    """Series backprojection of a flat-detector fan sinogram.

    Two steps: switch to the equiangular parametrization (L, then the
    tau = D sec^2 gamma weight), then the standard series route.
    """
    z = apply_tau(linear_to_standard(g, g.n_s))
    return _series_image(z, g, n, eps, padding_factor, dc)


def estimate_dc(sino) -> float:
    """Detector average of the first projection row (beta = 0 policy)."""
    data = getattr(sino, "data", None)
    if data is None or data.shape[0] < 1:
        raise ValueError("sinogram has no projection rows")
    return float(np.mean(data[0]))
