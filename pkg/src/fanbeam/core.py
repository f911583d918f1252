"""Grids, sinogram containers, and acquisition geometry.

Conventions shared by every module:

* Images live on the square [-1, 1]^2 with the object supported in the
  closed unit disk.  Pixel (i, j) of an n x n image is centered at
  ``x1 = -1 + (2j + 1)/n``, ``x2 = -1 + (2i + 1)/n``.
* All 2-D data arrays are row-major with the angular variable as the
  slow (row) axis and the detector/radial variable as the fast axis.
* Radial grids (t, gamma, s) include both endpoints; angular grids
  (theta, beta) are half open, excluding the upper bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ImageGrid",
    "ParallelSinogram",
    "FanGeometry",
    "StandardFanSinogram",
    "LinearFanSinogram",
    "PolarSpectrum",
    "make_fan_geometry",
    "image_coords",
]


class GeometryError(ValueError):
    """Raised for physically impossible acquisition parameters."""


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=a.dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ImageGrid:
    """n x n real image on [-1, 1]^2, unit-disk object support."""

    data: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.data, dtype=np.float64)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError(f"image data must be square, got {d.shape}")
        object.__setattr__(self, "data", _freeze(d))

    @property
    def n(self) -> int:
        return self.data.shape[0]

    def coords(self):
        """Pixel-center coordinate arrays (x1 along columns, x2 along rows)."""
        return image_coords(self.n)


def image_coords(n: int):
    c = -1.0 + (2.0 * np.arange(n) + 1.0) / n
    return np.meshgrid(c, c, indexing="xy")


@dataclass(frozen=True)
class ParallelSinogram:
    """p(t, theta) sampled on [-1, 1] x [0, theta_span).

    ``data`` has shape (n_theta, n_t); ``theta_span`` is ``pi`` for
    measured sinograms and ``2*pi`` for full-circle data produced by the
    adjoint rebinning operators.
    """

    data: np.ndarray
    theta_span: float = math.pi

    def __post_init__(self):
        d = np.asarray(self.data, dtype=np.float64)
        if d.ndim != 2 or d.shape[0] < 1 or d.shape[1] < 2:
            raise ValueError(f"sinogram data must be (n_theta, n_t>=2), got {d.shape}")
        if not (math.isclose(self.theta_span, math.pi) or math.isclose(self.theta_span, 2 * math.pi)):
            raise ValueError("theta_span must be pi or 2*pi")
        object.__setattr__(self, "data", _freeze(d))

    @property
    def n_theta(self) -> int:
        return self.data.shape[0]

    @property
    def n_t(self) -> int:
        return self.data.shape[1]

    @property
    def full_circle(self) -> bool:
        return self.theta_span > 4.0

    @property
    def t_grid(self) -> np.ndarray:
        return np.linspace(-1.0, 1.0, self.n_t)

    @property
    def theta_grid(self) -> np.ndarray:
        return self.theta_span * np.arange(self.n_theta) / self.n_theta


@dataclass(frozen=True)
class FanGeometry:
    """Source circle of radius d around the unit-disk object.

    ``s_max`` is the largest linear-detector coordinate whose ray meets
    the unit disk, ``gamma_max`` the corresponding fan half-angle, and
    ``beta_span`` the short-scan range of source angles that sees each
    line through the disk.
    """

    d: float
    s_max: float = field(default=0.0)
    gamma_max: float = field(default=0.0)
    beta_span: float = field(default=0.0)

    def __post_init__(self):
        if not (self.d > 1.0):
            raise GeometryError(f"source distance d={self.d} must exceed the unit-disk radius")
        gamma_max = math.asin(1.0 / self.d)
        s_max = self.d / math.sqrt(self.d * self.d - 1.0)
        object.__setattr__(self, "gamma_max", gamma_max)
        object.__setattr__(self, "s_max", s_max)
        object.__setattr__(self, "beta_span", math.pi + 2.0 * gamma_max)


def make_fan_geometry(d: float) -> FanGeometry:
    """Build the fan geometry for source-origin distance ``d`` (> 1)."""
    return FanGeometry(float(d))


@dataclass(frozen=True)
class StandardFanSinogram:
    """w(gamma, beta) on [-gamma_max, gamma_max] x [0, beta_span).

    ``data`` has shape (n_beta, n_gamma).
    """

    data: np.ndarray
    geometry: FanGeometry

    def __post_init__(self):
        d = np.asarray(self.data, dtype=np.float64)
        if d.ndim != 2 or d.shape[0] < 1 or d.shape[1] < 2:
            raise ValueError(f"fan data must be (n_beta>=1, n_gamma>=2), got {d.shape}")
        object.__setattr__(self, "data", _freeze(d))

    @property
    def n_beta(self) -> int:
        return self.data.shape[0]

    @property
    def n_gamma(self) -> int:
        return self.data.shape[1]

    @property
    def gamma_grid(self) -> np.ndarray:
        g = self.geometry.gamma_max
        return np.linspace(-g, g, self.n_gamma)

    @property
    def beta_grid(self) -> np.ndarray:
        return self.geometry.beta_span * np.arange(self.n_beta) / self.n_beta


@dataclass(frozen=True)
class LinearFanSinogram:
    """g(s, beta) on [-s_max, s_max] x [0, beta_span).

    ``data`` has shape (n_beta, n_s).
    """

    data: np.ndarray
    geometry: FanGeometry

    def __post_init__(self):
        d = np.asarray(self.data, dtype=np.float64)
        if d.ndim != 2 or d.shape[0] < 1 or d.shape[1] < 2:
            raise ValueError(f"fan data must be (n_beta>=1, n_s>=2), got {d.shape}")
        object.__setattr__(self, "data", _freeze(d))

    @property
    def n_beta(self) -> int:
        return self.data.shape[0]

    @property
    def n_s(self) -> int:
        return self.data.shape[1]

    @property
    def s_grid(self) -> np.ndarray:
        s = self.geometry.s_max
        return np.linspace(-s, s, self.n_s)

    @property
    def beta_grid(self) -> np.ndarray:
        return self.geometry.beta_span * np.arange(self.n_beta) / self.n_beta


@dataclass(frozen=True)
class PolarSpectrum:
    """Complex samples on the polar frequency grid [0, sigma_max] x [0, 2*pi).

    ``data`` has shape (n_theta, n_sigma); sigma is angular frequency
    (radians per unit length) sampled uniformly including both endpoints,
    theta is uniform and half open on the full circle.
    """

    data: np.ndarray
    sigma_max: float

    def __post_init__(self):
        d = np.asarray(self.data, dtype=np.complex128)
        if d.ndim != 2 or d.shape[0] < 1 or d.shape[1] < 2:
            raise ValueError(f"spectrum data must be (n_theta, n_sigma>=2), got {d.shape}")
        if not (self.sigma_max > 0):
            raise ValueError("sigma_max must be positive")
        object.__setattr__(self, "data", _freeze(d))

    @property
    def n_theta(self) -> int:
        return self.data.shape[0]

    @property
    def n_sigma(self) -> int:
        return self.data.shape[1]

    @property
    def sigma_grid(self) -> np.ndarray:
        return np.linspace(0.0, self.sigma_max, self.n_sigma)

    @property
    def theta_grid(self) -> np.ndarray:
        return 2.0 * math.pi * np.arange(self.n_theta) / self.n_theta
