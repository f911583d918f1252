"""Rebinning algebra: adjoints of the fan resamplings and the
geometry-switch operator between the two fan parametrizations.

Adjoint of a smooth invertible rebinning = (Jacobian of the change of
variables) x (inverse rebinning).  For the two fan rebinnings, with
t the parallel offset and D the source distance:

    gamma(t) = arcsin(t/D)          J_s(t) = 1 / sqrt(D^2 - t^2)
    s(t)     = t D / sqrt(D^2-t^2)  J_l(t) = D^3 / (D^2 - t^2)^(3/2)

    M_s* w (t, theta) = w(gamma(t), theta - gamma(t)) J_s(t)
    M_l* g (t, theta) = g(s(t),     theta - gamma(t)) J_l(t)

Fan sinograms are stored on the measured short-scan window
[0, beta_span) but represent functions on the full source circle: a
sample at an unmeasured beta is pulled back through the fan symmetry
w(gamma, beta) = w(-gamma, beta + 2*gamma + pi), whose partner always
lands inside the window.  The adjoint outputs therefore live on
theta in [0, 2*pi), and the parallel backprojection that consumes them
integrates over the full circle without the evenness factor 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._interp import bilinear
from .core import LinearFanSinogram, ParallelSinogram, StandardFanSinogram

__all__ = [
    "ChangeOfVariables",
    "FanSampler",
    "adjoint_rebin_standard",
    "adjoint_rebin_linear",
    "linear_to_standard",
    "linear_to_standard_adjoint",
    "apply_tau",
    "shear_to_theta",
    "sample_standard_fan",
    "sample_linear_fan",
]


@dataclass(frozen=True)
class ChangeOfVariables:
    """Closed forms of the fan change of variables for a given geometry."""

    d: float

    def gamma_of_t(self, t):
        return np.arcsin(np.asarray(t, dtype=np.float64) / self.d)

    def s_of_t(self, t):
        t = np.asarray(t, dtype=np.float64)
        return t * self.d / np.sqrt(self.d**2 - t**2)

    def jac_s(self, t):
        t = np.asarray(t, dtype=np.float64)
        return 1.0 / np.sqrt(self.d**2 - t**2)

    def jac_l(self, t):
        t = np.asarray(t, dtype=np.float64)
        return self.d**3 / (self.d**2 - t**2) ** 1.5


class FanSampler:
    """Bilinear evaluation of a fan sinogram anywhere on the full circle.

    Precomputes one wrap row at beta = beta_span (obtained through the
    symmetry relation) so that direct samples interpolate across the end
    of the measured window, and resolves beta outside [0, beta_span]
    through the symmetry partner.  Detector coordinates outside the fan
    return zero.
    """

    def __init__(self, sino):
        geom = sino.geometry
        self.beta_span = geom.beta_span
        self.d = geom.d
        if isinstance(sino, StandardFanSinogram):
            self.half_width = geom.gamma_max
            self._angle_of = lambda det: det
        elif isinstance(sino, LinearFanSinogram):
            self.half_width = geom.s_max
            self._angle_of = lambda det: np.arctan(det / self.d)
        else:
            raise TypeError(f"unsupported sinogram type {type(sino).__name__}")
        data = sino.data
        n_beta, n_det = data.shape
        self.dbeta = self.beta_span / n_beta
        self.ddet = 2.0 * self.half_width / (n_det - 1)
        det = -self.half_width + self.ddet * np.arange(n_det)
        # wrap row: value at beta_span equals the symmetry partner at -det;
        # the partner angle lies in [0, beta_span] exactly, so clamp the
        # roundoff of beta_span - pi
        wrap_beta = np.clip(2.0 * self._angle_of(det) + (self.beta_span - math.pi), 0.0, self.beta_span)
        wrap = bilinear(data, wrap_beta / self.dbeta, np.arange(n_det)[::-1].astype(np.float64))
        self.ext = np.vstack([data, wrap])

    def sample(self, det, beta):
        det = np.asarray(det, dtype=np.float64)
        beta = np.mod(np.asarray(beta, dtype=np.float64), 2.0 * math.pi)
        det, beta = np.broadcast_arrays(det, beta)
        partner = beta > self.beta_span
        angle = self._angle_of(det)
        det = np.where(partner, -det, det)
        beta = np.where(partner, beta + 2.0 * angle - math.pi, beta)
        return bilinear(self.ext, beta / self.dbeta, (det + self.half_width) / self.ddet)


def sample_standard_fan(w: StandardFanSinogram, gamma, beta):
    """w at scattered (gamma, beta), beta anywhere on the circle."""
    return FanSampler(w).sample(gamma, beta)


def sample_linear_fan(g: LinearFanSinogram, s, beta):
    """g at scattered (s, beta), beta anywhere on the circle."""
    return FanSampler(g).sample(s, beta)


def _adjoint_grids(n_t: int, n_theta2pi: int):
    if n_t < 2 or n_theta2pi < 2:
        raise ValueError("need n_t >= 2 and n_theta2pi >= 2")
    t = np.linspace(-1.0, 1.0, n_t)
    theta = 2.0 * math.pi * np.arange(n_theta2pi) / n_theta2pi
    return t, theta


def adjoint_rebin_standard(w: StandardFanSinogram, n_t: int, n_theta2pi: int) -> ParallelSinogram:
    """M_s* : standard fan sinogram -> parallel sinogram on [0, 2*pi)."""
    cov = ChangeOfVariables(w.geometry.d)
    t, theta = _adjoint_grids(n_t, n_theta2pi)
    gamma = cov.gamma_of_t(t)[None, :]
    vals = FanSampler(w).sample(gamma, theta[:, None] - gamma)
    return ParallelSinogram(vals * cov.jac_s(t)[None, :], theta_span=2.0 * math.pi)


def adjoint_rebin_linear(g: LinearFanSinogram, n_t: int, n_theta2pi: int) -> ParallelSinogram:
    """M_l* : linear fan sinogram -> parallel sinogram on [0, 2*pi)."""
    cov = ChangeOfVariables(g.geometry.d)
    t, theta = _adjoint_grids(n_t, n_theta2pi)
    gamma = cov.gamma_of_t(t)[None, :]
    s = cov.s_of_t(t)[None, :]
    vals = FanSampler(g).sample(s, theta[:, None] - gamma)
    return ParallelSinogram(vals * cov.jac_l(t)[None, :], theta_span=2.0 * math.pi)


def linear_to_standard(g: LinearFanSinogram, n_gamma: int) -> StandardFanSinogram:
    """L : resample a flat-detector sinogram onto the equiangular grid.

    One-dimensional linear interpolation along s at s = D tan(gamma);
    zero where |D tan gamma| exceeds the detector half-width.
    """
    if n_gamma < 2:
        raise ValueError("need n_gamma >= 2")
    geom = g.geometry
    gamma = np.linspace(-geom.gamma_max, geom.gamma_max, n_gamma)
    s = geom.d * np.tan(gamma)
    ds = 2.0 * geom.s_max / (g.n_s - 1)
    v = (s + geom.s_max) / ds
    rows = np.arange(g.n_beta, dtype=np.float64)[:, None]
    data = bilinear(g.data, np.broadcast_to(rows, (g.n_beta, n_gamma)), np.broadcast_to(v, (g.n_beta, n_gamma)))
    return StandardFanSinogram(data, geom)


def linear_to_standard_adjoint(w: StandardFanSinogram, n_s: int) -> LinearFanSinogram:
    """L* : Jacobian-weighted inverse resampling, gamma = arctan(s/D).

    L* w (s, beta) = D/(D^2+s^2) * w(arctan(s/D), beta).
    """
    if n_s < 2:
        raise ValueError("need n_s >= 2")
    geom = w.geometry
    s = np.linspace(-geom.s_max, geom.s_max, n_s)
    gamma = np.arctan(s / geom.d)
    jac = geom.d / (geom.d**2 + s**2)
    dgamma = 2.0 * geom.gamma_max / (w.n_gamma - 1)
    v = (gamma + geom.gamma_max) / dgamma
    rows = np.arange(w.n_beta, dtype=np.float64)[:, None]
    data = bilinear(w.data, np.broadcast_to(rows, (w.n_beta, n_s)), np.broadcast_to(v, (w.n_beta, n_s)))
    return LinearFanSinogram(data * jac[None, :], geom)


def apply_tau(w: StandardFanSinogram) -> StandardFanSinogram:
    """Multiply by tau(gamma) = D sec^2(gamma), the inverse of L*'s weight."""
    geom = w.geometry
    tau = geom.d / np.cos(w.gamma_grid) ** 2
    return StandardFanSinogram(w.data * tau[None, :], geom)


def shear_to_theta(z: StandardFanSinogram, n_theta2pi: int) -> np.ndarray:
    """Shear the source angle into the parallel angle: Z(gamma, theta) = z(gamma, theta - gamma).

    Returns an array of shape (n_theta2pi, n_gamma) on the grid
    [0, 2*pi) x [-gamma_max, gamma_max]; each gamma column is shifted
    along beta with 1-D linear interpolation, the fan symmetry supplying
    the values beyond the measured window.
    """
    if n_theta2pi < 2:
        raise ValueError("need n_theta2pi >= 2")
    theta = 2.0 * math.pi * np.arange(n_theta2pi) / n_theta2pi
    gamma = z.gamma_grid
    return FanSampler(z).sample(gamma[None, :], theta[:, None] - gamma[None, :])
