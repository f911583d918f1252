"""Pixel-driven backprojections: slow, direct discretizations used as
oracles for the Fourier-domain routes.

Parallel:  B p (x)   = 2 int_0^pi p(x . xi_theta, theta) dtheta
Standard:  B_s w (x) = int_0^2pi (1/L_beta) w(gamma_beta, beta) dbeta
Linear:    B_l g (x) = int_0^2pi sqrt(s_beta^2 + D^2)/(D U_beta) g(s_beta, beta) dbeta

with, per backprojected point x and source position r_beta = D xi_beta_perp,

    L_beta     = |r_beta - x|
    gamma_beta = arctan(u / (D - v)),  u = x . xi_beta,  v = x . xi_beta_perp
    U_beta     = (D^2 - r_beta . x)/D^2 = (D - v)/D
    s_beta     = x . xi_beta / U_beta  = D tan(gamma_beta)

The sign of gamma_beta follows the sign of u, which is what makes the
operators the adjoints of the forward rebinnings (a flipped sign fails
the dot-product tests).  The fan integrals run over the full source
circle, short-scan data being extended by the fan symmetry; detector
coordinates outside the fan contribute zero.
"""

from __future__ import annotations

import math

import numpy as np

from ._interp import interp_or_zero
from .core import ImageGrid, LinearFanSinogram, ParallelSinogram, StandardFanSinogram, image_coords
from .rebinning import FanSampler

__all__ = [
    "source_position",
    "backproject_parallel",
    "backproject_standard_fan",
    "backproject_linear_fan",
]


def source_position(d: float, beta):
    """Cartesian source position r_beta = D * (-sin beta, cos beta)."""
    beta = np.asarray(beta, dtype=np.float64)
    return -d * np.sin(beta), d * np.cos(beta)


def _full_circle_grid(sino):
    n = int(round(2.0 * math.pi * sino.n_beta / sino.geometry.beta_span))
    return 2.0 * math.pi * np.arange(n) / n, 2.0 * math.pi / n


def backproject_parallel(p: ParallelSinogram, n: int) -> ImageGrid:
    """Riemann-sum backprojection with linear interpolation along t.

    Half-range input uses the evenness factor 2 over [0, pi); full-circle
    input integrates over [0, 2*pi) without it.
    """
    x1, x2 = image_coords(n)
    out = np.zeros((n, n))
    dt = 2.0 / (p.n_t - 1)
    dtheta = p.theta_span / p.n_theta
    weight = dtheta if p.full_circle else 2.0 * dtheta
    for row, theta in zip(p.data, p.theta_grid):
        t = x1 * math.cos(theta) + x2 * math.sin(theta)
        out += interp_or_zero(t, -1.0, dt, row)
    return ImageGrid(out * weight)


def backproject_standard_fan(w: StandardFanSinogram, n: int) -> ImageGrid:
    """Distance-weighted fan backprojection on the equiangular detector."""
    d = w.geometry.d
    sampler = FanSampler(w)
    x1, x2 = image_coords(n)
    out = np.zeros((n, n))
    betas, dbeta = _full_circle_grid(w)
    for beta in betas:
        u = x1 * math.cos(beta) + x2 * math.sin(beta)
        v = -x1 * math.sin(beta) + x2 * math.cos(beta)
        gamma = np.arctan2(u, d - v)
        dist = np.hypot(u, d - v)
        out += sampler.sample(gamma, beta) / dist
    return ImageGrid(out * dbeta)


def backproject_linear_fan(g: LinearFanSinogram, n: int) -> ImageGrid:
    """Flat-detector fan backprojection with the magnification weight."""
    d = g.geometry.d
    sampler = FanSampler(g)
    x1, x2 = image_coords(n)
    out = np.zeros((n, n))
    betas, dbeta = _full_circle_grid(g)
    for beta in betas:
        u = x1 * math.cos(beta) + x2 * math.sin(beta)
        v = -x1 * math.sin(beta) + x2 * math.cos(beta)
        big_u = (d - v) / d
        s = u / big_u
        weight = np.hypot(s, d) / (d * big_u)
        out += weight * sampler.sample(s, beta)
    return ImageGrid(out * dbeta)
