import math

import numpy as np
import pytest

from fanbeam import (
    analytic_radon,
    image_coords,
    make_fan_geometry,
    rebin_to_linear,
    rebin_to_standard,
    shepp_logan_ellipses,
)


@pytest.fixture(scope="session")
def geom():
    return make_fan_geometry(10.0)


@pytest.fixture(scope="session")
def phantom():
    return shepp_logan_ellipses()


@pytest.fixture(scope="session")
def parallel128(phantom):
    return analytic_radon(phantom, 128, 128)


@pytest.fixture(scope="session")
def standard128(parallel128, geom):
    return rebin_to_standard(parallel128, geom, 128, 128)


@pytest.fixture(scope="session")
def linear128(parallel128, geom):
    return rebin_to_linear(parallel128, geom, 128, 128)


def disk_mask(n, radius=0.9):
    x1, x2 = image_coords(n)
    return x1**2 + x2**2 <= radius**2


def rel_l2(a, b, radius=0.9):
    """Relative L2 distance between images inside the given radius."""
    m = disk_mask(a.shape[0], radius)
    return float(np.linalg.norm((a - b)[m]) / np.linalg.norm(b[m]))


def beta_full_grid(geom, n_beta):
    n = int(round(2.0 * math.pi * n_beta / geom.beta_span))
    return 2.0 * math.pi * np.arange(n) / n, 2.0 * math.pi / n
