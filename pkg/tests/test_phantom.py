import math

import numpy as np
import pytest

from fanbeam import (
    Ellipse,
    analytic_radon,
    load_ellipse_config,
    phantom_mass,
    radon_point,
    rasterize,
    rotate_ellipses,
    shepp_logan_ellipses,
)

from oracles import line_integral_quadrature


def test_ellipse_support_validation():
    Ellipse((0.3, 0.0), (0.5, 0.2))
    with pytest.raises(ValueError):
        Ellipse((0.6, 0.0), (0.5, 0.2))
    with pytest.raises(ValueError):
        Ellipse((0.0, 0.0), (0.0, 0.2))


def test_rasterize_unit_disk_n2():
    img = rasterize([Ellipse((0, 0), (1, 1))], 2)
    np.testing.assert_array_equal(img.data, np.ones((2, 2)))


def test_rasterize_empty_is_zero():
    img = rasterize([], 64)
    assert img.n == 64
    assert not img.data.any()


def test_rasterize_center_pixel_matches_point_evaluation():
    ellipses = shepp_logan_ellipses()
    n = 256
    img = rasterize(ellipses, n)
    # pixel whose center is nearest the origin
    j = n // 2
    x = -1 + (2 * j + 1) / n
    expected = sum(e.amplitude for e in ellipses if e.contains(x, x))
    assert img.data[j, j] == pytest.approx(expected)


def test_rasterize_rejects_tiny_grids():
    with pytest.raises(ValueError):
        rasterize([], 1)


class TestAnalyticRadon:
    def test_unit_disk_chord(self):
        disk = [Ellipse((0, 0), (1, 1))]
        t = np.linspace(-1, 1, 41)
        for theta in (0.0, 0.7, 2.0):
            np.testing.assert_allclose(
                radon_point(disk, t, theta), 2 * np.sqrt(np.maximum(1 - t**2, 0)), atol=1e-12
            )

    def test_tangent_lines_vanish(self):
        disk = [Ellipse((0, 0), (1, 1))]
        assert radon_point(disk, 1.0, 0.3) == 0.0
        assert radon_point(disk, -1.0, 1.3) == 0.0

    def test_evenness_exact(self):
        ellipses = shepp_logan_ellipses()
        rng = np.random.default_rng(1)
        t = rng.uniform(-1, 1, 50)
        theta = rng.uniform(0, 2 * math.pi, 50)
        np.testing.assert_allclose(
            radon_point(ellipses, t, theta), radon_point(ellipses, -t, theta + math.pi), rtol=1e-13
        )

    def test_quadrature_cross_check(self):
        # independent midpoint-rule integration of the indicator phantom
        ellipses = [Ellipse((0.2, -0.1), (0.5, 0.3), 0.4, 1.5)]
        rng = np.random.default_rng(2)
        for t, theta in zip(rng.uniform(-0.8, 0.8, 5), rng.uniform(0, math.pi, 5)):
            exact = float(radon_point(ellipses, t, theta))
            approx = line_integral_quadrature(ellipses, t, theta)
            assert approx == pytest.approx(exact, abs=5e-4)

    def test_mass_conservation(self):
        ellipses = shepp_logan_ellipses()
        sino = analytic_radon(ellipses, 512, 16)
        mass = phantom_mass(ellipses)
        sums = np.trapezoid(sino.data, sino.t_grid, axis=1)
        np.testing.assert_allclose(sums, mass, rtol=1e-3)

    def test_grid_layout(self):
        sino = analytic_radon(shepp_logan_ellipses(), 32, 16)
        assert sino.data.shape == (16, 32)
        assert sino.theta_span == math.pi


def test_rotate_ellipses_moves_mass_rigidly():
    ellipses = shepp_logan_ellipses()
    rot = rotate_ellipses(ellipses, 0.7)
    assert phantom_mass(rot) == pytest.approx(phantom_mass(ellipses), rel=1e-14)
    p0 = radon_point(ellipses, 0.3, 1.0)
    p1 = radon_point(rot, 0.3, 1.0 + 0.7)
    assert p1 == pytest.approx(p0, rel=1e-12)


def test_shepp_logan_variants():
    classic = shepp_logan_ellipses()
    modified = shepp_logan_ellipses("modified")
    assert classic[0].amplitude == 2.0
    assert modified[0].amplitude == 1.0
    with pytest.raises(ValueError):
        shepp_logan_ellipses("bogus")


def test_config_round_trip(tmp_path):
    path = tmp_path / "phantom.txt"
    path.write_text(
        "# comment line\n"
        "0.1 -0.2 0.3 0.2 0.5 1.5\n"
        "\n"
        "0.0 0.0 0.4 0.4 0.0 -0.5  # trailing comment\n"
    )
    ellipses = load_ellipse_config(path)
    assert len(ellipses) == 2
    assert ellipses[0].center == (0.1, -0.2)
    assert ellipses[1].amplitude == -0.5


def test_config_rejects_malformed_lines(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("0.1 0.2 0.3\n")
    with pytest.raises(ValueError, match="expected 6 fields"):
        load_ellipse_config(path)
