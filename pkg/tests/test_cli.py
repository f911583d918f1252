import csv
import math

import numpy as np
import pytest

from fanbeam.cli import main
from fanbeam.gridfile import read_grid


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture(scope="module")
def parallel_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "p.grd"
    assert run("phantom", "--n", 128, "--sinogram", "--out", path) == 0
    return path


class TestPhantomCommand:
    def test_default_phantom_full_size(self, tmp_path):
        out = tmp_path / "img.grd"
        assert run("phantom", "--n", 1024, "--out", out) == 0
        grid = read_grid(out)
        assert grid.data.shape == (1024, 1024)
        assert grid.axis0 == (-1.0, 1.0)

    def test_sinogram_metadata(self, parallel_file):
        grid = read_grid(parallel_file)
        assert grid.data.shape == (128, 128)
        assert grid.axis0 == (0.0, math.pi)
        assert grid.axis1 == (-1.0, 1.0)

    def test_zero_size_is_usage_error(self, tmp_path, capsys):
        with pytest.raises(SystemExit) as exc:
            run("phantom", "--n", 0, "--out", tmp_path / "x.grd")
        assert exc.value.code == 2

    def test_unreadable_config_exits_2(self, tmp_path):
        assert run("phantom", "--n", 16, "--config", tmp_path / "missing.txt", "--out", tmp_path / "x.grd") == 2

    def test_config_and_preview(self, tmp_path):
        cfg = tmp_path / "ph.txt"
        cfg.write_text("0 0 0.5 0.5 0 1\n")
        out = tmp_path / "img.grd"
        pgm = tmp_path / "img.pgm"
        assert run("phantom", "--n", 32, "--config", cfg, "--out", out, "--preview", pgm) == 0
        header = pgm.read_bytes()[:15]
        assert header.startswith(b"P5\n32 32\n255\n")


class TestProjectCommand:
    def test_standard_metadata(self, parallel_file, tmp_path):
        out = tmp_path / "w.grd"
        assert run("project", "--in", parallel_file, "--geometry", "standard", "--d", 10, "--out", out) == 0
        grid = read_grid(out)
        gamma_max = math.asin(0.1)
        assert grid.axis1 == pytest.approx((-gamma_max, gamma_max))
        assert grid.axis0 == pytest.approx((0.0, math.pi + 2 * gamma_max))

    def test_linear_metadata(self, parallel_file, tmp_path):
        out = tmp_path / "g.grd"
        assert run("project", "--in", parallel_file, "--geometry", "linear", "--out", out) == 0
        grid = read_grid(out)
        s_max = 10 / math.sqrt(99)
        assert grid.axis1 == pytest.approx((-s_max, s_max))

    def test_bad_distance_exits_2(self, parallel_file, tmp_path):
        assert run("project", "--in", parallel_file, "--geometry", "linear", "--d", 1.0, "--out", tmp_path / "g.grd") == 2

    def test_missing_input_exits_2(self, tmp_path):
        assert run("project", "--in", tmp_path / "none.grd", "--geometry", "linear", "--out", tmp_path / "g.grd") == 2


@pytest.fixture(scope="module")
def linear_file(parallel_file, tmp_path_factory):
    path = tmp_path_factory.mktemp("fan") / "g.grd"
    assert run("project", "--in", parallel_file, "--geometry", "linear", "--out", path) == 0
    return path


class TestBackprojectCommand:
    def test_method_profiles_agree(self, linear_file, tmp_path):
        outs = {}
        for method in ("bessel", "rebin-bst"):
            out = tmp_path / f"{method}.grd"
            csv_path = tmp_path / f"{method}.csv"
            code = run(
                "backproject", "--in", linear_file, "--geometry", "linear", "--method", method,
                "--n", 128, "--profile-row", 71, "--profile-csv", csv_path, "--out", out,
            )
            assert code == 0
            with open(csv_path) as fh:
                rows = list(csv.reader(fh))
            assert rows[0] == ["x1", "value"]
            outs[method] = np.array([float(r[1]) for r in rows[1:]])
        span = outs["rebin-bst"].max() - outs["rebin-bst"].min()
        assert np.abs(outs["bessel"] - outs["rebin-bst"]).max() / span < 0.03

    def test_direct_matches_bessel(self, linear_file, tmp_path):
        imgs = {}
        for method in ("direct", "bessel"):
            out = tmp_path / f"{method}.grd"
            assert run("backproject", "--in", linear_file, "--geometry", "linear", "--method", method,
                       "--n", 64, "--out", out) == 0
            imgs[method] = read_grid(out).data
        from conftest import rel_l2

        assert rel_l2(imgs["bessel"], imgs["direct"]) < 0.05

    def test_geometry_mismatch_exits_2(self, linear_file, tmp_path):
        assert run("backproject", "--in", linear_file, "--geometry", "standard", "--n", 32,
                   "--out", tmp_path / "x.grd") == 2

    def test_missing_input_exits_2(self, tmp_path):
        assert run("backproject", "--in", tmp_path / "none.grd", "--geometry", "linear", "--n", 32,
                   "--out", tmp_path / "x.grd") == 2


def test_threads_flag_and_env(tmp_path, monkeypatch):
    from fanbeam._threads import get_workers, set_workers

    monkeypatch.setenv("TOMO_THREADS", "3")
    set_workers(None)
    assert get_workers() == 3
    out = tmp_path / "img.grd"
    assert run("--threads", 1, "phantom", "--n", 16, "--out", out) == 0
    assert get_workers() == 1
    set_workers(None)
    monkeypatch.delenv("TOMO_THREADS")


class TestBenchCommand:
    def test_empty_sizes_header_only(self, tmp_path):
        out = tmp_path / "bench.csv"
        assert run("bench", "--sizes", "", "--out-csv", out) == 0
        with open(out) as fh:
            rows = list(csv.reader(fh))
        assert rows == [["method", "n", "n_theta", "seconds"]]

    def test_small_run_records_all_methods(self, tmp_path):
        out = tmp_path / "bench.csv"
        assert run("bench", "--sizes", "32", "--methods", "direct,bst", "--repetitions", 1,
                   "--out-csv", out) == 0
        with open(out) as fh:
            rows = list(csv.reader(fh))[1:]
        assert {r[0] for r in rows} == {"direct", "bst"}
        assert all(float(r[3]) >= 0 for r in rows)

    def test_unknown_method_exits_2(self, tmp_path):
        assert run("bench", "--sizes", "32", "--methods", "warp", "--out-csv", tmp_path / "b.csv") == 2
