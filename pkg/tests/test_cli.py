import json
import math
import subprocess
import sys

import numpy as np
import pytest
from conftest import angle_between


def run_cli(*args, stdin_text=None):
    return subprocess.run(
        [sys.executable, "-m", "orthofit", *args],
        capture_output=True,
        text=True,
        input=stdin_text,
    )


def write_collinear(path):
    rows = ["0,0,0", "1,1,1", "2,2,2"]
    path.write_text("\n".join(rows) + "\n")
    return path


@pytest.fixture()
def noisy_cloud(tmp_path):
    out = tmp_path / "cloud.csv"
    proc = run_cli(
        "gen",
        "--output", str(out),
        "--n", "60",
        "--dim", "3",
        "--seed", "42",
        "--sigma", "0.05",
        "--direction", "1,2,3",
    )
    assert proc.returncode == 0
    return out


def header_direction(path):
    for line in path.read_text().splitlines():
        if line.startswith("# direction:"):
            return np.array([float(v) for v in line.split(":", 1)[1].split(",")])
    raise AssertionError("no direction header in generated file")


class TestFitCommand:
    def test_collinear_table(self, tmp_path):
        cloud = write_collinear(tmp_path / "line.csv")
        proc = run_cli("fit", "--input", str(cloud))
        assert proc.returncode == 0
        assert "0.57735026919" in proc.stdout
        assert "direction" in proc.stdout
        assert "ambiguous          no" in proc.stdout

    def test_json_schema_and_roundtrip(self, noisy_cloud):
        proc = run_cli("fit", "--input", str(noisy_cloud), "--format", "json")
        assert proc.returncode == 0
        doc = json.loads(proc.stdout)
        assert set(doc) == {
            "anchor",
            "direction",
            "total_sq_distance",
            "spectrum",
            "ambiguous",
        }
        assert len(doc["anchor"]) == 3
        assert len(doc["direction"]) == 3
        assert len(doc["spectrum"]) == 3
        assert isinstance(doc["ambiguous"], bool)
        assert json.loads(json.dumps(doc)) == doc
        assert abs(float(np.linalg.norm(doc["direction"])) - 1.0) <= 1e-12

    def test_json_per_point(self, noisy_cloud):
        proc = run_cli(
            "fit", "--input", str(noisy_cloud), "--format", "json", "--per-point"
        )
        doc = json.loads(proc.stdout)
        assert len(doc["per_point_sq"]) == 60
        total = 0.0
        for value in doc["per_point_sq"]:
            total += value
        assert abs(total - doc["total_sq_distance"]) <= 1e-12 * max(total, 1.0)

    def test_csv_residuals(self, noisy_cloud):
        proc = run_cli("fit", "--input", str(noisy_cloud), "--format", "csv")
        lines = proc.stdout.splitlines()
        comments = [l for l in lines if l.startswith("#")]
        assert any(l.startswith("# direction:") for l in comments)
        assert "index,sq_distance" in lines
        data = [l for l in lines if l and not l.startswith("#") and "," in l and "sq" not in l]
        assert len(data) == 60

    def test_output_file_matches_stdout(self, noisy_cloud, tmp_path):
        out = tmp_path / "fit.json"
        run_cli("fit", "--input", str(noisy_cloud), "--format", "json", "--output", str(out))
        proc = run_cli("fit", "--input", str(noisy_cloud), "--format", "json")
        assert out.read_text() == proc.stdout

    def test_stdin_input(self):
        proc = run_cli("fit", "--format", "json", stdin_text="0,0\n1,1\n2,2\n")
        assert proc.returncode == 0
        doc = json.loads(proc.stdout)
        assert abs(doc["direction"][0] - math.sqrt(0.5)) <= 1e-12

    def test_deterministic_output(self, noisy_cloud):
        results = [
            run_cli("fit", "--input", str(noisy_cloud), "--format", fmt).stdout
            for fmt in ("table", "json", "csv")
        ]
        repeats = [
            run_cli("fit", "--input", str(noisy_cloud), "--format", fmt).stdout
            for fmt in ("table", "json", "csv")
        ]
        assert results == repeats


class TestFitErrors:
    def test_empty_input(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text("")
        proc = run_cli("fit", "--input", str(empty))
        assert proc.returncode == 3
        assert "no points" in proc.stderr

    def test_single_point(self, tmp_path):
        single = tmp_path / "one.csv"
        single.write_text("1,2,3\n")
        proc = run_cli("fit", "--input", str(single))
        assert proc.returncode == 2

    def test_coincident_points(self, tmp_path):
        same = tmp_path / "same.csv"
        same.write_text("1,2\n1,2\n1,2\n")
        proc = run_cli("fit", "--input", str(same))
        assert proc.returncode == 2
        assert "coincide" in proc.stderr

    def test_bad_token_reports_line(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("1,2\n# fine\n3,oops\n")
        proc = run_cli("fit", "--input", str(bad))
        assert proc.returncode == 3
        assert "line 3" in proc.stderr

    def test_ragged_row_reports_line(self, tmp_path):
        ragged = tmp_path / "ragged.csv"
        ragged.write_text("1,2,3\n4,5\n")
        proc = run_cli("fit", "--input", str(ragged))
        assert proc.returncode == 3
        assert "line 2" in proc.stderr

    def test_non_finite_rejected(self, tmp_path):
        bad = tmp_path / "inf.csv"
        bad.write_text("1,2\nnan,4\n")
        proc = run_cli("fit", "--input", str(bad))
        assert proc.returncode == 3

    def test_missing_file(self):
        proc = run_cli("fit", "--input", "does-not-exist.csv")
        assert proc.returncode == 3

    def test_unknown_flag(self):
        proc = run_cli("fit", "--nope")
        assert proc.returncode == 3

    def test_no_convergence_exit_code(self, tmp_path):
        rng = np.random.default_rng(0)
        pts = rng.uniform(-1.0, 1.0, (20, 3))
        cloud = tmp_path / "c.csv"
        cloud.write_text("\n".join(",".join(repr(float(v)) for v in row) for row in pts) + "\n")
        proc = run_cli(
            "fit", "--input", str(cloud), "--tol", "1e-30", "--max-sweeps", "1"
        )
        assert proc.returncode == 4

    def test_help_exits_zero(self):
        assert run_cli("--help").returncode == 0
        assert run_cli("fit", "--help").returncode == 0


class TestGenCommand:
    def test_deterministic(self, tmp_path):
        a = run_cli("gen", "--n", "30", "--dim", "2", "--seed", "9").stdout
        b = run_cli("gen", "--n", "30", "--dim", "2", "--seed", "9").stdout
        assert a == b

    def test_seed_changes_output(self):
        a = run_cli("gen", "--n", "10", "--seed", "1").stdout
        b = run_cli("gen", "--n", "10", "--seed", "2").stdout
        assert a != b

    def test_shape_and_header(self, tmp_path):
        out = tmp_path / "g.csv"
        run_cli("gen", "--output", str(out), "--n", "17", "--dim", "4", "--seed", "3")
        direction = header_direction(out)
        assert direction.shape == (4,)
        assert abs(float(np.linalg.norm(direction)) - 1.0) <= 1e-12
        rows = [l for l in out.read_text().splitlines() if l and not l.startswith("#")]
        assert len(rows) == 17
        assert all(len(r.split(",")) == 4 for r in rows)

    def test_exact_recovery_when_noiseless(self, tmp_path):
        out = tmp_path / "exact.csv"
        run_cli(
            "gen", "--output", str(out),
            "--n", "25", "--dim", "3", "--seed", "11",
            "--sigma", "0", "--direction", "3,-1,4", "--anchor", "0.5,0.5,0.5",
        )
        true_direction = header_direction(out)
        proc = run_cli("fit", "--input", str(out), "--format", "json")
        doc = json.loads(proc.stdout)
        assert angle_between(doc["direction"], true_direction) <= 1e-9
        xi = float(np.sum(doc["spectrum"]))
        assert doc["total_sq_distance"] <= 1e-18 * xi

    def test_noisy_recovery_within_a_degree(self, noisy_cloud):
        true_direction = header_direction(noisy_cloud)
        doc = json.loads(run_cli("fit", "--input", str(noisy_cloud), "--format", "json").stdout)
        assert angle_between(doc["direction"], true_direction) <= math.radians(1.0)

    def test_noise_level_matches_sigma(self, tmp_path):
        out = tmp_path / "big.csv"
        run_cli(
            "gen", "--output", str(out),
            "--n", "2000", "--dim", "3", "--seed", "5", "--sigma", "0.1",
        )
        doc = json.loads(run_cli("fit", "--input", str(out), "--format", "json").stdout)
        # Orthogonal scatter has dim-1 = 2 noise components of variance
        # sigma^2 each, so the mean squared distance should sit near 0.02.
        mean_sq = doc["total_sq_distance"] / 2000.0
        assert abs(mean_sq - 0.02) <= 0.003

    def test_t_range_controls_spread(self, tmp_path):
        out = tmp_path / "span.csv"
        run_cli(
            "gen", "--output", str(out),
            "--n", "200", "--dim", "2", "--seed", "6",
            "--sigma", "0.01", "--direction", "1,0", "--t-range", "0", "4",
        )
        pts = np.array(
            [[float(v) for v in l.split(",")]
             for l in out.read_text().splitlines() if l and not l.startswith("#")]
        )
        assert pts[:, 0].min() >= -0.5
        assert pts[:, 0].max() <= 4.5
        assert pts[:, 0].max() > 3.0

    def test_uniform_noise_model(self, tmp_path):
        out = tmp_path / "u.csv"
        proc = run_cli(
            "gen", "--output", str(out), "--n", "50", "--seed", "7", "--noise", "uniform"
        )
        assert proc.returncode == 0
        assert "noise=uniform" in out.read_text().splitlines()[0]

    def test_zero_direction_rejected(self):
        proc = run_cli("gen", "--direction", "0,0,0")
        assert proc.returncode == 2

    def test_bad_parameters_rejected(self):
        assert run_cli("gen", "--n", "1").returncode == 3
        assert run_cli("gen", "--dim", "1").returncode == 3
        assert run_cli("gen", "--sigma", "-0.5").returncode == 3
        assert run_cli("gen", "--t-range", "2", "2").returncode == 3
        assert run_cli("gen", "--direction", "1,2").returncode == 3  # dim mismatch


class TestCompareCommand:
    def test_steep_cloud_favors_orthogonal(self, tmp_path):
        cloud = tmp_path / "steep.csv"
        run_cli(
            "gen", "--output", str(cloud),
            "--n", "50", "--dim", "2", "--seed", "7",
            "--sigma", "0.1", "--direction", "0.05,1",
        )
        proc = run_cli("compare", "--input", str(cloud), "--format", "json")
        assert proc.returncode == 0
        doc = json.loads(proc.stdout)
        tls_d = doc["tls"]["total_sq_distance"]
        lse_d = doc["lse"]["orthogonal_sq_distance"]
        assert tls_d < lse_d
        assert doc["ratio_orthogonal"] > 1.0
        # And the classical fit must win on its own objective.
        assert doc["lse"]["vertical_residual_sq"] <= doc["tls"]["vertical_residual_sq"]

    def test_axis_aligned_collinear_has_null_ratio(self, tmp_path):
        cloud = tmp_path / "axis.csv"
        cloud.write_text("0,0\n1,0\n2,0\n3,0\n")
        proc = run_cli("compare", "--input", str(cloud), "--format", "json")
        assert proc.returncode == 0
        doc = json.loads(proc.stdout)
        assert doc["tls"]["total_sq_distance"] == 0.0
        assert doc["ratio_orthogonal"] is None
        assert np.max(np.abs(np.array(doc["lse"]["direction"]) - [1.0, 0.0])) <= 1e-12

    def test_exactly_affine_data_agrees(self, tmp_path):
        cloud = tmp_path / "affine.csv"
        x = np.arange(6.0)
        rows = "\n".join(f"{float(v)!r},{float(2.0 * v + 1.0)!r}" for v in x)
        cloud.write_text(rows + "\n")
        doc = json.loads(
            run_cli("compare", "--input", str(cloud), "--format", "json").stdout
        )
        assert angle_between(doc["tls"]["direction"], doc["lse"]["direction"]) <= 1e-9

    def test_vertical_data_reports_lse_error(self, tmp_path):
        cloud = tmp_path / "vert.csv"
        cloud.write_text("2,0\n2,1\n2,5\n")
        proc = run_cli("compare", "--input", str(cloud), "--format", "json")
        assert proc.returncode == 2
        doc = json.loads(proc.stdout)
        assert "error" in doc["lse"]
        assert np.array_equal(doc["tls"]["direction"], [0.0, 1.0])
        assert doc["tls"]["total_sq_distance"] == 0.0

    def test_table_output(self, noisy_cloud):
        proc = run_cli("compare", "--input", str(noisy_cloud))
        assert proc.returncode == 0
        assert "orthogonal (total least squares):" in proc.stdout
        assert "explicit (vertical least squares):" in proc.stdout
        assert "ratio explicit/orthogonal" in proc.stdout

    def test_csv_output(self, noisy_cloud):
        proc = run_cli("compare", "--input", str(noisy_cloud), "--format", "csv")
        lines = proc.stdout.splitlines()
        assert "index,tls_sq,lse_sq" in lines
        data = [l for l in lines if l and not l.startswith("#") and not l.startswith("index")]
        assert len(data) == 60

    def test_dependent_col_flag(self, tmp_path):
        cloud = tmp_path / "dep.csv"
        x = np.arange(5.0)
        cloud.write_text("\n".join(f"{float(2.0 * v + 1.0)!r},{float(v)!r}" for v in x) + "\n")
        doc = json.loads(
            run_cli(
                "compare", "--input", str(cloud), "--format", "json",
                "--dependent-col", "0",
            ).stdout
        )
        assert doc["lse"]["dependent_col"] == 0
        assert abs(doc["lse"]["coefficients"][0] - 2.0) <= 1e-9

    def test_deterministic(self, noisy_cloud):
        a = run_cli("compare", "--input", str(noisy_cloud), "--format", "json").stdout
        b = run_cli("compare", "--input", str(noisy_cloud), "--format", "json").stdout
        assert a == b


class TestCheckCommand:
    def test_clean_cloud_passes(self, noisy_cloud):
        proc = run_cli("check", "--input", str(noisy_cloud))
        assert proc.returncode == 0
        lines = proc.stdout.splitlines()
        assert any(l.startswith("PASS stationarity-residual") for l in lines)
        assert any(l.startswith("PASS grid-agreement") for l in lines)
        assert any(l.startswith("PASS spectrum-cubic") for l in lines)
        assert "FAIL" not in proc.stdout
        assert lines[-1].startswith("checks:")

    def test_high_dimension_skips_narrow_oracles(self, tmp_path):
        cloud = tmp_path / "d5.csv"
        rng = np.random.default_rng(8)
        pts = rng.uniform(-1.0, 1.0, (30, 5))
        cloud.write_text("\n".join(",".join(repr(float(v)) for v in row) for row in pts) + "\n")
        proc = run_cli("check", "--input", str(cloud))
        assert proc.returncode == 0
        assert "SKIP grid-agreement" in proc.stdout
        assert "SKIP spectrum-cubic" in proc.stdout
        assert "FAIL" not in proc.stdout

    def test_ambiguous_cloud_skips_direction_check(self, tmp_path):
        cloud = tmp_path / "cross.csv"
        cloud.write_text("1,0\n-1,0\n0,1\n0,-1\n")
        proc = run_cli("check", "--input", str(cloud))
        assert proc.returncode == 0
        assert "SKIP grid-direction" in proc.stdout

    def test_deterministic(self, noisy_cloud):
        a = run_cli("check", "--input", str(noisy_cloud), "--seed", "3").stdout
        b = run_cli("check", "--input", str(noisy_cloud), "--seed", "3").stdout
        assert a == b

    def test_degenerate_input_propagates(self, tmp_path):
        cloud = tmp_path / "same.csv"
        cloud.write_text("1,1\n1,1\n")
        proc = run_cli("check", "--input", str(cloud))
        assert proc.returncode == 2
