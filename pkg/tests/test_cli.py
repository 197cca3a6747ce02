import json
from pathlib import Path

import pytest

from curvecheb.cli import main


def write_config(path, **overrides):
    doc = {
        "schema": "curvecheb.config/1",
        "curve": {"terms": [
            {"a": 2, "b": 0, "re": 1.0, "im": 0.0},
            {"a": 0, "b": 2, "re": -1.0, "im": 0.0},
            {"a": 0, "b": 0, "re": -1.0, "im": 0.0},
        ]},
        "set": {"kind": "absv1v2torus", "r1": 0.5, "r2": 0.5},
        "resolution": 512,
        "n_max": 10,
        "seed": 0,
    }
    doc.update(overrides)
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def torus_config(tmp_path):
    return write_config(tmp_path / "torus.json")


@pytest.fixture
def axes_config(tmp_path):
    return write_config(
        tmp_path / "axes.json",
        curve={"terms": [
            {"a": 1, "b": 1, "re": 1.0, "im": 0.0},
            {"a": 0, "b": 0, "re": -0.25, "im": 0.0},
        ]},
        set={"kind": "bidisktrace", "r1": 1.0, "r2": 1.0},
        relaxed=True,
        directions=[[0.0, 0.0], None],
        n_max=8,
    )


class TestCurveInfo:
    def test_directions_listed(self, capsys, torus_config):
        assert main(["curve-info", "--config", torus_config]) == 0
        out = capsys.readouterr().out
        assert "direction 1\t-1+0j" in out
        assert "direction 2\t1+0j" in out

    def test_axes_need_relaxed_flag(self, capsys, tmp_path, axes_config):
        cfg = json.loads(Path(axes_config).read_text())
        cfg["relaxed"] = False
        strict = tmp_path / "strict.json"
        strict.write_text(json.dumps(cfg))
        assert main(["curve-info", "--config", str(strict)]) == 2
        assert "horizontal asymptote" in capsys.readouterr().err

    def test_degree_one_rejected(self, capsys, tmp_path):
        cfg = write_config(tmp_path / "lin.json",
                           curve={"terms": [{"a": 1, "b": 0, "re": 1.0, "im": 0.0},
                                            {"a": 0, "b": 1, "re": 1.0, "im": 0.0}]})
        assert main(["curve-info", "--config", cfg]) == 2
        assert "degree >= 2" in capsys.readouterr().err

    def test_duplicate_directions_rejected(self, capsys, tmp_path):
        cfg = write_config(tmp_path / "dup.json",
                           curve={"terms": [{"a": 2, "b": 0, "re": 1.0, "im": 0.0},
                                            {"a": 1, "b": 1, "re": -2.0, "im": 0.0},
                                            {"a": 0, "b": 2, "re": 1.0, "im": 0.0},
                                            {"a": 0, "b": 0, "re": 1.0, "im": 0.0}]})
        assert main(["curve-info", "--config", cfg]) == 2
        assert "non-distinct directions" in capsys.readouterr().err


class TestCheb:
    def test_torus_table(self, capsys, torus_config):
        assert main(["cheb", "--config", torus_config, "--class", "mv:1",
                     "--n-max", "8"]) == 0
        rows = [l for l in capsys.readouterr().out.splitlines() if l and not l.startswith("class")]
        assert len(rows) == 8
        tns = [float(r.split("\t")[3]) for r in rows]
        assert all(abs(t - 0.5) < 1e-6 for t in tns)

    def test_disk_floor(self, capsys, tmp_path):
        cfg = write_config(tmp_path / "disk.json",
                           set={"kind": "z1disk", "r": 1.0})
        assert main(["cheb", "--config", cfg, "--class", "zk:0", "--n-max", "8"]) == 0
        rows = [l for l in capsys.readouterr().out.splitlines() if not l.startswith("class")]
        tns = [float(r.split("\t")[3]) for r in rows]
        assert all(abs(t - 1.0) < 1e-6 for t in tns)

    def test_empty_range_invalid(self, capsys, torus_config):
        assert main(["cheb", "--config", torus_config, "--class", "mv:1",
                     "--n-min", "5", "--n-max", "4"]) == 2

    def test_unconverged_exit(self, tmp_path):
        # one-iteration cap cannot reach the tolerance on the interval set
        cfg = write_config(tmp_path / "hard.json",
                           set={"kind": "z2interval", "lo": -1.0, "hi": 1.0},
                           solver={"max_iter": 2, "tol": 1e-14})
        assert main(["cheb", "--config", cfg, "--class", "mv:1",
                     "--n-max", "4"]) == 3
        assert main(["cheb", "--config", cfg, "--class", "mv:1",
                     "--n-max", "4", "--allow-unconverged"]) == 0


class TestSampleAndTfd:
    def test_sample_writes_cloud(self, tmp_path, torus_config):
        out = tmp_path / "out"
        assert main(["sample", "--config", torus_config, "--out", str(out)]) == 0
        lines = (out / "sample.txt").read_text().splitlines()
        assert lines[0].startswith("#")
        assert len(lines) > 500

    def test_point_cloud_round_trips_through_config(self, tmp_path, torus_config):
        out = tmp_path / "out"
        main(["sample", "--config", torus_config, "--out", str(out)])
        cfg = write_config(tmp_path / "cloud.json",
                           set={"kind": "pointcloud", "path": str(out / "sample.txt")})
        assert main(["sample", "--config", cfg, "--out", str(tmp_path / "o2")]) == 0

    def test_tfd_estimate(self, capsys, torus_config):
        assert main(["tfd", "--config", torus_config, "--basis", "S",
                     "--n-max", "24"]) == 0
        out = capsys.readouterr().out
        est = float(out.rsplit("estimate", 1)[1])
        assert abs(est - 0.5) / 0.5 < 0.15


class TestRobinCmd:
    def test_axes_trace(self, capsys, axes_config):
        assert main(["robin", "--config", axes_config]) == 0
        out = capsys.readouterr().out
        assert "strictly increasing\tfalse" in out
        rows = [l for l in out.splitlines() if l.split("\t")[0] not in
                ("direction", "ordering", "strictly increasing")]
        assert all(abs(float(r.split("\t")[1])) < 1e-9 for r in rows)


class TestVerify:
    def test_symmetric_torus_passes(self, tmp_path, torus_config):
        out = tmp_path / "rep"
        assert main(["verify", "--config", torus_config, "--out", str(out)]) == 0
        report = (out / "verify_report.txt").read_text()
        assert "FAIL" not in report

    def test_zero_tolerance_negative_control(self, tmp_path, torus_config):
        assert main(["verify", "--config", torus_config, "--n-max", "6",
                     "--tolerance-scale", "0"]) == 1

    def test_corrupted_curve_exits_invalid(self, tmp_path):
        cfg = write_config(tmp_path / "bad.json",
                           curve={"terms": [{"a": 2, "b": 0, "re": 1.0, "im": 0.0},
                                            {"a": 1, "b": 1, "re": -2.0, "im": 0.0},
                                            {"a": 0, "b": 2, "re": 1.0, "im": 0.0},
                                            {"a": 0, "b": 0, "re": 1.0, "im": 0.0}]})
        assert main(["verify", "--config", cfg]) == 2

    def test_reports_byte_identical(self, tmp_path, torus_config):
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        assert main(["verify", "--config", torus_config, "--n-max", "6",
                     "--out", str(out1)]) in (0, 1)
        assert main(["verify", "--config", torus_config, "--n-max", "6",
                     "--out", str(out2)]) in (0, 1)
        a = (out1 / "verify_report.txt").read_bytes()
        b = (out2 / "verify_report.txt").read_bytes()
        assert a == b

    def test_relaxed_suite(self, tmp_path, axes_config):
        assert main(["verify", "--config", axes_config,
                     "--out", str(tmp_path / "rep")]) == 0


class TestConfigErrors:
    def test_bad_schema(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"schema": "other/1"}))
        assert main(["curve-info", "--config", str(path)]) == 2

    def test_bad_set_kind(self, tmp_path):
        cfg = write_config(tmp_path / "b.json", set={"kind": "mystery"})
        assert main(["sample", "--config", cfg]) == 2

    def test_bad_class_spec(self, torus_config):
        assert main(["cheb", "--config", torus_config, "--class", "what:9"]) == 2
