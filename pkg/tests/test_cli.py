import json

import numpy as np
import pytest

from negent.cli import main
from negent.measures import isotropic_state
from negent.qcore import validate_density, write_density


def state_file(tmp_path, matrix, dims=(2, 2), name="state.json"):
    path = tmp_path / name
    write_density(validate_density(np.asarray(matrix, dtype=complex), dims), path)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


class TestCompute:
    def test_maximally_mixed(self, tmp_path, capsys):
        path = state_file(tmp_path, np.eye(4) / 4)
        code, out = run(capsys, "compute", "--state", path)
        assert code == 0
        report = json.loads(out)
        assert report["lambda"] == pytest.approx(-0.5, abs=1e-10)
        assert report["concurrence"] == 0.0
        assert report["nem"] == pytest.approx(-0.5, abs=1e-10)
        assert report["ess"] is False

    def test_entangled_input(self, tmp_path, capsys):
        bell = np.zeros((4, 4))
        bell[0, 0] = bell[0, 3] = bell[3, 0] = bell[3, 3] = 0.5
        path = state_file(tmp_path, bell)
        code, out = run(capsys, "compute", "--state", path)
        assert code == 2
        report = json.loads(out)
        assert report["lambda"] == pytest.approx(1.0, abs=1e-9)
        assert report["concurrence"] == pytest.approx(1.0, abs=1e-9)
        assert report["nem"] is None
        assert report["ess"] is None

    def test_edge_state(self, tmp_path, capsys):
        path = state_file(tmp_path, np.diag([0.5, 0.5, 0.0, 0.0]))
        code, out = run(capsys, "compute", "--state", path)
        assert code == 0
        report = json.loads(out)
        assert report["nem"] == 0.0
        assert report["ess"] is True

    def test_higher_dimensional_state(self, tmp_path, capsys):
        path = state_file(tmp_path, isotropic_state(3, 0.2).matrix, dims=(3, 3))
        code, out = run(capsys, "compute", "--state", path)
        assert code == 0
        report = json.loads(out)
        assert report["lambda"] is None
        assert report["ppt_min_eigenvalue"] > -1e-10

    def test_malformed_file(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        code, _ = run(capsys, "compute", "--state", str(path))
        assert code == 1

    def test_missing_file(self, tmp_path, capsys):
        code, _ = run(capsys, "compute", "--state", str(tmp_path / "absent.json"))
        assert code == 1


class TestIsingSweep:
    def test_single_point(self, tmp_path, capsys):
        out_csv = tmp_path / "sweep.csv"
        code, out = run(
            capsys,
            "ising-sweep",
            "--lambda-min", "0", "--lambda-max", "0", "--steps", "1",
            "--r", "3", "--h", "1e-3", "--out", str(out_csv),
        )
        assert code == 0
        lines = out_csv.read_text().splitlines()
        assert lines[0].startswith("lambda,")
        assert len(lines) == 2
        assert abs(float(lines[1].split(",")[2])) <= 1e-7
        summary = json.loads(out)
        assert summary["rows"] == 1

    def test_nearest_neighbor_rejected(self, tmp_path, capsys):
        code, out = run(
            capsys,
            "ising-sweep",
            "--lambda-min", "0.5", "--lambda-max", "1.5", "--steps", "5",
            "--r", "1", "--h", "1e-3", "--out", str(tmp_path / "x.csv"),
        )
        assert code == 2
        report = json.loads(out)
        assert report["error"] == "entangled-rdm"
        assert report["concurrence"] > 0.0

    def test_plot_written(self, tmp_path, capsys):
        out_csv = tmp_path / "sweep.csv"
        out_png = tmp_path / "sweep.png"
        code, out = run(
            capsys,
            "ising-sweep",
            "--lambda-min", "0.8", "--lambda-max", "1.2", "--steps", "5",
            "--r", "3", "--h", "1e-3", "--out", str(out_csv),
            "--plot", str(out_png),
        )
        assert code == 0
        assert out_png.stat().st_size > 1000
        assert json.loads(out)["plot"] == str(out_png)

    def test_deterministic_csv(self, tmp_path, capsys):
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for path in paths:
            code, _ = run(
                capsys,
                "ising-sweep",
                "--lambda-min", "0.9", "--lambda-max", "1.1", "--steps", "3",
                "--r", "3", "--h", "1e-3", "--out", str(path),
            )
            assert code == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()


class TestOracleCheck:
    def test_product_pure_trial(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(
            json.dumps(
                {
                    "restarts": 8,
                    "max_iters": 600,
                    "feasibility_delta": 1e-5,
                    "seed": 4,
                    "t_max": 1000.0,
                }
            )
        )
        code, out = run(
            capsys,
            "oracle-check", "--trials", "1", "--seed", "0", "--config", str(cfg),
        )
        assert code == 0
        report = json.loads(out)
        assert report["max_gap"] <= 1e-4
        assert report["pass"] is True

    def test_deterministic_report(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"restarts": 4, "max_iters": 300, "seed": 1}))
        outputs = []
        for _ in range(2):
            code, out = run(
                capsys,
                "oracle-check", "--trials", "2", "--seed", "3", "--config", str(cfg),
            )
            assert code == 0
            outputs.append(out)
        assert outputs[0] == outputs[1]


class TestIsotropicCommand:
    def test_separable_qubit_point(self, capsys):
        code, out = run(capsys, "isotropic", "--d", "2", "--F", "0.3")
        assert code == 0
        report = json.loads(out)
        assert report["i_concurrence"] == 0.0
        assert report["nem_lower_bound"] == pytest.approx(-0.4, abs=1e-12)
        assert report["lambda_exact"] == pytest.approx(-0.4, abs=1e-10)

    def test_entangled_qutrit_point(self, capsys):
        code, out = run(capsys, "isotropic", "--d", "3", "--F", "0.8")
        assert code == 0
        report = json.loads(out)
        assert report["nem_lower_bound"] is None
        assert report["i_concurrence"] > 0.0

    def test_invalid_params(self, capsys):
        code, _ = run(capsys, "isotropic", "--d", "1", "--F", "0.5")
        assert code == 1


def test_selftest_subset(capsys):
    code = main(["selftest", "--criterion", "1", "--criterion", "6"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.count("[PASS]") == 2
    assert "2/2 criteria passed" in out
