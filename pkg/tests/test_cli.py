import json
import os
import subprocess
import sys
from pathlib import Path

import jsonschema
import numpy as np
import pytest

from opquot.cli import main
from opquot.matrixio import parse_matrix, read_matrix, write_matrix

SCHEMA = json.loads((Path(__file__).resolve().parents[1] / "docs" / "verification_report.schema.json").read_text())


@pytest.fixture
def files(tmp_path, ex1, ex2):
    a1, b1 = ex1
    a2, b2 = ex2
    mats = {
        "A1.mm": a1, "B1.mm": b1,
        "A2.mm": a2, "B2.mm": b2,
        "e1.mm": np.array([[1.0], [0.0]]), "e2.mm": np.array([[0.0], [1.0]]),
        "I2.mm": np.eye(2), "D0.mm": np.diag([1.0, 0.0]),
        "A1.csv": a1,
        "near.mm": np.diag([1.0, 1e-6]),
    }
    for name, m in mats.items():
        write_matrix(m, tmp_path / name)
    (tmp_path / "bad.mm").write_text("%%MatrixMarket matrix array real general\n2 two\n")
    (tmp_path / "ragged.csv").write_text("1,2\n3\n")
    return tmp_path


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


class TestCommands:
    def test_ldiv_first_example(self, files, capsys):
        code, out, _ = run(["ldiv", files / "B1.mm", files / "A1.mm"], capsys)
        assert code == 0
        np.testing.assert_allclose(parse_matrix(out), [[0, 0.5], [0, 0.5]], atol=1e-12)

    def test_ldiv_csv_input_and_output(self, files, capsys):
        code, out, _ = run(["--format", "csv", "ldiv", files / "B1.mm", files / "A1.csv"], capsys)
        assert code == 0
        assert "%%" not in out and out.count(",") == 2
        np.testing.assert_allclose(parse_matrix(out, "csv"), [[0, 0.5], [0, 0.5]], atol=1e-12)

    def test_flags_after_subcommand(self, files, capsys):
        out_path = files / "q.csv"
        code, _, _ = run(["ldiv", files / "B2.mm", files / "A2.mm", "--out", out_path], capsys)
        assert code == 0
        expected = np.zeros((3, 3))
        expected[2, 2] = 1.0
        np.testing.assert_allclose(read_matrix(out_path), expected, atol=1e-12)

    def test_check_mu(self, files, capsys):
        code, out, _ = run(["check", "mu", files / "A1.mm", files / "B1.mm"], capsys)
        assert code == 0
        assert abs(float(out) - 0.5) <= 1e-9

    def test_check_mu_infinite(self, files, capsys):
        code, out, _ = run(["check", "mu", files / "e2.mm", files / "e1.mm"], capsys)
        assert code == 0 and out.strip() == "inf"

    def test_check_predicates(self, files, capsys):
        assert run(["check", "range", files / "A1.mm", files / "B1.mm"], capsys)[1] == "true\n"
        assert run(["check", "range", files / "e2.mm", files / "e1.mm"], capsys)[1] == "false\n"
        code, out, _ = run(["--json", "check", "kernel", files / "I2.mm", files / "D0.mm"], capsys)
        assert json.loads(out)["value"] is True

    def test_rdiv(self, files, capsys):
        code, out, _ = run(["rdiv", files / "D0.mm", files / "I2.mm"], capsys)
        assert code == 0
        np.testing.assert_allclose(parse_matrix(out), np.diag([1.0, 0.0]))

    def test_pinv_json(self, files, capsys):
        code, out, _ = run(["pinv", files / "B1.mm", "--json"], capsys)
        res = json.loads(out)["result"]
        np.testing.assert_allclose(res["real"], [[0.5, 0], [0.5, 0]])

    def test_sum_left_defect(self, files, capsys):
        argv = ["sum-left", files / "I2.mm", files / "I2.mm", files / "D0.mm", files / "D0.mm"]
        code, out, err = run(argv, capsys)
        assert code == 0
        np.testing.assert_allclose(parse_matrix(out), np.diag([2.0, 0.0]), atol=1e-12)
        assert abs(float(err.split(":")[1]) - 1.0) <= 1e-9
        code, out, _ = run(argv + ["--json"], capsys)
        assert abs(json.loads(out)["defect"] - 1.0) <= 1e-9

    def test_sum_right(self, files, capsys):
        code, out, _ = run(["sum-right", files / "I2.mm", files / "I2.mm", files / "D0.mm", files / "D0.mm"],
                           capsys)
        assert code == 0
        np.testing.assert_allclose(parse_matrix(out), np.diag([2.0, 0.0]), atol=1e-12)

    def test_prod_left_auto(self, files, capsys):
        code, out, _ = run(["prod-left", files / "B1.mm", files / "A1.mm", files / "I2.mm", files / "I2.mm",
                            "--auto"], capsys)
        assert code == 0
        np.testing.assert_allclose(parse_matrix(out), [[0, 0.5], [0, 0.5]], atol=1e-12)

    def test_prod_explicit_witness(self, files, capsys):
        for name, v in (("two.mm", 2.0), ("four.mm", 4.0), ("three.mm", 3.0), ("six.mm", 6.0),
                        ("m.mm", 2.0 / 3.0), ("n.mm", 0.5), ("half.mm", 0.5)):
            write_matrix([[v]], files / name)
        base = ["prod-left", files / "two.mm", files / "four.mm", files / "three.mm", files / "six.mm"]
        code, out, _ = run(base + ["--witness-m", files / "m.mm", "--witness-n", files / "n.mm"], capsys)
        assert code == 0 and abs(parse_matrix(out)[0, 0] - 4.0) < 1e-12
        code, _, err = run(base + ["--witness-m", files / "half.mm", "--witness-n", files / "half.mm"], capsys)
        assert code == 2 and "residual" in err
        code, _, _ = run(base + ["--witness-m", files / "m.mm"], capsys)
        assert code == 3

    def test_prod_right(self, files, capsys):
        code, out, _ = run(["prod-right", files / "I2.mm", files / "I2.mm", files / "D0.mm", files / "I2.mm"],
                           capsys)
        assert code == 0
        np.testing.assert_allclose(parse_matrix(out), np.diag([1.0, 0.0]), atol=1e-12)

    def test_simplify(self, files, capsys):
        write_matrix(read_matrix(files / "B1.mm").T, files / "Bt.mm")
        code, out, _ = run(["simplify", "left", files / "Bt.mm", files / "B1.mm", files / "A1.mm"], capsys)
        assert code == 0
        np.testing.assert_allclose(parse_matrix(out), [[0, 0.5], [0, 0.5]], atol=1e-12)
        code, _, _ = run(["simplify", "left", files / "I2.mm", files / "B1.mm", files / "A1.mm"], capsys)
        assert code == 2

    def test_decompose(self, files, capsys):
        code, _, _ = run(["decompose", files / "A1.mm", "--out-prefix", files / "dec_"], capsys)
        assert code == 0
        np.testing.assert_allclose(read_matrix(files / "dec_first.mm"), [[0, 1], [0, 0]], atol=1e-12)
        np.testing.assert_allclose(read_matrix(files / "dec_second.mm"), [[0, 0], [1, 0]], atol=1e-12)
        code, out, _ = run(["decompose", files / "A1.mm"], capsys)
        assert out.count("%%MatrixMarket") == 2

    def test_gen_and_verify(self, files, capsys):
        prefix = files / "g_"
        code, out, _ = run(["gen", "--mode", "range_included", "--m", 4, "--n", 3, "--p", 5, "--rank", 2,
                            "--seed", 7, "--out-prefix", prefix], capsys)
        assert code == 0
        assert out.split() == [f"{prefix}A.mm", f"{prefix}B.mm"]
        code, out, _ = run(["verify", f"{prefix}A.mm", f"{prefix}B.mm"], capsys)
        report = json.loads(out)
        jsonschema.validate(report, SCHEMA)
        assert code == 0 and report["summary"]["failed"] == 0

    def test_verify_right(self, files, capsys):
        prefix = files / "k_"
        run(["gen", "--mode", "kernel_included", "--m", 3, "--n", 5, "--p", 4, "--rank", 3,
             "--out-prefix", prefix], capsys)
        code, out, _ = run(["verify", f"{prefix}A.mm", f"{prefix}B.mm", "--mode", "right", "--seed", 3], capsys)
        report = json.loads(out)
        jsonschema.validate(report, SCHEMA)
        assert code == 0
        assert report["instance"]["seed"] == 3

    def test_verify_failure_exit_1(self, files, capsys):
        # a rank cutoff that discards sigma = 1e-6 disagrees with the oracle, which keeps it
        code, out, _ = run(["verify", files / "near.mm", files / "near.mm",
                            "--tol-rank", "1e-3", "--tol-residual", "1e-5"], capsys)
        report = json.loads(out)
        jsonschema.validate(report, SCHEMA)
        assert code == 1 and report["summary"]["failed"] > 0

    def test_gen_seed_from_environment(self, files, capsys, monkeypatch):
        monkeypatch.setenv("OPQUOT_SEED", "123")
        run(["gen", "--mode", "same_range", "--m", 3, "--n", 3, "--p", 3, "--rank", 2,
             "--out-prefix", files / "env_"], capsys)
        monkeypatch.delenv("OPQUOT_SEED")
        run(["gen", "--mode", "same_range", "--m", 3, "--n", 3, "--p", 3, "--rank", 2, "--seed", 123,
             "--out-prefix", files / "arg_"], capsys)
        assert (files / "env_A.mm").read_text() == (files / "arg_A.mm").read_text()

    def test_gen_csv(self, files, capsys):
        code, out, _ = run(["gen", "--mode", "witness_compatible", "--m", 3, "--n", 3, "--p", 3, "--rank", 2,
                            "--format", "csv", "--json", "--out-prefix", files / "w_"], capsys)
        assert code == 0
        assert [Path(p).name for p in json.loads(out)["files"]] == ["w_A.csv", "w_B.csv", "w_C.csv", "w_D.csv"]


class TestExitCodes:
    """Outcome class to exit code, one row per scripted case."""

    CASES = [
        ("ok ldiv", ["ldiv", "B1.mm", "A1.mm"], 0),
        ("ok check", ["check", "range", "A2.mm", "B2.mm"], 0),
        ("range violated", ["ldiv", "e1.mm", "e2.mm"], 2),
        ("kernel violated", ["rdiv", "I2.mm", "D0.mm"], 2),
        ("dimension mismatch", ["ldiv", "B2.mm", "A1.mm"], 2),
        ("sum of mismatched shapes", ["sum-left", "I2.mm", "I2.mm", "B2.mm", "A2.mm"], 2),
        ("malformed dimension line", ["ldiv", "bad.mm", "A1.mm"], 3),
        ("ragged csv", ["pinv", "ragged.csv"], 3),
        ("missing file", ["pinv", "nowhere.mm"], 3),
        ("unknown subcommand", ["frobnicate"], 3),
        ("missing argument", ["ldiv", "B1.mm"], 3),
        ("bad gen spec", ["gen", "--mode", "range_included", "--m", "2", "--n", "2", "--p", "2", "--rank", "5",
                          "--out-prefix", "x_"], 3),
        ("negative tolerance", ["--tol-rank", "-1", "pinv", "I2.mm"], 3),
        ("verification failure", ["verify", "near.mm", "near.mm", "--tol-rank", "1e-3", "--tol-residual", "1e-5"], 1),
    ]

    @pytest.mark.parametrize("label, argv, expected", CASES, ids=[c[0] for c in CASES])
    def test_exit_code(self, files, capsys, monkeypatch, label, argv, expected):
        monkeypatch.chdir(files)
        code, _, err = run(argv, capsys)
        assert code == expected
        if expected == 2:
            assert "residual" in err or "shape" in err or "needs" in err

    def test_module_entry_point(self, files):
        env = dict(os.environ)
        proc = subprocess.run([sys.executable, "-m", "opquot", "ldiv", "e1.mm", "e2.mm"],
                              cwd=files, capture_output=True, text=True, env=env)
        assert proc.returncode == 2
        assert "residual" in proc.stderr
