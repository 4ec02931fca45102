import json
import subprocess
import sys

import pytest

from efron_dual.cli import main, read_config


def run(*args):
    return main([str(a) for a in args])


def check_args(tmp_path, name="r.json", **extra):
    args = ["check", "--identity", "factorial-eq3", "--body", "interval", "--n", 3, "--k", 2,
            "--reps", 20000, "--seed", 7, "--out", tmp_path / name]
    for key, value in extra.items():
        args += [f"--{key.replace('_', '-')}", value]
    return args


class TestVerify:
    @pytest.mark.parametrize("k_max,code", [(12, 0), (1, 0), (0, 2), (-3, 2)])
    def test_verify_sym(self, k_max, code, capsys):
        assert run("verify-sym", "--k-max", k_max) == code
        if code == 0:
            assert "FAIL" not in capsys.readouterr().out

    @pytest.mark.parametrize("k_max,code", [(64, 0), (0, 0), (-1, 2)])
    def test_verify_dual(self, k_max, code):
        assert run("verify-dual", "--k-max", k_max) == code

    def test_non_integer_argument(self):
        assert run("verify-dual", "--k-max", "1.5") == 2
        assert run("verify-sym", "--k-max", "many") == 2


class TestCheck:
    def test_interval_exact_target(self, tmp_path, capsys):
        assert run(*check_args(tmp_path)) == 0
        d = json.loads((tmp_path / "r.json").read_text())
        assert d["exact_target"]["rational"] == "3/10" and d["pass"]
        assert "exact target 3/10" in capsys.readouterr().err

    def test_bad_parameters_exit_2(self, tmp_path):
        assert run("check", "--identity", "product-eq2", "--body", "cube3", "--n", 0, "--k", 9) == 2
        assert run("check", "--identity", "product-eq2", "--body", "cube3", "--n", 2, "--k", 0) == 2
        assert run("check", "--identity", "nope", "--body", "cube3", "--n", 2) == 2
        assert run("check", "--identity", "efron-eq1", "--body", "blob", "--n", 2) == 2
        assert run("check", "--identity", "efron-eq1", "--n", 2) == 2
        assert run("check", "--identity", "efron-eq1", "--body", "square", "--n", 2, "--reps", 1) == 2
        assert run("check", "--identity", "efron-eq1", "--body", "square", "--n", 2, "--seed", -1) == 2
        assert run("check", "--identity", "thm2-direct-vs-ratio", "--body", "square", "--m", 2) == 2

    def test_statistical_failure_exit_1(self, tmp_path):
        # a tolerance far below the noise level makes any real estimate fail
        args = ["check", "--identity", "efron-eq1", "--body", "square", "--n", 3, "--reps", 5000,
                "--seed", 1, "--tolerance-sigma", 1e-9, "--out", tmp_path / "f.json"]
        assert run(*args) == 1
        assert json.loads((tmp_path / "f.json").read_text())["pass"] is False

    def test_thm2_uses_m_and_j(self, tmp_path):
        assert run("check", "--identity", "thm2-direct-vs-ratio", "--body", "triangle", "--m", 3, "--j", 1,
                   "--reps", 20000, "--out", tmp_path / "t.json") == 0
        d = json.loads((tmp_path / "t.json").read_text())
        assert d["parameters"] == {"n": None, "k": None, "m": 3, "j": 1}

    def test_csv(self, tmp_path):
        assert run(*check_args(tmp_path, "r.csv", format="csv")) == 0
        lines = (tmp_path / "r.csv").read_text().splitlines()
        assert lines[0].startswith("identity,body,n,k,m,j,lhs_mean") and len(lines) == 2

    def test_workers_byte_identical(self, tmp_path):
        assert run(*check_args(tmp_path, "a.json", reps=140000, workers=1)) == 0
        assert run(*check_args(tmp_path, "b.json", reps=140000, workers=4)) == 0
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


class TestConfig:
    def test_precedence(self, tmp_path, monkeypatch):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# comment\nidentity = efron-eq1\nbody = triangle\nn = 3\nreps = 3000\nseed = 11\n",
                       encoding="utf-8")
        monkeypatch.setenv("EFRON_DUAL_SEED", "5")
        assert run("check", "--config", cfg, "--out", tmp_path / "c.json") == 0
        assert json.loads((tmp_path / "c.json").read_text())["master_seed"] == 11
        assert run("check", "--config", cfg, "--seed", 12, "--out", tmp_path / "c.json") == 0
        assert json.loads((tmp_path / "c.json").read_text())["master_seed"] == 12
        cfg.write_text("identity = efron-eq1\nbody = triangle\nn = 3\nreps = 3000\n", encoding="utf-8")
        assert run("check", "--config", cfg, "--out", tmp_path / "c.json") == 0
        assert json.loads((tmp_path / "c.json").read_text())["master_seed"] == 5
        monkeypatch.delenv("EFRON_DUAL_SEED")
        assert run("check", "--config", cfg, "--out", tmp_path / "c.json") == 0
        assert json.loads((tmp_path / "c.json").read_text())["master_seed"] == 0

    def test_bad_config(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("colour = blue\n", encoding="utf-8")
        assert run("check", "--config", cfg) == 2
        cfg.write_text("just words\n", encoding="utf-8")
        assert run("check", "--config", cfg) == 2
        cfg.write_text("identity = efron-eq1\nbody = square\nn = three\n", encoding="utf-8")
        assert run("check", "--config", cfg) == 2
        assert run("check", "--config", tmp_path / "missing.cfg") == 2

    def test_read_config_normalises_dashes(self, tmp_path):
        cfg = tmp_path / "x.cfg"
        cfg.write_text("tolerance-sigma = 5\n", encoding="utf-8")
        assert read_config(cfg) == {"tolerance_sigma": "5"}


class TestReport:
    @pytest.fixture
    def reports(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert run(*check_args(tmp_path, "a.json")) == 0
        assert run("check", "--identity", "dual-eq4", "--body", "square", "--n", 2, "--k", 2,
                   "--reps", 20000, "--mode", "independent", "--out", b) == 0
        return a, b

    def test_merge(self, reports, tmp_path):
        out = tmp_path / "m.json"
        assert run("report", *reports, "--out", out) == 0
        merged = json.loads(out.read_text())
        assert [r["identity"] for r in merged["reports"]] == ["factorial-eq3", "dual-eq4"]

    def test_round_trip_byte_identical(self, reports, tmp_path):
        m1, m2, m3 = tmp_path / "m1.json", tmp_path / "m2.json", tmp_path / "single.json"
        assert run("report", *reports, "--out", m1) == 0
        assert run("report", m1, "--out", m2) == 0
        assert m1.read_bytes() == m2.read_bytes()
        # a single report file re-serialises to exactly its own bytes inside the merged document
        assert run("report", reports[0], "--out", m3) == 0
        assert json.loads(m3.read_text())["reports"][0] == json.loads(reports[0].read_text())

    def test_csv_merge(self, reports, tmp_path):
        out = tmp_path / "m.csv"
        assert run("report", *reports, "--format", "csv", "--out", out) == 0
        assert len(out.read_text().splitlines()) == 3

    def test_empty_and_malformed(self, tmp_path, capsys):
        assert run("report") == 0
        assert json.loads(capsys.readouterr().out) == {"reports": []}
        bad = tmp_path / "bad.json"
        bad.write_text("{not json", encoding="utf-8")
        assert run("report", bad) == 2
        bad.write_text('{"identity": "efron-eq1"}', encoding="utf-8")
        assert run("report", bad) == 2
        assert run("report", tmp_path / "missing.json") == 2


def test_exit_code_contract_is_total(monkeypatch):
    import efron_dual.cli as cli

    def boom(*a, **k):
        raise RuntimeError("unexpected")

    monkeypatch.setattr(cli, "cmd_verify_sym", boom)
    assert run("verify-sym") == 2
    assert run("no-such-command") == 2
    assert run() == 2
    assert run("--version") == 0


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "efron_dual", "verify-sym", "--k-max", "3"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "decomposition" in out.stdout
