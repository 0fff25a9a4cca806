import json
import subprocess
import sys

import pytest

from quadpair.cli import main
from quadpair.config import ExperimentConfig, Report, record, write_csv
from quadpair.errors import ConfigError
from quadpair.forms import CANONICAL_PAIR

CONFIG_TEXT = """\
[pair]
a = [1, 2, -3, -5]
b = [1, 1, 1, 1]

[run]
experiment = tq-bound
B_grid = [20, 30]
q_list = [7, 11]
seed = 42

[tolerances]
C_T = 10.0

[output]
path = {out}
"""


@pytest.fixture
def config_path(tmp_path):
    out = tmp_path / "rows.csv"
    path = tmp_path / "run.ini"
    path.write_text(CONFIG_TEXT.format(out=out))
    return path, out


def test_config_parsing(config_path):
    path, out = config_path
    cfg = ExperimentConfig.from_file(str(path))
    assert cfg.pair == CANONICAL_PAIR
    assert cfg.B_grid == [20, 30]
    assert cfg.q_list == [7, 11]
    assert cfg.seed == 42
    assert cfg.tolerances["C_T"] == 10.0
    assert cfg.tolerances["tol_rel"] == 0.02  # defaults merged
    assert cfg.output_path == str(out)


def test_config_rejects_unknown_experiment(tmp_path):
    path = tmp_path / "bad.ini"
    path.write_text("[pair]\na = [1,2,-3,-5]\nb = [1,1,1,1]\n[run]\nexperiment = bogus\n")
    with pytest.raises(ConfigError):
        ExperimentConfig.from_file(str(path))


def test_config_missing_file():
    with pytest.raises(ConfigError):
        ExperimentConfig.from_file("/nonexistent/config.ini")


def test_fixed_P_policy():
    cfg = ExperimentConfig(pair=CANONICAL_PAIR, experiment="sieve-assembly",
                           P_policy="fixed 4")
    assert cfg.fixed_P() == 4
    cfg2 = ExperimentConfig(pair=CANONICAL_PAIR, experiment="sieve-assembly")
    assert cfg2.fixed_P() is None


def test_cli_tq_bound_run(config_path, capsys):
    path, out = config_path
    code = main(["tq-bound", "--config", str(path)])
    assert code == 0
    text = out.read_text().splitlines()
    assert text[0].startswith("# generated=")
    assert text[1].startswith("experiment,B,q_or_P")
    assert len(text) == 2 + 4  # header lines + 4 grid points
    assert "PASS" in capsys.readouterr().out


def test_cli_csv_determinism(config_path, tmp_path):
    path, _ = config_path
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["tq-bound", "--config", str(path), "--out", str(out1)]) == 0
    assert main(["tq-bound", "--config", str(path), "--out", str(out2)]) == 0
    body1 = out1.read_text().splitlines()[1:]
    body2 = out2.read_text().splitlines()[1:]
    assert body1 == body2


def test_cli_inadmissible_q_verify_exit2(tmp_path, capsys):
    path = tmp_path / "run.ini"
    path.write_text(
        "[pair]\na = [1, 2, -3, -5]\nb = [1, 1, 1, 1]\n"
        "[run]\nexperiment = verify\nq_list = [15]\nsuites = [\"h-kernel\"]\n"
    )
    code = main(["verify", "--config", str(path)])
    assert code == 2
    assert "admissible" in capsys.readouterr().err


def test_cli_verify_small_suite(tmp_path, capsys):
    code = main(["verify", "--json", str(tmp_path / "rep.json"),
                 "--config", str(_write(tmp_path, "verify", 'suites = ["quad-gauss", "h-kernel"]'))])
    assert code == 0
    rep = json.loads((tmp_path / "rep.json").read_text())
    assert rep["pass"] is True
    assert "quad_gauss_max_rel_err" in rep["summary"]


def test_cli_forced_failure_tolerance_zero(tmp_path):
    cfgp = _write(tmp_path, "verify", 'suites = ["quad-gauss"]',
                  "[tolerances]\ngauss_rel = 0.0")
    code = main(["verify", "--config", str(cfgp)])
    assert code == 1  # floating arithmetic cannot meet an exact-zero tolerance


def test_cli_charsum_flags(tmp_path):
    out = tmp_path / "cs.csv"
    code = main(["charsum", "--q", "7", "--c", "2", "--w", "[3,5,1,0]",
                 "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[1] == "q,c,w1,w2,w3,w4,re,im,method,seconds"
    row = lines[2].split(",")
    assert row[0] == "7" and row[1] == "2"


def test_cli_delta_check_flags(tmp_path):
    code = main(["delta-check", "--Q-list", "[5]", "--n-max", "25"])
    assert code == 0


def test_cli_empty_grid_vacuous(tmp_path, capsys):
    cfgp = _write(tmp_path, "tq-bound", "B_grid = []\nq_list = []")
    with pytest.warns(UserWarning):
        code = main(["tq-bound", "--config", str(cfgp)])
    assert code == 0


def test_cli_entrypoint_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "quadpair.cli", "delta-check", "--Q-list", "[5]",
         "--n-max", "9"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "PASS" in proc.stdout


def _write(tmp_path, experiment, run_extra="", tol_section=""):
    path = tmp_path / f"{experiment}.ini"
    path.write_text(
        "[pair]\na = [1, 2, -3, -5]\nb = [1, 1, 1, 1]\n"
        f"[run]\nexperiment = {experiment}\n{run_extra}\n{tol_section}\n"
    )
    return path


def test_shipped_configs_parse(tmp_path):
    import pathlib

    for ini in pathlib.Path("configs").glob("*.ini"):
        cfg = ExperimentConfig.from_file(str(ini))
        assert cfg.pair == CANONICAL_PAIR


def test_report_sorting_stable(tmp_path):
    rep = Report()
    rep.records.append(record("count", B=20, q_or_P=1, value_re=2.0))
    rep.records.append(record("count", B=10, q_or_P=1, value_re=1.0))
    out = tmp_path / "r.csv"
    write_csv(rep, str(out))
    lines = out.read_text().splitlines()
    assert lines[2].startswith("count,10")
