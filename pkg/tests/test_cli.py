import pytest

from mimo_bands import __version__
from mimo_bands.cli import main
from mimo_bands.config import ConfigError, parse_config

CFG = """\
# small sweep
[fig2_cm_vs_an]
n_trials = 4
master_seed = 11
antennas = 4x8
m_values = 1
snr_db = 0, 10   # two points
"""


@pytest.fixture
def cfg_file(tmp_path):
    p = tmp_path / "study.ini"
    p.write_text(CFG)
    return p


def test_list_scenarios(capsys):
    assert main(["list-scenarios"]) == 0
    out = capsys.readouterr().out
    assert "umi-street-canyon-nlos n=3.19 sigma=8.2 b=0" in out
    assert len(out.strip().splitlines()) == 8


def test_version(capsys):
    assert main(["version"]) == 0
    assert capsys.readouterr().out.strip() == __version__


def test_validate_ok(cfg_file):
    assert main(["validate-config", "--config", str(cfg_file)]) == 0


def test_validate_bad_breakpoints(tmp_path, capsys):
    p = tmp_path / "bad.ini"
    p.write_text(CFG + "mu_d0_m = 100\nmu_d1_m = 50\n")
    assert main(["validate-config", "--config", str(p)]) == 2
    err = capsys.readouterr().err.strip().splitlines()
    assert len(err) == 1 and err[0].startswith("error:") and "mu_d0_m" in err[0]


@pytest.mark.parametrize("extra", ["bogus_key = 1\n", "n_trials = many\n", "mm_scenario = mars\n",
                                   "mm_los = maybe\n", "antennas = 4by8\n"])
def test_validate_rejects(tmp_path, extra, capsys):
    p = tmp_path / "bad.ini"
    p.write_text(CFG + extra)
    assert main(["validate-config", "--config", str(p)]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_missing_config_file(tmp_path, capsys):
    assert main(["validate-config", "--config", str(tmp_path / "nope.ini")]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_unknown_flag(capsys):
    assert main(["run", "--frobnicate"]) == 64
    err = capsys.readouterr().err
    assert "usage:" in err and "\nerror:" in err


def test_no_command(capsys):
    assert main([]) == 64


def test_run_requires_config(capsys):
    assert main(["run", "--out", "x.csv"]) == 64


def test_run_deterministic(cfg_file, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["run", "--config", str(cfg_file), "--out", str(a), "--seed", "7", "--quiet"]) == 0
    assert main(["run", "--config", str(cfg_file), "--out", str(b), "--seed", "7", "--quiet"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_overrides_echoed(cfg_file, tmp_path):
    out = tmp_path / "o.csv"
    assert main(["run", "--config", str(cfg_file), "--out", str(out), "--quiet",
                 "--set", "n_trials=2", "--set", "snr_db=5", "--seed", "9"]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# config:")
    assert "n_trials=2" in lines[0] and "snr_db=5" in lines[0] and "master_seed=9" in lines[0]
    assert lines[1].startswith("study,")
    assert len(lines) == 2 + 2  # cm_fd and an_steering at one SNR
    assert lines[2].endswith(",2")


def test_workers_env(cfg_file, tmp_path, monkeypatch):
    monkeypatch.setenv("MIMO_BANDS_WORKERS", "2")
    out = tmp_path / "w.csv"
    assert main(["run", "--config", str(cfg_file), "--out", str(out), "--quiet"]) == 0
    ref = tmp_path / "r.csv"
    assert main(["run", "--config", str(cfg_file), "--out", str(ref), "--quiet",
                 "--workers", "1"]) == 0
    assert out.read_bytes() == ref.read_bytes()


def test_run_output_error(cfg_file, tmp_path, capsys):
    out = tmp_path / "no" / "dir.csv"
    assert main(["run", "--config", str(cfg_file), "--out", str(out), "--quiet"]) == 1
    assert capsys.readouterr().err.startswith("error:")


def test_scenario_override():
    loaded = parse_config(CFG + "mm_scenario = inh-indoor-office-nlos\nscenario_n = 3.0\n"
                                "mm_f_ghz = 28\n")
    scen = loaded.config.mm.scenario
    assert (scen.n, scen.sigma_db, scen.b, scen.f0_ghz, scen.f_ghz) == (3.0, 8.29, 0.06, 24.2, 28)


def test_parse_requires_one_section():
    with pytest.raises(ConfigError):
        parse_config("[fig2_cm_vs_an]\n[fig6_eta]\n")
    with pytest.raises(ConfigError):
        parse_config("[fig7]\nn_trials = 1\n")


def test_bad_override_syntax():
    with pytest.raises(ConfigError):
        parse_config(CFG, ["n_trials"])
