import json
import re
from pathlib import Path

import numpy as np
import pytest

from openqsl import cli, io, qsl
from openqsl.config import RunConfig
from openqsl.errors import ConfigurationError

GOLDEN = Path(__file__).parent / "golden"
NUMBER = re.compile(r"-?\d+\.\d+(?:e[-+]?\d+)?")


def _header(path):
    return path.read_text(encoding="utf-8").splitlines()[0]


def _golden(name):
    return (GOLDEN / name).read_text(encoding="utf-8").strip()


def _run(*argv):
    return cli.main([str(a) for a in argv])


def test_config_json_round_trip():
    cfg = RunConfig()
    cfg.dot.seeds = [3, 4]
    cfg.jc.gammas = [0.4, 2.0]
    cfg.h_spread = "full"
    again = RunConfig.from_json(cfg.to_json())
    assert again == cfg
    assert again.to_json() == cfg.to_json()


def test_defaults_match_reference_settings():
    cfg = RunConfig()
    assert (cfg.jc.lam, cfg.jc.tau, cfg.jc.points) == (1.0, 10.0, 120)
    assert cfg.jc.grid()[0] == pytest.approx(0.05) and cfg.jc.grid()[-1] == pytest.approx(50.0)
    assert (cfg.dot.n1, cfg.dot.n2, cfg.dot.delta_eps, cfg.dot.coupling, cfg.dot.tau) == (500, 500, 0.5, 0.02, 8.0)
    assert len(cfg.dot.seeds) == 10


@pytest.mark.parametrize("text", [
    "{not json",
    "[]",
    '{"jc": {"bogus": 1}}',
    '{"jobs": 0}',
    '{"norm_flavor": "max"}',
    '{"dot": {"betas": [1.5]}}',
    '{"jc": {"lam": "one"}}',
])
def test_bad_config_rejected(text):
    with pytest.raises(ConfigurationError):
        RunConfig.from_json(text)


def test_flag_overrides_file(tmp_path):
    cfg = RunConfig()
    cfg.jc.tau = 7.0
    cfg.jc.lam = 2.0
    path = tmp_path / "c.json"
    path.write_text(cfg.to_json())
    args = cli.build_parser().parse_args(["jc-sweep", "--config", str(path), "--tau", "5"])
    resolved = cli.resolve_config(args)
    assert resolved.jc.tau == 5.0
    assert resolved.jc.lam == 2.0


def test_seed_flags_for_dot_run():
    parse = cli.build_parser().parse_args
    assert cli.resolve_config(parse(["dot-run", "--seed", "4"])).dot.seeds == [4]
    assert cli.resolve_config(parse(["dot-run", "--seed", "4", "--n-seeds", "3"])).dot.seeds == [4, 5, 6]


def test_jc_sweep_single_weak_point(tmp_path):
    assert _run("jc-sweep", "--out", tmp_path, "--gamma", "0.4") == cli.EXIT_OK
    header, rows = io.read_csv(tmp_path / "jc_sweep.csv")
    assert ",".join(header) == _golden("jc_sweep.header")
    assert len(rows) == 1
    row = dict(zip(header, rows[0]))
    assert float(row["tau_hat"]) == 10.0
    assert row["tau_hat_m"] == ""
    assert float(row["non_markovianity"]) == 0.0
    assert (tmp_path / "jc_sweep.svg").read_text().startswith("<?xml")


def test_jc_sweep_strong_beta(tmp_path):
    assert _run("jc-sweep", "--out", tmp_path, "--gamma", "200") == 0
    header, rows = io.read_csv(tmp_path / "jc_sweep.csv")
    beta = float(dict(zip(header, rows[0]))["beta"])
    assert abs(beta - 2 / np.pi) < 0.05


def test_sweep_is_byte_identical_across_runs_and_workers(tmp_path):
    grid = "0.1,0.7,3,20"
    assert _run("jc-sweep", "--out", tmp_path / "a", "--gamma", grid) == 0
    assert _run("jc-sweep", "--out", tmp_path / "b", "--gamma", grid, "--jobs", 2) == 0
    assert _run("jc-sweep", "--out", tmp_path / "c", "--gamma", grid) == 0
    a = (tmp_path / "a" / "jc_sweep.csv").read_bytes()
    assert a == (tmp_path / "b" / "jc_sweep.csv").read_bytes() == (tmp_path / "c" / "jc_sweep.csv").read_bytes()
    assert (tmp_path / "a" / "jc_sweep.svg").read_bytes() == (tmp_path / "c" / "jc_sweep.svg").read_bytes()


def test_written_config_reproduces_run(tmp_path):
    assert _run("jc-sweep", "--out", tmp_path / "a", "--gamma", "0.9,4") == 0
    assert _run("jc-sweep", "--config", tmp_path / "a" / "config.json", "--out", tmp_path / "b") == 0
    assert (tmp_path / "a" / "jc_sweep.csv").read_bytes() == (tmp_path / "b" / "jc_sweep.csv").read_bytes()


def test_csv_uses_nine_significant_digits(tmp_path):
    _run("jc-sweep", "--out", tmp_path, "--gamma", "3")
    _, rows = io.read_csv(tmp_path / "jc_sweep.csv")
    digits = [len(re.sub(r"[^0-9]", "", c.split("e")[0]).lstrip("0")) for c in rows[0] if c]
    assert max(digits) == 9
    assert io.fmt(1 / 3) == "0.333333333"
    assert io.fmt(None) == ""


def test_bound_violation_exits_3(tmp_path, monkeypatch):
    real = qsl.analyze

    def broken(*a, **k):
        rep = real(*a, **k)
        return qsl.BoundReport(**{**rep.as_dict(), "bound_max": rep.tau_hat * 2})

    monkeypatch.setattr(qsl, "analyze", broken)
    assert _run("jc-sweep", "--out", tmp_path, "--gamma", "3") == cli.EXIT_NUMERICAL
    assert not (tmp_path / "jc_sweep.csv").exists()


def test_config_errors_exit_2(tmp_path):
    assert _run("jc-sweep", "--out", tmp_path, "--points", 0) == cli.EXIT_CONFIG
    assert _run("jc-sweep", "--config", tmp_path / "missing.json") == cli.EXIT_CONFIG
    assert _run("jc-sweep", "--out", tmp_path, "--beta", "0.5,0.6") == cli.EXIT_CONFIG
    assert _run("jc-trajectory", "--out", tmp_path, "--gamma0", "-1") == cli.EXIT_CONFIG
    assert _run("dot-run", "--out", tmp_path, "--n1", 4, "--n2", 4, "--beta", "2") == cli.EXIT_CONFIG
    with pytest.raises(SystemExit) as exc:
        _run("jc-sweep", "--norm-flavor", "max")
    assert exc.value.code == 2


def test_jc_trajectory_strong(tmp_path):
    assert _run("jc-trajectory", "--out", tmp_path, "--gamma0", 10) == 0
    assert _header(tmp_path / "jc_trajectory.csv") == _golden("jc_trajectory.header")
    header, rows = io.read_csv(tmp_path / "jc_trajectory.csv")
    assert [float(v) for v in rows[0][:3]] == [0.0, 1.0, 0.0]
    markers = json.loads((tmp_path / "jc_trajectory_markers.json").read_text())
    first = 2 / np.sqrt(19) * (np.pi - np.arctan(np.sqrt(19)))
    assert markers["rho11_zero_time"] == pytest.approx(first, abs=1e-3)
    rho11 = np.array([float(r[1]) for r in rows])
    t = np.array([float(r[0]) for r in rows])
    # rho11 is quadratic at its zero; half a step (0.005) away it is still ~5e-5
    assert rho11[np.argmin(np.abs(t - first))] < 1e-4


def test_jc_trajectory_weak_is_monotone(tmp_path):
    assert _run("jc-trajectory", "--out", tmp_path, "--gamma0", 0.4) == 0
    markers = json.loads((tmp_path / "jc_trajectory_markers.json").read_text())
    assert markers["rho11_monotone"] is True
    assert markers["rho11_zero_time"] is None


def test_dot_run_small(tmp_path):
    args = ["dot-run", "--out", tmp_path, "--n1", 20, "--n2", 20, "--coupling", 0.2, "--delta-e", 3,
            "--n-seeds", 2, "--n-steps", 200]
    assert _run(*args) == 0
    assert _header(tmp_path / "dot_excited.csv") == _golden("dot_run.header")
    report = (tmp_path / "dot_excited_report.txt").read_text()
    assert "ensemble mean +- stdev over 2 seed(s), h_spread=half" in report
    assert "h_spread=full" in report
    first = (tmp_path / "dot_excited.csv").read_bytes()
    assert _run(*args) == 0
    assert (tmp_path / "dot_excited.csv").read_bytes() == first


def test_dot_run_zero_coupling_is_flat(tmp_path):
    assert _run("dot-run", "--out", tmp_path, "--n1", 10, "--n2", 10, "--coupling", 0, "--seed", 1,
                "--n-steps", 50) == 0
    _, rows = io.read_csv(tmp_path / "dot_excited.csv")
    assert all(float(r[2]) == 0.0 for r in rows)
    assert "no dynamics: bounds undefined" in (tmp_path / "dot_excited_report.txt").read_text()


def test_ineq_check_report(tmp_path):
    assert _run("ineq-check", "--out", tmp_path / "a", "--trials", 1, "--max-dim", 2, "--seed", 7) == 0
    assert _run("ineq-check", "--out", tmp_path / "b", "--trials", 1, "--max-dim", 2, "--seed", 7) == 0
    text = (tmp_path / "a" / "ineq_report.txt").read_bytes()
    assert text == (tmp_path / "b" / "ineq_report.txt").read_bytes()
    golden = _golden("ineq_trials1_dim2_seed7.txt")
    got = text.decode().strip()
    assert NUMBER.sub("#", got) == NUMBER.sub("#", golden)
    np.testing.assert_allclose([float(x) for x in NUMBER.findall(got)],
                               [float(x) for x in NUMBER.findall(golden)], atol=1e-8)
    assert "commutator_op=0.500000000 bound=0.500000000 ratio=1.000000000" in got
