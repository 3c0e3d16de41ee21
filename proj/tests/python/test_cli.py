import json
import os
import subprocess

import pytest


def run(cli, *args, env=None):
    full_env = dict(os.environ)
    full_env.pop("RCBOUND_WORKERS", None)
    if env:
        full_env.update(env)
    return subprocess.run([cli, *args], capture_output=True, text=True, env=full_env)


def test_fisher_plain_value(cli):
    r = run(cli, "fisher", "--family", "gaussian-shift", "--theta", "0", "--p", "2")
    assert r.returncode == 0, r.stderr
    assert r.stdout.strip() == "1.0"


def test_bound_value(cli):
    r = run(cli, "bound", "--family", "gaussian-shift", "--theta", "0", "--q", "1.3333333333333333")
    assert r.returncode == 0, r.stderr
    assert "0.4029" in r.stdout


def test_usage_errors_exit_1(cli):
    assert run(cli).returncode == 1
    assert run(cli, "no-such-command").returncode == 1
    assert run(cli, "fisher", "--family", "gaussian-shift").returncode == 1
    # verify without any seed
    r = run(cli, "clt-norm", "--dist", "normal")
    assert r.returncode == 1


def test_domain_errors_exit_2(cli):
    r = run(cli, "bound", "--family", "gaussian-shift", "--theta", "0", "--q", "3")
    assert r.returncode == 2
    r = run(cli, "bound", "--family", "weibull-tail(2)", "--theta", "1", "--phi", "phi_2")
    assert r.returncode == 2


def test_verify_missing_seed_is_usage_error(cli, scenarios):
    r = run(cli, "verify", "--scenario", str(scenarios / "gauss_q2.scn"), "--reps", "1000")
    assert r.returncode == 1
    assert "seed" in r.stderr


def _small_scenario(tmp_path):
    path = tmp_path / "small.scn"
    path.write_text(json.dumps({"family": "gaussian-shift", "n_grid": [5, 20], "reps": 4000}))
    return path


def test_verify_worker_invariance_and_round_trip(cli, tmp_path):
    scn = _small_scenario(tmp_path)
    outs = []
    for workers, env in (("1", None), ("4", None), (None, {"RCBOUND_WORKERS": "7"})):
        out = tmp_path / f"report_{workers}.jsonl"
        args = ["verify", "--scenario", str(scn), "--seed", "42", "--jsonl", str(out)]
        if workers:
            args += ["--workers", workers]
        r = run(cli, *args, env=env)
        assert r.returncode == 0, r.stderr
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]

    record = json.loads(outs[0].decode().splitlines()[0])
    assert record["scenario"]["seed"] == 42
    replay = tmp_path / "replay.jsonl"
    first = tmp_path / "first.jsonl"
    first.write_bytes(outs[0])
    r = run(cli, "verify", "--scenario", str(first), "--jsonl", str(replay))
    assert r.returncode == 0, r.stderr
    assert replay.read_bytes() == outs[0]


def test_verify_csv(cli, tmp_path):
    scn = _small_scenario(tmp_path)
    csv = tmp_path / "r.csv"
    r = run(cli, "verify", "--scenario", str(scn), "--seed", "3", "--csv", str(csv))
    assert r.returncode == 0, r.stderr
    lines = csv.read_text().splitlines()
    assert lines[0].startswith("family,theta0,")
    assert len(lines) == 3


def test_clt_norm_jsonl(cli):
    r = run(cli, "clt-norm", "--dist", "normal", "--n-grid", "1,4", "--reps", "2000", "--seed", "1", "--jsonl", "-")
    assert r.returncode == 0, r.stderr
    rec = json.loads(r.stdout.splitlines()[0])
    assert "inputs" in rec


def test_conjugate_table(cli):
    r = run(cli, "conjugate", "--phi", "phi_2", "--grid", "0,1,2")
    assert r.returncode == 0, r.stderr
    assert "2.0" in r.stdout
