import json
import os
import subprocess
import sys

import pytest

from drinfeld import PPoint, context_for, omega_embed_b
from drinfeld.points import point_to_obj


def run_cli(args, stdin=None):
    env = dict(os.environ)
    src = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "src")
    env["PYTHONPATH"] = src + os.pathsep + env.get("PYTHONPATH", "")
    proc = subprocess.run(
        [sys.executable, "-m", "drinfeld", *args],
        input=stdin,
        capture_output=True,
        env=env,
    )
    return proc


@pytest.fixture(scope="module")
def dense_point_json():
    ctx = context_for(2, 1, 2, [1, 2, 3])
    w = next(a for a in ctx.subfield_elements(2) if a not in (ctx.zero, ctx.one))
    x = PPoint(ctx, (ctx.one, w))
    return json.dumps(point_to_obj(x)).encode()


def test_classify_from_stdin(dense_point_json):
    proc = run_cli(["classify"], stdin=dense_point_json)
    assert proc.returncode == 0
    out = proc.stdout.decode()
    assert "variety: P" in out and "valid: true" in out and "stratum: 0" in out


def test_classify_json_output(tmp_path, dense_point_json):
    path = tmp_path / "point.json"
    path.write_bytes(dense_point_json)
    proc = run_cli(["classify", "--input", str(path), "--format", "json"])
    assert proc.returncode == 0
    obj = json.loads(proc.stdout)
    assert obj == {"variety": "P", "valid": True, "stratum": "0"}


def test_classify_b_point(tmp_path):
    ctx = context_for(2, 1, 2, [1, 2])
    w = next(a for a in ctx.subfield_elements(2) if a not in (ctx.zero, ctx.one))
    x = omega_embed_b(PPoint(ctx, (ctx.one, w)))
    proc = run_cli(
        ["classify", "--format", "json"],
        stdin=json.dumps(point_to_obj(x)).encode(),
    )
    assert proc.returncode == 0
    obj = json.loads(proc.stdout)
    assert obj == {"variety": "B", "valid": True, "stratum": "()"}


def test_classify_invalid_q_point():
    ctx = context_for(2, 1, 2, [1])
    obj = {
        "kind": "Q",
        "field": {"p": 2, "e": 1, "D": ctx.D, "modulus": list(ctx.modulus)},
        "data": {
            "n_plus_1": 2,
            "table": {"0,1": [1], "1,0": [1], "1,1": [0]},
        },
    }
    proc = run_cli(["classify", "--format", "json"], stdin=json.dumps(obj).encode())
    assert proc.returncode == 0
    result = json.loads(proc.stdout)
    assert result["valid"] is False
    assert result["reason"] == "addition"
    assert "stratum" not in result


def test_classify_bad_json():
    proc = run_cli(["classify"], stdin=b"{not json")
    assert proc.returncode == 2


def test_stabilizer_output(dense_point_json):
    proc = run_cli(["stabilizer", "--format", "json"], stdin=dense_point_json)
    assert proc.returncode == 0
    obj = json.loads(proc.stdout)
    assert obj["order"] == 3
    assert obj["bruteforce_equals_predicted"] is True
    assert len(obj["members"]) == 3
    assert obj["unipotent"] == ["1,0;0,1"]


def test_strata_text(tmp_path):
    proc = run_cli(
        ["strata", "--variety", "P", "--n", "1", "--m", "1,2",
         "--format", "text", "--no-cache"]
    )
    assert proc.returncode == 0
    assert b"total" in proc.stdout and b"5" in proc.stdout


def test_count_json():
    proc = run_cli(
        ["count", "--variety", "Q", "--n", "1", "--m", "1,2",
         "--format", "json", "--no-cache"]
    )
    assert proc.returncode == 0
    obj = json.loads(proc.stdout)
    assert obj["totals"] == {"1": 3, "2": 5}


def test_strata_deterministic_across_jobs():
    base = ["strata", "--variety", "B", "--n", "2", "--m", "1,2", "--no-cache"]
    for fmt in ("json", "dot"):
        one = run_cli(base + ["--format", fmt, "--jobs", "1"])
        two = run_cli(base + ["--format", fmt, "--jobs", "2"])
        assert one.returncode == 0 and two.returncode == 0
        assert one.stdout == two.stdout


def test_strata_cache_dir(tmp_path):
    cache = str(tmp_path / "atlas-cache")
    args = ["strata", "--variety", "P", "--n", "1", "--m", "1",
            "--format", "json", "--cache-dir", cache]
    first = run_cli(args)
    assert first.returncode == 0
    assert os.path.isdir(cache) and os.listdir(cache) == ["P_q2_n1_m1.json"]
    second = run_cli(args)
    assert second.stdout == first.stdout


def test_verify_passes_at_dim_two():
    proc = run_cli(["verify", "--max-n", "1", "--max-m", "2",
                    "--perturbations", "50"])
    assert proc.returncode == 0, proc.stdout.decode()
    assert b"[FAIL]" not in proc.stdout


def test_verify_unknown_suite_is_config_error():
    proc = run_cli(["verify", "--suites", "nonsense"])
    assert proc.returncode == 2


def test_verify_reports_failures_with_exit_one(monkeypatch, capsys):
    from drinfeld import cli
    from drinfeld.verify import CheckResult

    def fake_verify_all(cfg):
        return [
            CheckResult("points.partition_P", True, 0.1),
            CheckResult("points.b_two_tests_agree", False, 0.2, "witness here"),
        ]

    monkeypatch.setattr(cli, "verify_all", fake_verify_all)
    code = cli.main(["verify"])
    out = capsys.readouterr().out
    assert code == 1
    assert "[FAIL] points.b_two_tests_agree" in out and "witness here" in out
    assert "1/2 checks passed" in out


def test_verify_single_suite():
    proc = run_cli(["verify", "--suites", "field", "--max-n", "1"])
    assert proc.returncode == 0
    out = proc.stdout.decode()
    assert "field.ring_axioms" in out and "points" not in out
