import json
import subprocess
import sys

import numpy as np
import pytest

from intgeo import bodies as bd


def run_cli(*args):
    proc = subprocess.run([sys.executable, "-m", "intgeo.cli", *args],
                          capture_output=True, text=True, timeout=300)
    return proc.returncode, proc.stdout, proc.stderr


def canonical(payload_text):
    data = json.loads(payload_text)
    data.pop("metadata")
    return json.dumps(data, sort_keys=True)


@pytest.fixture(scope="module")
def ball2(tmp_path_factory):
    path = tmp_path_factory.mktemp("bodies") / "ball2.json"
    path.write_text(json.dumps(bd.body_to_dict(bd.unit_ball(2))))
    return str(path)


@pytest.fixture(scope="module")
def box2(tmp_path_factory):
    path = tmp_path_factory.mktemp("bodies") / "box2.json"
    path.write_text(json.dumps(bd.body_to_dict(bd.cube(2, side=2.0,
                                                       centered=True))))
    return str(path)


def test_seed_is_required(ball2):
    rc, _, err = run_cli("intrinsic", "--body", ball2)
    assert rc == 2
    assert "--seed" in err


def test_intrinsic_closed_json(ball2):
    rc, out, _ = run_cli("intrinsic", "--body", ball2, "--seed", "1")
    assert rc == 0
    data = json.loads(out)
    assert data["schema_version"] == 1
    np.testing.assert_allclose(data["results"]["values"],
                               [1.0, np.pi, np.pi], atol=1e-9)
    assert "timestamp" in data["metadata"]


def test_intrinsic_csv(ball2):
    rc, out, _ = run_cli("intrinsic", "--body", ball2, "--seed", "1",
                         "--format", "csv")
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[0].split(",") == ["j", "value", "std_error"]
    assert len(lines) == 4


def test_intrinsic_steiner_scientific_notation(box2):
    rc, out, _ = run_cli("intrinsic", "--body", box2, "--method", "steiner",
                         "--samples", "2e4", "--seed", "9")
    assert rc == 0
    data = json.loads(out)
    vals = data["results"]["values"]
    np.testing.assert_allclose(vals, [1.0, 4.0, 4.0], rtol=0.2)


def test_bad_sample_count(box2):
    rc, _, err = run_cli("intrinsic", "--body", box2, "--method", "steiner",
                         "--samples", "lots", "--seed", "1")
    assert rc == 2
    assert "sample count" in err


def test_bad_body_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"type": "blob"}))
    rc, _, err = run_cli("intrinsic", "--body", str(path), "--seed", "1")
    assert rc == 2
    assert "body" in err


def test_numerical_failure_exit_code(tmp_path):
    # pathological axis ratio: the adaptive quadrature refuses to answer
    path = tmp_path / "thin.json"
    body = {"type": "ellipsoid", "center": [0.0, 0.0],
            "axes": [[1.0, 0.0], [0.0, 1.0]], "semiaxes": [1.0, 1e-30]}
    path.write_text(json.dumps(body))
    rc, _, err = run_cli("intrinsic", "--body", str(path), "--seed", "1")
    assert rc == 3
    assert "numerical failure" in err


def test_cj_rejects_n_beyond_weyl_range():
    rc, _, err = run_cli("cj", "--n", "7", "--seed", "1", "--samples", "100")
    assert rc == 2
    assert "direct" in err  # points at the workaround
    rc, out, _ = run_cli("cj", "--n", "7", "--method", "direct", "--seed", "1",
                         "--samples", "200")
    assert rc == 0
    assert "7" in json.loads(out)["results"]["direct"]


def test_cj_both_routes_and_cache(tmp_path):
    cache = tmp_path / "cache.json"
    rc, out, _ = run_cli("cj", "--n", "2", "--seed", "3", "--samples", "2e4",
                         "--cache", str(cache), "--threads", "2")
    assert rc == 0
    data = json.loads(out)
    for route in ("direct", "weyl"):
        c0 = data["results"][route]["0"]
        assert abs(c0["mean"] - 1.0) < 5.0 * max(c0["std_error"], 1e-12)
    assert data["results"]["weyl"]["0"]["ess"] > 0.5
    assert sum(data["params"]["shard_samples"]) == 20000
    cached = json.loads(cache.read_text())
    assert {r["method"] for r in cached["constants"]} == {"direct", "weyl"}


def test_kinematic_uses_cache_and_is_deterministic(ball2, tmp_path):
    cache = tmp_path / "cj.json"
    rc, _, _ = run_cli("cj", "--n", "2", "--method", "direct", "--seed", "5",
                       "--samples", "1e4", "--cache", str(cache))
    assert rc == 0
    args = ("kinematic", "--group", "gl", "--phi", "chi", "--M", ball2,
            "--L", ball2, "--samples", "4e3", "--seed", "11",
            "--crofton-samples", "4e3", "--cj-cache", str(cache),
            "--threads", "2")
    rc1, out1, _ = run_cli(*args)
    rc2, out2, _ = run_cli(*args)
    assert rc1 == rc2 == 0
    assert canonical(out1) == canonical(out2)
    data = json.loads(out1)
    assert data["results"]["convention"] in ("half", "total")
    assert data["params"]["shard_samples"] == [2000, 2000]


def test_kinematic_csv(ball2):
    rc, out, _ = run_cli("kinematic", "--group", "so", "--phi", "chi",
                         "--M", ball2, "--L", ball2, "--samples", "2e3",
                         "--crofton-samples", "2e3", "--seed", "2",
                         "--format", "csv")
    assert rc == 0
    assert out.splitlines()[0].split(",") == ["j", "c_j", "phi_coeff", "v_j",
                                              "term", "std_error"]


def test_kinematic_dimension_mismatch(ball2, tmp_path):
    path = tmp_path / "ball3.json"
    path.write_text(json.dumps(bd.body_to_dict(bd.unit_ball(3))))
    rc, _, err = run_cli("kinematic", "--M", ball2, "--L", str(path),
                         "--seed", "1", "--samples", "100")
    assert rc == 2
    assert "dimension" in err


def test_kinematic_rejects_wrong_cache(ball2, tmp_path):
    cache = tmp_path / "cj3.json"
    rc, _, _ = run_cli("cj", "--n", "3", "--method", "direct", "--seed", "5",
                       "--samples", "1e3", "--cache", str(cache))
    assert rc == 0
    rc, _, err = run_cli("kinematic", "--M", ball2, "--L", ball2, "--seed", "1",
                         "--samples", "100", "--crofton-samples", "100",
                         "--cj-cache", str(cache))
    assert rc == 2
    assert "cache" in err


def test_config_file_merges_under_flags(ball2, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"group": "so", "phi": "chi", "M": ball2,
                               "L": ball2, "samples": "2e3",
                               "crofton-samples": "2e3"}))
    rc, out, _ = run_cli("kinematic", "--config", str(cfg), "--seed", "4",
                         "--samples", "1e3")
    assert rc == 0
    data = json.loads(out)
    assert data["params"]["samples"] == 1000  # flag beat the config value
    assert data["params"]["group"] == "so"


def test_out_writes_file(ball2, tmp_path):
    target = tmp_path / "res.json"
    rc, out, _ = run_cli("intrinsic", "--body", ball2, "--seed", "1",
                         "--out", str(target))
    assert rc == 0
    assert out == ""
    data = json.loads(target.read_text())
    assert data["command"] == "intrinsic"


def test_lemma_check_cli():
    rc, out, _ = run_cli("lemma-check", "--trials", "80", "--seed", "6")
    assert rc == 0
    data = json.loads(out)
    assert data["results"]["disagreements"] == 0
    assert data["results"]["trials"] == 80


def test_lemma_check_rejects_non_polytope(ball2):
    rc, _, err = run_cli("lemma-check", "--trials", "10", "--seed", "1",
                         "--M", ball2, "--L", ball2)
    assert rc == 2
    assert "polytope" in err
