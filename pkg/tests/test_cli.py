import functools
import json
import subprocess
import sys

import numpy as np

from sympcanon import blocks, cli
from sympcanon.blocks import p_block
from sympcanon.matrices import matrix_to_json, mul, omega
from sympcanon.randomized import random_symplectic
from sympcanon.verify import Constructors, verify_suite


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def _pair_json(A, B=None):
    out = {"A": matrix_to_json(A)}
    if B is not None:
        out["B"] = matrix_to_json(B)
    return out


def test_gen_q():
    report, code = cli.run(["gen", "--block", "Q", "--n", "1", "--c", "2", "--field", "rational"])
    assert code == 0
    assert report == {"field": "rational", "rows": [["2/1", "0/1"], ["0/1", "2/1"]]}


def test_gen_gaussian_and_frobenius():
    report, code = cli.run(["gen", "--block", "J", "--n", "2", "--a", "1+2i"])
    assert code == 0 and report["field"] == "gaussian"
    report, code = cli.run(["gen", "--block", "F", "--poly", "1,0,1", "--power", "2"])
    assert code == 0 and len(report["rows"]) == 4
    _, code = cli.run(["gen", "--block", "Q", "--c", "-1"])
    assert code == cli.EXIT_PRECONDITION


def test_williamson_identity(tmp_path):
    path = _write(tmp_path / "identity4.json", matrix_to_json(np.eye(4)))
    report, code = cli.run(["williamson", path])
    assert code == 0
    assert np.allclose(np.array(report["D"]["rows"], dtype=float), np.eye(2))
    assert np.allclose(np.abs(np.array(report["S"]["rows"], dtype=float)), np.eye(4))
    assert report["residual"]["congruence"] == 0 and report["residual"]["symplectic"] == 0


def test_check_congruent(tmp_path):
    S = random_symplectic(1, seed=5)
    A2 = mul(S.T, p_block(1), S)
    p1 = _write(tmp_path / "p1.json", _pair_json(p_block(1), omega(1)))
    p2 = _write(tmp_path / "p2.json", _pair_json(A2, omega(1)))
    report, code = cli.run(["check-congruent", p1, p2])
    assert code == 0 and report["congruent"] is True
    neg = _write(tmp_path / "neg.json", _pair_json(-np.array([[1.0, 0], [0, 0]])))
    pf = _write(tmp_path / "pf.json", _pair_json(np.array([[1.0, 0], [0, 0]])))
    report, code = cli.run(["check-congruent", pf, neg])
    assert code == 0 and report["congruent"] is False


def test_canon_report(tmp_path):
    path = _write(tmp_path / "q.json", _pair_json(blocks.q_block(1, 3)))
    report, code = cli.run(["canon", path])
    assert code == 0
    (s,) = report["decomposition"]["summands"]
    assert (s["type"], s["n"], s["sign"]) == ("Q", 1, 1)
    assert report["decomposition"]["size"] == 2


def test_sympl_similar(tmp_path):
    H = mul(omega(1), blocks.q_block(1, 1))
    h1 = _write(tmp_path / "h1.json", matrix_to_json(H))
    h2 = _write(tmp_path / "h2.json", matrix_to_json(-H))
    report, code = cli.run(["check-sympl-similar", h1, h2])
    assert code == 0 and report["symplectically_similar"] is False


def test_exit_codes(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli.run(["canon", str(bad)])[1] == cli.EXIT_MALFORMED
    asym = _write(tmp_path / "asym.json", _pair_json(np.array([[1.0, 2.0], [0.0, 1.0]])))
    assert cli.run(["canon", asym])[1] == cli.EXIT_PRECONDITION
    notpd = _write(tmp_path / "notpd.json", matrix_to_json(-np.eye(2)))
    assert cli.run(["williamson", notpd])[1] == cli.EXIT_PRECONDITION
    assert cli.run(["frobnicate"])[1] == cli.EXIT_MALFORMED
    assert cli.run(["canon", str(tmp_path / "missing.json")])[1] == cli.EXIT_MALFORMED
    assert cli.run(["verify-suite", "--bound", "0"])[1] == cli.EXIT_PRECONDITION


def test_indeterminate_exit(tmp_path, monkeypatch):
    from sympcanon.errors import IndeterminateError

    def raise_indeterminate(*a, **k):
        raise IndeterminateError("cluster split")

    monkeypatch.setattr(cli, "canonicalize_pair", raise_indeterminate)
    path = _write(tmp_path / "q.json", _pair_json(np.eye(2)))
    report, code = cli.run(["canon", path])
    assert code == cli.EXIT_INDETERMINATE and report["error"]["type"] == "IndeterminateError"


def test_verify_suite_ok():
    report, code = cli.run(["verify-suite", "--bound", "2"])
    assert code == 0 and report["passed"]


def test_verify_suite_failure(monkeypatch):
    def tampered(n, field=None):
        P = p_block(n).copy()
        P[0, 0] = 0
        return P

    monkeypatch.setattr(cli, "verify_suite", functools.partial(verify_suite, constructors=Constructors(p=tampered)))
    report, code = cli.run(["verify-suite", "--bound", "2"])
    assert code == cli.EXIT_VERIFY
    assert "rank_omega_p" in report["failed"]


def test_batch(tmp_path):
    d = tmp_path / "batch"
    d.mkdir()
    _write(d / "a.json", _pair_json(blocks.q_block(1, 2)))
    _write(d / "b.json", _pair_json(np.array([[1.0, 2.0], [0.0, 1.0]])))
    report, code = cli.run(["canon", "--batch", str(d)])
    assert set(report["batch"]) == {"a.json", "b.json"}
    assert report["batch"]["a.json"]["exit_code"] == 0
    assert report["batch"]["b.json"]["exit_code"] == cli.EXIT_PRECONDITION
    assert code == cli.EXIT_PRECONDITION


def test_byte_stable(tmp_path):
    rng = np.random.default_rng(0)
    R = rng.standard_normal((4, 4))
    path = _write(tmp_path / "spd.json", matrix_to_json(R.T @ R + np.eye(4)))
    outs = []
    for k in range(2):
        out = tmp_path / f"out{k}.json"
        assert cli.main(["williamson", path, "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    text = outs[0].decode()
    assert json.loads(text)["command"] == "williamson"
    assert list(json.loads(text)) == sorted(json.loads(text))


def test_dumps_format():
    assert cli.dumps({"b": 0.1, "a": 2.0, "c": float("nan")}) == cli.dumps({"c": float("nan"), "a": 2.0, "b": 0.1})
    text = cli.dumps({"x": 0.1})
    assert "0.10000000000000001" in text


def test_console_entry(tmp_path):
    out = subprocess.run(
        [sys.executable, "-m", "sympcanon.cli", "gen", "--block", "P", "--n", "1"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0
    assert json.loads(out.stdout)["rows"] == [["1/1", "0/1"], ["0/1", "0/1"]]
