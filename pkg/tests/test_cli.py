import json
import subprocess
import sys

import pytest

from quatspec.cli import main

EXAMPLE = {"rows": 2, "cols": 2, "entries": [[[3, 1, 0, 0], [0, 0, 0, 0]], [[0, 0, 0, 0], [0, 0, 0, 1]]]}
GEOMETRIC = {"kind": "diagonal", "lambda": {"type": "geometric", "param": 0.5}, "p": 0.5}
KERNEL = {
    "kind": "kernel",
    "mu": {"type": "power", "param": 1.6},
    "nu": {"type": "power", "param": 1.6},
    "d": {"type": "seeded_bounded", "seed": 3, "bound": 1.0},
    "p": 2 / 3,
}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_invariants_of_worked_example(capsys):
    code, rep = run_json(capsys, "invariants", "--input", json.dumps(EXAMPLE))
    assert code == 0
    assert rep["t1"] == pytest.approx(6.0, abs=1e-10)
    assert rep["t2"] == pytest.approx(11.0, abs=1e-10)
    assert [c[0] for c in rep["det_poly"]["coeffs"]] == pytest.approx([1, -6, 11, -6, 10], abs=1e-10)
    assert [c for pair in rep["eigenvalues"] for c in pair] == pytest.approx([3, 1, 0, 1], abs=1e-10)
    assert set(rep["residuals"]) == {"r1", "r2", "r3", "r4"}


def test_input_from_file_and_stdin(capsys, tmp_path, monkeypatch):
    path = tmp_path / "a.json"
    path.write_text(json.dumps(EXAMPLE))
    code, from_file = run_json(capsys, "eigs", "--input", str(path))
    assert code == 0
    monkeypatch.setattr(sys, "stdin", __import__("io").StringIO(json.dumps(EXAMPLE)))
    code, from_stdin = run_json(capsys, "eigs", "--input", "-")
    assert code == 0 and from_file == from_stdin


def test_detpoly_signs(capsys):
    _, minus = run_json(capsys, "detpoly", "--input", json.dumps(EXAMPLE))
    _, plus = run_json(capsys, "detpoly", "--input", json.dumps(EXAMPLE), "--sign", "plus_zA")
    assert [c[0] for c in minus["det_poly"]["coeffs"]] == pytest.approx([1, -6, 11, -6, 10])
    assert [c[0] for c in plus["det_poly"]["coeffs"]] == pytest.approx([1, 6, 11, 6, 10])


def test_svd(capsys):
    code, rep = run_json(capsys, "svd", "--input", json.dumps(EXAMPLE))
    assert code == 0
    assert rep["singular_values"] == pytest.approx([10 ** 0.5, 1.0])
    assert rep["schatten"]["1"] == pytest.approx(1 + 10 ** 0.5)
    assert rep["schatten"]["2"] == pytest.approx(11 ** 0.5)
    assert rep["schatten"]["inf"] == pytest.approx(10 ** 0.5)


def test_verify_summary(capsys):
    code, rep = run_json(capsys, "verify", "--seed", "42", "--n", "4", "--trials", "20")
    assert code == 0
    assert rep["trials"] == 20 and rep["failures"] == []
    assert max(rep["max_residuals"].values()) < 1e-8
    code, rep = run_json(capsys, "verify", "--trials", "1", "--n", "1")
    assert code == 0 and rep["failures"] == []


def test_verify_is_byte_identical_across_workers(capsys):
    outs = {run(capsys, "verify", "--seed", "7", "--trials", "16", "--workers", str(w))[1] for w in (1, 4, 8)}
    outs.add(run(capsys, "verify", "--seed", "7", "--trials", "16")[1])
    assert len(outs) == 1


def test_verify_reports_failures(capsys):
    # a tolerance no residual can meet forces every trial into the failure list
    code, rep = run_json(capsys, "verify", "--trials", "3", "--tol", "1e-300")
    assert code == 1 and rep["failures"] == [0, 1, 2]


def test_converge_csv(capsys):
    code, out, _ = run(capsys, "converge", "--input", json.dumps(GEOMETRIC), "--tol", "1e-12")
    assert code == 0
    lines = out.split("\n")
    assert lines[0] == "N,value,abs_delta" and lines[-1] == ""
    final = lines[-2].split(",")
    assert float(final[2]) < 1e-12
    assert "\r" not in out


def test_converge_json_and_zero_model(capsys):
    code, rep = run_json(capsys, "converge", "--input", '{"kind": "diagonal", "lambda": {"type": "zero"}}',
                         "--format", "json")
    assert code == 0 and len(rep["rows"]) == 1 and rep["rows"][0]["value"] == 1.0


def test_converge_nonconvergent_emits_table(capsys):
    harmonic = {"kind": "diagonal", "lambda": {"type": "power", "param": 1.0}, "p": 1.0}
    code, out, err = run(capsys, "converge", "--input", json.dumps(harmonic), "--n-max", "128")
    assert code == 3
    assert out.splitlines()[-1].startswith("128,")
    assert "did not settle" in err


def test_converge_complex_argument(capsys):
    code, out, _ = run(capsys, "converge", "--input", json.dumps(GEOMETRIC), "--z", "0.5+0.25i")
    assert code == 0 and "j" in out.splitlines()[-1]


def test_growth(capsys):
    code, rep = run_json(capsys, "growth", "--input", json.dumps(KERNEL))
    assert code == 0
    assert rep["degree"] == 64 and rep["order_bound"] == pytest.approx(1.0)
    assert rep["order_estimate"] <= 1.15
    assert [c["q"] for c in rep["decay_checks"]] == pytest.approx([2 / 3 * 1.1, 1.0, 4 / 3])
    single = {"kind": "diagonal", "lambda": {"type": "finite", "values": [1.0]}, "p": 1.0}
    code, rep = run_json(capsys, "growth", "--input", json.dumps(single))
    assert code == 0 and rep["order_estimate"] == 0.0
    assert all(c["passes"] is None for c in rep["decay_checks"])
    code, _, _ = run(capsys, "growth", "--input", '{"kind": "diagonal", "lambda": {"type": "zero"}}')
    assert code == 2


def test_compose(capsys):
    spec = {"first": dict(KERNEL, p=0.75), "second": dict(KERNEL, p=0.75, d={"type": "seeded_bounded", "seed": 4, "bound": 1.0})}
    code, rep = run_json(capsys, "compose", "--input", json.dumps(spec), "--truncation", "16")
    assert code == 0
    assert all(b["holds"] for b in rep["bounds"])
    assert rep["composition"]["N"] == [16, 32]
    assert rep["composition"]["ratio"] < 1.05
    code, _, _ = run(capsys, "compose", "--input", json.dumps(GEOMETRIC))
    assert code == 2


def test_output_to_file(capsys, tmp_path):
    path = tmp_path / "out.json"
    code, out, _ = run(capsys, "eigs", "--input", json.dumps(EXAMPLE), "--output", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["eigenvalues"][0] == pytest.approx([3, 1])
    code, _, _ = run(capsys, "eigs", "--input", json.dumps(EXAMPLE), "--output", str(tmp_path / "no" / "x"))
    assert code == 2


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["eigs"],
        ["eigs", "--input", "{not json"],
        ["eigs", "--input", "/nonexistent/file.json"],
        ["eigs", "--input", '{"rows": 2, "cols": 3, "entries": []}'],
        ["eigs", "--input", json.dumps({"rows": 1, "cols": 2, "entries": [[[1, 0, 0, 0], [0, 0, 0, 0]]]})],
        ["invariants", "--input", json.dumps(EXAMPLE), "--format", "csv"],
        ["verify", "--n", "17"],
        ["verify", "--seed", "-1"],
        ["verify", "--seed", str(2 ** 64)],
        ["verify", "--tol", "0"],
        ["verify", "--trials", "0"],
        ["converge", "--input", '{"kind": "blob"}'],
        ["converge", "--input", json.dumps(GEOMETRIC), "--z", "abc"],
    ],
)
def test_input_errors_exit_2(capsys, argv):
    assert main(argv) == 2


def test_huge_entries(capsys):
    big = {"rows": 1, "cols": 1, "entries": [[[1e200, 1e200, 1e200, 1e200]]]}
    code, rep = run_json(capsys, "eigs", "--input", json.dumps(big))
    assert code == 0
    assert rep["eigenvalues"][0] == pytest.approx([1e200, 3 ** 0.5 * 1e200], rel=1e-14)
    # the fourth-order trace is about 1e800: not representable
    big2 = {"rows": 2, "cols": 2, "entries": [[[1e200, 0, 0, 0], [0, 0, 0, 0]], [[0, 0, 0, 0], [1e200, 0, 0, 0]]]}
    assert main(["invariants", "--input", json.dumps(big2)]) == 3


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "quatspec", "detpoly", "--input", json.dumps(EXAMPLE)],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert [c[0] for c in json.loads(proc.stdout)["det_poly"]["coeffs"]] == pytest.approx([1, -6, 11, -6, 10])
