import csv
import io
import json
import subprocess
import sys

import pytest

from monogenic.algebra import build_algebra
from monogenic.checks import REGISTRY
from monogenic.cli import CSV_COLUMNS, OUTPUT_DIR_ENV, main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_algebra_octonion(capsys):
    code, out, _ = run(["check-algebra", "--kind", "octonion", "--out", "-"], capsys)
    report = json.loads(out)
    assert code == 0
    assert report["schema"] == 1
    assert report["all_pass"]
    assert report["algebra"]["name"] == "octonion"
    assert [c["name"] for c in report["checks"]] == sorted(REGISTRY["check-algebra"])
    for rec in report["checks"]:
        assert rec["tolerance"] is not None


def test_check_algebra_clifford_moufang_note(capsys):
    code, out, _ = run(["check-algebra", "--kind", "clifford", "--m", "3", "--out", "-"], capsys)
    assert code == 0
    moufang = next(c for c in json.loads(out)["checks"] if c["name"] == "moufang")
    assert moufang["note"] == "implied-by-associativity"
    assert moufang["measured_error"] == "exact-zero"


def test_malformed_spec_file(tmp_path, capsys):
    bad = tmp_path / "spec.json"
    bad.write_text("{not json")
    code, _, err = run(["check-algebra", "--spec-file", str(bad)], capsys)
    assert code == 2
    assert "JSON" in err


def test_non_alternative_spec_file(tmp_path, capsys):
    doc = build_algebra("octonion").to_json()
    doc["structure"][1 * 64 + 2 * 8 + 3] = "2/1"
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(["check-algebra", "--spec-file", str(path)], capsys)
    assert code == 2
    assert "config error" in err


def test_spec_file_round_trip(tmp_path, capsys):
    path = tmp_path / "spec.json"
    path.write_text(build_algebra("quaternion").dumps())
    code, out, _ = run(["check-algebra", "--spec-file", str(path), "--format", "csv", "--out", "-"], capsys)
    assert code == 0
    assert out.splitlines()[0] == ",".join(CSV_COLUMNS)


def test_verify_monogenic_exact_zero(capsys):
    code, out, _ = run(["verify-monogenic", "--kind", "quaternion", "--out", "-"], capsys)
    assert code == 0
    report = json.loads(out)
    assert {c["measured_error"] for c in report["checks"]} == {"exact-zero"}
    assert all(c["runtime_ms"] is not None for c in report["checks"])


def test_degree_cap_guard(capsys):
    code, _, err = run(["verify-monogenic", "--degree-cap", "7"], capsys)
    assert code == 2
    assert "degree-cap" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["check-algebra", "--checks", "alternation,bogus"],
        ["reconstruct", "--resolution", "2"],
        ["reconstruct", "--epsilon", "0"],
        ["nonsense"],
        ["check-algebra", "--kind", "sedenion"],
        ["check-algebra", "--kind", "quaternion", "--m", "9"],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == 2
    assert capsys.readouterr().err


def test_check_selection(capsys):
    code, out, _ = run(["check-algebra", "--checks", "moufang,alternation", "--out", "-"], capsys)
    assert code == 0
    assert [c["name"] for c in json.loads(out)["checks"]] == ["alternation", "moufang"]


def test_reconstruct_default_passes_with_convergence_table(capsys):
    code, out, _ = run(["reconstruct", "--out", "-", "--checks", "cauchy_interior,mean_value,cauchy_exterior"], capsys)
    report = json.loads(out)
    assert code == 0
    assert report["algebra"]["m"] == 2
    interior = next(c for c in report["checks"] if c["name"] == "cauchy_interior")
    assert interior["details"]["resolutions"] == [16, 32]
    for errs in interior["details"]["convergence"].values():
        assert errs[1] < errs[0]
    assert report["config"]["seed"] == 42
    assert report["config"]["epsilon"] == 0.05


def test_reconstruct_coarse_resolution_fails_but_is_well_formed(capsys):
    code, out, _ = run(["reconstruct", "--resolution", "8", "--format", "csv", "--out", "-"], capsys)
    assert code == 1
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["name"] for r in rows] == sorted(REGISTRY["reconstruct"])
    assert {r["status"] for r in rows} == {"pass", "fail"}
    assert list(rows[0]) == list(CSV_COLUMNS)


def test_taylor_demo(capsys):
    code, out, _ = run(["taylor-demo", "--out", "-"], capsys)
    assert code == 0
    rec = json.loads(out)["checks"][0]
    assert rec["name"] == "taylor_decay"
    assert rec["measured_error"] <= 2.0


def test_reports_are_byte_identical(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for path, workers in zip(paths, ("1", "4")):
        assert main(["verify-monogenic", "--kind", "clifford", "--m", "2", "--no-timings", "--workers", workers, "--out", str(path)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_output_directory_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))
    assert main(["check-algebra", "--kind", "quaternion", "--format", "csv"]) == 0
    assert (tmp_path / "check-algebra.csv").exists()


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "monogenic", "check-algebra", "--kind", "complex", "--out", "-"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["algebra"]["name"] == "complex"
