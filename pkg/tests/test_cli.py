from __future__ import annotations

import json
import math
import subprocess
import sys

import pytest

from normevs.cli import EXIT_INTERNAL, EXIT_USAGE, RunConfig, UsageError, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize(
    "argv,code",
    [
        (["compare", "p(1)", "sup", "--dim", "3"], 0),
        (["compare", "p(1)", "sup", "--space", "c00"], 1),
        (["compare", "p(2", "sup"], EXIT_USAGE),
        (["check-axioms", "norms", "--dim", "2", "--seed", "7"], 0),
        (["check-axioms", "hyperspace"], 0),
        (["check-axioms", "cone"], 0),
        (["check-axioms", "banach"], EXIT_USAGE),
        (["witness", "c00_sup_vs_one", "-N", "5"], 0),
        (["witness", "p_vs_q", "-p", "3", "-q", "2", "-N", "8"], 0),
        (["witness", "p_vs_q", "-p", "2", "-q", "3"], EXIT_USAGE),
        (["witness", "nope"], EXIT_USAGE),
        (["family-scan", "1", "2", "4", "inf", "-N", "50"], 0),
        (["family-scan", "2"], 0),
        (["family-scan", "2", "2"], EXIT_USAGE),
        (["compare", "sup", "sup", "--dim", "0"], EXIT_USAGE),
        (["compare", "sup", "sup", "--bogus"], EXIT_USAGE),
    ],
)
def test_exit_codes(capsys, argv, code):
    if code == EXIT_USAGE and "--bogus" in argv:
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == EXIT_USAGE
        return
    assert run(capsys, *argv)[0] == code


def test_compare_json(capsys):
    _, out, _ = run(capsys, "compare", "p(1)", "sup", "--dim", "3")
    d = json.loads(out)
    assert d["equivalent"] is True and d["psi"] == pytest.approx(1 / 3, abs=1e-12)
    _, out, _ = run(capsys, "compare", "p(1)", "sup", "--space", "c00")
    d = json.loads(out)
    assert d["equivalent"] is False and d["witness_family"]["family"] == "c00_sup_vs_one"


def test_cone_flags_homogeneity(capsys):
    code, out, _ = run(capsys, "check-axioms", "cone")
    d = json.loads(out)
    assert code == 0 and d["properties"]["homogeneous"]["status"] == "fail"
    assert d["properties"]["homogeneous"]["counterexample"] is not None


def test_witness_lines(capsys):
    _, out, _ = run(capsys, "witness", "c00_sup_vs_one", "-N", "5")
    rows = [json.loads(line) for line in out.splitlines()]
    assert len(rows) == 5 and rows[-1]["ratio"] == pytest.approx(1 / 3, rel=1e-12)
    _, out, _ = run(capsys, "witness", "p_vs_q", "-p", "3", "-q", "2", "-N", "8")
    last = json.loads(out.splitlines()[-1])
    assert last["n"] == 8 and last["ratio"] == pytest.approx(8 ** (1 / 3 - 1 / 2), rel=1e-12)


def test_family_scan_json(capsys):
    _, out, _ = run(capsys, "family-scan", "1", "2", "4", "inf", "-N", "50")
    d = json.loads(out)
    assert len(d["pairs"]) == 6 and all(p["status"] == "nonequivalent_certified" for p in d["pairs"])
    _, out, _ = run(capsys, "family-scan", "2")
    assert json.loads(out)["pairs"] == []


@pytest.mark.parametrize(
    "argv",
    [
        ["compare", "sum(p(2), scale(0.5, sup))", "p(3; w=1,2,3)", "--dim", "3"],
        ["check-axioms", "norms", "--seed", "3"],
        ["witness", "p_vs_q", "-p", "inf", "-q", "1.5", "-N", "12"],
        ["family-scan", "1", "1.5", "2", "3", "inf"],
    ],
)
def test_json_is_byte_identical_across_runs(capsys, argv):
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second and first[1]


def test_output_file(tmp_path, capsys):
    target = tmp_path / "verdict.json"
    code, out, _ = run(capsys, "compare", "p(1)", "sup", "--output", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["equivalent"] is True


def test_text_keeps_six_significant_digits(capsys):
    code, out, _ = run(capsys, "compare", "p(1)", "sup", "--dim", "7", "--format", "text")
    assert code == 0
    assert "0.142857142857" in out and "sandwich" in out
    _, out, _ = run(capsys, "compare", "sum(p(2), sup)", "p(3; w=1,2,3)", "--format", "text")
    line = next(ln for ln in out.splitlines() if ln.startswith("C_f(g)"))
    lo, hi = line.split("[")[1].split("]")[0].split(", ")
    assert all(len(s.lstrip("0.").replace(".", "")) >= 6 for s in (lo, hi))
    _, out, _ = run(capsys, "family-scan", "1", "2", "--format", "text")
    assert "all certified" in out


def test_run_config_validation():
    with pytest.raises(UsageError):
        RunConfig(dim=0)
    with pytest.raises(UsageError):
        RunConfig(tol_opt=-1.0)
    with pytest.raises(UsageError):
        RunConfig(eps_eq=0.0)


def test_tolerance_failure_maps_to_internal_exit(monkeypatch, capsys):
    from normevs import witness

    monkeypatch.setattr(witness.WitnessSequence, "ratio_formula", lambda self, n: 2.0)
    code, _, err = run(capsys, "witness", "c00_sup_vs_one", "-N", "3")
    assert code == EXIT_INTERNAL and "disagrees" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "normevs", "witness", "c00_sup_vs_one", "-N", "2"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert math.isclose(json.loads(proc.stdout.splitlines()[-1])["ratio"], 2 / 3, rel_tol=1e-12)
