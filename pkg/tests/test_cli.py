"""Command line, scenario files and golden outputs.

Set ``UPDATE_GOLDEN=1`` to rewrite the files under ``tests/golden``.
"""

import json
import os
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from conevanish import __version__
from conevanish.cli import main
from conevanish.parser import ParseError
from conevanish.scenario import BUNDLED, Report, bundled_scenario_text, emit_report, parse_scenario, run_scenario

HERE = Path(__file__).parent
DATA = HERE / "data"
GOLDEN = HERE / "golden"
UPDATE = os.environ.get("UPDATE_GOLDEN") == "1"


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def check_golden(name: str, text: str):
    path = GOLDEN / name
    if UPDATE or not path.exists():
        if not UPDATE:
            pytest.fail(f"missing golden file {path}; rerun with UPDATE_GOLDEN=1")
        path.write_text(text, encoding="utf-8")
        return
    expected = path.read_text(encoding="utf-8")
    assert text == expected, f"output drifted from {path}"


GOLDEN_CASES = [
    ("gb_segre.txt", ["gb", DATA / "segre_quadric.txt"]),
    ("gb_segre.json", ["--json", "gb", DATA / "segre_quadric.txt"]),
    ("nf_segre.txt", ["nf", DATA / "segre_quadric.txt", "z01*z10"]),
    ("hilbert_lines.txt", ["hilbert", f"{DATA / 'lines.txt'}:L", "--upto", "6"]),
    ("betti_lines.txt", ["betti", f"{DATA / 'lines.txt'}:L"]),
    ("betti_lines.json", ["--json", "betti", f"{DATA / 'lines.txt'}:L"]),
    ("cohomology_cubic.txt", ["cohomology", f"{DATA / 'lines.txt'}:C", "--i", "1", "--twist", "0"]),
    ("kernel_veronese.txt", ["kernel", DATA / "maps.txt"]),
    ("segre_2_1.txt", ["segre", "--n", "2", "--m", "1"]),
    ("verify_e1.txt", ["verify", "e1"]),
    ("verify_e1.json", ["--json", "verify", "e1"]),
] + [(f"bundled_{b[:-4]}.json", ["--json", "run", "--bundled", b[:-4]]) for b in BUNDLED]


@pytest.mark.parametrize("name,argv", GOLDEN_CASES, ids=[c[0] for c in GOLDEN_CASES])
def test_golden_output(capsys, name, argv):
    code, out, _ = run_cli(capsys, *argv)
    assert code == 0
    check_golden(name, out)


def test_golden_reports_carry_schema_and_versions():
    for b in BUNDLED:
        data = json.loads((GOLDEN / f"bundled_{b[:-4]}.json").read_text(encoding="utf-8"))
        assert data["report_schema"] == "1"
        assert data["versions"] == {"artifact": __version__, "grammar": "1"}
        assert list(data) == sorted(data)


# -- bundled scenarios ------------------------------------------------------------------------


def _bundled_report(name):
    return run_scenario(parse_scenario(bundled_scenario_text(name), name))


def test_conifold_scenario():
    report = _bundled_report("conifold")
    assert report.statuses == ["pass", "pass"]
    fiber, gor = (r["output"] for r in report.results)
    assert fiber["claim_id"] == "exceptional_fiber" and fiber["records"]["fiber_ideal"] == []
    assert gor["claim_id"] == "blowup_gorenstein" and gor["inputs"]["mode"] == "direct"
    assert report.exit_code() == 0


def test_e1_scenario():
    report = _bundled_report("e1_fermat")
    (result,) = report.results
    assert result["status"] == "pass"
    h1 = next(c for c in result["output"]["checks"] if c["name"] == "c_h1_structure_sheaf")
    assert h1["witness"]["h1"] == 1


def test_normality_scenario():
    (result,) = _bundled_report("normality_cubics").results
    dims = [c["witness"]["image_dim"] for c in result["output"]["checks"] if c["name"].startswith("degree_")]
    assert dims == [9, 36, 81]


def test_reports_byte_identical_across_runs_and_parallelism():
    scen = parse_scenario(bundled_scenario_text("segre_small"), "segre_small")
    a = emit_report(run_scenario(scen))
    b = emit_report(run_scenario(scen))
    c = emit_report(run_scenario(scen, parallel=True, threads=4))
    assert a == b == c


# -- exit codes and diagnostics -----------------------------------------------------------


def test_empty_scenario(tmp_path, capsys):
    path = tmp_path / "empty.scn"
    path.write_text("# nothing here\n", encoding="utf-8")
    code, out, _ = run_cli(capsys, "--json", "run", path)
    assert code == 0
    data = json.loads(out)
    assert data["results"] == [] and data["summary"] == {"counts": {}, "total": 0}


def test_parse_error_exit_two(tmp_path, capsys):
    path = tmp_path / "bad.scn"
    path.write_text("ring Q[x,y] grevlex\nideal I = x^2 +* y;\n", encoding="utf-8")
    code, _, err = run_cli(capsys, "run", path)
    assert code == 2
    assert "line 2, column" in err


def test_undeclared_name_exit_two(tmp_path, capsys):
    path = tmp_path / "bad.scn"
    path.write_text("ring Q[x,y] grevlex\nideal I = x^2;\ngb J\n", encoding="utf-8")
    code, _, err = run_cli(capsys, "run", path)
    assert code == 2 and "line 3, column 4" in err and "'J'" in err


def test_unknown_subcommand_in_scenario():
    with pytest.raises(ParseError) as exc:
        parse_scenario("ring Q[x] grevlex\nfrobnicate x\n")
    assert exc.value.line == 2


def test_bad_scenario_directives():
    for text in ("budget 0\n", "field F4\n", "scenario\n", "field R\n"):
        with pytest.raises(ParseError):
            parse_scenario(text)


def test_failed_check_in_text_report(capsys):
    code, out, _ = run_cli(capsys, "run", DATA / "failing.scn")
    assert code == 1
    assert "  FAIL degree_1" in out.splitlines()
    assert out.splitlines()[0] == "scenario failing"


def test_budget_exit_three(capsys):
    code, out, _ = run_cli(capsys, "--json", "run", DATA / "budget.scn")
    assert code == 3
    data = json.loads(out)
    assert data["results"][0]["status"] == "budget"
    assert data["summary"]["counts"] == {"budget": 1}


def test_global_budget_flag_on_subcommand(capsys):
    code, out, _ = run_cli(capsys, "--budget-pairs", "1", "verify", "e1")
    assert code == 3 and "budget exhausted" in out


def test_nonpositive_budget_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "--budget-pairs", "0", "verify", "e1")
    assert code == 2 and "positive" in err


def test_domain_error_exit_one(capsys):
    code, _, err = run_cli(capsys, "cohomology", f"{DATA / 'lines.txt'}:C", "--i", "4")
    assert code == 1 and "outside" in err


def test_missing_file_and_name(capsys):
    assert run_cli(capsys, "gb", DATA / "nope.txt")[0] == 2
    code, _, err = run_cli(capsys, "gb", f"{DATA / 'lines.txt'}:Q")
    assert code == 2 and "no ideal named" in err


def test_missing_subcommand(capsys):
    assert run_cli(capsys)[0] == 2
    assert run_cli(capsys, "run")[0] == 2


def test_field_override(capsys):
    code, out, _ = run_cli(capsys, "--field", "F2", "gb", f"{DATA / 'lines.txt'}:C")
    assert code == 0 and "ring F2[x,y,z]" in out
    assert run_cli(capsys, "--field", "F9", "gb", DATA / "segre_quadric.txt")[0] == 2


def test_out_flag(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run_cli(capsys, "--json", "--out", target, "run", "--bundled", "segre_small")
    assert code == 0 and out == ""
    assert json.loads(target.read_text(encoding="utf-8"))["scenario"] == "segre_small"


def test_stdin_reference(monkeypatch, capsys):
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO("ring Q[x,y] grevlex\nideal I = x^2, x*y + y^2;\n"))
    code, out, _ = run_cli(capsys, "gb", "-")
    assert code == 0 and "y^3" in out


def test_report_round_trip():
    report = _bundled_report("segre_small")
    data = json.loads(emit_report(report))
    again = Report.from_json(data)
    assert again.to_json() == data
    assert emit_report(again) == emit_report(report)


def test_text_report_format():
    text = emit_report(_bundled_report("segre_small"), "text").decode()
    lines = text.splitlines()
    assert lines[0] == "scenario segre_small"
    assert lines[-1] == "6 invocations: ok 6"
    with pytest.raises(ValueError):
        emit_report(_bundled_report("segre_small"), "yaml")


def test_console_script_installed():
    exe = shutil.which("conevanish")
    if exe is None:
        pytest.skip("console script not on PATH")
    proc = subprocess.run([exe, "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == f"conevanish {__version__} (grammar 1)"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "conevanish.cli", "segre", "--n", "1", "--m", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "-z01*z10 + z00*z11;" in proc.stdout
