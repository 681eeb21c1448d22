import json
import subprocess
import sys
from pathlib import Path

import pytest

from latval.cli import main

STEP_DOC = {
    "breakpoints": ["0", "1", "2"],
    "open_values": ["2", "3"],
    "point_values": ["0", "0", "0"],
}
SET_DOC = [{"lo": "0", "hi": "1"}, {"lo": "2", "hi": "7/2"}]
TERMS_DOC = [
    {
        "coefficient": "2",
        "base_x": [{"lo": "0", "hi": "3"}],
        "base_y": [{"lo": "1", "hi": "2"}],
    }
]


@pytest.fixture
def files(tmp_path: Path):
    paths = {}
    for name, doc in [
        ("step", STEP_DOC),
        ("set", SET_DOC),
        ("terms", TERMS_DOC),
        ("seq", {"kind": "interval", "template": "[0, 1 + 1/n]"}),
        ("stump", {"node": [{"leaf": True}, {"node": [{"leaf": True}]}]}),
        (
            "system",
            {
                "carrier": ["bot", "a", "b", "top"],
                "leq": [["bot", "a"], ["a", "b"], ["b", "top"]],
                "phi": {"bot": "0", "a": "0", "b": "1", "top": "1"},
            },
        ),
    ]:
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(doc))
        paths[name] = str(p)
    return paths


def run_cli(args, tmp_path: Path):
    out = tmp_path / "out.json"
    code = main(args + ["--out", str(out)])
    return code, out.read_text() if out.exists() else ""


def test_integrate(files, tmp_path):
    code, text = run_cli(["integrate", "--step", files["step"]], tmp_path)
    assert code == 0
    assert json.loads(text) == {"value": "5"}


def test_measure(files, tmp_path):
    code, text = run_cli(["measure", "--set", files["set"]], tmp_path)
    assert code == 0
    assert json.loads(text) == {"value": "5/2"}


def test_distance_and_approx_eq(files, tmp_path):
    code, text = run_cli(
        ["distance", "--kind", "interval", "--a", files["set"], "--b", files["set"]],
        tmp_path,
    )
    assert code == 0 and json.loads(text)["distance"] == "0"
    code, text = run_cli(
        ["approx-eq", "--kind", "interval", "--a", files["set"], "--b", files["set"]],
        tmp_path,
    )
    assert code == 0 and json.loads(text)["equal"] is True


def test_quotient(files, tmp_path):
    code, text = run_cli(["quotient", "--system", files["system"]], tmp_path)
    assert code == 0
    doc = json.loads(text)
    assert len(doc["classes"]) == 2
    assert doc["hausdorff"] is True
    assert sorted(doc["phi"].values()) == ["0", "1"]


def test_fubini_check(files, tmp_path):
    code, text = run_cli(
        ["fubini-check", "--terms", files["terms"], "--samples", "6", "--seed", "1"],
        tmp_path,
    )
    assert code == 0
    doc = json.loads(text)
    assert doc["lhs"] == "6" and doc["rhs"] == "6" and doc["equal"] is True
    assert len(doc["sampled_slices"]) == 6
    for s in doc["sampled_slices"]:
        assert s["fx"] == s["slice_integral"]


def test_sqrt2_witness(files, tmp_path):
    code, text = run_cli(["sqrt2-witness", "--depth", "4"], tmp_path)
    assert code == 0
    rows = json.loads(text)
    assert rows[0]["q"] == "1" and rows[1]["q"] == "7/5"
    assert all(r["mu_union"] == r["q"] for r in rows)


def test_converge_trace_csv(files, tmp_path):
    code, text = run_cli(
        ["converge-trace", "--seq", files["seq"], "--depth", "3", "--format", "csv"],
        tmp_path,
    )
    assert code == 0
    lines = text.strip().splitlines()
    assert lines[0] == "stage,phi,phi_running_meet,phi_running_join"
    assert lines[1].startswith("1,2,")
    assert lines[3].startswith("3,4/3,4/3,2")


def test_dense_approx(files, tmp_path):
    code, text = run_cli(
        ["dense-approx", "--seq", files["seq"], "--eps-index", "4", "--depth", "5"],
        tmp_path,
    )
    assert code == 0
    rows = json.loads(text)
    assert len(rows) == 5
    assert all(set(r) == {"stage", "phi_a", "phi_atilde", "bound"} for r in rows)


def test_stump_alpha(files, tmp_path):
    code, text = run_cli(["stump-alpha", "--tree", files["stump"]], tmp_path)
    assert code == 0
    assert json.loads(text) == {"alpha": 2}


def test_borel_decode(files, tmp_path):
    from latval.borel import tuple_encode

    code_b11 = tuple_encode([2, 1, 1])
    code, text = run_cli(
        [
            "borel-decode",
            "--code",
            str(code_b11),
            "--space",
            "3x3",
            "--point",
            "1,2,3",
            "--kind",
            "Sprime",
        ],
        tmp_path,
    )
    assert code == 0
    assert json.loads(text)["member"] is True


def test_totient_table(files, tmp_path):
    code, text = run_cli(["totient-table", "--max", "12"], tmp_path)
    assert code == 0
    rows = json.loads(text)
    assert rows[11] == {"n": 12, "totient": 4}


def test_check_suite_pass(files, tmp_path):
    code, text = run_cli(
        ["check", "--suite", "pseudometric", "--samples", "50", "--seed", "7"],
        tmp_path,
    )
    assert code == 0
    assert json.loads(text)["ok"] is True


def test_check_suite_negative_control(files, tmp_path):
    code, text = run_cli(
        ["check", "--suite", "negative-broken-half", "--samples", "300", "--seed", "7"],
        tmp_path,
    )
    assert code == 1
    doc = json.loads(text)
    assert doc["ok"] is False
    assert doc["report"]["(iii) halving composes"]["counterexample"]


def test_input_error_exit_code(files, tmp_path, capsys):
    assert main(["measure", "--set", "/nonexistent.json"]) == 2
    err = capsys.readouterr().err
    assert "--set" in err


def test_schema_error_points_at_field(files, tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"carrier": ["a"], "leq": []}')
    assert main(["quotient", "--system", str(bad)]) == 2
    assert "phi" in capsys.readouterr().err


def test_deterministic_output(files, tmp_path):
    _, first = run_cli(
        ["check", "--suite", "modularity-mu", "--samples", "40", "--seed", "5"], tmp_path
    )
    _, second = run_cli(
        ["check", "--suite", "modularity-mu", "--samples", "40", "--seed", "5"], tmp_path
    )
    assert first == second


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "latval.cli", "sqrt2-witness", "--depth", "2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)[0]["q"] == "1"
