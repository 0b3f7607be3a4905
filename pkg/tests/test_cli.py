"""Command-line interface: output contracts, exit codes, determinism."""

import json
import subprocess
import sys

import pytest

from hurwitz.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_hurwitz_single_value_json(capsys):
    code, out, _ = run_cli(
        capsys, "hurwitz", "--g", "0", "--alpha", "1,1,1", "--method", "oracle"
    )
    assert code == 0
    obj = json.loads(out)
    assert obj == {
        "g": 0,
        "alpha": [1, 1, 1],
        "r": 4,
        "value": "4/1",
        "method": "oracle",
    }
    assert out.endswith("\n")


@pytest.mark.parametrize("method", ["oracle", "cutjoin", "elsv"])
def test_methods_agree(capsys, method):
    code, out, _ = run_cli(
        capsys, "hurwitz", "--g", "1", "--alpha", "1,1,1", "--method", method
    )
    assert code == 0
    assert json.loads(out)["value"] == "40/1"


def test_closed_form_method(capsys):
    code, out, _ = run_cli(
        capsys, "hurwitz", "--g", "3", "--alpha", "1,1,1,1", "--method", "closed-form"
    )
    code2, out2, _ = run_cli(
        capsys, "hurwitz", "--g", "3", "--alpha", "1,1,1,1", "--method", "cutjoin"
    )
    assert code == code2 == 0
    assert json.loads(out)["value"] == json.loads(out2)["value"]


def test_table_csv_shape(capsys):
    code, out, _ = run_cli(
        capsys, "table", "--method", "oracle", "--dmax", "3", "--gmax", "1",
        "--rmax", "6", "--format", "csv",
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "g,alpha,r,value"
    assert '0,"1,1,1",4,4/1' in lines


def test_table_json_matches_direct_build(capsys):
    code, out, _ = run_cli(
        capsys, "table", "--method", "cutjoin", "--dmax", "3", "--gmax", "1"
    )
    assert code == 0
    records = json.loads(out)
    values = {(r["g"], tuple(r["alpha"])): r["value"] for r in records}
    assert values[(0, (1, 1, 1))] == "4/1"
    assert values[(1, (3,))] == "9/1"


def test_fit_emits_constants_and_primitives(capsys):
    code, out, _ = run_cli(capsys, "fit", "--g", "2")
    assert code == 0
    obj = json.loads(out)
    constants = {tuple(rec["theta"]): rec["K"] for rec in obj["form"]["constants"]}
    assert constants[(2, 2, 2)] == "7/240"
    assert {"g": 2, "theta": [4], "k": 0, "value": "1/1152", "source": "fitted"} in obj[
        "primitives"
    ]


def test_hodge_evaluation(capsys):
    code, out, _ = run_cli(capsys, "hodge", "--g", "1", "--theta", "1", "--k", "0")
    assert code == 0
    assert json.loads(out)["value"] == "1/24"
    code, out, _ = run_cli(capsys, "hodge", "--g", "2", "--theta", "2", "--k", "2")
    assert code == 0
    assert json.loads(out)["value"] == "7/5760"


def test_verify_suite_text_output(capsys):
    code, out, _ = run_cli(
        capsys, "verify", "--suite", "oracle-vs-cutjoin", "--dmax", "4"
    )
    assert code == 0
    assert all(line.startswith("PASS ") for line in out.strip().split("\n"))


def test_verify_suite_json_output(capsys):
    code, out, _ = run_cli(
        capsys, "verify", "--suite", "recursions", "--dmax", "8", "--format", "json"
    )
    assert code == 0
    report = json.loads(out)
    assert report["suite"] == "recursions"
    assert all(c["status"] == "pass" for c in report["checks"])


def test_verify_failure_exits_1(capsys, monkeypatch):
    import hurwitz.cli as cli

    def broken_suite(dmax):
        return [{"check": "probe", "status": "fail", "detail": {}}]

    monkeypatch.setitem(cli._SUITE_RUNNERS, "oracle-vs-cutjoin", (broken_suite, 4))
    code, out, _ = run_cli(capsys, "verify", "--suite", "oracle-vs-cutjoin")
    assert code == 1
    assert out.startswith("FAIL probe")


def test_search_default_family(capsys):
    code, out, _ = run_cli(capsys, "search", "--dmax", "8")
    assert code == 0
    obj = json.loads(out)
    assert obj["family_size"] == 26
    assert obj["dimension"] == 11
    assert obj["numeric_failures"] == []


def test_search_custom_family_runs(capsys, tmp_path):
    path = tmp_path / "family.json"
    path.write_text(
        json.dumps([{"factors": [[0, 2], [0, 2]]}, {"factors": [[0, 2], [0, 2]]}])
    )
    code, out, _ = run_cli(capsys, "search", "--family", str(path))
    assert code == 0
    assert json.loads(out)["dimension"] == 1


@pytest.mark.parametrize(
    "content",
    [
        "not json",
        "{}",
        "[]",
        '[{"factors": []}]',
        '[{"factors": [[1]]}]',
        '[{"factors": [[1, -2]]}]',
        '[{"terms": [[1, 2]]}]',
    ],
)
def test_malformed_family_exits_4(capsys, tmp_path, content):
    path = tmp_path / "bad.json"
    path.write_text(content)
    code, _, err = run_cli(capsys, "search", "--family", str(path))
    assert code == 4
    assert "error:" in err


def test_usage_errors_exit_2(capsys):
    assert run_cli(capsys, "hurwitz", "--g", "0", "--alpha", "nope")[0] == 2
    assert run_cli(capsys, "hurwitz", "--g", "-1", "--alpha", "1")[0] == 2
    assert (
        run_cli(capsys, "hurwitz", "--g", "0", "--alpha", "2", "--method", "closed-form")[0]
        == 2
    )
    assert run_cli(capsys, "hodge", "--g", "4", "--theta", "2", "--k", "0")[0] == 2


def test_argparse_usage_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["hurwitz", "--method", "bogus", "--g", "0", "--alpha", "1"])
    assert exc.value.code == 2


def test_budget_exit_3(capsys, monkeypatch):
    monkeypatch.setenv("HURWITZ_MEMORY_BUDGET", "64")
    code, _, err = run_cli(
        capsys, "hurwitz", "--g", "0", "--alpha", "1,1,1,1,1", "--method", "oracle"
    )
    assert code == 3
    assert "budget" in err.lower()


def test_out_flag_writes_file(capsys, tmp_path):
    path = tmp_path / "value.json"
    code, out, _ = run_cli(
        capsys, "hurwitz", "--g", "0", "--alpha", "3", "--out", str(path)
    )
    assert code == 0
    assert out == ""
    assert json.loads(path.read_text())["value"] == "1/1"


def test_deterministic_output(capsys):
    args = ("table", "--method", "cutjoin", "--dmax", "4", "--gmax", "2")
    _, first, _ = run_cli(capsys, *args)
    _, second, _ = run_cli(capsys, *args)
    assert first == second


def test_entry_point_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "hurwitz.cli", "hurwitz", "--g", "0", "--alpha", "1,2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["value"] == "4/1"
