import json
import subprocess
import sys


def run_cli(*args):
    proc = subprocess.run([sys.executable, "-m", "isharp.cli", *args],
                          capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def test_dim_structured_output():
    code, out, _ = run_cli("dim", "surg(6_2; -9/1)", "--graded")
    assert code == 0
    obj = json.loads(out)
    assert obj["kind"] == "exact"
    assert obj["dim"] == 13
    assert obj["euler"] == 9
    assert obj["graded"] == [11, 2]


def test_invariants_output():
    code, out, _ = run_cli("invariants", "m(5_2)")
    assert code == 0
    obj = json.loads(out)
    assert (obj["nu"], obj["tau"], obj["r0"]) == (1, 1, 3)


def test_invariants_trace_has_statements():
    code, out, _ = run_cli("invariants", "8_19", "--trace")
    assert code == 0
    obj = json.loads(out)
    assert obj["trace"], "trace requested but empty"
    for entry in obj["trace"]:
        assert entry["rule"].startswith("R")
        assert entry["statement"]


def test_verify_all_passes():
    code, out, _ = run_cli("verify", "all")
    assert code == 0
    obj = json.loads(out)
    assert obj["passed"] == obj["total"] > 0
    assert obj["failed"] == []


def test_census_and_dcover():
    code, out, _ = run_cli("census", "7")
    assert code == 0
    assert json.loads(out)["candidates"] == [10, 12]
    code, out, _ = run_cli("dcover", "9_49")
    assert code == 0
    assert json.loads(out)["dim"] == 25


def test_cf_and_triad():
    code, out, _ = run_cli("cf", "1/3")
    assert json.loads(out)["cf"] == "[1,2,2]"
    code, out, _ = run_cli("triad", "5/2")
    obj = json.loads(out)
    assert (obj["ab"], obj["cd"], obj["ef"]) == ("2/1", "3/1", "inf")


def test_cable_and_sum():
    code, out, _ = run_cli("cable", "3", "2", "m(3_1)")
    obj = json.loads(out)
    assert obj["lspace"] is True and (obj["nu"], obj["r0"]) == (5, 5)
    code, out, _ = run_cli("sum", "3_1", "m(3_1)")
    obj = json.loads(out)
    assert obj["nu"] == 0 and obj["shape"] == "W"


def test_exit_codes():
    code, _, err = run_cli("invariants", "99_42")
    assert code == 1 and "error" in err
    code, _, _ = run_cli("nonsense-command")
    assert code == 2
    code, _, _ = run_cli("dim")  # missing argument
    assert code == 2


def test_deterministic_output():
    runs = [run_cli("census", "all")[1] for _ in range(2)]
    assert runs[0] == runs[1]
    runs = [run_cli("verify", "T4")[1] for _ in range(2)]
    assert runs[0] == runs[1]


def test_export_matches_dataset():
    code, out, _ = run_cli("export", "T4")
    assert code == 0
    assert out.startswith("key\tn\tdim\tnu\tr0\tvia")
    assert "8_2\t-13\t19" in out


def test_pretty_mode():
    code, out, _ = run_cli("--pretty", "dim", "surg(3_1; -5/1)")
    assert code == 0
    assert "dim: 5" in out


def test_data_override(tmp_path):
    from isharp import datasets
    ds = datasets.load(check=False)
    alt = tmp_path / "alt.jsonl"
    ds.save(str(alt))
    code, out, _ = run_cli("--data", str(alt), "dim", "surg(3_1; -5/1)")
    assert code == 0 and json.loads(out)["dim"] == 5


def test_identities_listing():
    # "--" keeps the negative slope from being read as a flag
    code, out, _ = run_cli("identities", "TB(-3,-4)", "--", "-9/1")
    assert code == 0
    rows = json.loads(out)
    assert any(r["slope"] == "9/2" for r in rows)
