import json

import pytest

from legendregap.cli import main

BREAKDOWN_6 = """\
beta=2 r1=0 r2=0 carry=0 sign=+
beta=3 r1=0 r2=0 carry=0 sign=+
beta=5 r1=1 r2=2 carry=0 sign=+
beta=6 r1=0 r2=0 carry=0 sign=-
beta=10 r1=6 r2=2 carry=0 sign=-
beta=15 r1=6 r2=12 carry=1 sign=-
beta=30 r1=6 r2=12 carry=0 sign=+
phi_T=-1
pi(49) - pi(36) = pi(12) - pi(6) + 1 - phi_T
15 - 11 = 5 - 3 + 1 - (-1)
4 = 4
"""


def test_breakdown_worked_example(capsys):
    assert main(["breakdown", "--n", "6"]) == 0
    assert capsys.readouterr().out == BREAKDOWN_6


def test_breakdown_csv(capsys):
    assert main(["breakdown", "--n", "6", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "beta,k,r1,r2,carry,signed"
    assert lines[1] == "2,1,0,0,0,0"
    assert "15,2,6,12,1,-1" in lines


def test_breakdown_json(capsys):
    assert main(["breakdown", "--n", "6", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["n"] == 6 and doc["m1"] == 36 and doc["m2"] == 12
    assert doc["phi_t"] == -1
    t15 = next(t for t in doc["terms"] if t["beta"] == 15)
    assert t15 == {
        "beta": 15,
        "factors": [3, 5],
        "k": 2,
        "r1": 6,
        "r2": 12,
        "carry": 1,
        "signed": -1,
    }


def test_verify_summary_line(capsys):
    assert main(["verify", "--from", "1", "--to", "100"]) == 0
    out = capsys.readouterr().out
    lines = out.splitlines()
    assert len(lines) == 1
    head, _, elapsed = lines[0].rpartition(" elapsed=")
    assert head == "checked=100 failures=0"
    float(elapsed)


def test_verify_verbose_records(capsys):
    assert main(["verify", "--from", "5", "--to", "7", "-v"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert (
        lines[1] == "n=6 engine=sieve pi_n2=11 pi_next2=15 pi_n=3 pi_2n=5 "
        "phi_T=-1 lhs=4 rhs=4 holds=true"
    )
    assert lines[-1].startswith("checked=3 failures=0")


def test_verify_json(capsys):
    assert main(["verify", "--from", "1", "--to", "50", "--engine", "both", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["checked"] == 50
    assert doc["failures"] == 0
    assert doc["engine"] == "both"
    assert doc["max_terms"] > 0


def test_verify_json_verbose_has_records(capsys):
    assert main(["verify", "--from", "1", "--to", "3", "--format", "json", "-v"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [r["n"] for r in doc["records"]] == [1, 2, 3]
    assert all(r["holds"] for r in doc["records"])


def test_series_csv(capsys):
    assert main(["series", "--from", "1", "--to", "6", "--format", "csv"]) == 0
    assert capsys.readouterr().out == (
        "n,legendre_gap,bertrand_count,phi_t\n"
        "1,2,1,0\n"
        "2,2,1,0\n"
        "3,2,1,0\n"
        "4,3,2,0\n"
        "5,2,1,0\n"
        "6,4,2,-1\n"
    )


def test_series_json(capsys):
    assert main(["series", "--from", "6", "--to", "6", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc == [
        {"n": 6, "legendre_gap": 4, "bertrand_count": 2, "phi_t": -1}
    ]


def test_series_text(capsys):
    assert main(["series", "--from", "6", "--to", "6"]) == 0
    assert (
        capsys.readouterr().out
        == "n=6 legendre_gap=4 bertrand_count=2 phi_t=-1\n"
    )


def test_out_file_matches_stdout(tmp_path, capsys):
    target = tmp_path / "series.csv"
    assert main(["series", "--from", "1", "--to", "20", "--format", "csv", "--out", str(target)]) == 0
    assert main(["series", "--from", "1", "--to", "20", "--format", "csv"]) == 0
    assert target.read_text() == capsys.readouterr().out


def test_bad_range_is_usage_error(capsys):
    assert main(["verify", "--from", "5", "--to", "2"]) == 2
    assert "error:" in capsys.readouterr().err


def test_bad_engine_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--engine", "quantum"])
    assert exc.value.code == 2


def test_bad_threshold_is_usage_error(capsys):
    assert main(["breakdown", "--n", "6", "--naive-threshold", "21"]) == 2
    assert "error:" in capsys.readouterr().err


def test_unwritable_out_is_io_error(capsys, tmp_path):
    missing = tmp_path / "no" / "such" / "dir" / "x.csv"
    assert main(["series", "--from", "1", "--to", "3", "--out", str(missing)]) == 2
    assert "error:" in capsys.readouterr().err


def test_workers_flag_changes_nothing(capsys):
    assert main(["series", "--from", "1", "--to", "40", "--format", "csv"]) == 0
    base = capsys.readouterr().out
    assert main(["verify", "--from", "1", "--to", "40", "--workers", "2"]) == 0
    capsys.readouterr()
    assert main(["series", "--from", "1", "--to", "40", "--format", "csv", "--workers", "2"]) == 0
    assert capsys.readouterr().out == base


def test_selftest_quick(capsys):
    assert main(["selftest", "--quick"]) == 0
    out = capsys.readouterr().out
    assert "selftest: 10/10 passed" in out
    assert "[FAIL]" not in out


def test_selftest_detects_injected_fault(capsys):
    assert main(["selftest", "--quick", "--inject-fault"]) == 1
    out = capsys.readouterr().out
    assert "[FAIL] carry-vs-subsets" in out
    assert "selftest: 9/10 passed" in out


def test_module_entrypoint():
    import subprocess
    import sys

    proc = subprocess.run(
        [sys.executable, "-m", "legendregap", "series", "--from", "6", "--to", "6"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == "n=6 legendre_gap=4 bertrand_count=2 phi_t=-1\n"
