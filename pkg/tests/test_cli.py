import json
import subprocess
import sys

import pytest

from ainfty.cli import main, run
from cli_suite import SUITE, f


def report(argv):
    code, text, _ = run(argv)
    return code, json.loads(text)


def test_validate_dual_numbers():
    code, r = report(["validate", f("dual_numbers")])
    assert code == 0 and r["status"] == "pass" and r["command"] == "validate"


def test_validate_broken_has_witness():
    code, r = report(["validate", f("broken")])
    assert code == 1 and r["status"] == "fail"
    assert r["result"]["relations"]["witness"] == ["a", "a", "a"]


def test_degeneration_of_path_algebra():
    code, r = report(["degeneration", f("quiver_a2"), "--u-order", "4"])
    assert code == 0 and r["result"]["flat"] is True
    assert [row["flat"] for row in r["result"]["rows"]] == [True] * 4


@pytest.mark.parametrize("argv", SUITE, ids=lambda a: "-".join(x for x in a[:2] if not x.startswith("/")))
def test_suite_exit_codes(argv):
    code, r = report(argv)
    assert code == (1 if argv[:2] == ["validate", f("broken")] else 0)
    assert r["status"] == ("pass" if code == 0 else "fail")


@pytest.mark.parametrize("argv", [
    ["frobnicate", f("K")],
    ["validate", f("K"), "--bogus"],
    ["validate", f("does_not_exist")],
    ["validate", f("K"), "--mode", "reduced"],
    ["hochschild", f("K"), "--window", "oops"],
    ["modp-probe", f("K"), "--p", "1"],
    ["validate", f("form_xy")],
])
def test_input_errors_exit_2(argv, capsys):
    assert main(argv) == 2


def test_bad_files_exit_1():
    assert run(["morphism-check", f("morphism_dual_numbers_bad")])[0] == 1
    assert run(["module-check", f("module_dual_numbers_bad")])[0] == 1


def test_tsv_table():
    code, text, _ = run(["hochschild", f("dual_numbers"), "-L", "5", "--window=-3:0", "--format", "tsv"])
    lines = text.splitlines()
    assert code == 0 and lines[0].split("\t")[:2] == ["degree", "dim"]
    assert [l.split("\t")[1] for l in lines[1:]] == ["1", "1", "1", "2"]


def test_out_file(tmp_path):
    out = tmp_path / "r.json"
    assert main(["cohomology", f("K"), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["status"] == "pass"


def test_threads_do_not_change_reports(monkeypatch):
    argv = ["degeneration", f("quiver_a2"), "--u-order", "3", "-L", "4"]
    a = run(argv + ["--threads", "1"])[1]
    b = run(argv + ["--threads", "3"])[1]
    monkeypatch.setenv("AINFTY_THREADS", "2")
    assert a == b == run(argv)[1]


def test_console_script():
    r = subprocess.run([sys.executable, "-m", "ainfty.cli", "validate", f("K")], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["status"] == "pass"
