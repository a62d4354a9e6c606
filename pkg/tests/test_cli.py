import json
import os
import subprocess
import sys

import pytest

from classforge.cli import dispatch
from classforge.search import SearchExhausted


def run(*argv, stdin=None, env=None):
    full_env = dict(os.environ)
    full_env.update(env or {})
    return subprocess.run([sys.executable, "-m", "classforge", *argv], input=stdin, env=full_env,
                          capture_output=True)


def call(capsys, *argv):
    code = dispatch(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(scope="module")
def quartic_cert():
    proc = run("search", "--family", "quartic", "--r", "5")
    assert proc.returncode == 0, proc.stderr
    return proc.stdout


def test_search_pipes_into_verify(quartic_cert):
    proc = run("verify", "-", stdin=quartic_cert)
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["verdict"] == "Valid" and report["family"] == "quartic" and report["r"] == 5
    assert report["checks"]


def test_tampered_and_truncated(quartic_cert, tmp_path):
    obj = json.loads(quartic_cert)
    obj["y"] = str(int(obj["y"]) + 2)
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(obj))
    proc = run("verify", str(bad))
    assert proc.returncode == 1
    assert json.loads(proc.stdout)["verdict"] == "Invalid"

    cut = tmp_path / "cut.json"
    cut.write_bytes(quartic_cert[: len(quartic_cert) // 2])
    proc = run("verify", str(cut))
    assert proc.returncode == 1
    assert json.loads(proc.stdout)["verdict"] == "Malformed"


def test_out_file_and_verbose(tmp_path, capsys):
    out = tmp_path / "c.json"
    proc = run("search", "--family", "sextic", "--r", "5", "--out", str(out), "-v")
    assert proc.returncode == 0 and proc.stdout == b""
    assert b"c_r=" in proc.stderr
    code, stdout, _ = call(capsys, "-v", "verify", str(out))
    assert code == 0 and json.loads(stdout)["verdict"] == "Valid"


def test_ramified_search(capsys):
    code, stdout, _ = call(capsys, "search", "--family", "sextic", "--r", "5", "--q", "13")
    assert code == 0
    assert json.loads(stdout)["ramified_q"]["q"] == "13"
    code, _, err = call(capsys, "search", "--family", "cubic", "--r", "5", "--q", "13")
    assert code == 2 and "cubic" in err


def test_config_file(tmp_path, capsys, monkeypatch):
    cfg = tmp_path / "search.conf"
    cfg.write_text("m_max = 1\nscan_bound = 100000\n")
    code, stdout, err = call(capsys, "search", "--family", "quartic", "--r", "5", "--config", str(cfg))
    assert code == 0 and json.loads(stdout)["y"] == "-68101"
    cfg.write_text("m_max = 0\n")
    code, stdout, err = call(capsys, "search", "--family", "quartic", "--r", "5", "--config", str(cfg))
    assert code == 2 and stdout == ""
    # jobs from the file beats the environment; the flag beats both
    cfg.write_text("jobs = 2\nm_max = 1\n")
    seen = []

    def fake_search(fam, r, config, q):
        seen.append(config)
        raise SearchExhausted("stub")

    monkeypatch.setenv("CLASSFORGE_JOBS", "x")
    monkeypatch.setattr("classforge.cli.run_search", fake_search)
    for extra in ([], ["--jobs", "3"]):
        code, _, _ = call(capsys, "search", "--family", "quartic", "--r", "5", "--config", str(cfg), *extra)
        assert code == 1
    monkeypatch.undo()
    assert [c.jobs for c in seen] == [2, 3] and seen[0].m_max == 1
    cfg.write_text("colour = blue\n")
    code, stdout, err = call(capsys, "search", "--family", "quartic", "--r", "5", "--config", str(cfg))
    assert code == 2 and stdout == "" and "colour" in err


def test_identities(capsys):
    code, stdout, _ = call(capsys, "identities", "--family", "cubic")
    report = json.loads(stdout)
    assert code == 0 and report["ok"]
    assert any(c["detail"] == "resultant = -64343 = -37^2·47" for c in report["checks"])
    code, stdout, _ = call(capsys, "identities")
    assert code == 0 and {c["family"] for c in json.loads(stdout)["checks"]} == {"sextic", "quartic", "cubic"}


def test_scan_regulator_sextic(capsys):
    code, stdout, _ = call(capsys, "scan-regulator", "--family", "sextic", "--n-max", "76")
    report = json.loads(stdout)
    assert code == 0 and report["all_certified"] and report["count"] == 73
    assert max(r["n"] for r in report["records"]) == 75
    code, stdout, _ = call(capsys, "scan-regulator", "--family", "cubic", "--n-min", "5", "--n-max", "12")
    assert code == 0 and [r["n"] for r in json.loads(stdout)["records"]] == [5, 7, 9, 11]


def test_scan_regulator_budget_exhaustion():
    proc = run("scan-regulator", "--family", "quartic", "--n-max", "3", "--precision-budget", "4")
    assert proc.returncode == 1 and not json.loads(proc.stdout)["all_certified"]
    assert b"not certified" in proc.stderr


def test_emit_pnr_and_script_p(capsys):
    code, stdout, _ = call(capsys, "emit-pnr", "--family", "quartic", "--n", "5", "--r", "1")
    assert code == 0 and json.loads(stdout)["coefficients"] == ["23", "131", "-138", "-131", "23"]
    code, stdout, _ = call(capsys, "emit-pnr", "--family", "sextic", "--n", "2", "--r", "5")
    assert code == 0 and len(json.loads(stdout)["coefficients"]) == 31
    code, _, _ = call(capsys, "emit-pnr", "--family", "quartic", "--n", "3", "--r", "5")
    assert code == 2
    code, stdout, _ = call(capsys, "script-p", "--family", "quartic", "--r", "1")
    assert code == 0 and json.loads(stdout)["coefficients"] == ["625", "14", "1"]


def test_find_primes(capsys):
    code, stdout, _ = call(capsys, "find-primes", "--p", "5", "--cond", "2:R,3:N", "--avoid", "2,3,5")
    report = json.loads(stdout)
    assert code == 0 and report["primes"][0]["ell"] == 151
    assert report["primes"][0]["transcript"] == {"2": "R", "3": "N"}
    code, stdout, _ = call(capsys, "find-primes", "--p", "5", "--cond", "37:N", "--count", "3")
    ells = [p["ell"] for p in json.loads(stdout)["primes"]]
    assert code == 0 and ells[0] == 11 and ells == sorted(set(ells)) and len(ells) == 3
    code, stdout, _ = call(capsys, "find-primes", "--p", "5", "--cond", "2:R,3:N", "--bound", "100")
    assert code == 1 and json.loads(stdout)["exhausted"]


@pytest.mark.parametrize("argv", [
    ["search", "--family", "sextic", "--r", "3"],
    ["search", "--family", "quintic", "--r", "5"],
    ["frobnicate"],
    [],
    ["verify", "/nonexistent/cert.json"],
    ["find-primes", "--p", "5", "--cond", "2:R,2:N"],
])
def test_usage_errors(capsys, argv):
    code, stdout, err = call(capsys, *argv)
    assert code == 2 and stdout == "" and err


def test_jobs_environment(capsys, monkeypatch):
    monkeypatch.setenv("CLASSFORGE_JOBS", "many")
    code, stdout, err = call(capsys, "search", "--family", "quartic", "--r", "5")
    assert code == 2 and "CLASSFORGE_JOBS" in err and stdout == ""
    code, _, _ = call(capsys, "search", "--family", "quartic", "--r", "5", "--jobs", "1")
    assert code == 0
    monkeypatch.setenv("CLASSFORGE_JOBS", "2")
    code, stdout, _ = call(capsys, "search", "--family", "quartic", "--r", "5")
    assert code == 0 and json.loads(stdout)["family"] == "quartic"


def test_console_script_help():
    proc = run("--help")
    assert proc.returncode == 0 and b"search" in proc.stdout
