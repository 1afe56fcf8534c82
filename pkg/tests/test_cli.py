import json
import subprocess
import sys

import pytest

from shadowkernel import data_path
from shadowkernel.cli import EXIT_INPUT, EXIT_NO, EXIT_OK, EXIT_RESOURCE, main
from shadowkernel.kbformat import HEADER


@pytest.fixture(autouse=True)
def _cwd(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("SHADOWKERNEL_SEED", raising=False)


def D(name):
    return str(data_path(name))


def test_exit_codes_are_stable():
    assert (EXIT_OK, EXIT_INPUT, EXIT_NO, EXIT_RESOURCE) == (0, 1, 2, 3)


def test_prove_writes_proof(tmp_path, capsys):
    assert main(["prove", D("gettier.dcec"), "g"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("PROVED (or (OwnsFord jones) (In brown boston))")
    assert (tmp_path / "gettier-g.proof").read_text().startswith(HEADER)


def test_prove_fail_and_resource_out(capsys):
    assert main(["prove", D("empty.dcec"), "Rainy"]) == EXIT_NO
    assert capsys.readouterr().out.startswith("FAIL Rainy")
    assert main(["prove", D("dinner_party_part1.dcec"), "aperitif", "--max-clauses", "1"]) == EXIT_RESOURCE
    assert capsys.readouterr().out.startswith("RESOURCE-OUT")


def test_prove_formula_goal_and_json(capsys):
    assert main(["prove", D("gettier.dcec"), "(or (In brown boston) (OwnsFord jones))", "--format", "json",
                 "--no-write"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["verdict"] == "PROVED" and data["proof"]["format"] == HEADER and data["proof_file"] is None


def test_prove_flags_are_honoured(capsys):
    args = ["prove", D("dinner_party.dcec"), "robert-believes", "--no-write"]
    assert main(args) == EXIT_OK
    assert main(args + ["--schemata", "none", "--no-lift"]) == EXIT_NO
    assert main(args + ["--disable", "R3"]) == EXIT_NO
    assert main(args + ["--depth", "1"]) in (EXIT_NO, EXIT_OK)
    assert main(args + ["--trace"]) == EXIT_OK
    assert "round 0" in capsys.readouterr().err


def test_usage_and_parse_errors_exit_one(tmp_path, capsys):
    assert main(["prove", "missing.dcec", "g"]) == EXIT_INPUT
    bad = tmp_path / "bad.dcec"
    bad.write_text("(assume a (Unknown x))\n")
    assert main(["prove", str(bad), "a"]) == EXIT_INPUT
    assert "bad.dcec:1:" in capsys.readouterr().err
    with pytest.raises(SystemExit) as exc:
        main(["prove"])
    assert exc.value.code == EXIT_INPUT
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == EXIT_INPUT
    assert main(["prove", D("gettier.dcec"), "g", "--schemata", "R99"]) == EXIT_INPUT
    assert main(["prove", D("gettier.dcec"), "(or"]) == EXIT_INPUT


def test_check_accepts_fresh_proof(capsys):
    main(["prove", D("dinner_party.dcec"), "host-believes", "-o", "hb.proof"])
    assert main(["check", "hb.proof", D("dinner_party.dcec")]) == EXIT_OK
    assert "ACCEPT" in capsys.readouterr().out
    assert main(["check", "hb.proof", D("dinner_party.dcec"), "--goal", "robert-believes"]) == EXIT_NO


def test_check_truncated_proof_is_a_parse_error(tmp_path, capsys):
    main(["prove", D("gettier.dcec"), "h", "-o", "h.proof"])
    text = (tmp_path / "h.proof").read_text()
    (tmp_path / "cut.proof").write_text(text[: len(text) // 2])
    assert main(["check", "cut.proof", D("gettier.dcec")]) == EXIT_INPUT


def test_check_tampered_step_names_it(tmp_path, capsys):
    main(["prove", D("dinner_party.dcec"), "robert-believes", "-o", "rb.proof"])
    text = (tmp_path / "rb.proof").read_text()
    # the R3 conclusion no longer matches the body of its common-knowledge premise
    lines = text.splitlines()
    idx = next(i for i, line in enumerate(lines) if " R3 (round" in line)
    lines[idx] = lines[idx].replace("(formula (K robert t1 (implies", "(formula (K robert t1 (iff", 1)
    (tmp_path / "bad.proof").write_text("\n".join(lines) + "\n")
    assert main(["check", "bad.proof", D("dinner_party.dcec")]) == EXIT_NO
    out = capsys.readouterr().out
    assert "REJECT at round 0 instance 0 (R3)" in out


def test_check_json_proof(capsys):
    main(["prove", D("gettier.dcec"), "i", "-o", "i.proof.json"])
    assert main(["check", "i.proof.json", D("gettier.dcec")]) == EXIT_OK


def test_run_scenarios(tmp_path, capsys):
    assert main(["run", D("dinner_party.scn"), "-o", "dp.txt", "--json", "dp.json"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.count("learned learned") == 3 and "MATCH" in out
    assert (tmp_path / "dp.txt").read_text().startswith("shadowkernel-transcript v1")
    assert json.loads((tmp_path / "dp.json").read_text())["matched"] is True
    assert main(["run", D("gettier.scn")]) == EXIT_OK
    assert "level 1" in capsys.readouterr().out
    assert (tmp_path / "gettier.transcript").read_text().startswith("shadowkernel-transcript v1")
    (tmp_path / "gettier.transcript").unlink()
    assert main(["run", D("gettier.scn"), "--no-write"]) == EXIT_OK
    assert not (tmp_path / "gettier.transcript").exists()


def test_run_mismatch_and_lenient(tmp_path, capsys):
    text = data_path("gettier.scn").read_text()
    (tmp_path / "impossible.scn").write_text(text + "\n(expect (In brown boston) 1)\n")
    assert main(["run", "impossible.scn"]) == EXIT_NO
    assert "missing (In brown boston) at level 1" in capsys.readouterr().out
    (tmp_path / "silent.scn").write_text(text.replace("(expect (or (OwnsFord jones) (In brown barcelona)) 1)", ""))
    assert main(["run", "silent.scn"]) == EXIT_NO
    assert main(["run", "silent.scn", "--expect", "lenient"]) == EXIT_OK


def test_run_resource_out(tmp_path, capsys):
    assert main(["run", D("dinner_party.scn"), "--max-clauses", "1"]) == EXIT_RESOURCE


def test_fmt_is_idempotent(tmp_path, capsys):
    for name in ("gettier.dcec", "dinner_party.dcec", "gettier.scn", "dinner_party.scn", "empty.dcec"):
        assert main(["fmt", D(name)]) == EXIT_OK
        once = capsys.readouterr().out
        target = tmp_path / name
        target.write_text(once)
        assert main(["fmt", "--check", str(target)]) == EXIT_OK
    main(["prove", D("gettier.dcec"), "g"])
    capsys.readouterr()
    assert main(["fmt", "--check", "gettier-g.proof"]) == EXIT_OK


def test_schemata_listing(capsys):
    assert main(["schemata", "--format", "json"]) == EXIT_OK
    ids = [row["id"] for row in json.loads(capsys.readouterr().out)]
    assert ids[:2] == ["R_K", "R_B"] and "R11" not in ids and ids[-1] == "lift"


def test_seed_is_validated_and_recorded(monkeypatch, tmp_path, capsys):
    monkeypatch.setenv("SHADOWKERNEL_SEED", "not-a-number")
    assert main(["run", D("gettier.scn")]) == EXIT_INPUT
    monkeypatch.setenv("SHADOWKERNEL_SEED", "17")
    assert main(["run", D("gettier.scn"), "-o", "t.txt"]) == EXIT_OK
    assert "(seed 17)" in (tmp_path / "t.txt").read_text()


def test_runs_as_a_module(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "shadowkernel", "prove", D("gettier.dcec"), "h", "--no-write"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("PROVED")
