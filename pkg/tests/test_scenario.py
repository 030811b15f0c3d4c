import json
import re
from importlib import resources

import pytest

from blowdown import cli, scenario
from blowdown.scenario import ScenarioError, parse_scenario, print_scenario, run_scenario


def corpus_texts() -> dict[str, str]:
    root = resources.files("blowdown") / "corpus"
    out = {}
    for entry in root.iterdir():
        if entry.name.endswith(".plm"):
            out[entry.name[:-4]] = entry.read_text()
    return out


CORPUS = corpus_texts()

MINIMAL = """\
ambient X e 4 sigma 0 basis S
pair S S -4
curve c class S
chain C = c
assert chain C (-4)
assert identify C 2 1
assert euler 4
"""


def test_corpus_inventory():
    assert set(CORPUS) == {
        "qn", "xn", "r",
        "c44", "c79", "c89", "c169", "c212", "c301", "c540",
    }


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_corpus_scenarios_pass(name):
    s = parse_scenario(CORPUS[name], name=name)
    report = run_scenario(s)
    failing = [r.description for r in report.records if not r.passed]
    assert report.all_passed, failing


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_parse_print_parse_fixed_point(name):
    first = parse_scenario(CORPUS[name], name=name)
    printed = print_scenario(first)
    second = parse_scenario(printed, name=name)
    assert second.directives == first.directives
    # the printer is canonical: printing again reproduces the same text
    assert print_scenario(second) == printed


def test_xn_scenario_is_substantial():
    s = parse_scenario(CORPUS["xn"], name="xn")
    assert len(s.directives) >= 30


def test_minimal_scenario_passes():
    report = run_scenario(parse_scenario(MINIMAL, name="m"))
    assert report.all_passed and report.total == 3


def test_report_text_format():
    text = MINIMAL.replace("assert chain C (-4)", "assert chain C (-5)")
    report = run_scenario(parse_scenario(text, name="demo"))
    assert report.to_text() == (
        "scenario demo\n"
        "  [ 1] FAIL chain C weights | expected (-5) | actual (-4)\n"
        "  [ 2] PASS chain C identified | expected C_{2,1} | actual C_{2,1}\n"
        "  [ 3] PASS euler characteristic | expected 4 | actual 4\n"
        "  summary: 2/3 assertions passed"
    )
    obj = report.to_json_obj()
    assert obj["passed"] == 2 and obj["total"] == 3
    assert obj["assertions"][0]["pass"] is False
    assert obj["assertions"][0]["expected"] == "(-5)"


@pytest.mark.parametrize("text,message", [
    ("", "no ambient declared"),
    ("curve c class S\n", "no ambient declared"),
    ("ambient X e 4 sigma 0 basis S\n", "scenario must end with at least one assertion"),
    ("ambient X e 4 sigma 0 basis S\nblowdwn C label Y\n",
     "line 2: unknown directive 'blowdwn'"),
    ("ambient X e 4 sigma 0 basis S\nambient Y e 4 sigma 0 basis T\n",
     "line 2: duplicate ambient declaration"),
    ("ambient X e 4 sigma 0 basis S\npair S U 1\n",
     "line 2: unknown generator 'U'"),
    ("ambient X e 4 sigma 0 basis S\ncurve c class S+Q\n",
     "line 2: unknown class 'Q'"),
    ("ambient X e 4 sigma 0 basis S\ncurve c class S\ncurve c class S\n",
     "line 3: curve 'c' already declared"),
    ("ambient X e 4 sigma 0 basis S\nchain C = c\n",
     "line 2: unknown curve 'c'"),
    ("ambient X e 4 sigma 0 basis S S\n",
     "line 1: duplicate basis generator"),
    ("ambient X e four sigma 0 basis S\n",
     "line 1: expected Euler characteristic, got 'four'"),
    ("ambient X e 4 sigma 0 basis S\ncurve c class S extra\n",
     "line 2: unexpected trailing token 'extra'"),
    ("ambient X e 4 sigma 0 basis S\nassert euler 4\nsw blowups b l E1\n",
     "line 3: unknown ledger 'l'"),
])
def test_parse_errors(text, message):
    with pytest.raises(ScenarioError) as exc:
        parse_scenario(text)
    assert str(exc.value) == message


def test_parse_error_unbalanced_quote():
    with pytest.raises(ScenarioError, match=r"^line 1: "):
        parse_scenario('ambient "X e 4 sigma 0 basis S\n')


def test_runtime_errors_carry_line_numbers():
    text = (
        "ambient E e 12 sigma -8 basis S T\n"
        "pair S S -1\n"
        "pair S T 1\n"
        "sw ledger L e 12 sigma -8 fiber S knots twist(1)\n"
        "assert euler 12\n"
    )
    with pytest.raises(ScenarioError,
                       match=r"^line 4: fiber class squares to -1, expected 0$"):
        run_scenario(parse_scenario(text))


# --- CLI ---------------------------------------------------------------


def test_cli_hj(capsys):
    assert cli.main(["hj", "71", "8"]) == 0
    out = capsys.readouterr().out
    assert out == "(-9,-10,-2,-2,-2,-2,-2,-3,-2,-2,-2,-2,-2,-2,-2)\n"


def test_cli_hj_json(capsys):
    assert cli.main(["--json", "hj", "7", "1"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload == {"p": 7, "q": 1, "chain": "(-9,-2,-2,-2,-2,-2)"}


def test_cli_hj_rejects_bad_pair(capsys):
    assert cli.main(["hj", "4", "2"]) == 2
    assert "error:" in capsys.readouterr().err


def test_cli_identify(capsys):
    assert cli.main(["identify", "(-4)"]) == 0
    assert capsys.readouterr().out == "C_{2,1}\n"
    assert cli.main(["identify", "(-9,-2,-2,-2,-2,-2)"]) == 0
    assert capsys.readouterr().out == "C_{7,1}\n"
    assert cli.main(["identify", "(-7,-2)"]) == 0
    assert capsys.readouterr().out == "none\n"


def test_cli_identify_bad_input(capsys):
    assert cli.main(["identify", "abc"]) == 2
    assert "error:" in capsys.readouterr().err


def test_cli_mcg_suite(capsys):
    assert cli.main(["mcg-suite"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[-1] == "summary: 7/7 identities hold"
    assert sum(1 for ln in lines if ln.startswith("PASS ")) == 7
    assert not any(ln.startswith("FAIL") for ln in lines)


def test_cli_mcg_suite_json(capsys):
    assert cli.main(["--json", "mcg-suite"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["passed"] == payload["total"] == 7
    assert {i["name"] for i in payload["identities"]} >= {"(ab)^6 = 1", "(a^3b)^3 = 1"}


def test_cli_corpus(capsys):
    assert cli.main(["corpus"]) == 0
    out = capsys.readouterr().out
    m = re.search(r"total: (\d+)/(\d+) assertions passed in (\d+) scenario\(s\)$",
                  out.strip())
    assert m is not None
    assert m.group(1) == m.group(2)
    assert m.group(3) == "10"


def test_cli_corpus_seed_does_not_change_output(capsys):
    assert cli.main(["corpus"]) == 0
    base = capsys.readouterr().out
    for seed in ("3", "17"):
        assert cli.main(["--seed", seed, "corpus"]) == 0
        assert capsys.readouterr().out == base


def test_cli_corpus_json_matches_text(capsys):
    assert cli.main(["--json", "corpus"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["passed"] == payload["total"]
    assert [s["scenario"] for s in payload["scenarios"]] == sorted(CORPUS)
    assert all(a["pass"] for s in payload["scenarios"] for a in s["assertions"])


def test_cli_verify_reports_failures(tmp_path, capsys):
    p = tmp_path / "bad.plm"
    p.write_text(MINIMAL.replace("assert chain C (-4)", "assert chain C (-5)"))
    assert cli.main(["verify", str(p)]) == 1
    out = capsys.readouterr().out
    assert "FAIL chain C weights" in out
    assert "total: 2/3 assertions passed in 1 scenario(s)" in out


def test_cli_verify_multiple_files(tmp_path, capsys):
    a = tmp_path / "a.plm"
    b = tmp_path / "b.plm"
    a.write_text(MINIMAL)
    b.write_text(MINIMAL)
    assert cli.main(["verify", str(a), str(b)]) == 0
    assert "total: 6/6 assertions passed in 2 scenario(s)" in capsys.readouterr().out


def test_cli_verify_missing_file(tmp_path, capsys):
    assert cli.main(["verify", str(tmp_path / "nope.plm")]) == 2
    assert "cannot read" in capsys.readouterr().err


def test_cli_verify_parse_error_exit_code(tmp_path, capsys):
    p = tmp_path / "broken.plm"
    p.write_text("ambient X e 4 sigma 0 basis S\nblowdwn C label Y\n")
    assert cli.main(["verify", str(p)]) == 3
    assert capsys.readouterr().err.startswith("error: line 2: unknown directive")


def test_cli_usage_errors(capsys):
    assert cli.main([]) == 2
    capsys.readouterr()
    assert cli.main(["frobnicate"]) == 2
    capsys.readouterr()
    assert cli.main(["hj", "7"]) == 2
    capsys.readouterr()


def test_print_scenario_quotes_whitespace():
    text = (
        'ambient "X Y" e 4 sigma 0 basis S\n'
        "pair S S -4\n"
        "assert label \"X Y\"\n"
    )
    s = parse_scenario(text)
    printed = print_scenario(s)
    assert '"X Y"' in printed
    assert parse_scenario(printed).directives == s.directives


def test_scenario_module_reexports():
    assert scenario.run_scenario is run_scenario
    assert issubclass(ScenarioError, ValueError)
