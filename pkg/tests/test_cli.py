import json

import pytest

from fpn import __version__
from fpn.cli import main
from fpn.harness import SuiteReport
from fpn.resolution import BettiTable


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_betti_table_output(capsys):
    code, out, _ = run(capsys, "betti", "example-1.2", "--module", "quotient:x1", "--level", "3")
    assert code == 0
    assert out.startswith(f"# fpn {__version__}  betti example-1.2")
    assert "total:" in out


def test_json_to_table_round_trip(capsys):
    args = ("betti", "example-1.3", "--module", "ideal:x2", "--level", "4", "--steps", "3")
    _, js, _ = run(capsys, *args, "--format", "json")
    _, tab, _ = run(capsys, *args)
    data = json.loads(js)
    assert data["config"]["version"] == __version__
    want = BettiTable.from_json(data)
    body = tab.split("\n", 2)[2]  # header line, then the module line
    back = BettiTable.from_text(body)
    assert back.to_json() == want.to_json()
    assert [s["rank"] for s in data["betti"]] == [1, 2, 5, 15]


def test_cap_incomplete_round_trip(capsys):
    code, tab, _ = run(capsys, "betti", "example-1.3", "--module", "ideal:x2", "--level", "4", "--steps", "3", "--cap", "3")
    assert code == 3
    body = tab.split("\n", 2)[2].split("stopped:")[0]
    assert not BettiTable.from_text(body).steps[2].complete


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "betti", "example-1.3", "--module", "ideal:q2")[0] == 2
    assert run(capsys, "betti", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "lambda", "example-1.2", "--module", "ideal:x1", "--level-range", "3..6", "--window", "1")[0] == 2
    with pytest.raises(SystemExit) as e:
        main(["tower"])
    assert e.value.code == 2
    code, _, err = run(capsys, "paper-examples", "--only", "nonsense")
    assert code == 2 and "unknown item" in err


def test_failing_check_exits_one(capsys, monkeypatch):
    import fpn.harness as h

    def fake(name, seed, count, config):
        rep = SuiteReport(name, seed, count, config)
        rep.record("law", "fail", {"why": "planted"})
        return rep

    monkeypatch.setattr(h, "run_suite", fake)
    code, out, _ = run(capsys, "check", "glaz", "--count", "1")
    assert code == 1


def test_check_suite_ok(capsys):
    code, out, _ = run(capsys, "check", "schanuel", "--count", "5", "--format", "json")
    assert code == 0
    assert json.loads(out)["ok"] is True


def test_lambda_and_tower(capsys):
    code, out, _ = run(capsys, "lambda", "example-1.2", "--module", "quotient:x1", "--level-range", "3..7", "--steps", "3", "--cap", "6")
    assert code == 0 and "lambda-hat = 1" in out
    code, out, _ = run(capsys, "tower", "example-1.2", "--module", "ideal:x1", "--level-range", "3..5", "--steps", "1", "--format", "csv")
    assert out.splitlines()[0] == "level,step,rank"
    assert "5,1,5" in out


def test_ext_tor_dual(capsys):
    code, out, _ = run(capsys, "ext", "example-1.2", "--module", "quotient:x1", "--with", "ideal:x1", "--format", "json")
    assert code == 0 and json.loads(out)["total"] == 1
    code, out, _ = run(capsys, "tor", "example-1.2", "--module", "quotient:x1", "--with", "ideal:x1", "--dual", "--format", "json")
    assert json.loads(out)["total"] == 1
    code, out, _ = run(capsys, "dual", "example-1.2", "--module", "free")
    assert "M^v  -1:3  0:1" in out
    code, out, _ = run(capsys, "ring", "inspect", "example-1.3", "--level", "2")
    assert code == 0 and "x1*y1" in out


def test_only_ext_example(capsys):
    code, out, err = run(capsys, "paper-examples", "--only", "ext-example", "--format", "json")
    assert code == 0
    items = json.loads(out)["items"]
    assert [i["id"] for i in items] == ["ext-example"]
    assert "ext-example" in err  # progress goes to stderr only


@pytest.mark.parametrize(
    "argv",
    [
        ["betti", "example-1.3", "--module", "ideal:x1", "--level", "4", "--format", "json"],
        ["lambda", "example-1.3", "--module", "ideal:x1", "--level-range", "4..8", "--format", "json"],
        ["check", "glaz", "--count", "4", "--seed", "3", "--format", "json"],
    ],
    ids=["betti", "lambda", "check"],
)
def test_rerun_is_byte_identical(capsys, tmp_path, argv):
    first = tmp_path / "first.json"
    assert main(argv + ["--out", str(first)]) in (0, 3)
    capsys.readouterr()
    second = tmp_path / "second.json"
    main(["rerun", str(first), "--out", str(second)])
    assert first.read_bytes() == second.read_bytes()
    assert "--out" not in json.loads(first.read_text())["config"]["argv"]
