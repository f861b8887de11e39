import json
import subprocess
import sys

import pytest

from corpus import ROOT, WORKSPACES, load
from pathcoalg import analyze, enumerate_paths
from pathcoalg.cli import InputError, dump, emit_json, main, parse
from pathcoalg.classify import Verdict

TINY = '{"quiver":{"vertices":["1"],"arrows":[]},"coalgebra":{"kind":"full"}}'


def ws_path(name):
    return str(ROOT / "demos" / "workspaces" / f"{name}.json")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_tiny():
    ws = parse(TINY)
    assert ws.quiver.vertices == ("1",) and ws.truncation == 6 and ws.cell_bound == 12
    assert list(ws.coalgebras) == ["C"]


def test_parse_two_powers_workspace():
    ws = load("two_powers")
    assert sorted(ws.coalgebras) == ["A", "B", "C"]
    assert [str(p) for p in enumerate_paths(ws.get("A"), 2)] == ["e[x]", "a", "a*a"]


def test_paths_are_read_source_to_target():
    doc = {"quiver": {"vertices": ["1", "2", "3"],
                      "arrows": [{"id": "alpha", "src": "1", "tgt": "2"},
                                 {"id": "beta", "src": "2", "tgt": "3"}]},
           "coalgebra": {"kind": "monomial", "paths": [["alpha"], ["beta"], ["alpha", "beta"]]}}
    ws = parse(json.dumps(doc))
    assert "beta*alpha" in {str(p) for p in ws.main.paths}
    back = json.loads(dump(ws))
    assert ["alpha", "beta"] in back["coalgebra"]["paths"]


@pytest.mark.parametrize("path", WORKSPACES, ids=[p.stem for p in WORKSPACES])
def test_dump_round_trips(path):
    ws = parse(path.read_text())
    again = parse(dump(ws))
    assert again == ws
    assert dump(again) == dump(ws)


@pytest.mark.parametrize("doc,needle", [
    ("{", "malformed JSON at line 1"),
    ('{"quiver": {"vertices": ["1"]}}', "$.quiver: missing key 'arrows'"),
    ('{"quiver":{"vertices":["1"],"arrows":[{"id":"a","src":"1","tgt":"9"}]},"coalgebra":{"kind":"full"}}',
     "dangling endpoint"),
    ('{"quiver":{"vertices":["1"],"arrows":[]},"coalgebra":{"kind":"nope"}}', "unknown presentation kind"),
    ('{"quiver":{"vertices":["x"],"arrows":[{"id":"a","src":"x","tgt":"x"}]},'
     '"coalgebra":{"kind":"monomial","paths":[["a","a"]]}}', "missing subpath"),
    ('{"quiver":{"vertices":["x"],"arrows":[{"id":"a","src":"x","tgt":"x"}]},'
     '"coalgebra":{"kind":"monomial","paths":[["a"]]},'
     '"subcoalgebras":{"S":{"kind":"full"}}}', "$.subcoalgebras.S: member a*a is not in C"),
    ('{"quiver":{"vertices":["1"],"arrows":[]},"coalgebra":{"kind":"full"},"truncation":-1}',
     "$.truncation"),
    ('{"quiver":{"vertices":["x"],"arrows":[{"id":"a","src":"x","tgt":"x"}]},'
     '"coalgebra":{"kind":"pattern","automaton":{"states":["s"],"accepting":["t"],"transitions":[]}}}',
     "undeclared states"),
])
def test_parse_errors(doc, needle):
    with pytest.raises(InputError) as err:
        parse(doc)
    assert needle in str(err.value)


def test_classify_two_powers(capsys):
    code, out, _ = run(capsys, "classify", ws_path("two_powers"))
    assert code == 0
    assert "semiprime  Yes(square-rule)" in out
    assert "prime      No(wedge-decomposition; witness A,B verified at N=6)" in out
    assert "string     Yes(string-conditions)" in out


def test_wedge_command(capsys):
    code, out, _ = run(capsys, "wedge", ws_path("two_powers"), "--left", "A", "--right", "B")
    assert code == 0 and "A∧B = C up to truncation 6" in out
    code, _, err = run(capsys, "wedge", ws_path("two_powers"), "--left", "A", "--right", "Z")
    assert code == 1 and "unknown subcoalgebra 'Z'" in err


def test_localize_command(capsys, tmp_path):
    dot = tmp_path / "loc.dot"
    code, out, _ = run(capsys, "localize", ws_path("a3"), "--keep", "1,3", "--dot", str(dot))
    assert code == 0 and "1 -> 3  cell beta.alpha" in out
    assert '"1" -> "3"' in dot.read_text()
    code, _, err = run(capsys, "localize", ws_path("a3"), "--keep", "7")
    assert code == 1


def test_gabriel_and_filtration(capsys):
    code, out, _ = run(capsys, "gabriel", ws_path("two_powers"))
    assert code == 0 and "x -> x  (2,2)" in out
    code, out, _ = run(capsys, "filtration", ws_path("two_powers"), "--max", "3")
    assert code == 0 and out.splitlines() == [
        "C_0: dimension 1", "C_1: dimension 3", "C_2: dimension 5", "C_3: dimension 7"]


def test_check_command(capsys):
    code, out, _ = run(capsys, "check", ws_path("powers_then_a"), "--truncate", "4")
    assert code == 0 and "FAIL" not in out


def test_truncation_sources(capsys, monkeypatch, tmp_path):
    out = tmp_path / "r.json"
    monkeypatch.setenv("COALG_TRUNCATE", "3")
    run(capsys, "classify", ws_path("two_powers"), "--json", str(out))
    assert json.loads(out.read_text())["truncation"] == 3
    run(capsys, "classify", ws_path("two_powers"), "--truncate", "5", "--json", str(out))
    assert json.loads(out.read_text())["truncation"] == 5
    monkeypatch.setenv("COALG_TRUNCATE", "x")
    code, _, err = run(capsys, "classify", ws_path("two_powers"))
    assert code == 1


def test_missing_file(capsys):
    code, _, err = run(capsys, "analyze", "/nonexistent.json")
    assert code == 1 and "cannot read" in err


def test_emit_json_contract():
    yes = json.loads(emit_json(Verdict("yes", "square-rule", 6), None))
    assert {k: yes[k] for k in ("verdict", "rule", "truncation")} == {
        "verdict": "yes", "rule": "square-rule", "truncation": 6}
    assert "witness" in yes
    ws = load("two_powers")
    rep = json.loads(emit_json(analyze(ws.main, 4), ws.quiver))
    for key in ("semiprime", "prime", "hereditary", "serial", "string"):
        assert set(rep[key]) >= {"verdict", "rule", "witness", "truncation"}
    wit = rep["prime"]["witness"]
    assert sorted(map(str, wit["A"] + wit["B"])).count("{'vertex': 'x'}") == 2
    assert ["a", "a"] in wit["A"] + wit["B"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pathcoalg", "gabriel", ws_path("cycle3")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "3 -> 1  (1,1)" in proc.stdout
