import json
import shutil

import pydot
import pytest

from argmed.cli import main

from conftest import FIXTURES


def call(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def dot_graph(text):
    graphs = pydot.graph_from_dot_data(text)
    assert graphs and len(graphs) == 1
    return graphs[0]


# -- solve ----------------------------------------------------------------

def test_solve_migraine(capsys):
    code, out, _ = call(capsys, "solve", FIXTURES / "migraine.apx")
    assert code == 0
    assert "Optional decisions: B or C" in out
    assert "{{B,D,E}, {C,D,E}}" in out


def test_solve_json(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = call(capsys, "solve", FIXTURES / "migraine.apx", "--format", "json", "-o", target, "--oracle")
    assert code == 0 and out == ""
    doc = json.loads(target.read_text())
    assert doc["optional_decisions"] == ["B", "C"] and doc["error_flag"] is False
    assert [[e["decision"], *e["supporters"]] for e in doc["explanation_sets"]] == [list("BDE"), list("CDE")]


def test_solve_reasoning_error(capsys):
    code, out, _ = call(capsys, "solve", FIXTURES / "no_decision.apx")
    assert code == 2
    assert "Reasoning error: yes" in out and "d1 defeated by b1" in out


def test_solve_input_errors(capsys, tmp_path):
    code, _, err = call(capsys, "solve", FIXTURES / "malformed.apx")
    assert code == 1 and "malformed.apx:3:" in err
    assert call(capsys, "solve", tmp_path / "missing.apx")[0] == 1
    code, _, err = call(capsys, "solve", FIXTURES / "forbidden.apx")
    assert code == 1 and "A" in err
    assert call(capsys, "solve")[0] == 1
    assert call(capsys, "frobnicate")[0] == 1


def test_solve_complete_flag(capsys, tmp_path):
    p = tmp_path / "half.apx"
    p.write_text("arg(a).\narg(b).\nkind(a,decision).\nkind(b,decision).\natt(a,b).\n")
    assert call(capsys, "solve", p)[0] == 1
    code, out, _ = call(capsys, "solve", p, "--complete")
    assert code == 0 and "a or b" in out


def test_solve_grounded(capsys):
    code, out, _ = call(capsys, "solve", FIXTURES / "migraine.apx", "--semantics", "grounded")
    assert code == 2


def test_solve_oracle_cap(capsys):
    assert call(capsys, "solve", FIXTURES / "migraine.apx", "--oracle", "--oracle-cap", "3")[0] == 1


def test_solve_json_input(capsys, tmp_path):
    from argmed.formats import load_framework, save_framework
    p = tmp_path / "migraine.json"
    save_framework(load_framework(FIXTURES / "migraine.apx"), p)
    assert call(capsys, "solve", p)[0] == 0


# -- validate -------------------------------------------------------------

def test_validate(capsys):
    code, out, _ = call(capsys, "validate", FIXTURES / "migraine.apx")
    assert code == 0 and "valid" in out
    code, out, _ = call(capsys, "validate", FIXTURES / "forbidden.apx")
    assert code == 1 and "violation" in out
    code, out, _ = call(capsys, "validate", FIXTURES / "self_attack.apx")
    assert code == 0 and "warning: self-attack on X" in out
    code, out, _ = call(capsys, "validate", FIXTURES / "forbidden.apx", "--format", "json")
    assert json.loads(out)["violations"][0]["code"] == "forbidden_attack"


# -- export ---------------------------------------------------------------

def test_export_migraine(capsys):
    code, out, _ = call(capsys, "export", FIXTURES / "migraine.apx")
    assert code == 0
    g = dot_graph(out)
    nodes = {n.get_name().strip('"') for n in g.get_nodes()} - {"node"}
    assert nodes == set("ABCDE")
    edges = {(e.get_source().strip('"'), e.get_destination().strip('"')) for e in g.get_edges()}
    assert {("D", "A"), ("B", "C"), ("C", "B")} <= edges
    shapes = {n.get_name().strip('"'): n.get("shape").strip('"') for n in g.get_nodes() if n.get("shape")}
    assert shapes["A"] == "box" and shapes["D"] == "ellipse"


def test_export_empty(capsys, tmp_path):
    p = tmp_path / "empty.apx"
    p.write_text("% nothing\n")
    code, out, _ = call(capsys, "export", p)
    assert code == 0
    assert [n for n in dot_graph(out).get_nodes() if n.get_name() != "node"] == []


def test_export_colors(capsys):
    _, out, _ = call(capsys, "export", FIXTURES / "migraine.apx", "--decision-color", "#000000")
    assert '"#000000"' in out


# -- run / replay ---------------------------------------------------------

def test_run_depression_bundle_stable(capsys, tmp_path):
    outs = []
    for i in range(2):
        d = tmp_path / f"o{i}"
        code, out, _ = call(capsys, "run", FIXTURES / "depression_case.json",
                            "--backend-config", FIXTURES / "depression_backend.json", "--out-dir", d)
        assert code == 0 and "Optional decisions: C" in out
        outs.append({p.name: p.read_bytes() for p in (d / "depression").iterdir()})
    assert outs[0] == outs[1] and len(outs[0]) == 3


def test_run_migraine(capsys, tmp_path):
    code, out, _ = call(capsys, "run", FIXTURES / "migraine_case.json", "--backend-config",
                        FIXTURES / "migraine_backend.json", "--out-dir", tmp_path, "--dialogue-limit", "10")
    assert code == 0 and "Optional decisions: B or C" in out


def test_run_defeated_exit_2(capsys, tmp_path):
    code, _, _ = call(capsys, "run", FIXTURES / "depression_case.json", "--backend-config",
                      FIXTURES / "defeated_backend.json", "--out-dir", tmp_path)
    assert code == 2


def test_run_parallel(capsys, tmp_path):
    case2 = tmp_path / "other.json"
    case2.write_text(json.dumps({"case_id": "other", "text": "same story"}))
    code, _, _ = call(capsys, "run", FIXTURES / "depression_case.json", case2, "--backend-config",
                      FIXTURES / "depression_backend.json", "--out-dir", tmp_path / "o", "--parallel", "2")
    assert code == 0
    assert sorted(p.name for p in (tmp_path / "o").iterdir()) == ["depression", "other"]


def test_run_usage_errors(capsys, tmp_path):
    assert call(capsys, "run", FIXTURES / "depression_case.json")[0] == 1
    assert call(capsys, "run", FIXTURES / "depression_case.json", "--backend-config", tmp_path / "none.json")[0] == 1
    assert call(capsys, "run", tmp_path / "nope.json", "--backend-config", FIXTURES / "depression_backend.json")[0] == 1
    assert call(capsys, "run", FIXTURES / "depression_case.json", "--backend-config",
                FIXTURES / "depression_backend.json", "--dialogue-limit", "0", "--out-dir", tmp_path)[0] == 1


def test_run_backend_failure_exit_3(capsys, tmp_path):
    script = json.loads((FIXTURES / "depression_script.json").read_text())
    script["generator"] = script["generator"][:1]
    (tmp_path / "s.json").write_text(json.dumps(script))
    (tmp_path / "b.json").write_text(json.dumps({"kind": "scripted", "script_path": "s.json"}))
    code, _, err = call(capsys, "run", FIXTURES / "depression_case.json", "--backend-config", tmp_path / "b.json",
                        "--out-dir", tmp_path / "o")
    assert code == 3 and "backend failure" in err
    t = json.loads((tmp_path / "o" / "depression" / "depression.transcript.json").read_text())
    assert t["status"] == {"state": "terminated", "reason": "backend"}


def test_remote_without_credential(capsys, tmp_path, monkeypatch):
    monkeypatch.delenv("ARGMED_API_KEY", raising=False)
    cfg = tmp_path / "remote.json"
    cfg.write_text(json.dumps({"kind": "remote", "endpoint": "http://127.0.0.1:9/v1", "model_name": "m"}))
    code, _, err = call(capsys, "run", FIXTURES / "depression_case.json", "--backend-config", cfg, "--out-dir", tmp_path)
    assert code == 1 and "ARGMED_API_KEY" in err


def test_replay_and_export_bundle(capsys, tmp_path):
    call(capsys, "run", FIXTURES / "depression_case.json", "--backend-config", FIXTURES / "depression_backend.json",
         "--out-dir", tmp_path)
    bundle = tmp_path / "depression"
    code, out, _ = call(capsys, "replay", bundle / "depression.transcript.json")
    assert code == 0 and "6 moves replayed" in out
    code, out, _ = call(capsys, "replay", bundle / "depression.transcript.json", "--format", "json")
    assert json.loads(out) == json.loads((bundle / "depression.report.json").read_text())
    code, out, _ = call(capsys, "export", bundle)
    assert code == 0 and "(move 1)" in out
    dot_graph(out)


def test_replay_rejects_tampering(capsys, tmp_path):
    call(capsys, "run", FIXTURES / "depression_case.json", "--backend-config", FIXTURES / "depression_backend.json",
         "--out-dir", tmp_path)
    p = tmp_path / "depression" / "depression.transcript.json"
    doc = json.loads(p.read_text())
    doc["moves"][1], doc["moves"][2] = doc["moves"][2], doc["moves"][1]
    p.write_text(json.dumps(doc))
    code, _, err = call(capsys, "replay", p)
    assert code == 1 and "illegal move 2" in err


# -- schemes --------------------------------------------------------------

def test_schemes(capsys, tmp_path):
    code, out, _ = call(capsys, "schemes")
    assert code == 0 and "ASDM [decision]" in out and "ASDM.side_effects -> ASSE" in out
    code, out, _ = call(capsys, "schemes", "--format", "json")
    pack = tmp_path / "pack.json"
    pack.write_text(out)
    assert call(capsys, "schemes", "--schemes", pack)[0] == 0


def test_help_exits_zero(capsys):
    assert call(capsys, "--help")[0] == 0
