import json

import pytest

from argmed import dialogue as dlg
from argmed.aaf import belief, decision
from argmed.dialogue import Move, Speaker
from argmed.errors import (
    ForbiddenAttack,
    IllegalMove,
    IllegalMoveAt,
    InvalidConfig,
    SessionActive,
    SessionTerminated,
)

from protocol_oracle import first_violation


def run(moves, config=None):
    return dlg.replay(moves, config)


def depression_moves():
    return [
        dlg.propose(1, decision("A")),
        dlg.reject(2, "A", "ASDM.side_effects", "sexual side effects"),
        dlg.propose(3, belief("B"), "A"),
        dlg.accept(4, "B"),
        dlg.propose(5, decision("C")),
        dlg.reject(6, "C", "ASDM.side_effects"),
        dlg.propose(7, belief("D"), "C"),
        dlg.accept(8, "D"),
    ]


# -- config ---------------------------------------------------------------

def test_defaults():
    t = dlg.new_session()
    assert (t.config.dialogue_limit, t.config.max_decisions) == (8, 4)
    assert t.active and t.moves == [] and t.status == "active"


@pytest.mark.parametrize("kw", [{"dialogue_limit": 0}, {"max_decisions": 0},
                                {"dialogue_limit": True}, {"dialogue_limit": 2.5}])
def test_invalid_config(kw):
    with pytest.raises(InvalidConfig):
        dlg.SessionConfig(**kw)


def test_limit_one_is_valid():
    t = dlg.new_session(dlg.SessionConfig(dialogue_limit=1))
    dlg.submit_move(t, dlg.propose(1, decision("A")))
    assert t.status == "terminated(limit)"
    fw = dlg.to_framework(t)
    assert fw.ids == ["A"] and fw.attacks == []


# -- legality -------------------------------------------------------------

def test_rejection_then_counter_is_legal():
    t = run([dlg.propose(1, decision("A")), dlg.reject(2, "A", "q")])
    assert dlg.is_legal(t, dlg.propose(3, belief("B"), "A"))


def test_counter_without_verifier_move_is_illegal():
    t = run([dlg.propose(1, decision("A"))])
    v = dlg.is_legal(t, dlg.propose(2, belief("B"), "A"))
    assert not v and "rejection" in v.reason


def test_two_apart_needs_verifier_between():
    t = run([dlg.propose(1, belief("A")), dlg.propose(2, belief("B"))])
    assert not dlg.is_legal(t, dlg.propose(3, belief("C"), "A"))


def test_fifth_decision_illegal():
    moves = []
    for i, d in enumerate("ABCD"):
        moves += [dlg.propose(2 * i + 1, decision(d))]
        if d != "D":
            moves += [dlg.accept(2 * i + 2, d)]
    t = run(moves, dlg.SessionConfig(dialogue_limit=12))
    v = dlg.is_legal(t, dlg.propose(8, decision("E")))
    assert not v and "cap" in v.reason
    assert dlg.is_legal(t, dlg.propose(8, belief("E")))


@pytest.mark.parametrize("move,needle", [
    (Move(3, Speaker.VERIFIER, dlg.ProposeArgument(belief("X"))), "generator"),
    (Move(3, Speaker.GENERATOR, dlg.AcceptArgument("A")), "verifier"),
    (dlg.propose(5, belief("X")), "index"),
    (dlg.propose(3, belief("A")), "already proposed"),
    (dlg.propose(3, belief("X"), "Z"), "never proposed"),
    (dlg.accept(3, "Z"), "never proposed"),
])
def test_structural_rules(move, needle):
    t = run([dlg.propose(1, decision("A")), dlg.accept(2, "A")])
    v = dlg.is_legal(t, move)
    assert not v and needle in v.reason


def test_stack_discipline():
    t = run([dlg.propose(1, decision("A")), dlg.reject(2, "A", "q"),
             dlg.propose(3, belief("B"), "A"), dlg.reject(4, "B", "q")])
    assert t.open_rejections == ["B"]
    assert not dlg.is_legal(t, dlg.propose(5, decision("C")))
    assert dlg.is_legal(t, dlg.propose(5, belief("C"), "B"))


def test_verifier_turn_rules():
    t = run([dlg.propose(1, decision("A")), dlg.propose(2, decision("B")),
             dlg.reject(3, "A", "q")])
    assert not dlg.is_legal(t, dlg.reject(4, "B", "q"))
    assert not dlg.is_legal(t, dlg.accept(4, "A"))
    assert dlg.is_legal(t, dlg.accept(4, "B"))
    dlg.submit_move(t, dlg.accept(4, "B"))
    assert not dlg.is_legal(t, dlg.propose(5, belief("C"), "B"))  # stack: answer A first
    assert not dlg.is_legal(t, Move(5, Speaker.VERIFIER, dlg.PoseCQ("q", "B", False)))


def test_submit_rejects_illegal():
    t = run([dlg.propose(1, decision("A"))])
    with pytest.raises(IllegalMove):
        dlg.submit_move(t, dlg.propose(2, belief("B"), "A"))
    assert len(t.moves) == 1


# -- termination ----------------------------------------------------------

def test_limit_termination():
    t = run(depression_moves())
    assert t.status == "terminated(limit)"
    with pytest.raises(SessionTerminated):
        dlg.submit_move(t, dlg.propose(9, belief("E")))
    with pytest.raises(SessionTerminated):
        dlg.close_session(t)


def test_accepted_termination():
    t = run([dlg.propose(1, decision("A")), dlg.accept(2, "A")],
            dlg.SessionConfig(max_decisions=1))
    assert t.status == "terminated(accepted)"


def test_accept_without_cap_keeps_session_open():
    t = run([dlg.propose(1, decision("A")), dlg.accept(2, "A")])
    assert t.active and t.accepted == {"A"}


# -- compilation ----------------------------------------------------------

def test_depression_framework():
    fw = dlg.to_framework(run(depression_moves()))
    assert fw.ids == ["A", "B", "C", "D"]
    assert {("B", "A"), ("D", "C"), ("A", "C"), ("C", "A")} <= set(fw.attacks)
    assert fw.validate().ok


def test_single_accepted_decision():
    t = dlg.close_session(run([dlg.propose(1, decision("A")), dlg.accept(2, "A")]))
    fw = dlg.to_framework(t)
    assert fw.ids == ["A"] and fw.attacks == []


def test_empty_transcript():
    t = dlg.close_session(dlg.new_session())
    assert len(dlg.to_framework(t)) == 0


def test_active_transcript_not_compiled():
    with pytest.raises(SessionActive):
        dlg.to_framework(dlg.new_session())


def test_decision_attacking_belief_surfaces():
    t = run([dlg.propose(1, belief("A")), dlg.reject(2, "A", "q"),
             dlg.propose(3, decision("B"), "A")])
    dlg.close_session(t)
    with pytest.raises(ForbiddenAttack):
        dlg.to_framework(t)


def test_edges_match_proposals():
    t = run(depression_moves())
    fw = dlg.to_framework(t)
    declared = {(p.argument.id, p.attacks_target) for _, p in t.proposals if p.attacks_target}
    auto = {(a, b) for a in fw.decisions for b in fw.decisions if a != b}
    assert set(fw.attacks) - auto == declared


# -- replay ---------------------------------------------------------------

def test_replay_identical():
    a, b = run(depression_moves()), run(depression_moves())
    assert a.moves == b.moves and a.status == b.status
    assert dlg.to_framework(a) == dlg.to_framework(b)


def test_replay_alternation_violation_at_2():
    with pytest.raises(IllegalMoveAt) as e:
        run([dlg.propose(1, decision("A")), dlg.propose(2, belief("B"), "A")])
    assert e.value.index == 2


def test_replay_past_limit():
    moves = depression_moves() + [dlg.propose(9, belief("E"))]
    with pytest.raises(IllegalMoveAt) as e:
        run(moves)
    assert e.value.index == 9


def test_replay_agrees_with_oracle_on_examples():
    good = depression_moves()
    assert first_violation(good) is None
    assert first_violation([dlg.propose(1, decision("A")), dlg.propose(2, belief("B"), "A")]) == (2, "alternation")
    assert first_violation(good + [dlg.propose(9, belief("E"))]) == (9, "limit")


def test_alternation_invariant_helper():
    assert dlg.alternation_holds(depression_moves())
    bad = [dlg.propose(1, belief("A")), dlg.propose(2, belief("B")), dlg.propose(3, belief("C"), "A")]
    assert not dlg.alternation_holds(bad)


# -- serialization ----------------------------------------------------------

def test_transcript_round_trip(tmp_path):
    t = run(depression_moves())
    text = dlg.dump_transcript(t)
    p = tmp_path / "t.json"
    p.write_text(text)
    back = dlg.load_transcript(p)
    assert back.moves == t.moves and back.status == t.status
    assert dlg.dump_transcript(back) == text


def test_closed_status_survives_round_trip():
    t = dlg.close_session(run([dlg.propose(1, decision("A"))]), "exhausted")
    back = dlg.transcript_from_dict(json.loads(dlg.dump_transcript(t)))
    assert back.status == "terminated(exhausted)"


def test_move_dict_shape():
    d = dlg.reject(2, "A", "ASDM.side_effects", "why").to_dict()
    assert d == {"index": 2, "speaker": "verifier", "type": "pose_cq", "cq_id": "ASDM.side_effects",
                 "target": "A", "rejected": True, "reason": "why"}
    with pytest.raises(ValueError):
        Move.from_dict({**d, "type": "shout"})
