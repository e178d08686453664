"""End-to-end acceptance checks, one test per criterion.

Each test prints a ``[criterion N] PASS|FAIL`` line; run with ``-s`` to see
them inline. A summary is written to the terminal after the module finishes.
"""

import contextlib
import json
import time

import numpy as np
import pydot
import pytest

from argmed import dialogue as dlg
from argmed import semantics as S
from argmed.aaf import belief, decision
from argmed.cli import main
from argmed.decision import detect_reasoning_error
from argmed.dot import to_dot
from argmed.errors import IllegalMoveAt
from argmed.formats import dump_apx, dumps_json, framework_to_dict, parse_apx, parse_json
from argmed.generate import corpus

from conftest import FIXTURES, build
from protocol_oracle import first_violation

CORPUS_SEED = 20240
CORPUS_SIZE = 600
RESULTS: dict[int, str] = {}


@pytest.fixture(scope="module", autouse=True)
def summary(request):
    yield
    reporter = request.config.pluginmanager.getplugin("terminalreporter")
    if reporter is None:
        return
    reporter.write_line("")
    for n in sorted(RESULTS):
        reporter.write_line(RESULTS[n])


@contextlib.contextmanager
def criterion(n, title):
    detail = {}
    try:
        yield detail
    except BaseException:
        RESULTS[n] = f"[criterion {n}] FAIL {title}"
        print(RESULTS[n])
        raise
    extra = ", ".join(f"{k}={v}" for k, v in detail.items())
    RESULTS[n] = f"[criterion {n}] PASS {title}" + (f" ({extra})" if extra else "")
    print(RESULTS[n])


@pytest.fixture(scope="module")
def frameworks():
    fws = list(corpus(seed=CORPUS_SEED, count=CORPUS_SIZE, max_n=12, density=(0.1, 0.5)))
    assert len(fws) >= 500 and max(len(f) for f in fws) == 12
    return fws


def _mask(ids, members):
    pos = {a: i for i, a in enumerate(ids)}
    return sum(1 << pos[a] for a in members)


def test_criterion_1_migraine(capsys, tmp_path):
    with criterion(1, "migraine example reproduced exactly") as info:
        out = tmp_path / "report.json"
        t0 = time.perf_counter()
        code = main(["solve", str(FIXTURES / "migraine.apx"), "--format", "json", "-o", str(out)])
        elapsed = time.perf_counter() - t0
        doc = json.loads(out.read_text())
        assert code == 0
        assert set(doc["optional_decisions"]) == {"B", "C"}
        sets = {frozenset([e["decision"], *e["supporters"]]) for e in doc["explanation_sets"]}
        assert sets == {frozenset("BDE"), frozenset("CDE")}
        assert doc["error_flag"] is False
        assert elapsed < 1.0
        info["seconds"] = f"{elapsed:.3f}"


def test_criterion_2_oracle_equivalence(frameworks):
    with criterion(2, "preferred_extensions equals brute-force oracle") as info:
        t0 = time.perf_counter()
        for fw in frameworks:
            fast = {e.as_set() for e in S.preferred_extensions(fw)}
            slow = {e.as_set() for e in S.brute_force_preferred(fw, cap=12)}
            assert fast == slow, fw
        elapsed = time.perf_counter() - t0
        assert elapsed < 60.0
        info.update(samples=len(frameworks), seconds=f"{elapsed:.2f}")


def test_criterion_3_lattice(frameworks):
    with criterion(3, "grounded within preferred, preferred admissible and maximal") as info:
        for fw in frameworks:
            ids, _, adm = S.subset_tables(fw)
            adm_masks = np.flatnonzero(adm)
            grounded = S.grounded_extension(fw).as_set()
            for ext in S.preferred_extensions(fw):
                members = ext.as_set()
                assert grounded <= members
                assert S.is_admissible(fw, members)
                m = _mask(ids, members)
                assert adm[m]
                supersets = adm_masks[(adm_masks & m) == m]
                assert list(supersets) == [m]
        info["samples"] = len(frameworks)


def _defeated_framework(rng, k):
    ds = [f"d{i}" for i in range(k)]
    bs = [f"b{i}" for i in range(k)]
    attacks = [(b, d) for b, d in zip(bs, ds)]
    extra = [f"x{i}" for i in range(int(rng.integers(0, 3)))]
    for x in extra:
        attacks.append((bs[int(rng.integers(k))], x))
    return build(ds, bs + extra, attacks)


def test_criterion_4_reasoning_error(frameworks, tmp_path, capsys):
    with criterion(4, "error flag and exit codes") as info:
        rng = np.random.default_rng(4)
        for k in range(1, 7):
            fw = _defeated_framework(rng, k)
            assert detect_reasoning_error(fw).error_flag
            p = tmp_path / f"defeated{k}.apx"
            p.write_text(dump_apx(fw))
            assert main(["solve", str(p)]) == 2
        assert main(["solve", str(FIXTURES / "no_decision.apx")]) == 2
        assert not detect_reasoning_error(parse_apx((FIXTURES / "migraine.apx").read_text())).error_flag
        assert main(["solve", str(FIXTURES / "migraine.apx")]) == 0
        flagged = 0
        for fw in frameworks:
            r = detect_reasoning_error(fw)
            assert r.error_flag == (len(r.optional_decisions) == 0)
            flagged += r.error_flag
        capsys.readouterr()
        info.update(flagged=flagged, corpus=len(frameworks))


def _random_move(rng, moves, burst=False):
    k = len(moves) + 1
    if rng.random() < 0.03:
        k += int(rng.choice([-1, 1, 2]))
    proposed = [m.payload.argument.id for m in moves if isinstance(m.payload, dlg.ProposeArgument)]
    roll = rng.random()
    if roll < (0.9 if burst else 0.5) or not proposed:
        fresh = f"a{len(proposed)}"
        aid = proposed[int(rng.integers(len(proposed)))] if proposed and rng.random() < 0.04 else fresh
        arg = decision(aid) if rng.random() < (0.95 if burst else 0.5) else belief(aid)
        target = None
        if proposed and rng.random() < (0.1 if burst else 0.6):
            target = proposed[int(rng.integers(len(proposed)))]
        elif rng.random() < 0.03:
            target = "ghost"
        speaker = dlg.Speaker.GENERATOR if rng.random() > 0.03 else dlg.Speaker.VERIFIER
        return dlg.Move(k, speaker, dlg.ProposeArgument(arg, target))
    target = proposed[int(rng.integers(len(proposed)))]
    if roll < 0.7:
        payload = dlg.PoseCQ("q", target, True)
    elif roll < 0.8:
        payload = dlg.PoseCQ("q", target, False)
    else:
        payload = dlg.AcceptArgument(target)
    speaker = dlg.Speaker.VERIFIER if rng.random() > 0.03 else dlg.Speaker.GENERATOR
    return dlg.Move(k, speaker, payload)


def _random_sequence(rng):
    # burst mode proposes decisions back to back so the cap is reached within the limit
    burst = rng.random() < 0.2
    moves = []
    for _ in range(int(rng.integers(1, 12))):
        guided = rng.random() < 0.85
        for _ in range(40 if guided else 1):
            m = _random_move(rng, moves, burst)
            if not guided or first_violation(moves + [m]) is None:
                break
        moves.append(m)
    return moves


def test_criterion_5_protocol(capsys):
    with criterion(5, "replay matches the independent legality oracle") as info:
        rng = np.random.default_rng(5)
        tally: dict[str, int] = {}
        for _ in range(400):
            moves = _random_sequence(rng)
            expected = first_violation(moves)
            if expected is None:
                t = dlg.replay(moves)
                assert t.moves == moves
                assert len(t.moves) <= 8 and t.decision_count <= 4
                assert dlg.alternation_holds(t.moves)
                tally["legal"] = tally.get("legal", 0) + 1
            else:
                with pytest.raises(IllegalMoveAt) as e:
                    dlg.replay(moves)
                assert e.value.index == expected[0], (expected, e.value.reason)
                tally[expected[1]] = tally.get(expected[1], 0) + 1
        for reason in ("legal", "alternation", "limit", "cap"):
            assert tally.get(reason, 0) >= 5, tally
        info.update(sequences=400, **dict(sorted(tally.items())))


def test_criterion_6_determinism(tmp_path, capsys):
    with criterion(6, "depression session byte-identical across 5 runs") as info:
        bundles = []
        for i in range(5):
            out = tmp_path / f"run{i}"
            code = main(["run", str(FIXTURES / "depression_case.json"), "--backend-config",
                         str(FIXTURES / "depression_backend.json"), "--out-dir", str(out)])
            assert code == 0
            bundles.append({p.name: p.read_bytes() for p in sorted((out / "depression").iterdir())})
        assert len(bundles[0]) == 3
        assert all(b == bundles[0] for b in bundles[1:])
        report = json.loads(bundles[0]["depression.report.json"])
        fw = json.loads(bundles[0]["depression.framework.json"])
        chosen = {a["id"]: a for a in fw["arguments"]}
        assert report["optional_decisions"] == ["C"]
        assert chosen["C"]["bindings"]["treatment"] == "Trazodone"
        assert chosen["A"]["bindings"]["treatment"] == "Paroxetine"
        capsys.readouterr()
        info["runs"] = 5


def test_criterion_7_round_trips(frameworks):
    with criterion(7, "apx/json round-trips and DOT grammar") as info:
        for fw in frameworks:
            for back in (parse_apx(dump_apx(fw)), parse_json(dumps_json(framework_to_dict(fw)))):
                assert back.ids == fw.ids and back.attacks == fw.attacks
                assert [a.kind for a in back.arguments] == [a.kind for a in fw.arguments]
            graphs = pydot.graph_from_dot_data(to_dot(fw))
            assert graphs and len(graphs) == 1
            g = graphs[0]
            nodes = {n.get_name().strip('"') for n in g.get_nodes()} - {"node"}
            assert nodes == set(fw.ids)
            assert len(g.get_edges()) == len(fw.attacks)
        info.update(round_trips=len(frameworks), dot_checked=len(frameworks))
