import json

import pytest

from helpers import SIG, F
from shadowkernel import data_path
from shadowkernel.agent import (
    TRANSCRIPT_HEADER, AgentConfig, AgentState, ClockRegression, ExpectationMismatch, initial_state,
    ingest_percept, regenerate, run_scenario, step, transcript_json, transcript_text,
)
from shadowkernel.kbformat import load_scenario, parse_scenario
from shadowkernel.kbformat.documents import InterestTemplate
from shadowkernel.kbformat.proofs import model_to_proof
from shadowkernel.logic import normalize
from shadowkernel.reasoner import check_mixed_proof

ROBERT, T1, T2 = SIG.const("robert"), SIG.const("t1"), SIG.const("t2")


def fresh():
    return AgentState(signature=SIG.copy(), learner=ROBERT)


def test_ingest_adds_percept_and_advances_clock():
    st = ingest_percept(fresh(), ROBERT, T1, F("(Red a)"))
    assert st.kb == [("percept1", F("(P robert t1 (Red a))"))]
    assert st.clock == T1 and st.strengths["percept1"] == 5


def test_ingest_in_the_past_is_refused():
    st = ingest_percept(fresh(), ROBERT, T2, F("(Red a)"))
    with pytest.raises(ClockRegression):
        ingest_percept(st, ROBERT, T1, F("(Blue a)"))


def test_same_moment_percepts_keep_order():
    st = ingest_percept(fresh(), ROBERT, T1, F("(Red a)"))
    st = ingest_percept(st, ROBERT, T1, F("(Blue a)"))
    assert [f for _, f in st.kb] == [F("(P robert t1 (Red a))"), F("(P robert t1 (Blue a))")]


def test_empty_queue_step_only_regenerates():
    st = fresh()
    st.templates = [InterestTemplate(F("(Red a)"))]
    out = step(st, AgentConfig())
    assert out.kb == st.kb and out.transcript == []
    assert [i.query for i in out.queue] == [F("(Red a)")]


def test_step_learns_and_rechecks():
    st = ingest_percept(fresh(), ROBERT, T1, F("(Red a)"))
    st.templates = [InterestTemplate(F("(K robert t1 (Red a))"))]
    st.world = list(st.world)
    st = step(regenerate(st, AgentConfig()), AgentConfig())
    (entry,) = st.transcript
    assert entry.proposition == F("(K robert t1 (Red a))") and entry.level == 5
    assert check_mixed_proof(entry.proof, st.kb[:-1], entry.proposition)
    assert st.kb[-1] == ("learned1", entry.proposition)
    prov = entry.provenance()
    assert list(prov) == ["interest", "query", "proof", "judgment"]


def test_failed_queries_are_retried_once_then_dropped():
    st = fresh()
    st.templates = [InterestTemplate(F("Rainy"))]
    cfg = AgentConfig(retries=1)
    st = regenerate(st, cfg)
    st = step(st, cfg)
    assert st.queue == []   # KB unchanged, so no retry yet
    st = ingest_percept(st, ROBERT, T1, F("(Red a)"))
    st = regenerate(st, cfg)
    assert [i.query for i in st.queue] == [F("Rainy")]
    st = step(st, cfg)
    st = ingest_percept(st, ROBERT, T1, F("(Blue a)"))
    assert regenerate(st, cfg).queue == []
    assert sum("query Rainy" in line for line in st.log) == 2


def test_gettier_scenario_learns_h_at_level_one():
    scn = load_scenario(data_path("gettier.scn"))
    tr = run_scenario(scn)
    assert tr.matched
    (entry,) = tr.entries
    assert entry.proposition == F("(or (OwnsFord jones) (In brown barcelona))", scn.kb.signature)
    assert entry.level == 1
    assert [lab for lab, _ in entry.proof.assumptions] == ["memory", "induction", "percept1"]
    assert all(e.level < 3 for e in tr.entries)
    # the other two disjunctions are believed on the same argument but fail the truth leg
    rejected = {line.split("query ")[1].split(" ->")[0] for line in tr.log if "not knowledge (truth)" in line}
    assert rejected == {"(or (OwnsFord jones) (In brown boston))", "(or (OwnsFord jones) (In brown brest-litovsk))"}


def test_gettier_with_every_disjunct_true_learns_all_three():
    text = data_path("gettier.scn").read_text().replace(
        "(world whereabouts (In brown barcelona))",
        "(world w1 (In brown boston)) (world w2 (In brown barcelona)) (world w3 (In brown brest-litovsk))")
    text = text.replace("(expect (or (OwnsFord jones) (In brown barcelona)) 1)", "")
    tr = run_scenario(parse_scenario(text), strict=False)
    assert sorted(e.level for e in tr.entries) == [1, 1, 1]


def test_gettier_level_follows_premise_strength():
    text = data_path("gettier.scn").read_text().replace("(strength induction 1)", "(strength induction 2)")
    text = text.replace("(In brown barcelona)) 1)", "(In brown barcelona)) 2)")
    tr = run_scenario(parse_scenario(text))
    assert [e.level for e in tr.entries] == [2]


def test_dinner_party_learns_three_targets():
    scn = load_scenario(data_path("dinner_party.scn"))
    tr = run_scenario(scn)
    sig = scn.kb.signature
    want = [F(s, sig) for s in ("(B robert t1 (Wealthy host))", "(B host t1 (B robert t1 (Wealthy host)))",
                                "(B robert t1 (B host t1 (B robert t1 (Wealthy host))))")]
    assert [normalize(e.proposition) for e in tr.entries] == [normalize(w) for w in want]
    kb = dict(initial_state(scn).kb)
    for e in tr.entries:
        assert e.level == 5
        assert e.proof.goal == e.proposition
    assert tr.wall_time < 10
    assert set(kb) <= {lab for lab, _ in tr.state.kb}


def test_unprovable_expectation_raises():
    text = data_path("gettier.scn").read_text() + "\n(expect (In brown boston) 1)\n"
    with pytest.raises(ExpectationMismatch) as exc:
        run_scenario(parse_scenario(text))
    assert exc.value.missing == ["(In brown boston) at level 1"]


def test_lenient_mode_ignores_unexpected_learnings():
    text = data_path("gettier.scn").read_text().replace("(expect (or (OwnsFord jones) (In brown barcelona)) 1)", "")
    scn = parse_scenario(text)
    with pytest.raises(ExpectationMismatch) as exc:
        run_scenario(scn)
    assert exc.value.extra and not exc.value.missing
    assert run_scenario(scn, strict=False).matched


def test_learning_is_monotone_and_checked():
    scn = load_scenario(data_path("dinner_party.scn"))
    tr = run_scenario(scn)
    kb = tr.state.kb
    for e in tr.entries:
        pos = next(i for i, (lab, _) in enumerate(kb) if lab == e.label)
        assert check_mixed_proof(e.proof, kb[:pos], e.proposition)
    steps = [e.step for e in tr.entries]
    assert steps == sorted(steps)


def test_replay_is_deterministic():
    scn = load_scenario(data_path("dinner_party.scn"))
    a, b = run_scenario(scn), run_scenario(scn)
    assert transcript_text(a) == transcript_text(b)
    assert transcript_json(a, "7") == transcript_json(b, "7")


def test_transcript_formats():
    tr = run_scenario(load_scenario(data_path("gettier.scn")))
    text = transcript_text(tr, "42")
    assert text.startswith(TRANSCRIPT_HEADER + "\n")
    assert "(seed 42)" in text.splitlines() and "(verdict match)" in text.splitlines()
    data = json.loads(transcript_json(tr, "42"))
    assert data["format"] == TRANSCRIPT_HEADER and data["seed"] == "42"
    (entry,) = data["learned"]
    assert entry["level"] == 1
    proof, _ = model_to_proof(entry["justification"])
    assert check_mixed_proof(proof, tr.state.kb[:-1], tr.entries[0].proposition)
