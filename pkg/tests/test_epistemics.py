import pytest
from hypothesis import given, strategies as st

from helpers import F, SIG
from shadowkernel.epistemics import (
    KnowledgeRecord, NotKnowledge, TruthUndecidable, combine_strengths, judge_knowledge, justification_steps,
    strength_label,
)
from shadowkernel.fol import ResourceLimits
from shadowkernel.reasoner import ReasonerConfig, prove

levels = st.integers(min_value=-5, max_value=5)
ALICE = SIG.const("alice")


def test_labels():
    assert strength_label(5) == "certain"
    assert strength_label(4) == "overwhelmingly likely"
    assert strength_label(3) == "beyond reasonable doubt"
    assert strength_label(2) == "likely"
    assert strength_label(1) == "more likely than not"
    assert strength_label(0) == "counterbalanced"
    assert strength_label(-2) == "likely (negation)"


@pytest.mark.parametrize("bad", [6, -6, 1.0, True, "3"])
def test_label_rejects_out_of_range(bad):
    with pytest.raises(ValueError):
        strength_label(bad)


def test_combine_examples():
    assert combine_strengths([5, 5, 5]) == 5
    assert combine_strengths([5, 1, 5]) == 1
    with pytest.raises(ValueError):
        combine_strengths([])


@given(st.lists(levels, min_size=1), levels)
def test_weakest_link_monotonicity(steps, extra):
    before = combine_strengths(steps)
    after = combine_strengths(steps + [extra])
    if extra >= before:
        assert after == before
    else:
        assert after == extra


def _argument(kb, goal):
    r = prove(kb, goal)
    assert r.proved
    return r.proof


GETTIER_KB = [("f", F("(Red a)"))]   # stands in for "Jones owns a Ford"
H = F("(or (Red a) (Blue b))")


def test_knowledge_at_premise_level():
    proof = _argument(GETTIER_KB, H)
    rec = judge_knowledge(ALICE, H, proof, GETTIER_KB, [F("(Blue b)"), F("(not (Red a))")], strengths={"f": 1})
    assert isinstance(rec, KnowledgeRecord)
    assert rec.level == rec.belief_level == 1
    assert rec.truth and "more likely than not" in rec.describe()
    assert [lvl for _, lvl in justification_steps(proof, {"f": 1})] == [1, 5]


def test_truth_leg_fails_without_world_support():
    proof = _argument(GETTIER_KB, H)
    out = judge_knowledge(ALICE, H, proof, GETTIER_KB, [F("(not (Red a))")], strengths={"f": 1})
    assert isinstance(out, NotKnowledge) and out.leg == "truth"
    assert not out


def test_deductive_knowledge_from_certain_premises():
    kb = [("p", F("(forall (x Object) (implies (Red x) (Blue x)))")), ("q", F("(Red a)"))]
    goal = F("(Blue a)")
    rec = judge_knowledge(ALICE, goal, _argument(kb, goal), kb, [goal])
    assert rec.level == 5


def test_explicit_belief_caps_level():
    kb = [("q", F("(Red a)")), ("hunch", F("(B alice t1 (Red a))"))]
    rec = judge_knowledge(ALICE, F("(Red a)"), _argument(kb, F("(Red a)")), kb, [F("(Red a)")],
                          strengths={"hunch": 2})
    assert rec.level == 2 and rec.belief_source == "belief hunch"


def test_non_positive_belief_is_not_knowledge():
    proof = _argument(GETTIER_KB, H)
    out = judge_knowledge(ALICE, H, proof, GETTIER_KB, [H], strengths={"f": 0})
    assert out.leg == "belief"


def test_rejected_justification_is_not_knowledge():
    proof = _argument(GETTIER_KB, H)
    out = judge_knowledge(ALICE, H, proof, [("f", F("(Red b)"))], [H])
    assert out.leg == "justification"
    assert judge_knowledge(ALICE, H, None, GETTIER_KB, [H]).leg == "justification"


def test_truth_check_out_of_resources_raises():
    # the world set saturates forever on a goal it does not entail
    world = [F("(forall (x Object) (implies (Red x) (Red (succ x))))"), F("(Red a)")]
    kb = [("f", F("(Blue c)"))]
    cfg = ReasonerConfig(limits=ResourceLimits(max_clauses=3))
    with pytest.raises(TruthUndecidable):
        judge_knowledge(ALICE, F("(Blue c)"), _argument(kb, F("(Blue c)")), kb, world, cfg=cfg)


def test_timid_student_is_consistent():
    # believing at a low level that one knows at a high level derives no contradiction
    kb = [("k", F("(K alice t1 (Red a))")), ("b", F("(B alice t1 (K alice t1 (Red a)))"))]
    r = prove(kb, F("(and Rainy (not Rainy))"), ReasonerConfig(time_ms=3000))
    assert not r.proved
