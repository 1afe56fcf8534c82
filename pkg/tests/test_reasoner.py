import random
from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from helpers import F, forward_provable, random_sequent
from shadowkernel.fol import ResourceLimits, Status, prove_fol
from shadowkernel.fol.checker import check_fol_proof
from shadowkernel.logic import normalize
from shadowkernel.reasoner import MixedProof, Outcome, ReasonerConfig, check_mixed_proof, prove
from shadowkernel.schemata import ExpansionPolicy, expand
from shadowkernel.shadow import level

def test_goal_in_premises_needs_no_expansion():
    r = prove([F("(K alice t1 Rainy)")], F("(K alice t1 Rainy)"))
    assert r.proved and r.rounds == 0 and r.proof.rounds == ()


def test_knowledge_is_factive_after_one_round():
    gamma = [F("(K alice t1 (Red a))")]
    r = prove(gamma, F("(Red a)"))
    assert r.proved and r.rounds == 1
    assert r.proof.schemata_used() == ["R4"]
    assert check_mixed_proof(r.proof, gamma, F("(Red a)"))


def test_perception_becomes_knowledge_through_r1_r3_r4():
    gamma = [F("(P robert t1 (Red a))")]
    cfg = ReasonerConfig(policy=ExpansionPolicy(enabled=("R1", "R3", "R4"), r3_depth=1, lift=False))
    r = prove(gamma, F("(K robert t1 (Red a))"), cfg)
    assert r.proved
    assert set(r.proof.schemata_used()) == {"R1", "R3", "R4"}
    assert check_mixed_proof(r.proof, gamma, F("(K robert t1 (Red a))"))


def test_unprovable_goal_fails_at_fixpoint():
    gamma = [F("(K alice t1 Rainy)")]
    cfg = ReasonerConfig(policy=ExpansionPolicy(d_max=2))
    r = prove(gamma, F("Sunny"), cfg)
    assert r.outcome is Outcome.FAIL
    # the final set admits no further expansion
    again = expand(r.final_gamma, cfg.policy, goal=F("Sunny"))
    assert {normalize(f) for f in again.gamma} == {normalize(f) for f in r.final_gamma}
    assert "fixpoint" in r.trace[-1]


def test_resource_out_is_reported_not_fail():
    gamma = [F("(forall (x Object) (implies (Red x) (Red (succ x))))"), F("(Red a)")]
    cfg = ReasonerConfig(limits=ResourceLimits(max_clauses=10))
    assert prove(gamma, F("(Blue a)"), cfg).outcome is Outcome.RESOURCE_OUT


def test_trace_alternates_first_order_calls_and_expansions():
    r = prove([F("(K alice t1 (K bob t1 (Red a)))")], F("(Red a)"))
    assert r.proved
    calls = [line for line in r.trace if "first-order call" in line]
    expansions = [line for line in r.trace if "expanded by" in line]
    assert len(calls) == r.rounds + 1 and len(expansions) == r.rounds
    order = ["call" if "first-order" in line else "expand" for line in r.trace if "round" in line]
    assert order == ["call", "expand"] * r.rounds + ["call"]


def test_checker_rejects_deleted_expansion():
    gamma = [F("(K alice t1 (K bob t1 (Red a)))")]
    r = prove(gamma, F("(Red a)"))
    assert len(r.proof.rounds) == 2
    bad = replace(r.proof, rounds=r.proof.rounds[1:])
    v = check_mixed_proof(bad, gamma, F("(Red a)"))
    assert not v and "round 0" in v.where


def test_checker_rejects_corrupted_shadow_table():
    gamma = [F("(implies (K alice t1 Rainy) (Red a))"), F("(K alice t1 Rainy)")]
    r = prove(gamma, F("(Red a)"))
    seg = r.proof.final
    name = next(iter(seg.atoms))
    atoms = dict(seg.atoms)
    atoms[name] = F("(K bob t1 Rainy)")
    bad = replace(r.proof, final=replace(seg, atoms=atoms))
    v = check_mixed_proof(bad, gamma, F("(Red a)"))
    assert not v
    assert f"atom {name}" in v.where


def test_checker_rejects_wrong_goal_and_foreign_assumption():
    gamma = [F("(Red a)")]
    r = prove(gamma, F("(or (Red a) Rainy)"))
    assert not check_mixed_proof(r.proof, gamma, F("Rainy"))
    assert not check_mixed_proof(r.proof, [F("(Red b)")], F("(or (Red a) Rainy)"))


def test_proof_keeps_only_used_assumptions():
    gamma = [("used", F("(Red a)")), ("noise", F("(Blue b)"))]
    r = prove(gamma, F("(or (Red a) Cold)"))
    assert [lab for lab, _ in r.proof.assumptions] == ["used"]


def test_terminal_segment_is_first_order_over_the_shadowed_signature():
    gamma = [F("(K alice t1 (B bob t1 Rainy))"), F("(implies (B bob t1 Rainy) (Red a))")]
    r = prove(gamma, F("(Red a)"))
    seg = r.proof.final
    assert all(level(f) <= 1 for f in seg.shadowed_premises + (seg.shadowed_goal,))
    assert check_fol_proof(seg.proof, list(seg.shadowed_premises), seg.shadowed_goal)


def test_config_options_round_trip_and_validation():
    cfg = ReasonerConfig(time_ms=1234, recursion_depth=1)
    assert ReasonerConfig().with_options(cfg.to_options()) == cfg
    with pytest.raises(ValueError):
        ReasonerConfig(time_ms=0)


@settings(max_examples=60)
@given(st.randoms(use_true_random=False))
def test_conservative_over_pure_first_order(rng):
    if rng.random() < 0.5:
        premises, goal, _ = random_sequent(rng)
    else:
        premises, goal = forward_provable(rng)
    fol = prove_fol(premises, goal)
    r = prove(premises, goal)
    expected = {Status.PROVED: Outcome.PROVED, Status.NO: Outcome.FAIL, Status.RESOURCE_OUT: Outcome.RESOURCE_OUT}
    assert r.outcome is expected[fol.status]


def test_deterministic_under_fixed_config():
    gamma = [F("(K alice t1 (K bob t1 (Red a)))"), F("(C t0 (implies (Red a) Cold))")]
    a = prove(gamma, F("Cold"))
    b = prove(gamma, F("Cold"))
    assert a.outcome == b.outcome and a.proof == b.proof and a.trace == b.trace


def test_proved_implies_checked():
    rng = random.Random(3)
    for _ in range(30):
        premises, goal = forward_provable(rng)
        modal = [F("(K alice t1 (Red a))")]
        r = prove(premises + modal, goal)
        assert r.proved and isinstance(r.proof, MixedProof)
        assert check_mixed_proof(r.proof, premises + modal, goal)
