import itertools

import pytest
from hypothesis import given, strategies as st

from helpers import SIG, F, fo_formulas, formulas, objc, rename_bound
from shadowkernel.logic import (
    ACTION, EVENT, OBJECT, Atom, Exists, Fn, Signature, SortMismatch, Substitution, Var, alpha_equal,
    normalize, substitute, well_sorted,
)
from shadowkernel.logic.sorts import AGENT, MOMENT
from shadowkernel.logic.syntax import free_vars, ground_terms, term_vars
from shadowkernel.logic.timeline import Timeline
from shadowkernel.logic.unify import unify

x, y, z = Var("x", OBJECT), Var("y", OBJECT), Var("z", OBJECT)
a, b = objc("a"), objc("b")


def f(*args):
    return Fn("pair", args, OBJECT) if len(args) == 2 else Fn("succ", args, OBJECT)


# ---------------------------------------------------------------- sorts


def test_builtin_sorts_and_action_is_event():
    for name in ("Agent", "Moment", "Event", "ActionType", "Action", "Fluent", "Boolean"):
        assert SIG.has_sort(name)
    assert ACTION.is_subsort_of(EVENT)
    assert not EVENT.is_subsort_of(ACTION)
    assert SIG.sort("Time") == SIG.sort("Moment")


def test_duplicate_sort_rejected():
    sig = Signature.dcec()
    sig.declare_sort("Place")
    with pytest.raises(ValueError):
        sig.declare_sort("Place")


# ---------------------------------------------------------------- substitute


def test_substitute_direct_binding():
    assert substitute(Atom("Sleepy", (x,)), {x: objc("jack")}) == F("(Sleepy jack)")


def test_substitute_leaves_bound_occurrence():
    phi = F("(forall (x Object) (Red x))")
    assert substitute(phi, {x: a}) == phi


def test_substitute_avoids_capture():
    phi = Exists(y, Atom("Rel", (x, y)))
    out = substitute(phi, {x: f(y)})
    # hand-renamed expectation: the bound y becomes y'
    y1 = Var("y'", OBJECT)
    assert out == Exists(y1, Atom("Rel", (f(y), y1)))
    assert y in free_vars(out)


def test_substitute_rejects_ill_sorted_binding():
    with pytest.raises(SortMismatch):
        Substitution({x: Var("m", MOMENT)})


def _open():
    sig = SIG.copy()
    sig.implicit = True
    return sig


small_subst = st.dictionaries(st.sampled_from([x, y]), st.sampled_from([a, b, f(a), f(z), z]), max_size=2)


@given(fo_formulas(), small_subst)
def test_substitution_idempotent_when_sigma_is(phi, m):
    sigma = Substitution(m)
    if not sigma.is_idempotent():
        return
    once = substitute(phi, sigma)
    assert substitute(once, sigma) == once


@given(formulas(), small_subst)
def test_substitution_output_is_well_sorted(phi, m):
    out = substitute(phi, Substitution(m))
    assert well_sorted(out, _open())


# ---------------------------------------------------------------- unify


def test_unify_textbook():
    s = unify(f(x, a), f(b, y))
    assert dict(s) == {x: b, y: a}


def test_unify_occurs_check():
    assert unify(x, f(x)) is None


def test_unify_shared_variable_clash():
    assert unify(f(x, x), f(a, b)) is None


def test_unify_sorts_pick_more_specific():
    ev = Var("e", EVENT)
    act = Var("act", ACTION)
    s = unify(ev, act)
    assert s is not None
    assert s.apply_term(ev).sort == ACTION or s.apply_term(act).sort == ACTION
    assert unify(Var("m", MOMENT), Var("g", AGENT)) is None


POOL_VARS = (x, y)


def _terms(depth):
    leaves = [a, b, x, y]
    if depth == 0:
        return leaves
    sub = _terms(depth - 1)
    return leaves + [f(t) for t in sub] + [f(s, t) for s in leaves for t in leaves]


def _ground(depth):
    leaves = [a, b]
    if depth == 0:
        return leaves
    sub = _ground(depth - 1)
    return leaves + [f(t) for t in sub] + [f(s, t) for s in leaves for t in leaves]


GROUND_POOL = _ground(2)
TERM_POOL = _terms(1)


def _brute_unifiers(s, t):
    """Every ground substitution over a finite pool that equalizes s and t."""
    out = []
    for vals in itertools.product(GROUND_POOL, repeat=len(POOL_VARS)):
        theta = Substitution(dict(zip(POOL_VARS, vals)))
        if theta.apply_term(s) == theta.apply_term(t):
            out.append(theta)
    return out


@given(st.sampled_from(TERM_POOL), st.sampled_from(TERM_POOL))
def test_unify_is_most_general_against_brute_force(s, t):
    sigma = unify(s, t)
    found = _brute_unifiers(s, t)
    if sigma is None:
        assert found == []
        return
    assert sigma.apply_term(s) == sigma.apply_term(t)
    assert sigma.is_idempotent()
    for theta in found:
        for v in POOL_VARS:
            assert theta.apply_term(sigma.apply_term(v)) == theta.apply_term(v)


def test_brute_force_pool_sanity():
    # the pool is rich enough to witness at least some unifiable and non-unifiable pairs
    assert _brute_unifiers(f(x, a), f(b, y))
    assert not _brute_unifiers(f(x, x), f(a, b))


# ---------------------------------------------------------------- normalize


def test_normalize_alpha_equivalent_quantifiers():
    assert normalize(F("(forall (x Object) (Red x))")) == normalize(F("(forall (y Object) (Red y))"))


def test_normalize_under_knowledge():
    p = F("(K alice t1 (forall (x Object) (Red x)))")
    q = F("(K alice t1 (forall (z Object) (Red z)))")
    assert normalize(p) == normalize(q)


def test_normalize_keeps_distinct_formulas_apart():
    assert normalize(F("(forall (x Object) (exists (y Object) (Rel x y)))")) != \
        normalize(F("(forall (x Object) (exists (y Object) (Rel y x)))"))


@given(formulas())
def test_normalize_idempotent(phi):
    assert normalize(normalize(phi)) == normalize(phi)


@given(formulas(depth=4))
def test_normalize_respects_renaming(phi):
    renamed = rename_bound(phi)
    assert normalize(renamed) == normalize(phi)
    assert alpha_equal(renamed, phi)


# ---------------------------------------------------------------- well_sorted


def test_well_sorted_holds():
    sig = SIG.copy()
    sig.declare_const("raining", "Fluent")
    sig.declare_const("walk", "ActionType")
    assert well_sorted(F("(holds raining t1)", sig), sig)
    bad = Atom("holds", (sig.const("t1"), sig.const("raining")))
    v = well_sorted(bad, sig)
    assert not v and v.where


def test_action_term_is_an_event():
    sig = SIG.copy()
    sig.declare_const("walk", "ActionType")
    phi = F("(happens (action alice walk) t1)", sig)
    assert well_sorted(phi, sig)
    assert phi.args[0].sort == ACTION


def test_undeclared_symbol_reported_with_location():
    v = well_sorted(Atom("Nope", (a,)), SIG)
    assert not v
    assert "Nope" in v.reason


@given(formulas())
def test_generated_formulas_are_well_sorted(phi):
    assert well_sorted(phi, SIG)
    assert all(t.sort in (OBJECT, AGENT, MOMENT) for t in ground_terms(phi) if not list(term_vars(t)))


# ---------------------------------------------------------------- timeline


def test_indexed_moments_are_ordered():
    tl = Timeline()
    t1, t2 = SIG.const("t1"), SIG.const("t2")
    assert tl.compare(t1, t2) == "<"
    assert tl.leq(t2, t1) is False


def test_prior_facts_order_named_moments():
    sig = SIG.copy()
    dawn, dusk = sig.declare_const("dawn", "Moment"), sig.declare_const("dusk", "Moment")
    tl = Timeline.from_formulas([F("(prior dawn dusk)", sig)])
    assert tl.compare(dawn, dusk) == "<"
    assert tl.compare(dusk, dawn) == ">"
    assert tl.compare(dawn, sig.const("t1")) is None
