import pytest
from hypothesis import given, strategies as st

from helpers import F, formulas, rename_bound
from shadowkernel.logic import Atom, normalize
from shadowkernel.logic.syntax import And, Implies, prop, subformulas
from shadowkernel.shadow import ShadowMap, atomize, is_shadow_atom, level, shadow, shadow_set

levels = st.sampled_from([0, 1, 2])


def test_level_examples():
    assert level(prop("Rainy")) == 0
    assert level(F("(Sleepy jack)")) == 1
    assert level(F("(K alice t1 (Sleepy jack))")) == 2
    assert level(F("(forall (x Object) Rainy)")) == 1
    assert level(F("(and Rainy (not (B alice t0 Sunny)))")) == 2


def test_atomize_is_stable_and_injective():
    m = ShadowMap()
    k = F("(K alice t1 Rainy)")
    assert atomize(k, m) == atomize(k, m)
    assert atomize(k, m) != atomize(F("(B alice t1 Rainy)"), m)
    assert len(m) == 2


def test_atomize_merges_alpha_variants():
    m = ShadowMap()
    p = F("(K alice t1 (forall (x Object) (Red x)))")
    q = F("(K alice t1 (forall (y Object) (Red y)))")
    assert atomize(p, m) == atomize(q, m)


def test_shadow_replaces_modal_conjunct():
    m = ShadowMap()
    k = F("(K alice t1 (Sleepy jack))")
    out = shadow(And(k, F("(Red c)")), 1, m)
    assert out == And(atomize(k, m), F("(Red c)"))


def test_shadow_leaves_low_level_formulas():
    m = ShadowMap()
    assert shadow(F("(Sleepy jack)"), 1, m) == F("(Sleepy jack)")
    k = F("(K alice t1 Rainy)")
    assert shadow(k, 2, m) == k
    assert len(m) == 0


def test_shadow_set_shares_atoms():
    m = ShadowMap()
    k = F("(K alice t1 Rainy)")
    out = shadow_set([k, Implies(k, prop("Cold"))], 1, m)
    atom = atomize(k, m)
    assert out == [atom, Implies(atom, prop("Cold"))]
    assert shadow_set([], 1, m) == []
    pure = [F("(Red a)"), F("(forall (x Object) (Blue x))")]
    assert shadow_set(pure, 1, m) == pure


def test_open_modal_body_atomizes_closed_enclosure():
    m = ShadowMap()
    phi = F("(forall (x Object) (B alice t1 (Red x)))")
    out = shadow(phi, 1, m)
    assert is_shadow_atom(out)
    assert m.formula_of(out) == normalize(phi)
    mixed = F("(and (Blue a) (exists (x Object) (and (Red x) (K bob t0 (Blue x)))))")
    out = shadow(mixed, 1, m)
    assert isinstance(out, And) and out.left == F("(Blue a)") and is_shadow_atom(out.right)


@given(formulas(depth=4), levels)
def test_shadow_bounds_level(phi, lv):
    assert level(shadow(phi, lv, ShadowMap())) <= lv


@given(formulas(depth=4), levels)
def test_shadow_idempotent(phi, lv):
    m = ShadowMap()
    once = shadow(phi, lv, m)
    assert shadow(once, lv, m) == once


@given(formulas(depth=4), levels)
def test_shadow_preserves_low_level(phi, lv):
    if level(phi) <= lv:
        assert shadow(phi, lv, ShadowMap()) == phi


@given(formulas(depth=4), levels)
def test_unshadow_recovers_normal_form(phi, lv):
    m = ShadowMap()
    out = shadow(phi, lv, m)
    assert normalize(m.unshadow(out)) == normalize(phi)


@given(formulas(depth=4))
def test_atomize_alpha_invariant(phi):
    m = ShadowMap()
    assert atomize(phi, m) == atomize(rename_bound(phi), m)


@given(st.lists(formulas(depth=3), max_size=4))
def test_shared_map_depends_only_on_normal_forms(gamma):
    m1, m2 = ShadowMap(), ShadowMap()
    a = shadow_set(gamma, 1, m1)
    b = shadow_set([rename_bound(g) for g in gamma], 1, m2)
    atoms_a = [n.pred for g in a for n in subformulas(g) if is_shadow_atom(n)]
    atoms_b = [n.pred for g in b for n in subformulas(g) if is_shadow_atom(n)]
    assert atoms_a == atoms_b
    assert dict(m1.items()) == dict(m2.items())


def test_shadow_rejects_bad_level():
    with pytest.raises(ValueError):
        shadow(Atom("Rainy"), 3, ShadowMap())
