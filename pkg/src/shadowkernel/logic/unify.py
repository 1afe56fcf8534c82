"""Sorted syntactic unification (Robinson style, with occurs check).

Sorts form a forest, so two variables unify only when their sorts are
comparable; the binding keeps the more specific sort.
"""

from __future__ import annotations

from typing import Iterable

from .syntax import Atom, Const, Fn, Term, Var
from .subst import Substitution


def _walk(t: Term, b: dict[Var, Term]) -> Term:
    while isinstance(t, Var) and t in b:
        t = b[t]
    return t


def _occurs(v: Var, t: Term, b: dict[Var, Term]) -> bool:
    t = _walk(t, b)
    if t == v:
        return True
    if isinstance(t, Fn):
        return any(_occurs(v, a, b) for a in t.args)
    return False


def _bind(v: Var, t: Term, b: dict[Var, Term]) -> bool:
    if isinstance(t, Var):
        if t.sort.is_subsort_of(v.sort):
            b[v] = t
            return True
        if v.sort.is_subsort_of(t.sort):
            b[t] = v
            return True
        return False
    if not t.sort.is_subsort_of(v.sort):
        return False
    if _occurs(v, t, b):
        return False
    b[v] = t
    return True


def _unify(pairs: list[tuple[Term, Term]], b: dict[Var, Term]) -> bool:
    while pairs:
        s, t = pairs.pop()
        s, t = _walk(s, b), _walk(t, b)
        if s == t:
            continue
        if isinstance(s, Var):
            if not _bind(s, t, b):
                return False
        elif isinstance(t, Var):
            if not _bind(t, s, b):
                return False
        elif isinstance(s, Fn) and isinstance(t, Fn):
            if s.symbol != t.symbol or len(s.args) != len(t.args) or s.sort != t.sort:
                return False
            pairs.extend(zip(s.args, t.args))
        else:
            # distinct constants, or constant vs function
            return False
    return True


def _resolve(b: dict[Var, Term]) -> Substitution:
    def full(t: Term) -> Term:
        t = _walk(t, b)
        if isinstance(t, Fn):
            return Fn(t.symbol, tuple(full(a) for a in t.args), t.sort)
        return t

    return Substitution((v, full(v)) for v in b)


def unify_all(pairs: Iterable[tuple[Term, Term]], start: Substitution | None = None) -> Substitution | None:
    """Simultaneous most general unifier of all pairs, or None."""
    b: dict[Var, Term] = dict(start.items()) if start else {}
    if not _unify(list(pairs)[::-1], b):
        return None
    return _resolve(b)


def unify(t1: Term, t2: Term) -> Substitution | None:
    """Most general sorted unifier of two terms; None on clash, occurs check or sort conflict."""
    return unify_all([(t1, t2)])


def unify_atoms(a: Atom, b: Atom, start: Substitution | None = None) -> Substitution | None:
    if a.pred != b.pred or len(a.args) != len(b.args):
        return None
    return unify_all(zip(a.args, b.args), start)


def match_term(pattern: Term, target: Term, b: dict[Var, Term]) -> bool:
    """One-way matching: extend ``b`` so that pattern·b == target."""
    if isinstance(pattern, Var):
        if pattern in b:
            return b[pattern] == target
        if not target.sort.is_subsort_of(pattern.sort):
            return False
        b[pattern] = target
        return True
    if isinstance(pattern, Const):
        return pattern == target
    if not isinstance(target, Fn) or target.symbol != pattern.symbol or len(target.args) != len(pattern.args):
        return False
    return all(match_term(p, t, b) for p, t in zip(pattern.args, target.args))
