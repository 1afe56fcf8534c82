"""Sort-respecting substitutions and capture-avoiding application."""

from __future__ import annotations

from collections.abc import Mapping
from typing import Iterable, Iterator

from .syntax import (
    QUANTIFIERS,
    Atom,
    Fn,
    Formula,
    Term,
    Var,
    children,
    free_vars,
    map_top_terms,
    rebuild,
    term_vars,
)


class SortMismatch(TypeError):
    """A binding whose term sort is not a subsort of the variable's sort."""


class Substitution(Mapping):
    """Immutable ``Var -> Term`` map.

    Construction checks sort compatibility; identity bindings are dropped.
    """

    __slots__ = ("_map",)

    def __init__(self, bindings: Mapping | Iterable[tuple[Var, Term]] = ()):
        items = bindings.items() if isinstance(bindings, Mapping) else bindings
        m: dict[Var, Term] = {}
        for v, t in items:
            if not isinstance(v, Var):
                raise TypeError(f"substitution domain must be variables, got {v!r}")
            if not t.sort.is_subsort_of(v.sort):
                raise SortMismatch(f"{v.name}:{v.sort} cannot be bound to {t} of sort {t.sort}")
            if t != v:
                m[v] = t
        self._map = m

    def __getitem__(self, v: Var) -> Term:
        return self._map[v]

    def __iter__(self) -> Iterator[Var]:
        return iter(self._map)

    def __len__(self) -> int:
        return len(self._map)

    def __hash__(self) -> int:
        return hash(frozenset(self._map.items()))

    def __eq__(self, other) -> bool:
        if isinstance(other, Substitution):
            return self._map == other._map
        return NotImplemented

    def __repr__(self) -> str:
        inner = ", ".join(f"{v.name}↦{t}" for v, t in self._map.items())
        return "{" + inner + "}"

    def apply_term(self, t: Term) -> Term:
        if isinstance(t, Var):
            return self._map.get(t, t)
        if isinstance(t, Fn):
            return Fn(t.symbol, tuple(self.apply_term(a) for a in t.args), t.sort)
        return t

    def compose(self, other: Substitution) -> Substitution:
        """``self`` then ``other``: x(self∘other) = (x self) other."""
        out = {v: other.apply_term(t) for v, t in self._map.items()}
        for v, t in other._map.items():
            out.setdefault(v, t)
        return Substitution(out)

    def without(self, vs: Iterable[Var]) -> Substitution:
        drop = set(vs)
        return Substitution((v, t) for v, t in self._map.items() if v not in drop)

    def range_vars(self) -> set[Var]:
        out: set[Var] = set()
        for t in self._map.values():
            out.update(term_vars(t))
        return out

    def is_idempotent(self) -> bool:
        return not (self.range_vars() & set(self._map))


EMPTY = Substitution()


def fresh_var(v: Var, avoid: set[str]) -> Var:
    name = v.name + "'"
    while name in avoid:
        name += "'"
    return Var(name, v.sort)


def substitute(phi: Formula, sigma: Mapping) -> Formula:
    """Capture-avoiding application of ``sigma`` to the free variables of ``phi``.

    Bound variables that would capture a variable of an inserted term are
    renamed by priming (``y`` becomes ``y'``).
    """
    if not isinstance(sigma, Substitution):
        sigma = Substitution(sigma)
    if not sigma:
        return phi
    return _subst(phi, sigma)


def _subst(phi: Formula, s: Substitution) -> Formula:
    fv = free_vars(phi)
    relevant = [v for v in s if v in fv]
    if not relevant:
        return phi
    if len(relevant) < len(s):
        s = Substitution((v, s[v]) for v in relevant)
    if isinstance(phi, QUANTIFIERS):
        v = phi.var
        inner = s.without([v])
        capture = set()
        for x in free_vars(phi.body):
            if x in inner:
                capture.update(term_vars(inner[x]))
        if v in capture:
            avoid = {u.name for u in capture} | {u.name for u in free_vars(phi.body)}
            avoid |= {u.name for u in inner}
            nv = fresh_var(v, avoid)
            body = _subst(phi.body, Substitution({v: nv}))
            return type(phi)(nv, _subst(body, inner))
        return type(phi)(v, _subst(phi.body, inner))
    if isinstance(phi, Atom):
        return map_top_terms(phi, s.apply_term)
    node = map_top_terms(phi, s.apply_term)
    return rebuild(node, tuple(_subst(k, s) for k in children(node)))
