"""Level classification, atomization and shadowing of modal formulas.

Shadowing to level ``l`` replaces, simultaneously, every outermost
sub-formula whose level exceeds ``l`` by a propositional atom. Atoms are
minted by a :class:`ShadowMap` keyed on alpha-normal forms, so
alpha-equivalent formulas always receive the same atom.

Atoms must be zero-ary. A sub-formula with variables bound outside of it
cannot be atomized on its own; shadowing then atomizes the smallest
enclosing quantified formula that is closed.
"""

from __future__ import annotations

from typing import Iterable

from .logic.normal import normalize
from .logic.signature import SHADOW_PREFIX
from .logic.syntax import (
    QUANTIFIERS,
    Atom,
    Formula,
    children,
    free_vars,
    is_modal,
    rebuild,
    subformulas,
)

ATOM_PREFIX = SHADOW_PREFIX + "A"


def level(phi: Formula) -> int:
    """0 purely propositional, 1 first-order, 2 anything with a modal operator."""
    out = 0
    for node in subformulas(phi):
        if is_modal(node):
            return 2
        if isinstance(node, QUANTIFIERS) or (isinstance(node, Atom) and node.args):
            out = 1
    return out


def _root_level(phi: Formula) -> int:
    """Level contributed by the root operator alone."""
    if is_modal(phi):
        return 2
    if isinstance(phi, QUANTIFIERS) or (isinstance(phi, Atom) and phi.args):
        return 1
    return 0


def is_shadow_atom(phi: Formula) -> bool:
    return isinstance(phi, Atom) and not phi.args and phi.pred.startswith(ATOM_PREFIX)


class ShadowMap:
    """Bidirectional map between normalized formulas and fresh propositional atoms."""

    def __init__(self) -> None:
        self._atom_of: dict[Formula, Atom] = {}
        self._formula_of: dict[str, Formula] = {}
        self._counter = 0

    def __len__(self) -> int:
        return len(self._formula_of)

    def __contains__(self, name: str) -> bool:
        return name in self._formula_of

    def atomize(self, phi: Formula) -> Atom:
        key = normalize(phi)
        atom = self._atom_of.get(key)
        if atom is None:
            self._counter += 1
            atom = Atom(f"{ATOM_PREFIX}{self._counter}")
            self._atom_of[key] = atom
            self._formula_of[atom.pred] = key
        return atom

    def formula_of(self, atom: Atom | str) -> Formula:
        name = atom if isinstance(atom, str) else atom.pred
        return self._formula_of[name]

    def items(self):
        return self._formula_of.items()

    def slice(self, atoms: Iterable[str]) -> dict[str, Formula]:
        """The entries needed to expand ``atoms``, including atoms nested in them."""
        out: dict[str, Formula] = {}
        todo = list(atoms)
        while todo:
            name = todo.pop()
            if name in out or name not in self._formula_of:
                continue
            out[name] = self._formula_of[name]
            todo.extend(atom_names(out[name]))
        return dict(sorted(out.items(), key=lambda kv: int(kv[0][len(ATOM_PREFIX):])))

    def unshadow(self, phi: Formula) -> Formula:
        return unshadow(phi, self._formula_of)


def atom_names(phi: Formula) -> list[str]:
    seen: dict[str, None] = {}
    for node in subformulas(phi):
        if is_shadow_atom(node):
            seen.setdefault(node.pred)
    return list(seen)


def unshadow(phi: Formula, table: dict[str, Formula]) -> Formula:
    """Replace shadow atoms by the formulas they stand for (recursively)."""
    if is_shadow_atom(phi):
        if phi.pred not in table:
            return phi
        return unshadow(table[phi.pred], table)
    kids = children(phi)
    if not kids:
        return phi
    return rebuild(phi, tuple(unshadow(k, table) for k in kids))


def atomize(phi: Formula, m: ShadowMap) -> Atom:
    return m.atomize(phi)


_OPEN = object()


def shadow(phi: Formula, l: int, m: ShadowMap) -> Formula:
    """Shadow ``phi`` down to level ``l`` using (and extending) ``m``."""
    if l not in (0, 1, 2):
        raise ValueError(f"shadow level must be 0, 1 or 2, got {l}")
    if level(phi) <= l:
        return phi
    out = _shadow(phi, l, m)
    if out is _OPEN:
        # an open formula at top level is taken as a unit
        return m.atomize(phi)
    return out


def _shadow(phi: Formula, l: int, m: ShadowMap):
    if level(phi) <= l:
        return phi
    if _root_level(phi) > l:
        return _OPEN if free_vars(phi) else m.atomize(phi)
    kids = []
    for k in children(phi):
        r = _shadow(k, l, m)
        if r is _OPEN:
            return _OPEN if free_vars(phi) else m.atomize(phi)
        kids.append(r)
    return rebuild(phi, tuple(kids))


def shadow_set(gamma: Iterable[Formula], l: int, m: ShadowMap) -> list[Formula]:
    """Element-wise shadowing with one shared map (order preserved)."""
    return [shadow(phi, l, m) for phi in gamma]
