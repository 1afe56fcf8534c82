"""Clause normal form: NNF, standardize apart, Skolemize, distribute."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable

from ..logic.signature import SKOLEM_PREFIX
from ..logic.subst import Substitution, substitute
from ..logic.syntax import (
    And,
    Atom,
    Const,
    Exists,
    Fn,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Term,
    Var,
    free_vars,
    is_modal,
    sexpr,
    subformulas,
    term_size,
    term_vars,
)


class ModalLeak(RuntimeError):
    """A modal operator reached the first-order layer (shadowing bug)."""


@dataclass(frozen=True, slots=True)
class Literal:
    positive: bool
    atom: Atom

    def negate(self) -> Literal:
        return Literal(not self.positive, self.atom)

    def apply(self, s: Substitution) -> Literal:
        if not self.atom.args:
            return self
        return Literal(self.positive, Atom(self.atom.pred, tuple(s.apply_term(a) for a in self.atom.args)))

    def vars(self) -> Iterable[Var]:
        for a in self.atom.args:
            yield from term_vars(a)

    def weight(self) -> int:
        return 1 + sum(term_size(a) for a in self.atom.args)

    def __str__(self) -> str:
        return sexpr(self.atom) if self.positive else f"(not {sexpr(self.atom)})"

    __repr__ = __str__


def lit_key(lit: Literal) -> str:
    return str(lit)


def make_clause(lits: Iterable[Literal]) -> tuple[Literal, ...]:
    """Canonical clause: duplicates removed, literals in a fixed order."""
    return tuple(sorted(set(lits), key=lit_key))


def is_tautology(clause: tuple[Literal, ...]) -> bool:
    seen = set(clause)
    return any(l.negate() in seen for l in clause)


def clause_vars(clause: Iterable[Literal]) -> list[Var]:
    seen: dict[Var, None] = {}
    for lit in clause:
        for v in lit.vars():
            seen.setdefault(v)
    return list(seen)


def clause_str(clause: tuple[Literal, ...]) -> str:
    if not clause:
        return "⊥"
    return " ∨ ".join(map(str, clause))


# ---------------------------------------------------------------- NNF


def nnf(phi: Formula, positive: bool = True) -> Formula:
    if is_modal(phi):
        raise ModalLeak(f"modal operator in first-order input: {phi}")
    if isinstance(phi, Atom):
        return phi if positive else Not(phi)
    if isinstance(phi, Not):
        return nnf(phi.arg, not positive)
    if isinstance(phi, And):
        cls = And if positive else Or
        return cls(nnf(phi.left, positive), nnf(phi.right, positive))
    if isinstance(phi, Or):
        cls = Or if positive else And
        return cls(nnf(phi.left, positive), nnf(phi.right, positive))
    if isinstance(phi, Implies):
        if positive:
            return Or(nnf(phi.left, False), nnf(phi.right, True))
        return And(nnf(phi.left, True), nnf(phi.right, False))
    if isinstance(phi, Iff):
        a, b = phi.left, phi.right
        if positive:
            return And(Or(nnf(a, False), nnf(b, True)), Or(nnf(a, True), nnf(b, False)))
        return Or(And(nnf(a, True), nnf(b, False)), And(nnf(a, False), nnf(b, True)))
    if isinstance(phi, Forall):
        cls = Forall if positive else Exists
        return cls(phi.var, nnf(phi.body, positive))
    if isinstance(phi, Exists):
        cls = Exists if positive else Forall
        return cls(phi.var, nnf(phi.body, positive))
    raise TypeError(f"not a formula: {phi!r}")


# ---------------------------------------------------------------- clausifier


class Clausifier:
    """Stateful only in its Skolem counter, so one instance per problem gives distinct symbols."""

    def __init__(self, reserved: Iterable[str] = ()):
        self._reserved = set(reserved)
        self._sk = 0
        self._var = 0

    def _fresh_skolem(self) -> str:
        while True:
            name = f"{SKOLEM_PREFIX}{self._sk}"
            self._sk += 1
            if name not in self._reserved:
                return name

    def _fresh_var(self, v: Var) -> Var:
        self._var += 1
        base = v.name.split("_", 1)[0] if not v.name.startswith("_") else "v"
        return Var(f"{base or 'v'}_{self._var}", v.sort)

    def skolemize(self, phi: Formula, universals: tuple[Var, ...] = ()) -> Formula:
        """Input in NNF; removes existentials and renames universals apart."""
        if isinstance(phi, (Atom, Not)):
            return phi
        if isinstance(phi, (And, Or)):
            return type(phi)(self.skolemize(phi.left, universals), self.skolemize(phi.right, universals))
        if isinstance(phi, Forall):
            nv = self._fresh_var(phi.var)
            body = substitute(phi.body, Substitution({phi.var: nv}))
            return Forall(nv, self.skolemize(body, universals + (nv,)))
        if isinstance(phi, Exists):
            deps = tuple(u for u in universals if u in free_vars(phi))
            name = self._fresh_skolem()
            if deps:
                witness: Term = Fn(name, deps, phi.var.sort)
            else:
                witness = Const(name, phi.var.sort)
            body = substitute(phi.body, Substitution({phi.var: witness}))
            return self.skolemize(body, universals)
        raise TypeError(f"unexpected node in NNF: {phi!r}")

    def clauses(self, phi: Formula) -> list[tuple[Literal, ...]]:
        # free variables are read universally
        for v in sorted(free_vars(phi), key=lambda v: v.name):
            phi = Forall(v, phi)
        matrix = self.skolemize(nnf(phi))
        out: list[tuple[Literal, ...]] = []
        seen = set()
        for lits in _cnf(matrix):
            c = make_clause(lits)
            if is_tautology(c) or c in seen:
                continue
            seen.add(c)
            out.append(c)
        return out


def _cnf(phi: Formula) -> list[list[Literal]]:
    if isinstance(phi, Forall):
        return _cnf(phi.body)
    if isinstance(phi, Atom):
        return [[Literal(True, phi)]]
    if isinstance(phi, Not):
        return [[Literal(False, phi.arg)]]
    if isinstance(phi, And):
        return _cnf(phi.left) + _cnf(phi.right)
    if isinstance(phi, Or):
        left, right = _cnf(phi.left), _cnf(phi.right)
        return [a + b for a, b in product(left, right)]
    raise TypeError(f"unexpected node in CNF conversion: {phi!r}")


def symbols_in(formulas: Iterable[Formula]) -> set[str]:
    names = set()
    for phi in formulas:
        for node in subformulas(phi):
            if isinstance(node, Atom):
                for a in node.args:
                    stack = [a]
                    while stack:
                        t = stack.pop()
                        if isinstance(t, Const):
                            names.add(t.name)
                        elif isinstance(t, Fn):
                            names.add(t.symbol)
                            stack.extend(t.args)
    return names


def clausify(phi: Formula) -> list[tuple[Literal, ...]]:
    """Clauses of a single level-≤1 formula (equisatisfiable)."""
    return Clausifier(symbols_in([phi])).clauses(phi)


def clausify_problem(premises: list[Formula], goal: Formula | None) -> list[tuple[int, tuple[Literal, ...]]]:
    """Clauses of ``premises ∪ {¬goal}``, each tagged with its source formula index.

    The negated goal has index ``len(premises)``. Deterministic: the same
    input always yields the same clauses and Skolem names.
    """
    formulas = list(premises) + ([Not(goal)] if goal is not None else [])
    cz = Clausifier(symbols_in(formulas))
    out = []
    for i, phi in enumerate(formulas):
        for c in cz.clauses(phi):
            out.append((i, c))
    return out
