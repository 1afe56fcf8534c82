"""Sorted terms and DCEC formulas.

All nodes are immutable and hashable; hashes are cached because formulas are
used heavily as dictionary keys (shadow maps, premise sets).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Union

from .sorts import Sort


class Node:
    # _fv and _nf memoize free variables and the alpha-normal form
    __slots__ = ("_hash", "_fv", "_nf")

    def _cached_hash(self) -> int:
        try:
            return self._hash
        except AttributeError:
            h = hash((type(self).__name__,) + tuple(getattr(self, n) for n in self.__match_args__))
            object.__setattr__(self, "_hash", h)
            return h

    def __str__(self) -> str:
        return sexpr(self)

    def __repr__(self) -> str:
        return sexpr(self)


def _node(cls):
    cls = dataclass(frozen=True, slots=True, repr=False)(cls)
    cls.__hash__ = Node._cached_hash
    return cls


# ---------------------------------------------------------------- terms


@_node
class Var(Node):
    name: str
    sort: Sort


@_node
class Const(Node):
    name: str
    sort: Sort


@_node
class Fn(Node):
    symbol: str
    args: tuple
    sort: Sort


Term = Union[Var, Const, Fn]


def term_vars(t: Term) -> Iterator[Var]:
    if isinstance(t, Var):
        yield t
    elif isinstance(t, Fn):
        for a in t.args:
            yield from term_vars(a)


def is_ground(t: Term) -> bool:
    return next(term_vars(t), None) is None


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, Fn):
        for a in t.args:
            yield from subterms(a)


def term_size(t: Term) -> int:
    if isinstance(t, Fn):
        return 1 + sum(term_size(a) for a in t.args)
    return 1


# ---------------------------------------------------------------- formulas


class Formula(Node):
    __slots__ = ()


@_node
class Atom(Formula):
    pred: str
    args: tuple = ()


@_node
class Not(Formula):
    arg: Formula


@_node
class And(Formula):
    left: Formula
    right: Formula


@_node
class Or(Formula):
    left: Formula
    right: Formula


@_node
class Implies(Formula):
    left: Formula
    right: Formula


@_node
class Iff(Formula):
    left: Formula
    right: Formula


@_node
class Forall(Formula):
    var: Var
    body: Formula


@_node
class Exists(Formula):
    var: Var
    body: Formula


@_node
class Perceives(Formula):
    agent: Term
    time: Term
    body: Formula


@_node
class Knows(Formula):
    agent: Term
    time: Term
    body: Formula


@_node
class Believes(Formula):
    agent: Term
    time: Term
    body: Formula


@_node
class Desires(Formula):
    agent: Term
    time: Term
    body: Formula


@_node
class Intends(Formula):
    agent: Term
    time: Term
    body: Formula


@_node
class Common(Formula):
    time: Term
    body: Formula


@_node
class Says(Formula):
    """Communication from ``speaker`` to ``hearer``; ``hearer`` None is a public announcement."""

    speaker: Term
    hearer: Term | None
    time: Term
    body: Formula


@_node
class Ought(Formula):
    agent: Term
    time: Term
    body: Formula
    action: Formula  # (possibly negated) happens(action(a*, alpha), t')


BINARY = (And, Or, Implies, Iff)
QUANTIFIERS = (Forall, Exists)
AGENT_MODALS = (Perceives, Knows, Believes, Desires, Intends)
MODALS = AGENT_MODALS + (Common, Says, Ought)

OPERATOR_NAMES: dict[type, str] = {
    Not: "not", And: "and", Or: "or", Implies: "implies", Iff: "iff",
    Forall: "forall", Exists: "exists",
    Perceives: "P", Knows: "K", Believes: "B", Desires: "D", Intends: "I",
    Common: "C", Says: "S", Ought: "O",
}


def is_modal(phi: Formula) -> bool:
    return isinstance(phi, MODALS)


def children(phi: Formula) -> tuple[Formula, ...]:
    if isinstance(phi, Atom):
        return ()
    if isinstance(phi, Not):
        return (phi.arg,)
    if isinstance(phi, BINARY):
        return (phi.left, phi.right)
    if isinstance(phi, Ought):
        return (phi.body, phi.action)
    return (phi.body,)


def rebuild(phi: Formula, kids: tuple[Formula, ...]) -> Formula:
    """Copy of ``phi`` with its immediate sub-formulas replaced."""
    if isinstance(phi, Atom):
        return phi
    if isinstance(phi, Not):
        return phi if kids[0] is phi.arg else Not(kids[0])
    if isinstance(phi, BINARY):
        if kids[0] is phi.left and kids[1] is phi.right:
            return phi
        return type(phi)(kids[0], kids[1])
    if isinstance(phi, QUANTIFIERS):
        return phi if kids[0] is phi.body else type(phi)(phi.var, kids[0])
    if isinstance(phi, AGENT_MODALS):
        return phi if kids[0] is phi.body else type(phi)(phi.agent, phi.time, kids[0])
    if isinstance(phi, Common):
        return phi if kids[0] is phi.body else Common(phi.time, kids[0])
    if isinstance(phi, Says):
        return phi if kids[0] is phi.body else Says(phi.speaker, phi.hearer, phi.time, kids[0])
    if isinstance(phi, Ought):
        return Ought(phi.agent, phi.time, kids[0], kids[1])
    raise TypeError(f"not a formula: {phi!r}")


def top_terms(phi: Formula) -> tuple[Term, ...]:
    """Terms appearing directly at this node (not inside sub-formulas)."""
    if isinstance(phi, Atom):
        return phi.args
    if isinstance(phi, AGENT_MODALS) or isinstance(phi, Ought):
        return (phi.agent, phi.time)
    if isinstance(phi, Common):
        return (phi.time,)
    if isinstance(phi, Says):
        if phi.hearer is None:
            return (phi.speaker, phi.time)
        return (phi.speaker, phi.hearer, phi.time)
    return ()


def map_top_terms(phi: Formula, f: Callable[[Term], Term]) -> Formula:
    if isinstance(phi, Atom):
        return Atom(phi.pred, tuple(f(a) for a in phi.args)) if phi.args else phi
    if isinstance(phi, AGENT_MODALS):
        return type(phi)(f(phi.agent), f(phi.time), phi.body)
    if isinstance(phi, Ought):
        return Ought(f(phi.agent), f(phi.time), phi.body, phi.action)
    if isinstance(phi, Common):
        return Common(f(phi.time), phi.body)
    if isinstance(phi, Says):
        hearer = None if phi.hearer is None else f(phi.hearer)
        return Says(f(phi.speaker), hearer, f(phi.time), phi.body)
    return phi


def subformulas(phi: Formula) -> Iterator[Formula]:
    """Pre-order walk over every sub-formula, ``phi`` included."""
    stack = [phi]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def free_vars(phi: Formula) -> frozenset[Var]:
    try:
        return phi._fv
    except AttributeError:
        pass
    if isinstance(phi, QUANTIFIERS):
        fv = free_vars(phi.body) - {phi.var}
    else:
        out: set[Var] = set()
        for t in top_terms(phi):
            out.update(term_vars(t))
        for k in children(phi):
            out |= free_vars(k)
        fv = frozenset(out)
    object.__setattr__(phi, "_fv", fv)
    return fv


def is_closed(phi: Formula) -> bool:
    return not free_vars(phi)


def modal_depth(phi: Formula) -> int:
    inner = max((modal_depth(k) for k in children(phi)), default=0)
    return inner + 1 if is_modal(phi) else inner


def size(phi: Formula) -> int:
    n = 1 + sum(term_size(t) for t in top_terms(phi))
    return n + sum(size(k) for k in children(phi))


def ground_terms(phi: Formula) -> Iterator[Term]:
    """Every ground sub-term occurring in ``phi`` (with repetition)."""
    for node in subformulas(phi):
        for t in top_terms(node):
            for s in subterms(t):
                if is_ground(s):
                    yield s


def conj(*parts: Formula) -> Formula:
    """Right-nested conjunction of one or more formulas."""
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = And(p, out)
    return out


def implies_chain(antecedents: list[Formula], consequent: Formula) -> Formula:
    out = consequent
    for a in reversed(antecedents):
        out = Implies(a, out)
    return out


def prop(name: str) -> Atom:
    """Zero-arity (propositional) atom."""
    return Atom(name, ())


# ---------------------------------------------------------------- printing


def sexpr(x) -> str:
    if isinstance(x, (Var, Const)):
        return x.name
    if isinstance(x, Fn):
        return "(" + " ".join([x.symbol] + [sexpr(a) for a in x.args]) + ")"
    if isinstance(x, Atom):
        if not x.args:
            return x.pred
        return "(" + " ".join([x.pred] + [sexpr(a) for a in x.args]) + ")"
    if isinstance(x, QUANTIFIERS):
        head = OPERATOR_NAMES[type(x)]
        return f"({head} ({x.var.name} {x.var.sort.name}) {sexpr(x.body)})"
    if isinstance(x, Formula):
        parts = [OPERATOR_NAMES[type(x)]]
        parts += [sexpr(t) for t in top_terms(x)]
        parts += [sexpr(k) for k in children(x)]
        return "(" + " ".join(parts) + ")"
    if isinstance(x, Sort):
        return x.name
    raise TypeError(f"cannot print {type(x).__name__}")

