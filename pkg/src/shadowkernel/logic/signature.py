"""Symbol declarations and sort checking."""

from __future__ import annotations

from dataclasses import dataclass, field

from .sorts import (
    ACTION,
    ACTION_TYPE,
    AGENT,
    BUILTIN_SORTS,
    EVENT,
    FLUENT,
    MOMENT,
    SORT_ALIASES,
    Sort,
)
from .syntax import (
    AGENT_MODALS,
    BINARY,
    QUANTIFIERS,
    Atom,
    Common,
    Const,
    Fn,
    Formula,
    Not,
    Ought,
    Says,
    Term,
    Var,
)

SHADOW_PREFIX = "$"
# reserved prefix for clausification Skolem symbols
SKOLEM_PREFIX = "$sk"


@dataclass(frozen=True)
class FnDecl:
    args: tuple[Sort, ...]
    result: Sort


@dataclass(frozen=True)
class Verdict:
    """Outcome of a check: truthy when accepted, otherwise carries where and why."""

    ok: bool
    where: str | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok

    @classmethod
    def accept(cls) -> Verdict:
        return cls(True)

    @classmethod
    def reject(cls, where, reason: str) -> Verdict:
        return cls(False, None if where is None else str(where), reason)


class SignatureError(ValueError):
    pass


@dataclass
class Signature:
    sorts: dict[str, Sort] = field(default_factory=lambda: dict(BUILTIN_SORTS))
    functions: dict[str, FnDecl] = field(default_factory=dict)
    predicates: dict[str, tuple[Sort, ...]] = field(default_factory=dict)
    constants: dict[str, Sort] = field(default_factory=dict)
    implicit: bool = False

    @classmethod
    def dcec(cls, implicit: bool = False) -> Signature:
        """Built-in sorts plus the event-calculus symbol table."""
        sig = cls(implicit=implicit)
        sig.functions["action"] = FnDecl((AGENT, ACTION_TYPE), ACTION)
        sig.predicates.update(
            initially=(FLUENT,),
            holds=(FLUENT, MOMENT),
            happens=(EVENT, MOMENT),
            clipped=(MOMENT, FLUENT, MOMENT),
            initiates=(EVENT, FLUENT, MOMENT),
            terminates=(EVENT, FLUENT, MOMENT),
            prior=(MOMENT, MOMENT),
        )
        return sig

    def copy(self) -> Signature:
        return Signature(dict(self.sorts), dict(self.functions), dict(self.predicates),
                         dict(self.constants), self.implicit)

    def sort(self, name: str) -> Sort:
        name = SORT_ALIASES.get(name, name)
        try:
            return self.sorts[name]
        except KeyError:
            raise SignatureError(f"unknown sort {name!r}") from None

    def has_sort(self, name: str) -> bool:
        return SORT_ALIASES.get(name, name) in self.sorts

    def declare_sort(self, name: str, parent: str | None = None) -> Sort:
        if name in self.sorts or name in SORT_ALIASES:
            raise SignatureError(f"sort {name!r} already declared")
        s = Sort(name, self.sort(parent) if parent else None)
        self.sorts[name] = s
        return s

    def _check_fresh(self, name: str) -> None:
        if name in self.constants or name in self.functions or name in self.predicates:
            raise SignatureError(f"symbol {name!r} already declared")

    def declare_const(self, name: str, sort: Sort | str) -> Const:
        self._check_fresh(name)
        s = self.sort(sort) if isinstance(sort, str) else sort
        self.constants[name] = s
        return Const(name, s)

    def declare_fn(self, name: str, args, result) -> None:
        self._check_fresh(name)
        self.functions[name] = FnDecl(tuple(self._s(a) for a in args), self._s(result))

    def declare_pred(self, name: str, args=()) -> None:
        self._check_fresh(name)
        self.predicates[name] = tuple(self._s(a) for a in args)

    def _s(self, x) -> Sort:
        return self.sort(x) if isinstance(x, str) else x

    def const(self, name: str) -> Const:
        return Const(name, self.constants[name])

    def fn(self, name: str, *args: Term) -> Fn:
        return Fn(name, tuple(args), self.functions[name].result)

    def atom(self, pred: str, *args: Term) -> Atom:
        return Atom(pred, tuple(args))

    def constants_of(self, sort: Sort) -> list[Const]:
        return [Const(n, s) for n, s in self.constants.items() if s.is_subsort_of(sort)]


# ---------------------------------------------------------------- sort checking


def _check_term(t: Term, sig: Signature, where: str) -> Verdict:
    if isinstance(t, Var):
        if t.sort.name not in sig.sorts or sig.sorts[t.sort.name] != t.sort:
            return Verdict.reject(where, f"variable {t.name} has undeclared sort {t.sort}")
        return Verdict.accept()
    if isinstance(t, Const):
        declared = sig.constants.get(t.name)
        if declared is None:
            if t.name.startswith(SKOLEM_PREFIX) and t.sort.name in sig.sorts:
                return Verdict.accept()
            return Verdict.reject(where, f"undeclared constant {t.name}")
        if declared != t.sort:
            return Verdict.reject(where, f"constant {t.name} declared {declared}, used as {t.sort}")
        return Verdict.accept()
    decl = sig.functions.get(t.symbol)
    if decl is None:
        if t.symbol.startswith(SKOLEM_PREFIX):
            decl = FnDecl(tuple(a.sort for a in t.args), t.sort)
        else:
            return Verdict.reject(where, f"undeclared function {t.symbol}")
    if len(decl.args) != len(t.args):
        return Verdict.reject(where, f"{t.symbol} expects {len(decl.args)} arguments, got {len(t.args)}")
    if decl.result != t.sort:
        return Verdict.reject(where, f"{t.symbol} returns {decl.result}, term claims {t.sort}")
    for i, (a, s) in enumerate(zip(t.args, decl.args)):
        v = _check_term(a, sig, f"{where}.{t.symbol}[{i}]")
        if not v:
            return v
        if not a.sort.is_subsort_of(s):
            return Verdict.reject(f"{where}.{t.symbol}[{i}]", f"expected {s}, got {a} : {a.sort}")
    return Verdict.accept()


def _expect(t: Term, sort: Sort, sig: Signature, where: str) -> Verdict:
    v = _check_term(t, sig, where)
    if not v:
        return v
    if not t.sort.is_subsort_of(sort):
        return Verdict.reject(where, f"expected {sort}, got {t} : {t.sort}")
    return Verdict.accept()


def is_happens_literal(phi: Formula) -> bool:
    if isinstance(phi, Not):
        phi = phi.arg
    return (isinstance(phi, Atom) and phi.pred == "happens" and len(phi.args) == 2
            and isinstance(phi.args[0], Fn) and phi.args[0].symbol == "action")


def well_sorted(phi: Formula, sig: Signature, where: str = "$") -> Verdict:
    """Accept iff every symbol use in ``phi`` matches ``sig`` under subsorting."""
    if isinstance(phi, Atom):
        if phi.pred.startswith(SHADOW_PREFIX):
            if phi.args:
                return Verdict.reject(where, "shadow atoms are propositional")
            return Verdict.accept()
        decl = sig.predicates.get(phi.pred)
        if decl is None:
            return Verdict.reject(where, f"undeclared predicate {phi.pred}")
        if len(decl) != len(phi.args):
            return Verdict.reject(where, f"{phi.pred} expects {len(decl)} arguments, got {len(phi.args)}")
        for i, (a, s) in enumerate(zip(phi.args, decl)):
            v = _expect(a, s, sig, f"{where}.{phi.pred}[{i}]")
            if not v:
                return v
        return Verdict.accept()
    if isinstance(phi, Not):
        return well_sorted(phi.arg, sig, f"{where}.not")
    if isinstance(phi, BINARY):
        return (well_sorted(phi.left, sig, f"{where}.0")
                and well_sorted(phi.right, sig, f"{where}.1"))
    if isinstance(phi, QUANTIFIERS):
        v = _check_term(phi.var, sig, f"{where}.var")
        return v and well_sorted(phi.body, sig, f"{where}.body")
    if isinstance(phi, Common):
        v = _expect(phi.time, MOMENT, sig, f"{where}.time")
        return v and well_sorted(phi.body, sig, f"{where}.C")
    if isinstance(phi, Says):
        checks = [_expect(phi.speaker, AGENT, sig, f"{where}.speaker")]
        if phi.hearer is not None:
            checks.append(_expect(phi.hearer, AGENT, sig, f"{where}.hearer"))
        checks.append(_expect(phi.time, MOMENT, sig, f"{where}.time"))
        for v in checks:
            if not v:
                return v
        return well_sorted(phi.body, sig, f"{where}.S")
    if isinstance(phi, AGENT_MODALS) or isinstance(phi, Ought):
        op = type(phi).__name__
        v = _expect(phi.agent, AGENT, sig, f"{where}.{op}.agent")
        if not v:
            return v
        v = _expect(phi.time, MOMENT, sig, f"{where}.{op}.time")
        if not v:
            return v
        v = well_sorted(phi.body, sig, f"{where}.{op}")
        if not v or not isinstance(phi, Ought):
            return v
        if not is_happens_literal(phi.action):
            return Verdict.reject(f"{where}.O.action", "fourth argument of O must be a (negated) happens(action(...), t) atom")
        return well_sorted(phi.action, sig, f"{where}.O.action")
    return Verdict.reject(where, f"not a formula: {type(phi).__name__}")


def check_term(t: Term, sig: Signature) -> Verdict:
    return _check_term(t, sig, "$")

