"""Prefix grammar for terms and formulas.

    (not φ) (and φ ψ ...) (or φ ψ ...) (implies φ ψ) (iff φ ψ)
    (forall (x Sort) φ) (exists ((x S) (y T)) φ)
    (P a t φ) (K a t φ) (B a t φ) (D a t φ) (I a t φ) (C t φ)
    (S a b t φ) (S a t φ) (O a t φ (happens (action a* α) t'))
    (Pred t1 ... tn) | Rainy

Unicode spellings (¬ ∧ ∨ → ⇒ ↔ ⇔ ∀ ∃) are accepted and never emitted.
"""

from __future__ import annotations

import re

from ..logic.signature import SHADOW_PREFIX, FnDecl, Signature, SignatureError, is_happens_literal
from ..logic.sorts import AGENT, MOMENT, OBJECT, Sort
from ..logic.syntax import (
    And,
    Atom,
    Believes,
    Common,
    Const,
    Desires,
    Exists,
    Fn,
    Forall,
    Formula,
    Iff,
    Implies,
    Intends,
    Knows,
    Not,
    Or,
    Ought,
    Perceives,
    Says,
    Term,
    Var,
    sexpr,
)
from .sexpr import SExpr, SExprSyntaxError, SList, SortError, Sym, UnknownSymbol, read_one

HEADS = {
    "not": "not", "¬": "not",
    "and": "and", "∧": "and",
    "or": "or", "∨": "or",
    "implies": "implies", "=>": "implies", "→": "implies", "⇒": "implies",
    "iff": "iff", "<=>": "iff", "↔": "iff", "⇔": "iff",
    "forall": "forall", "∀": "forall",
    "exists": "exists", "∃": "exists",
    "P": "P", "perceives": "P",
    "K": "K", "knows": "K",
    "B": "B", "believes": "B",
    "D": "D", "desires": "D",
    "I": "I", "intends": "I",
    "C": "C", "common": "C",
    "S": "S", "says": "S",
    "O": "O", "ought": "O",
}
RESERVED = frozenset(HEADS)

_AGENT_MODAL = {"P": Perceives, "K": Knows, "B": Believes, "D": Desires, "I": Intends}
_IDENT = re.compile(r"^(?!\d)[\w$?][\w'\-*.$]*$")
_TIME_NAME = re.compile(r"^t\d+$")


def _err(cls, node: SExpr, message: str):
    return cls(message, node.line, node.col)


class FormulaReader:
    """Turns s-expressions into sorted formulas against a signature.

    In implicit mode unknown symbols are declared on first use, with sorts
    taken from the position they occupy.
    """

    def __init__(self, sig: Signature, allow_shadow: bool = False,
                 holes: dict[str, Sort] | None = None, formula_holes: frozenset[str] = frozenset()):
        self.sig = sig
        self.allow_shadow = allow_shadow
        self.holes = holes or {}
        self.formula_holes = formula_holes

    # ------------------------------------------------------------ terms

    def ident(self, node: SExpr) -> str:
        if not isinstance(node, Sym) or node.quoted or not _IDENT.match(node.text):
            raise _err(SExprSyntaxError, node, f"expected an identifier, got {node!r}")
        return node.text

    def term(self, node: SExpr, scope: dict[str, Var], expected: Sort | None) -> Term:
        if isinstance(node, Sym):
            name = self.ident(node)
            if name in scope:
                t: Term = scope[name]
            elif name in self.holes:
                t = Var(name, self.holes[name])
            elif name in self.sig.constants:
                t = Const(name, self.sig.constants[name])
            elif self.sig.implicit and name not in RESERVED and name not in self.sig.predicates \
                    and name not in self.sig.functions:
                sort = expected or (MOMENT if _TIME_NAME.match(name) else OBJECT)
                t = self.sig.declare_const(name, sort)
            else:
                raise _err(UnknownSymbol, node, f"unknown constant {name!r}")
        else:
            if not node.items:
                raise _err(SExprSyntaxError, node, "empty term")
            name = self.ident(node[0])
            decl = self.sig.functions.get(name)
            if decl is None:
                if not self.sig.implicit or name in RESERVED or name in self.sig.constants \
                        or name in self.sig.predicates:
                    raise _err(UnknownSymbol, node[0], f"unknown function {name!r}")
                args = tuple(self.term(a, scope, None) for a in node.items[1:])
                decl = FnDecl(tuple(a.sort for a in args), expected or OBJECT)
                self.sig.functions[name] = decl
            elif len(decl.args) != len(node.items) - 1:
                raise _err(SExprSyntaxError, node, f"{name} expects {len(decl.args)} arguments, got {len(node.items) - 1}")
            else:
                args = tuple(self.term(a, scope, s) for a, s in zip(node.items[1:], decl.args))
            t = Fn(name, args, decl.result)
        if expected is not None and not t.sort.is_subsort_of(expected):
            raise _err(SortError, node, f"expected a term of sort {expected}, got {sexpr(t)} : {t.sort}")
        return t

    # ------------------------------------------------------------ formulas

    def formula(self, node: SExpr, scope: dict[str, Var] | None = None) -> Formula:
        scope = scope or {}
        if isinstance(node, Sym):
            return self._atom(node, node, [], scope)
        if not node.items:
            raise _err(SExprSyntaxError, node, "empty formula")
        head = node[0]
        if isinstance(head, SList):
            raise _err(SExprSyntaxError, head, "formula head must be a symbol")
        op = HEADS.get(head.text)
        args = node.items[1:]
        if op is None:
            return self._atom(node, head, args, scope)
        if op == "not":
            self._arity(node, args, 1)
            return Not(self.formula(args[0], scope))
        if op in ("and", "or"):
            if len(args) < 2:
                raise _err(SExprSyntaxError, node, f"'{head.text}' needs at least two operands")
            parts = [self.formula(a, scope) for a in args]
            cls = And if op == "and" else Or
            out = parts[-1]
            for p in reversed(parts[:-1]):
                out = cls(p, out)
            return out
        if op == "implies":
            if len(args) < 2:
                raise _err(SExprSyntaxError, node, "'implies' needs at least two operands")
            parts = [self.formula(a, scope) for a in args]
            out = parts[-1]
            for p in reversed(parts[:-1]):
                out = Implies(p, out)
            return out
        if op == "iff":
            self._arity(node, args, 2)
            return Iff(self.formula(args[0], scope), self.formula(args[1], scope))
        if op in ("forall", "exists"):
            return self._quant(node, op, args, scope)
        if op in _AGENT_MODAL:
            self._arity(node, args, 3)
            agent = self.term(args[0], scope, AGENT)
            time = self.term(args[1], scope, MOMENT)
            return _AGENT_MODAL[op](agent, time, self.formula(args[2], scope))
        if op == "C":
            self._arity(node, args, 2)
            return Common(self.term(args[0], scope, MOMENT), self.formula(args[1], scope))
        if op == "S":
            if len(args) == 4:
                return Says(self.term(args[0], scope, AGENT), self.term(args[1], scope, AGENT),
                            self.term(args[2], scope, MOMENT), self.formula(args[3], scope))
            self._arity(node, args, 3)
            return Says(self.term(args[0], scope, AGENT), None,
                        self.term(args[1], scope, MOMENT), self.formula(args[2], scope))
        # op == "O"
        self._arity(node, args, 4)
        agent = self.term(args[0], scope, AGENT)
        time = self.term(args[1], scope, MOMENT)
        body = self.formula(args[2], scope)
        action = self.formula(args[3], scope)
        if not is_happens_literal(action):
            raise _err(SortError, args[3], "fourth argument of O must be (not) (happens (action a α) t)")
        return Ought(agent, time, body, action)

    def _arity(self, node: SList, args: list, n: int) -> None:
        if len(args) != n:
            raise _err(SExprSyntaxError, node, f"'{node[0].text}' takes {n} operands, got {len(args)}")

    def _quant(self, node: SList, op: str, args: list, scope: dict[str, Var]) -> Formula:
        self._arity(node, args, 2)
        binder = args[0]
        if not isinstance(binder, SList) or not binder.items:
            raise _err(SExprSyntaxError, binder, "expected a binder like (x Sort)")
        pairs = [binder] if isinstance(binder[0], Sym) else binder.items
        bound: list[Var] = []
        inner = dict(scope)
        for p in pairs:
            if not isinstance(p, SList) or len(p) != 2:
                raise _err(SExprSyntaxError, p, "expected a binder like (x Sort)")
            name = self.ident(p[0])
            if name in RESERVED:
                raise _err(SExprSyntaxError, p[0], f"{name!r} is reserved")
            sort_name = self.ident(p[1])
            try:
                sort = self.sig.sort(sort_name)
            except SignatureError:
                raise _err(UnknownSymbol, p[1], f"unknown sort {sort_name!r}") from None
            v = Var(name, sort)
            bound.append(v)
            inner[name] = v
        out = self.formula(args[1], inner)
        cls = Forall if op == "forall" else Exists
        for v in reversed(bound):
            out = cls(v, out)
        return out

    def _atom(self, node: SExpr, head: Sym, args: list, scope: dict[str, Var]) -> Formula:
        name = self.ident(head)
        if name in RESERVED:
            raise _err(SExprSyntaxError, head, f"operator {name!r} used without operands")
        if name in self.formula_holes and not args:
            return Atom(name)
        if name.startswith(SHADOW_PREFIX):
            if not self.allow_shadow:
                raise _err(UnknownSymbol, head, f"shadow atom {name!r} outside a proof")
            if args:
                raise _err(SExprSyntaxError, node, "shadow atoms take no arguments")
            return Atom(name)
        decl = self.sig.predicates.get(name)
        if decl is None:
            if not self.sig.implicit or name in self.sig.constants or name in self.sig.functions:
                raise _err(UnknownSymbol, head, f"unknown predicate {name!r}")
            terms = tuple(self.term(a, scope, None) for a in args)
            self.sig.predicates[name] = tuple(t.sort for t in terms)
            return Atom(name, terms)
        if len(decl) != len(args):
            raise _err(SortError, node, f"{name} expects {len(decl)} arguments, got {len(args)}")
        return Atom(name, tuple(self.term(a, scope, s) for a, s in zip(args, decl)))


def parse_formula(text: str, sig: Signature, *, allow_shadow: bool = False) -> Formula:
    """Parse one formula; raises a ParseError subclass carrying line and column."""
    return FormulaReader(sig, allow_shadow).formula(read_one(text))


def parse_term(text: str, sig: Signature, expected: Sort | None = None) -> Term:
    return FormulaReader(sig).term(read_one(text), {}, expected)


def serialize_formula(phi: Formula) -> str:
    return sexpr(phi)
