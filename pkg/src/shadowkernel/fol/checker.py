"""Independent replay of resolution refutations.

Nothing here is shared with the search loop: every step is re-executed
with a few lines of literal bookkeeping on top of the logic core. The only
other import is the clausifier, which fixes what counts as an input clause.
"""

from __future__ import annotations

from typing import Sequence

from ..logic.signature import Verdict
from ..logic.syntax import Atom, Formula, term_vars
from .clausify import Literal, clausify_problem


def _lit_apply(lit: Literal, s) -> Literal:
    if not lit.atom.args:
        return lit
    return Literal(lit.positive, Atom(lit.atom.pred, tuple(s.apply_term(a) for a in lit.atom.args)))


def _as_set(lits) -> frozenset:
    return frozenset(lits)


def check_fol_proof(proof, premises: Sequence[Formula], goal: Formula | None) -> Verdict:
    """Accept iff every step re-derives and the last step is the empty clause."""
    if proof is None or not proof.steps:
        return Verdict.reject("proof", "empty proof")
    try:
        inputs = clausify_problem(list(premises), goal)
    except Exception as exc:  # noqa: BLE001 - reported as a verdict
        return Verdict.reject("clausify", str(exc))
    seen: dict[int, frozenset] = {}
    order: dict[int, tuple] = {}
    for step in proof.steps:
        where = f"step {step.id}"
        if step.id in seen:
            return Verdict.reject(where, "duplicate step id")
        for p in step.premises:
            if p not in seen:
                return Verdict.reject(where, f"premise {p} is not an earlier step")
        claimed = _as_set(step.clause)
        if len(claimed) != len(step.clause):
            return Verdict.reject(where, "clause repeats a literal")
        if step.rule == "input":
            if step.source is None or step.premises:
                return Verdict.reject(where, "malformed input step")
            candidates = [c for i, c in inputs if i == step.source]
            if not candidates:
                return Verdict.reject(where, f"no input formula {step.source}")
            if not any(_as_set(_lit_apply(l, step.rename) for l in c) == claimed for c in candidates):
                return Verdict.reject(where, "clause is not produced by clausifying the cited input")
        elif step.rule == "resolve":
            if len(step.premises) != 2 or len(step.literals) != 2:
                return Verdict.reject(where, "resolution needs two premises and two literal positions")
            i, j = step.premises
            ci, cj = order[i], order[j]
            if i == j:
                cj = tuple(_lit_apply(l, step.copy) for l in cj)
                if set(v for l in cj for v in _vars(l)) & set(v for l in ci for v in _vars(l)):
                    return Verdict.reject(where, "self-resolution copy is not renamed apart")
            elif step.copy:
                return Verdict.reject(where, "copy renaming on distinct premises")
            li, lj = step.literals
            if not (0 <= li < len(ci) and 0 <= lj < len(cj)):
                return Verdict.reject(where, "literal position out of range")
            s = step.unifier
            a = _lit_apply(ci[li], s)
            b = _lit_apply(cj[lj], s)
            if a.atom != b.atom or a.positive == b.positive:
                return Verdict.reject(where, "unifier does not make the resolved literals complementary")
            raw = {_lit_apply(l, s) for l in ci} - {a}
            raw |= {_lit_apply(l, s) for l in cj} - {b}
            if _as_set(_lit_apply(l, step.rename) for l in raw) != claimed:
                return Verdict.reject(where, "clause differs from the resolvent")
        elif step.rule == "factor":
            if len(step.premises) != 1 or len(step.literals) != 2:
                return Verdict.reject(where, "factoring needs one premise and two literal positions")
            ci = order[step.premises[0]]
            li, lj = step.literals
            if not (0 <= li < len(ci) and 0 <= lj < len(ci)) or li == lj:
                return Verdict.reject(where, "literal position out of range")
            s = step.unifier
            if _lit_apply(ci[li], s) != _lit_apply(ci[lj], s):
                return Verdict.reject(where, "unifier does not identify the factored literals")
            raw = {_lit_apply(l, s) for l in ci}
            if _as_set(_lit_apply(l, step.rename) for l in raw) != claimed:
                return Verdict.reject(where, "clause differs from the factor")
        else:
            return Verdict.reject(where, f"unknown rule {step.rule!r}")
        seen[step.id] = claimed
        order[step.id] = tuple(step.clause)
    if proof.steps[-1].clause:
        return Verdict.reject(f"step {proof.steps[-1].id}", "last clause is not empty")
    return Verdict.accept()


def _vars(lit: Literal):
    for a in lit.atom.args:
        yield from term_vars(a)

