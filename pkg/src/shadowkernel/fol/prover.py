"""Given-clause resolution prover with resource limits and proof recording."""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from enum import Enum
import re
from typing import Iterable, Sequence

from ..logic.subst import EMPTY, Substitution
from ..logic.syntax import Formula, Var
from ..logic.unify import match_term, unify_atoms
from .clausify import Literal, clause_vars, clausify_problem, is_tautology, make_clause

Clause = tuple[Literal, ...]

# clause variables are always renamed to ``_<clause>_<k>`` (primed when copied)
_VAR_NAME = re.compile(r"\b_\d+_\d+'*")


@dataclass(frozen=True)
class ResourceLimits:
    max_clauses: int = 50_000
    max_weight: int = 60
    time_ms: int = 5_000

    def __post_init__(self):
        for name in ("max_clauses", "max_weight", "time_ms"):
            value = getattr(self, name)
            if not isinstance(value, int) or value <= 0:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")

    def scaled(self, factor: float) -> ResourceLimits:
        return ResourceLimits(max(1, int(self.max_clauses * factor)), self.max_weight,
                              max(1, int(self.time_ms * factor)))


class Status(Enum):
    PROVED = "PROVED"
    NO = "NO"
    RESOURCE_OUT = "RESOURCE-OUT"


@dataclass(frozen=True)
class Step:
    """One node of a refutation.

    ``rename`` maps the variables of the raw result to this step's private
    variable names. For ``resolve``, ``copy`` renames the second premise
    apart when a clause is resolved with itself.
    """

    id: int
    rule: str  # "input" | "resolve" | "factor"
    clause: Clause
    premises: tuple[int, ...] = ()
    source: int | None = None
    literals: tuple[int, ...] = ()
    unifier: Substitution = EMPTY
    copy: Substitution = EMPTY
    rename: Substitution = EMPTY


@dataclass(frozen=True)
class FOLProof:
    steps: tuple[Step, ...]

    @property
    def root(self) -> Step:
        return self.steps[-1]

    def step(self, sid: int) -> Step:
        for s in self.steps:
            if s.id == sid:
                return s
        raise KeyError(sid)

    def sources(self) -> list[int]:
        """Indices of the input formulas the refutation uses."""
        return sorted({s.source for s in self.steps if s.rule == "input"})

    def __len__(self) -> int:
        return len(self.steps)


@dataclass
class FOLResult:
    status: Status
    proof: FOLProof | None = None
    reason: str = ""
    stats: dict = field(default_factory=dict)

    @property
    def proved(self) -> bool:
        return self.status is Status.PROVED


def clause_weight(c: Clause) -> int:
    return sum(l.weight() for l in c)


def _renaming(vars_: Iterable[Var], cid: int) -> Substitution:
    return Substitution({v: Var(f"_{cid}_{k}", v.sort) for k, v in enumerate(vars_)})


def _apply(c: Iterable[Literal], s: Substitution) -> Clause:
    return make_clause(l.apply(s) for l in c)


def _key(l: Literal) -> tuple[bool, str, int]:
    return (l.positive, l.atom.pred, len(l.atom.args))


def _skeleton(l: Literal) -> str:
    return _VAR_NAME.sub("?", str(l))


def variant_key(c: Clause) -> tuple[str, ...]:
    """Equal for clauses that differ only in variable names (almost always)."""
    lits = sorted(c, key=_skeleton)
    names: dict[str, str] = {}
    out = []
    for l in lits:
        out.append(_VAR_NAME.sub(lambda m: names.setdefault(m.group(0), f"?{len(names)}"), str(l)))
    return tuple(out)


def _features(c: Clause) -> dict[tuple, int]:
    out: dict[tuple, int] = {}
    for l in c:
        k = _key(l)
        out[k] = max(out.get(k, 0), l.weight())
    return out


def subsumes(c: Clause, d: Clause) -> bool:
    """True when some instance of ``c`` is a subset of ``d``."""
    if len(c) > len(d):
        return False

    def go(i: int, b: dict) -> bool:
        if i == len(c):
            return True
        lit = c[i]
        for m in d:
            if m.positive != lit.positive or m.atom.pred != lit.atom.pred or len(m.atom.args) != len(lit.atom.args):
                continue
            trial = dict(b)
            if all(match_term(p, t, trial) for p, t in zip(lit.atom.args, m.atom.args)):
                if go(i + 1, trial):
                    return True
        return False

    return go(0, {})


class _Search:
    def __init__(self, limits: ResourceLimits):
        self.limits = limits
        self.steps: dict[int, Step] = {}
        self.next_id = 0
        self.passive: list[tuple[int, int]] = []
        self.active: list[int] = []
        self.by_key: dict[tuple, list[tuple[int, int]]] = {}
        self.sub_index: dict[tuple, list[int]] = {}
        self.features: dict[int, dict[tuple, int]] = {}
        self.variants: set[tuple[str, ...]] = set()
        self.kept = 0
        self.discarded = 0
        self.derived = 0
        self.empty: int | None = None

    def _add(self, make) -> int | None:
        """``make(cid)`` returns a Step for id ``cid`` or None."""
        cid = self.next_id
        step = make(cid)
        if step is None:
            return None
        c = step.clause
        if is_tautology(c):
            return None
        if clause_weight(c) > self.limits.max_weight:
            self.discarded += 1
            return None
        vk = variant_key(c)
        if vk in self.variants:
            return None
        if self._subsumed(c):
            return None
        self.variants.add(vk)
        self.next_id += 1
        self.steps[cid] = step
        self.features[cid] = _features(c)
        self.sub_index.setdefault(_key(c[0]) if c else (), []).append(cid)
        if not c:
            self.empty = cid
        heapq.heappush(self.passive, (clause_weight(c), cid))
        self.kept += 1
        return cid

    def _subsumed(self, c: Clause) -> bool:
        feats = _features(c)
        for k in sorted(feats) + [()]:
            for other in self.sub_index.get(k, ()):
                of = self.features[other]
                if any(feats.get(ok, 0) < w for ok, w in of.items()):
                    continue
                if subsumes(self.steps[other].clause, c):
                    return True
        return False

    def add_input(self, source: int, raw: Clause) -> None:
        def make(cid):
            rho = _renaming(clause_vars(raw), cid)
            return Step(cid, "input", _apply(raw, rho), source=source, rename=rho)

        self._add(make)

    def _derive(self, rule, raw: Clause, premises, literals, sigma, copy=EMPTY) -> None:
        self.derived += 1

        def make(cid):
            rho = _renaming(clause_vars(raw), cid)
            return Step(cid, rule, _apply(raw, rho), premises=premises, literals=literals,
                        unifier=sigma, copy=copy, rename=rho)

        self._add(make)

    def process(self, gid: int) -> None:
        g = self.steps[gid].clause
        # factoring
        for i in range(len(g)):
            for j in range(i + 1, len(g)):
                a, b = g[i], g[j]
                if a.positive != b.positive:
                    continue
                s = unify_atoms(a.atom, b.atom)
                if s is not None and s:
                    self._derive("factor", make_clause(l.apply(s) for l in g), (gid,), (i, j), s)
        self.active.append(gid)
        for li, lit in enumerate(g):
            self.by_key.setdefault(_key(lit), []).append((gid, li))
        # resolution against every active clause (including g itself)
        for li, lit in enumerate(g):
            partners = list(self.by_key.get((not lit.positive, lit.atom.pred, len(lit.atom.args)), ()))
            for oid, lj in partners:
                other = self.steps[oid].clause
                copy = EMPTY
                if oid == gid:
                    if lj < li:
                        continue
                    copy = Substitution({v: Var(v.name + "'", v.sort) for v in clause_vars(other)})
                    # keep literal positions so ``lj`` still points at the same literal
                    other = tuple(l.apply(copy) for l in other)
                s = unify_atoms(lit.atom, other[lj].atom)
                if s is None:
                    continue
                resolvent = _resolvent(g, li, other, lj, s)
                self._derive("resolve", resolvent, (gid, oid), (li, lj), s, copy)
                if self.empty is not None:
                    return

    def run(self, deadline: float) -> Status:
        if self.empty is not None:
            return Status.PROVED
        n = 0
        while self.passive:
            n += 1
            if n % 16 == 0 and time.monotonic() > deadline:
                return Status.RESOURCE_OUT
            _, gid = heapq.heappop(self.passive)
            if self.derived > self.limits.max_clauses:
                return Status.RESOURCE_OUT
            self.process(gid)
            if self.empty is not None:
                return Status.PROVED
        return Status.RESOURCE_OUT if self.discarded else Status.NO

    def proof(self) -> FOLProof:
        need: set[int] = set()
        todo = [self.empty]
        while todo:
            sid = todo.pop()
            if sid in need:
                continue
            need.add(sid)
            todo.extend(self.steps[sid].premises)
        return FOLProof(tuple(self.steps[i] for i in sorted(need)))


def _resolvent(ci: Sequence[Literal], li: int, cj: Sequence[Literal], lj: int, s: Substitution) -> Clause:
    a = ci[li].apply(s)
    b = cj[lj].apply(s)
    rest = [l.apply(s) for l in ci]
    rest = [l for l in rest if l != a]
    rest += [l for l in (m.apply(s) for m in cj) if l != b]
    return make_clause(rest)


def prove_fol(premises: Sequence[Formula], goal: Formula | None,
              limits: ResourceLimits | None = None) -> FOLResult:
    """Refute ``premises ∪ {¬goal}``.

    Raises :class:`ModalLeak` if any input still contains a modal operator.
    """
    limits = limits or ResourceLimits()
    start = time.monotonic()
    deadline = start + limits.time_ms / 1000.0
    problem = clausify_problem(list(premises), goal)
    search = _Search(limits)
    for source, raw in problem:
        search.add_input(source, raw)
        if search.empty is not None:
            break
    status = search.run(deadline)
    stats = {"kept": search.kept, "derived": search.derived, "discarded": search.discarded,
             "input_clauses": len(problem)}
    if status is Status.PROVED:
        return FOLResult(status, search.proof(), "", stats)
    if status is Status.NO:
        return FOLResult(status, None, "saturated without the empty clause", stats)
    if search.discarded and not search.passive:
        reason = f"{search.discarded} clauses exceeded weight {limits.max_weight}"
    elif search.derived > limits.max_clauses:
        reason = f"more than {limits.max_clauses} derived clauses"
    else:
        reason = f"time budget of {limits.time_ms} ms exhausted"
    return FOLResult(status, None, reason, stats)

