"""Discrete time order used by schema side-conditions.

Indexed time constants ``t0, t1, ...`` are ordered by index; further order
comes from ground ``prior(a, b)`` facts. Anything else is incomparable.
"""

from __future__ import annotations

import re
from collections import defaultdict
from typing import Iterable

from .syntax import Atom, Const, Formula, Term, subformulas

_INDEXED = re.compile(r"^t(\d+)$")


def time_index(t: Term) -> int | None:
    if isinstance(t, Const):
        m = _INDEXED.match(t.name)
        if m:
            return int(m.group(1))
    return None


class Timeline:
    def __init__(self, prior_facts: Iterable[tuple[Term, Term]] = ()):
        self._succ: dict[Term, set[Term]] = defaultdict(set)
        for a, b in prior_facts:
            self._succ[a].add(b)
        self._cache: dict[tuple[Term, Term], bool] = {}

    @classmethod
    def from_formulas(cls, formulas: Iterable[Formula]) -> Timeline:
        """Collect top-level and nested ground ``prior`` atoms."""
        facts = []
        for phi in formulas:
            for node in subformulas(phi):
                if isinstance(node, Atom) and node.pred == "prior" and len(node.args) == 2:
                    a, b = node.args
                    if isinstance(a, Const) and isinstance(b, Const):
                        facts.append((a, b))
        return cls(facts)

    def _before(self, a: Term, b: Term) -> bool:
        key = (a, b)
        if key in self._cache:
            return self._cache[key]
        ia, ib = time_index(a), time_index(b)
        seen = {a}
        frontier = [a]
        found = ia is not None and ib is not None and ia < ib
        while frontier and not found:
            x = frontier.pop()
            nxt = set(self._succ.get(x, ()))
            ix = time_index(x)
            if ix is not None:
                # an indexed moment precedes every higher-indexed moment mentioned in prior facts
                for y in self._succ:
                    iy = time_index(y)
                    if iy is not None and iy > ix:
                        nxt.add(y)
                if ib is not None and ib > ix:
                    found = True
                    break
            for y in nxt:
                if y == b:
                    found = True
                    break
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        self._cache[key] = found
        return found

    def compare(self, a: Term, b: Term) -> str | None:
        """'<', '=', '>' or None when the moments are incomparable."""
        if a == b:
            return "="
        if self._before(a, b):
            return "<"
        if self._before(b, a):
            return ">"
        return None

    def leq(self, a: Term, b: Term) -> bool | None:
        c = self.compare(a, b)
        if c is None:
            return None
        return c in ("<", "=")
