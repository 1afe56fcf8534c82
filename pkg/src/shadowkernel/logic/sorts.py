"""Single-inheritance sort hierarchy."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class Sort:
    name: str
    parent: Sort | None = None

    def is_subsort_of(self, other: Sort) -> bool:
        s: Sort | None = self
        while s is not None:
            if s == other:
                return True
            s = s.parent
        return False

    def ancestors(self) -> list[Sort]:
        out = []
        s = self.parent
        while s is not None:
            out.append(s)
            s = s.parent
        return out

    def __str__(self) -> str:
        return self.name


def comparable(a: Sort, b: Sort) -> bool:
    return a.is_subsort_of(b) or b.is_subsort_of(a)


def meet(a: Sort, b: Sort) -> Sort | None:
    """Most specific common subsort, or None when the sorts are disjoint.

    In a forest two sorts share a subsort only if one contains the other.
    """
    if a.is_subsort_of(b):
        return a
    if b.is_subsort_of(a):
        return b
    return None


OBJECT = Sort("Object")
AGENT = Sort("Agent")
MOMENT = Sort("Moment")
EVENT = Sort("Event")
ACTION = Sort("Action", EVENT)
ACTION_TYPE = Sort("ActionType")
FLUENT = Sort("Fluent")
BOOLEAN = Sort("Boolean")

BUILTIN_SORTS: dict[str, Sort] = {
    s.name: s for s in (OBJECT, AGENT, MOMENT, EVENT, ACTION, ACTION_TYPE, FLUENT, BOOLEAN)
}

# accepted on input, resolved to the canonical sort
SORT_ALIASES = {"Time": "Moment"}
