"""Graded belief strengths and the justified-true-belief knowledge judgment.

Strengths are integers from -5 to 5. A justification supports its
conclusion only as strongly as its weakest step: deductive schema and
first-order steps count as 5 and each assumption carries the strength
declared for its label.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .logic.normal import normalize
from .logic.syntax import Believes, Formula, Term, sexpr
from .logic.timeline import Timeline
from .reasoner import MixedProof, Outcome, ReasonerConfig, check_mixed_proof, prove

MIN_LEVEL, MAX_LEVEL = -5, 5
DEDUCTIVE = 5
DEFAULT_STRENGTH = 5

STRENGTH_LABELS = {
    5: "certain",
    4: "overwhelmingly likely",
    3: "beyond reasonable doubt",
    2: "likely",
    1: "more likely than not",
    0: "counterbalanced",
}


def check_level(level) -> int:
    """Return ``level`` if it is an integer strength, else raise ValueError."""
    if isinstance(level, bool) or not isinstance(level, int) or not MIN_LEVEL <= level <= MAX_LEVEL:
        raise ValueError(f"strength level must be an integer in [{MIN_LEVEL}, {MAX_LEVEL}], got {level!r}")
    return level


def strength_label(level: int) -> str:
    level = check_level(level)
    if level < 0:
        return f"{STRENGTH_LABELS[-level]} (negation)"
    return STRENGTH_LABELS[level]


def combine_strengths(levels: Sequence[int]) -> int:
    """Weakest link: the minimum of the per-step strengths."""
    levels = list(levels)
    if not levels:
        raise ValueError("cannot combine an empty list of strengths")
    return min(check_level(x) for x in levels)


def justification_steps(proof: MixedProof, strengths: Mapping[str, int]) -> list[tuple[str, int]]:
    """Per-step strengths of a proof, as ``(step name, level)`` pairs.

    Assumptions take their declared strength (default 5). Every schema
    instance, every nested sub-proof step and the closing first-order
    segment are deductive.
    """
    out = [(f"assumption {lab}", check_level(strengths.get(lab, DEFAULT_STRENGTH)))
           for lab, _ in proof.assumptions]
    for inst in proof.instances():
        out.append((f"schema {inst.schema}", DEDUCTIVE))
    out.append(("first-order segment", DEDUCTIVE))
    return out


class TruthUndecidable(RuntimeError):
    """The bounded truth check ran out of resources."""


@dataclass(frozen=True)
class KnowledgeRecord:
    agent: Term
    proposition: Formula
    belief_level: int
    justification: MixedProof
    truth: bool
    level: int
    belief_source: str

    def describe(self) -> str:
        return (f"{sexpr(self.agent)} knows {sexpr(self.proposition)} at level {self.level} "
                f"({strength_label(self.level)})")


@dataclass(frozen=True)
class NotKnowledge:
    leg: str  # belief | justification | truth
    reason: str

    def __bool__(self) -> bool:
        return False


def _explicit_belief(agent: Term, phi: Formula, kb, strengths) -> tuple[str, int] | None:
    key = normalize(phi)
    best = None
    for lab, f in kb:
        if isinstance(f, Believes) and f.agent == agent and normalize(f.body) == key:
            lvl = check_level(strengths.get(lab, DEFAULT_STRENGTH))
            if best is None or lvl > best[1]:
                best = (lab, lvl)
    return best


def judge_knowledge(agent: Term, phi: Formula, justification: MixedProof | None, kb,
                    world: Sequence[Formula], *, strengths: Mapping[str, int] | None = None,
                    cfg: ReasonerConfig | None = None,
                    timeline: Timeline | None = None) -> KnowledgeRecord | NotKnowledge:
    """Decide whether ``agent`` knows ``phi``.

    ``kb`` is the agent's labelled knowledge base, ``justification`` a
    proof of ``phi`` from it and ``world`` the system's own truth set.
    Truth is decided by a bounded prove call against ``world``; running
    out of resources there raises :class:`TruthUndecidable`.
    """
    strengths = dict(strengths or {})
    kb = [(str(lab), f) for lab, f in (kb.items() if isinstance(kb, Mapping) else kb)]
    if justification is None:
        return NotKnowledge("justification", "no argument supplied")
    verdict = check_mixed_proof(justification, kb, phi, timeline)
    if not verdict:
        return NotKnowledge("justification", f"argument rejected at {verdict.where}: {verdict.reason}")
    argued = combine_strengths([lvl for _, lvl in justification_steps(justification, strengths)])
    explicit = _explicit_belief(agent, phi, kb, strengths)
    if explicit is not None:
        source, belief = f"belief {explicit[0]}", min(explicit[1], argued)
    else:
        source, belief = "derived by the argument", argued
    if belief <= 0:
        return NotKnowledge("belief", f"belief strength {belief} ({strength_label(belief)}) is not positive")
    res = prove(list(world), phi, cfg, timeline)
    if res.outcome is Outcome.RESOURCE_OUT:
        raise TruthUndecidable(f"truth of {sexpr(phi)} undecided within the budget")
    if res.outcome is not Outcome.PROVED:
        return NotKnowledge("truth", f"{sexpr(phi)} does not follow from the world-truth set")
    return KnowledgeRecord(agent, phi, belief, justification, True, belief, source)


__all__ = [
    "DEFAULT_STRENGTH", "KnowledgeRecord", "NotKnowledge", "STRENGTH_LABELS", "TruthUndecidable",
    "check_level", "combine_strengths", "judge_knowledge", "justification_steps", "strength_label",
]
