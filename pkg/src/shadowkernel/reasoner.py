"""The shadow-and-expand proving loop and its replayable proof objects.

Each round shadows the current formula set to level 1 and asks the
first-order prover for the goal. On failure the set is expanded once by
the modal schemata; an expansion that adds nothing ends the search.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Mapping

from .fol import ModalLeak, ResourceLimits, Status
from .logic.normal import alpha_equal, normalize
from .logic.signature import Verdict
from .logic.syntax import Formula, sexpr
from .logic.timeline import Timeline
from .schemata import AXIOM_SCHEMES, ExpansionPolicy, SchemaInstance, check_instance, expand
from .segment import FOLSegment, check_segment, run_segment
from .shadow import ShadowMap

log = logging.getLogger(__name__)


class Outcome(Enum):
    PROVED = "PROVED"
    FAIL = "FAIL"
    RESOURCE_OUT = "RESOURCE-OUT"


@dataclass(frozen=True)
class ReasonerConfig:
    limits: ResourceLimits = field(default_factory=ResourceLimits)
    policy: ExpansionPolicy = field(default_factory=ExpansionPolicy)
    time_ms: int = 20_000
    max_rounds: int = 16
    recursion_depth: int = 2

    def __post_init__(self):
        if self.time_ms <= 0 or self.max_rounds <= 0 or self.recursion_depth < 0:
            raise ValueError("time budget and round limit must be positive")

    def with_options(self, opts: Mapping[str, str]) -> ReasonerConfig:
        """Apply KB ``(option key value)`` entries."""
        lim = self.limits
        kw = {}
        if "max-clauses" in opts:
            lim = replace(lim, max_clauses=int(opts["max-clauses"]))
        if "max-weight" in opts:
            lim = replace(lim, max_weight=int(opts["max-weight"]))
        if "fol-time-ms" in opts:
            lim = replace(lim, time_ms=int(opts["fol-time-ms"]))
        if "time-ms" in opts:
            kw["time_ms"] = int(opts["time-ms"])
        if "max-rounds" in opts:
            kw["max_rounds"] = int(opts["max-rounds"])
        if "recursion-depth" in opts:
            kw["recursion_depth"] = int(opts["recursion-depth"])
        pol = ExpansionPolicy.from_options(dict(opts), self.policy)
        return replace(self, limits=lim, policy=pol, **kw)

    def to_options(self) -> dict[str, str]:
        out = {
            "max-clauses": str(self.limits.max_clauses),
            "max-weight": str(self.limits.max_weight),
            "fol-time-ms": str(self.limits.time_ms),
            "time-ms": str(self.time_ms),
            "max-rounds": str(self.max_rounds),
            "recursion-depth": str(self.recursion_depth),
        }
        out.update(self.policy.to_options())
        return out


@dataclass(frozen=True)
class MixedProof:
    """Assumptions, the schema instances applied per round, and the closing first-order segment."""

    goal: Formula
    assumptions: tuple[tuple[str, Formula], ...]
    rounds: tuple[tuple[SchemaInstance, ...], ...]
    final: FOLSegment

    def assumption_formulas(self) -> list[Formula]:
        return [f for _, f in self.assumptions]

    def instances(self) -> list[SchemaInstance]:
        return [i for r in self.rounds for i in r]

    def schemata_used(self) -> list[str]:
        return sorted({i.schema for i in self.instances()})


@dataclass
class ProveResult:
    outcome: Outcome
    proof: MixedProof | None = None
    rounds: int = 0
    trace: list[str] = field(default_factory=list)
    diagnostics: list = field(default_factory=list)
    elapsed: float = 0.0
    final_gamma: list[Formula] = field(default_factory=list)

    @property
    def proved(self) -> bool:
        return self.outcome is Outcome.PROVED


def _labelled(gamma) -> list[tuple[str, Formula]]:
    if isinstance(gamma, Mapping):
        return [(str(k), v) for k, v in gamma.items()]
    out = []
    for i, g in enumerate(gamma):
        if isinstance(g, tuple):
            out.append((str(g[0]), g[1]))
        else:
            out.append((f"a{i + 1}", g))
    return out


class _Session:
    def __init__(self, cfg: ReasonerConfig, timeline: Timeline, deadline: float, depth: int,
                 universe: dict | None):
        self.cfg = cfg
        self.timeline = timeline
        self.deadline = deadline
        self.depth = depth
        self.universe = universe
        self.failed: set[tuple] = set()

    def remaining_ms(self) -> int:
        return int((self.deadline - time.monotonic()) * 1000)

    def limits(self) -> ResourceLimits:
        rem = max(1, self.remaining_ms())
        lim = self.cfg.limits
        return replace(lim, time_ms=max(1, min(lim.time_ms, rem)))

    def oracle(self, premises: list[Formula], goal: Formula):
        """Discharge an entailment side condition by a nested proving run."""
        if self.depth >= self.cfg.recursion_depth:
            return Status.NO, None
        key = (tuple(sorted(str(normalize(p)) for p in premises)), str(normalize(goal)))
        if key in self.failed:
            return Status.NO, None
        budget = self.remaining_ms() // 2
        if budget <= 0:
            return Status.RESOURCE_OUT, None
        # nested side conditions reason over the agent's stated attitudes only; axiom schemes stay at the top level
        sub_cfg = replace(self.cfg, time_ms=budget, policy=self.cfg.policy.without(*AXIOM_SCHEMES))
        res = _prove(_labelled(premises), goal, sub_cfg, self.timeline, self.depth + 1, self.universe)
        if res.outcome is Outcome.PROVED:
            return Status.PROVED, res.proof
        if res.outcome is Outcome.RESOURCE_OUT:
            return Status.RESOURCE_OUT, None
        self.failed.add(key)
        return Status.NO, None


def prove(gamma, goal: Formula, cfg: ReasonerConfig | None = None, timeline: Timeline | None = None,
          *, universe: dict | None = None) -> ProveResult:
    """Search for a mixed modal and first-order proof of ``goal`` from ``gamma``.

    ``gamma`` may be a list of formulas, a list of ``(label, formula)`` pairs
    or a label-to-formula mapping. Moments are ordered by ``timeline``, which
    defaults to the order implied by ``gamma`` and the goal.
    """
    cfg = cfg or ReasonerConfig()
    labelled = _labelled(gamma)
    if timeline is None:
        timeline = Timeline.from_formulas([f for _, f in labelled] + [goal])
    return _prove(labelled, goal, cfg, timeline, 0, universe)


def _prove(labelled, goal, cfg, timeline, depth, universe) -> ProveResult:
    start = time.monotonic()
    deadline = start + cfg.time_ms / 1000.0
    session = _Session(cfg, timeline, deadline, depth, universe)
    m = ShadowMap()
    gamma = [f for _, f in labelled]
    origins = ["assumption"] * len(gamma)
    origin: dict[Formula, tuple[str, object]] = {}
    for label, f in labelled:
        origin.setdefault(normalize(f), ("assumption", label))
    history: list[list[SchemaInstance]] = []
    trace: list[str] = []
    diagnostics: list = []
    resourced = False
    pad = "  " * depth

    def finish(outcome, proof=None, rounds=0):
        return ProveResult(outcome, proof, rounds, trace, diagnostics, time.monotonic() - start, gamma)

    max_rounds = min(cfg.max_rounds, cfg.policy.max_rounds)
    for rnd in range(max_rounds + 1):
        if time.monotonic() > deadline:
            trace.append(f"{pad}round {rnd}: global time budget exhausted")
            return finish(Outcome.RESOURCE_OUT, rounds=rnd)
        result, seg = run_segment(gamma, goal, m, session.limits())
        trace.append(f"{pad}round {rnd}: first-order call on {len(gamma)} formulas -> {result.status.value}")
        log.debug("round %d: P_F %s (%s)", rnd, result.status.value, result.reason)
        if seg is not None:
            proof = _assemble(goal, seg, origin, history, [lab for lab, _ in labelled])
            verdict = check_mixed_proof(proof, labelled, goal, timeline)
            if not verdict:
                raise AssertionError(f"internal proof failed its own check at {verdict.where}: {verdict.reason}")
            return finish(Outcome.PROVED, proof, rnd)
        if result.status is Status.RESOURCE_OUT:
            resourced = True
        if rnd == max_rounds:
            trace.append(f"{pad}round limit {max_rounds} reached")
            return finish(Outcome.RESOURCE_OUT, rounds=rnd)
        ex = expand(gamma, cfg.policy, timeline=timeline, goal=goal, universe=universe,
                    oracle=session.oracle, limits=session.limits(), shadow_map=m, origins=origins)
        diagnostics.extend(ex.diagnostics)
        resourced = resourced or ex.resource_out
        if not ex.changed:
            trace.append(f"{pad}round {rnd}: expansion adds nothing; fixpoint")
            return finish(Outcome.RESOURCE_OUT if resourced else Outcome.FAIL, rounds=rnd)
        counts: dict[str, int] = {}
        for inst in ex.instances:
            counts[inst.schema] = counts.get(inst.schema, 0) + 1
            origin.setdefault(normalize(inst.conclusion), ("instance", inst))
        trace.append(f"{pad}round {rnd}: expanded by " + ", ".join(f"{k}x{v}" for k, v in counts.items()))
        history.append(ex.instances)
        gamma, origins = ex.gamma, ex.origins
    return finish(Outcome.RESOURCE_OUT, rounds=max_rounds)


def _assemble(goal, seg: FOLSegment, origin, history, label_order) -> MixedProof:
    """Keep only the assumptions and instances the closing segment depends on."""
    needed: set[int] = set()
    labels: dict[str, Formula] = {}
    todo = list(seg.premises)
    while todo:
        f = todo.pop()
        kind, what = origin[normalize(f)]
        if kind == "assumption":
            labels.setdefault(what, f)
            continue
        if id(what) in needed:
            continue
        needed.add(id(what))
        todo.extend(what.premises)
    rounds = []
    for insts in history:
        kept = tuple(i for i in insts if id(i) in needed)
        if kept:
            rounds.append(kept)
    assumptions = tuple((lab, labels[lab]) for lab in label_order if lab in labels)
    return MixedProof(goal, assumptions, tuple(rounds), seg)


def check_mixed_proof(p: MixedProof, gamma, goal: Formula, timeline: Timeline | None = None) -> Verdict:
    """Replay every instance and the closing segment against ``gamma``."""
    labelled = _labelled(gamma)
    if timeline is None:
        timeline = Timeline.from_formulas([f for _, f in labelled] + [goal])
    if not alpha_equal(p.goal, goal):
        return Verdict.reject("goal", f"proof concludes {sexpr(p.goal)}, not {sexpr(goal)}")
    known = {normalize(f) for _, f in labelled}
    by_label = {lab: f for lab, f in labelled}
    available: set[Formula] = set()
    for lab, f in p.assumptions:
        key = normalize(f)
        if key not in known:
            return Verdict.reject(f"assumption {lab}", "not a member of the premise set")
        if lab in by_label and normalize(by_label[lab]) != key:
            return Verdict.reject(f"assumption {lab}", "label names a different premise")
        available.add(key)

    def sub_check(sub, premises, sub_goal):
        if not isinstance(sub, MixedProof):
            return Verdict.reject("sub-proof", "not a mixed proof")
        return check_mixed_proof(sub, premises, sub_goal, timeline)

    for r, insts in enumerate(p.rounds):
        added = []
        for k, inst in enumerate(insts):
            where = f"round {r} instance {k} ({inst.schema})"
            for prem in inst.premises:
                if normalize(prem) not in available:
                    return Verdict.reject(where, f"premise {sexpr(prem)} is not available")
            v = check_instance(inst, timeline, sub_check)
            if not v:
                return Verdict.reject(where, v.reason)
            added.append(normalize(inst.conclusion))
        available.update(added)
    seg = p.final
    if not alpha_equal(seg.goal, goal):
        return Verdict.reject("final segment", "segment proves a different goal")
    for prem in seg.premises:
        if normalize(prem) not in available:
            return Verdict.reject("final segment", f"premise {sexpr(prem)} is neither assumed nor derived")
    v = check_segment(seg)
    if not v:
        return Verdict.reject(f"final segment: {v.where}", v.reason)
    return Verdict.accept()


__all__ = [
    "MixedProof", "ModalLeak", "Outcome", "ProveResult", "ReasonerConfig", "check_mixed_proof", "prove",
]
