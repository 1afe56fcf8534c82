"""The learning loop: percepts in, interests out, checked knowledge recorded.

Each step takes the most urgent queries from the interest queue, tries to
prove them from the agent's knowledge base, judges every proof as
knowledge and adds what passes to the knowledge base at the judged
strength. Interests are regenerated from scenario templates afterwards.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field, replace
from itertools import product

from .epistemics import DEFAULT_STRENGTH, KnowledgeRecord, NotKnowledge, TruthUndecidable, judge_knowledge
from .kbformat.documents import InterestTemplate, PerceptEvent, ScenarioScript, StepEvent
from .logic.normal import normalize
from .logic.signature import Signature
from .logic.subst import Substitution, substitute
from .logic.syntax import Atom, Formula, Perceives, Term, Var, children, is_closed, rebuild, sexpr, subformulas
from .logic.timeline import Timeline
from .reasoner import MixedProof, Outcome, ReasonerConfig, check_mixed_proof, prove

log = logging.getLogger(__name__)


class ClockRegression(ValueError):
    pass


class ExpectationMismatch(RuntimeError):
    def __init__(self, missing: list[str], extra: list[str], transcript: Transcript | None = None):
        self.missing = missing
        self.extra = extra
        self.transcript = transcript
        parts = [f"missing {m}" for m in missing] + [f"unexpected {e}" for e in extra]
        super().__init__("; ".join(parts) or "expectations not met")


@dataclass(frozen=True)
class AgentConfig:
    reasoner: ReasonerConfig = field(default_factory=ReasonerConfig)
    batch: int = 8
    retries: int = 1
    max_steps: int = 32

    def __post_init__(self):
        if self.batch <= 0 or self.retries < 0 or self.max_steps <= 0:
            raise ValueError("batch and step limits must be positive")


@dataclass(frozen=True)
class Interest:
    priority: int
    seq: int
    query: Formula
    template: int

    def key(self) -> tuple[int, int]:
        return (-self.priority, self.seq)


@dataclass(frozen=True)
class LearnedEntry:
    """One learned proposition with the full interest-to-judgment provenance."""

    index: int
    step: int
    label: str
    record: KnowledgeRecord
    interest: str
    rounds: int

    @property
    def proposition(self) -> Formula:
        return self.record.proposition

    @property
    def level(self) -> int:
        return self.record.level

    @property
    def proof(self) -> MixedProof:
        return self.record.justification

    def provenance(self) -> dict:
        return {
            "interest": self.interest,
            "query": sexpr(self.proposition),
            "proof": {"rounds": self.rounds, "schemata": self.proof.schemata_used(),
                      "assumptions": [lab for lab, _ in self.proof.assumptions]},
            "judgment": {"belief": self.record.belief_source, "truth": self.record.truth, "level": self.level},
        }


@dataclass
class AgentState:
    signature: Signature
    kb: list[tuple[str, Formula]] = field(default_factory=list)
    strengths: dict[str, int] = field(default_factory=dict)
    clock: Term | None = None
    queue: list[Interest] = field(default_factory=list)
    templates: list[InterestTemplate] = field(default_factory=list)
    learner: Term | None = None
    world: list[Formula] = field(default_factory=list)
    transcript: list[LearnedEntry] = field(default_factory=list)
    log: list[str] = field(default_factory=list)
    attempts: dict[Formula, tuple[int, int]] = field(default_factory=dict)
    steps: int = 0
    seq: int = 0
    resource_out: set[Formula] = field(default_factory=set)

    def copy(self) -> AgentState:
        return replace(self, kb=list(self.kb), strengths=dict(self.strengths), queue=list(self.queue),
                       transcript=list(self.transcript), log=list(self.log), attempts=dict(self.attempts),
                       world=list(self.world), resource_out=set(self.resource_out))

    def formulas(self) -> list[Formula]:
        return [f for _, f in self.kb]

    def timeline(self, extra: list[Formula] = ()) -> Timeline:
        return Timeline.from_formulas(self.formulas() + self.world + list(extra))

    def knows_key(self) -> set[Formula]:
        return {normalize(f) for _, f in self.kb}


def ingest_percept(st: AgentState, agent: Term, t: Term, phi: Formula, strength: int = DEFAULT_STRENGTH,
                   label: str | None = None) -> AgentState:
    """Add ``P(agent, t, phi)`` to the knowledge base and advance the clock to ``t``."""
    percept = Perceives(agent, t, phi)
    if st.clock is not None:
        order = st.timeline([percept]).leq(st.clock, t)
        if order is not True:
            why = "precedes" if order is False else "is incomparable with"
            raise ClockRegression(f"percept at {sexpr(t)} {why} the clock {sexpr(st.clock)}")
    out = st.copy()
    n = sum(1 for lab, _ in out.kb if lab.startswith("percept")) + 1
    label = label or f"percept{n}"
    out.kb.append((label, percept))
    out.strengths[label] = strength
    out.world.append(percept)
    out.clock = t
    out.log.append(f"percept {label}: {sexpr(percept)}")
    return out


# ---------------------------------------------------------------- interests


def _replace_atoms(phi: Formula, table: dict[str, Formula]) -> Formula:
    if isinstance(phi, Atom) and not phi.args and phi.pred in table:
        return table[phi.pred]
    kids = children(phi)
    if not kids:
        return phi
    return rebuild(phi, tuple(_replace_atoms(k, table) for k in kids))


def instantiate(template: InterestTemplate, st: AgentState) -> list[Formula]:
    """Every instance of ``template`` over the current universe, in a fixed order."""
    choices = []
    for _name, sort in template.term_holes:
        choices.append(st.signature.constants_of(sort))
    material: dict[Formula, Formula] = {}
    for f in st.formulas():
        for node in subformulas(f):
            if is_closed(node):
                material.setdefault(normalize(node), node)
    for _ in template.formula_holes:
        choices.append(list(material.values()))
    out: dict[Formula, Formula] = {}
    nterms = len(template.term_holes)
    for combo in product(*choices):
        sigma = Substitution({Var(n, s): c for (n, s), c in zip(template.term_holes, combo[:nterms])})
        phi = substitute(template.pattern, sigma)
        phi = _replace_atoms(phi, dict(zip(template.formula_holes, combo[nterms:])))
        out.setdefault(normalize(phi), phi)
    return list(out.values())


def regenerate(st: AgentState, cfg: AgentConfig) -> AgentState:
    """Queue new instances of every template, at most ``limit`` per template."""
    out = st.copy()
    known = out.knows_key()
    queued = {normalize(i.query) for i in out.queue}
    for idx, tpl in enumerate(out.templates):
        added = 0
        for q in instantiate(tpl, out):
            key = normalize(q)
            if key in known or key in queued:
                continue
            tried, size = out.attempts.get(key, (0, -1))
            if tried > cfg.retries or (tried and size == len(out.kb)):
                continue
            if added >= tpl.limit:
                break
            out.queue.append(Interest(tpl.priority, out.seq, q, idx))
            out.seq += 1
            queued.add(key)
            added += 1
    out.queue.sort(key=Interest.key)
    return out


# ---------------------------------------------------------------- the loop


def step(st: AgentState, cfg: AgentConfig | None = None) -> AgentState:
    """One pass: pop a batch of interests, prove, judge, learn, regenerate."""
    cfg = cfg or AgentConfig()
    out = st.copy()
    out.steps += 1
    out.queue.sort(key=Interest.key)
    batch, out.queue = out.queue[:cfg.batch], out.queue[cfg.batch:]
    for interest in batch:
        q = interest.query
        key = normalize(q)
        if key in out.knows_key():
            continue
        tried, _ = out.attempts.get(key, (0, -1))
        out.attempts[key] = (tried + 1, len(out.kb))
        timeline = out.timeline([q])
        res = prove(out.kb, q, cfg.reasoner, timeline)
        line = f"step {out.steps}: query {sexpr(q)} -> {res.outcome.value} ({res.rounds} rounds)"
        if res.outcome is Outcome.RESOURCE_OUT:
            out.resource_out.add(key)
        if not res.proved:
            out.log.append(line)
            continue
        agent = out.learner if out.learner is not None else _default_agent(q)
        try:
            verdict = judge_knowledge(agent, q, res.proof, out.kb, out.world, strengths=out.strengths,
                                      cfg=cfg.reasoner, timeline=timeline)
        except TruthUndecidable as exc:
            out.resource_out.add(key)
            out.log.append(f"{line}; truth undecided: {exc}")
            continue
        if isinstance(verdict, NotKnowledge):
            out.log.append(f"{line}; not knowledge ({verdict.leg}): {verdict.reason}")
            continue
        if not check_mixed_proof(verdict.justification, out.kb, q, timeline):
            raise AssertionError("a judged justification failed its own check")
        out.resource_out.discard(key)
        label = f"learned{len(out.transcript) + 1}"
        tpl = out.templates[interest.template] if interest.template < len(out.templates) else None
        entry = LearnedEntry(len(out.transcript) + 1, out.steps, label, verdict,
                             sexpr(tpl.pattern) if tpl else sexpr(q), res.rounds)
        out.transcript.append(entry)
        out.kb.append((label, q))
        out.strengths[label] = verdict.level
        out.log.append(f"{line}; learned {label} at level {verdict.level}")
    return regenerate(out, cfg)


def _default_agent(q: Formula) -> Term | None:
    return getattr(q, "agent", None)


# ---------------------------------------------------------------- scenarios


@dataclass
class Transcript:
    scenario: str
    entries: list[LearnedEntry]
    log: list[str]
    expectations: list[tuple[Formula, int]]
    missing: list[str] = field(default_factory=list)
    extra: list[str] = field(default_factory=list)
    resource_out: bool = False
    wall_time: float = 0.0
    state: AgentState | None = None

    @property
    def matched(self) -> bool:
        return not self.missing and not self.extra

    def learned(self) -> list[tuple[Formula, int]]:
        return [(e.proposition, e.level) for e in self.entries]


def initial_state(scn: ScenarioScript) -> AgentState:
    doc = scn.kb
    st = AgentState(signature=doc.signature, kb=list(doc.assumptions.items()),
                    strengths=dict(doc.strengths), templates=list(scn.interests), learner=scn.learner,
                    world=list(scn.world.values()))
    return st


def config_for(scn: ScenarioScript, base: ReasonerConfig | None = None) -> AgentConfig:
    opts = dict(scn.kb.options)
    rc = (base or ReasonerConfig()).with_options(opts)
    kw = {}
    for key, attr in (("agent-batch", "batch"), ("agent-retries", "retries"), ("agent-max-steps", "max_steps")):
        if key in opts:
            kw[attr] = int(opts[key])
    return AgentConfig(reasoner=rc, **kw)


def compare(entries: list[LearnedEntry], expectations: list[tuple[Formula, int]],
            strict: bool = True) -> tuple[list[str], list[str]]:
    """Expected learnings missing from the transcript, and (when strict) learnings nobody expected."""
    got = {(normalize(e.proposition), e.level) for e in entries}
    want = {(normalize(f), lvl) for f, lvl in expectations}
    missing = [f"{sexpr(f)} at level {lvl}" for f, lvl in expectations if (normalize(f), lvl) not in got]
    extra = []
    if strict:
        extra = [f"{sexpr(e.proposition)} at level {e.level}" for e in entries
                 if (normalize(e.proposition), e.level) not in want]
    return missing, extra


def run_scenario(scn: ScenarioScript, cfg: AgentConfig | None = None, *, strict: bool = True,
                 raise_on_mismatch: bool = True) -> Transcript:
    """Replay the script: percepts and steps in order, then step until no interest is left."""
    cfg = cfg or config_for(scn)
    start = time.monotonic()
    st = regenerate(initial_state(scn), cfg)
    for ev in scn.events:
        if isinstance(ev, PerceptEvent):
            st = ingest_percept(st, ev.agent, ev.time, ev.formula, ev.strength)
            st = regenerate(st, cfg)
        elif isinstance(ev, StepEvent):
            st = step(st, cfg)
    while st.queue and st.steps < cfg.max_steps:
        st = step(st, cfg)
    missing, extra = compare(st.transcript, scn.expectations, strict)
    tr = Transcript(scn.name, list(st.transcript), list(st.log), list(scn.expectations), missing, extra,
                    bool(st.resource_out), time.monotonic() - start, st)
    if raise_on_mismatch and not tr.matched:
        raise ExpectationMismatch(missing, extra, tr)
    return tr


# ---------------------------------------------------------------- transcript files

TRANSCRIPT_HEADER = "shadowkernel-transcript v1"


def transcript_text(tr: Transcript, seed: str | None = None) -> str:
    """Learned facts as label, formula and dependency list, one per line."""
    from .epistemics import strength_label
    from .kbformat.proofs import proof_model
    from .kbformat.sexpr import quote

    sig = tr.state.signature if tr.state else Signature.dcec()
    lines = [TRANSCRIPT_HEADER, f"(scenario {tr.scenario})"]
    if seed is not None:
        lines.append(f"(seed {seed})")
    for e in tr.entries:
        rec = e.record
        deps = " ".join(lab for lab, _ in e.proof.assumptions)
        lines.append(f"(learned {e.index} (step {e.step}) (label {e.label}) (agent {sexpr(rec.agent)}) "
                     f"(level {e.level}) (strength {quote(strength_label(e.level))}) "
                     f"(formula {sexpr(e.proposition)}) (interest {e.interest}) (rounds {e.rounds}) "
                     f"(schemata {' '.join(e.proof.schemata_used())}) (depends {deps}))")
        nodes = proof_model(e.proof, sig)["proofs"]["p0"]["nodes"]
        for n in nodes:
            prem = " ".join(n["premises"])
            lines.append(f"  (node {e.label} {n['id']} {n['rule']} (formula {n['formula']}) "
                         f"(premises {prem}) (depends {' '.join(n['depends'])}))".replace(" )", ")"))
    for m in tr.missing:
        lines.append(f"(missing {quote(m)})")
    for x in tr.extra:
        lines.append(f"(unexpected {quote(x)})")
    lines.append(f"(verdict {'match' if tr.matched else 'mismatch'})")
    for entry in tr.log:
        lines.append(f"(log {quote(entry)})")
    return "\n".join(lines) + "\n"


def transcript_json(tr: Transcript, seed: str | None = None) -> str:
    """Machine-readable transcript with every justification as a full proof model."""
    from .kbformat.proofs import proof_model

    sig = tr.state.signature if tr.state else Signature.dcec()
    data = {
        "format": TRANSCRIPT_HEADER,
        "scenario": tr.scenario,
        "seed": seed,
        "learned": [{"index": e.index, "step": e.step, "label": e.label, "agent": sexpr(e.record.agent),
                     "formula": sexpr(e.proposition), "level": e.level, "provenance": e.provenance(),
                     "justification": proof_model(e.proof, sig)} for e in tr.entries],
        "missing": tr.missing,
        "unexpected": tr.extra,
        "matched": tr.matched,
        "log": tr.log,
    }
    return json.dumps(data, indent=1, sort_keys=True) + "\n"


__all__ = [
    "TRANSCRIPT_HEADER", "transcript_json", "transcript_text",
    "AgentConfig", "AgentState", "ClockRegression", "ExpectationMismatch", "Interest", "InterestTemplate",
    "LearnedEntry", "Transcript", "compare", "config_for", "ingest_percept", "initial_state",
    "instantiate", "regenerate", "run_scenario", "step",
]
