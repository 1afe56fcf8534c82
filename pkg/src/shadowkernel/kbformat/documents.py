"""Knowledge-base (.dcec) and scenario (.scn) documents.

A knowledge base is a sequence of top-level forms::

    (implicit)                        ; declare unknown symbols on first use
    (sort Place)  (sort Guest Agent)  ; new sort, optional parent
    (const robert Agent)  (const (t0 t1) Moment)
    (fn son (Agent) Agent)
    (pred Wealthy (Agent))  (pred Rainy)
    (assume label formula)
    (strength label level)            ; belief strength of an assumption, -5..5
    (goal label formula)
    (option key value)

A scenario accepts every knowledge-base form plus::

    (scenario name)
    (agent robert)                    ; the learner
    (percept agent moment formula [strength])
    (step)                            ; one pass of the learning loop
    (world label formula)             ; system truth
    (interest pattern [(priority n)] [(limit n)] [(holes (?x Sort) (?p Formula))])
    (expect formula level)

Parsing collects every diagnostic in the input before failing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..logic.normal import normalize
from ..logic.signature import Signature, SignatureError, well_sorted
from ..logic.sorts import AGENT, BUILTIN_SORTS, MOMENT, Sort
from ..logic.syntax import Formula, Perceives, Term, sexpr
from ..logic.timeline import Timeline
from .formulas import RESERVED, FormulaReader
from .sexpr import ParseError, SExpr, SList, Sym, quote, read_all

FORMULA_SORT = "Formula"
AGENT_OPTION_KEYS = ("agent-batch", "agent-retries", "agent-max-steps")
OPTION_KEYS = frozenset(("max-clauses", "max-weight", "fol-time-ms", "time-ms", "max-rounds", "recursion-depth",
                         "schemata", "d-max", "r3-depth", "lift") + AGENT_OPTION_KEYS)


@dataclass(frozen=True)
class Diagnostic:
    line: int
    col: int
    kind: str
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.col}: {self.kind}: {self.message}"


class DocumentError(ValueError):
    """Raised with every problem found in a document."""

    def __init__(self, diagnostics: list[Diagnostic], source: str = "<input>"):
        self.diagnostics = list(diagnostics)
        self.source = source
        lines = "\n".join(f"{source}:{d}" for d in self.diagnostics)
        super().__init__(f"{len(self.diagnostics)} problem(s)\n{lines}")


@dataclass
class KBDocument:
    signature: Signature = field(default_factory=Signature.dcec)
    assumptions: dict[str, Formula] = field(default_factory=dict)
    goals: dict[str, Formula] = field(default_factory=dict)
    options: dict[str, str] = field(default_factory=dict)
    strengths: dict[str, int] = field(default_factory=dict)

    def labelled(self) -> list[tuple[str, Formula]]:
        return list(self.assumptions.items())

    def formula(self, label: str) -> Formula:
        if label in self.goals:
            return self.goals[label]
        return self.assumptions[label]

    def normalized(self) -> tuple:
        """Comparison key: equal for documents that differ only in bound-variable names."""
        sig = self.signature
        return (
            sig.implicit,
            tuple((k, str(v.parent)) for k, v in sig.sorts.items()),
            tuple(sorted((k, str(v)) for k, v in sig.constants.items())),
            tuple(sorted((k, tuple(map(str, d.args)), str(d.result)) for k, d in sig.functions.items())),
            tuple(sorted((k, tuple(map(str, a))) for k, a in sig.predicates.items())),
            tuple((k, normalize(v)) for k, v in self.assumptions.items()),
            tuple((k, normalize(v)) for k, v in self.goals.items()),
            tuple(sorted(self.options.items())),
            tuple(sorted(self.strengths.items())),
        )


@dataclass(frozen=True)
class PerceptEvent:
    agent: Term
    time: Term
    formula: Formula
    strength: int = 5
    line: int = 0

    def as_formula(self) -> Formula:
        return Perceives(self.agent, self.time, self.formula)


@dataclass(frozen=True)
class StepEvent:
    line: int = 0


@dataclass(frozen=True)
class InterestTemplate:
    """A query pattern whose holes range over a finite universe each step.

    Term holes are variables of a declared sort; formula holes are
    zero-argument atoms named in ``formula_holes``.
    """

    pattern: Formula
    term_holes: tuple[tuple[str, Sort], ...] = ()
    formula_holes: tuple[str, ...] = ()
    priority: int = 0
    limit: int = 16


@dataclass
class ScenarioScript:
    name: str = "scenario"
    kb: KBDocument = field(default_factory=KBDocument)
    learner: Term | None = None
    events: list = field(default_factory=list)
    interests: list[InterestTemplate] = field(default_factory=list)
    world: dict[str, Formula] = field(default_factory=dict)
    expectations: list[tuple[Formula, int]] = field(default_factory=list)

    def percepts(self) -> list[PerceptEvent]:
        return [e for e in self.events if isinstance(e, PerceptEvent)]

    def world_formulas(self) -> list[Formula]:
        """Stated world truths plus every scripted percept, which is veridical by construction."""
        return list(self.world.values()) + [p.as_formula() for p in self.percepts()]


# ---------------------------------------------------------------- parsing


class _Parser:
    def __init__(self, text, source: str, scenario: bool):
        self.source = source
        self.scenario = scenario
        self.diags: list[Diagnostic] = []
        self.doc = KBDocument()
        self.scn = ScenarioScript(kb=self.doc)
        self.labels: dict[str, int] = {}
        self.pending_strengths: list[tuple[Sym, SExpr]] = []
        self.option_lines: dict[str, int] = {}
        self.text = self._decode(text)

    def _decode(self, text) -> str | None:
        if isinstance(text, (bytes, bytearray)):
            try:
                return bytes(text).decode("utf-8")
            except UnicodeDecodeError as exc:
                self.diags.append(Diagnostic(1, 1, "encoding", f"input is not UTF-8: {exc.reason}"))
                return None
        return text

    def fail(self, node, kind: str, message: str) -> None:
        self.diags.append(Diagnostic(getattr(node, "line", 0), getattr(node, "col", 0), kind, message))

    def reader(self, **kw) -> FormulaReader:
        return FormulaReader(self.doc.signature, **kw)

    def run(self):
        if self.text is None:
            return
        try:
            forms = read_all(self.text)
        except ParseError as exc:
            self.diags.append(Diagnostic(exc.line, exc.col, exc.kind, exc.message))
            return
        for form in forms:
            try:
                self.form(form)
            except ParseError as exc:
                self.diags.append(Diagnostic(exc.line, exc.col, exc.kind, exc.message))
            except SignatureError as exc:
                self.fail(form, "signature", str(exc))
        for lab, value in self.pending_strengths:
            self.strength(lab, value)
        self.check_options()
        if self.scenario:
            self.check_scenario()

    # -- helpers

    def name(self, node) -> str:
        if not isinstance(node, Sym) or node.quoted:
            raise ParseError(f"expected a name, got {node!r}", getattr(node, "line", 0), getattr(node, "col", 0))
        return node.text

    def integer(self, node) -> int:
        text = self.name(node)
        try:
            return int(text)
        except ValueError:
            raise ParseError(f"expected an integer, got {text!r}", node.line, node.col) from None

    def new_label(self, node) -> str | None:
        lab = self.name(node)
        if lab in self.labels:
            self.fail(node, "duplicate-label", f"label {lab!r} already used on line {self.labels[lab]}")
            return None
        self.labels[lab] = node.line
        return lab

    def sort(self, node) -> Sort:
        name = self.name(node)
        try:
            return self.doc.signature.sort(name)
        except SignatureError:
            raise ParseError(f"unknown sort {name!r}", node.line, node.col) from None

    def checked(self, phi: Formula, node) -> Formula | None:
        v = well_sorted(phi, self.doc.signature)
        if not v:
            self.fail(node, "sort", f"{v.where}: {v.reason}")
            return None
        return phi

    def formula(self, node) -> Formula | None:
        return self.checked(self.reader().formula(node), node)

    # -- forms

    def form(self, node) -> None:
        if not isinstance(node, SList) or not node.items or not isinstance(node[0], Sym):
            raise ParseError("expected a top-level form like (assume label formula)",
                             getattr(node, "line", 0), getattr(node, "col", 0))
        head, args = node[0].text, node.items[1:]
        handler = getattr(self, "f_" + head.replace("-", "_"), None)
        scenario_only = {"scenario", "agent", "percept", "step", "world", "interest", "expect"}
        if handler is None or (head in scenario_only and not self.scenario):
            raise ParseError(f"unknown form {head!r}", node.line, node.col)
        handler(node, args)

    def arity(self, node, args, *counts) -> None:
        if len(args) not in counts:
            want = " or ".join(map(str, counts))
            raise ParseError(f"'{node[0].text}' takes {want} arguments, got {len(args)}", node.line, node.col)

    def f_implicit(self, node, args) -> None:
        self.arity(node, args, 0)
        self.doc.signature.implicit = True

    def f_sort(self, node, args) -> None:
        self.arity(node, args, 1, 2)
        name = self.name(args[0])
        parent = None
        if len(args) == 2:
            parent = self.name(args[1])
            if not self.doc.signature.has_sort(parent):
                raise ParseError(f"unknown sort {parent!r}", args[1].line, args[1].col)
        self.doc.signature.declare_sort(name, parent)

    def _fresh(self, node, name: str) -> None:
        if name in RESERVED:
            raise ParseError(f"{name!r} is a reserved operator name", node.line, node.col)

    def f_const(self, node, args) -> None:
        self.arity(node, args, 2)
        sort = self.sort(args[1])
        names = args[0].items if isinstance(args[0], SList) else [args[0]]
        for n in names:
            name = self.name(n)
            self._fresh(n, name)
            self.doc.signature.declare_const(name, sort)

    def f_fn(self, node, args) -> None:
        self.arity(node, args, 3)
        name = self.name(args[0])
        self._fresh(args[0], name)
        if not isinstance(args[1], SList):
            raise ParseError("argument sorts must be a list", args[1].line, args[1].col)
        sorts = [self.sort(a) for a in args[1].items]
        self.doc.signature.declare_fn(name, sorts, self.sort(args[2]))

    def f_pred(self, node, args) -> None:
        self.arity(node, args, 1, 2)
        name = self.name(args[0])
        self._fresh(args[0], name)
        sorts = []
        if len(args) == 2:
            if not isinstance(args[1], SList):
                raise ParseError("argument sorts must be a list", args[1].line, args[1].col)
            sorts = [self.sort(a) for a in args[1].items]
        self.doc.signature.declare_pred(name, sorts)

    def f_assume(self, node, args) -> None:
        self.arity(node, args, 2)
        lab = self.new_label(args[0])
        phi = self.formula(args[1])
        if lab is not None and phi is not None:
            self.doc.assumptions[lab] = phi

    def f_goal(self, node, args) -> None:
        self.arity(node, args, 2)
        lab = self.new_label(args[0])
        phi = self.formula(args[1])
        if lab is not None and phi is not None:
            self.doc.goals[lab] = phi

    def f_strength(self, node, args) -> None:
        self.arity(node, args, 2)
        self.pending_strengths.append((args[0], args[1]))

    def strength(self, lab_node, value_node) -> None:
        try:
            lab = self.name(lab_node)
            level = self.integer(value_node)
        except ParseError as exc:
            self.diags.append(Diagnostic(exc.line, exc.col, exc.kind, exc.message))
            return
        if lab not in self.doc.assumptions and lab not in self.scn.world:
            self.fail(lab_node, "unknown-label", f"strength for unknown assumption {lab!r}")
        elif not -5 <= level <= 5:
            self.fail(value_node, "range", f"strength {level} is outside -5..5")
        else:
            self.doc.strengths[lab] = level

    def f_option(self, node, args) -> None:
        self.arity(node, args, 2)
        key = self.name(args[0])
        if key not in OPTION_KEYS:
            raise ParseError(f"unknown option {key!r}", args[0].line, args[0].col)
        self.doc.options[key] = self.name(args[1])
        self.option_lines[key] = node.line

    def check_options(self) -> None:
        if not self.doc.options:
            return
        from ..reasoner import ReasonerConfig

        line = max(self.option_lines.values(), default=0)
        try:
            ReasonerConfig().with_options(self.doc.options)
        except (ValueError, KeyError) as exc:
            self.diags.append(Diagnostic(line, 0, "option", str(exc)))
        for key in AGENT_OPTION_KEYS:
            value = self.doc.options.get(key)
            if value is None:
                continue
            least = 0 if key == "agent-retries" else 1
            if not value.isdigit() or int(value) < least:
                self.diags.append(Diagnostic(self.option_lines[key], 0, "option",
                                             f"{key} must be an integer of at least {least}, got {value!r}"))

    # -- scenario forms

    def f_scenario(self, node, args) -> None:
        self.arity(node, args, 1)
        self.scn.name = self.name(args[0])

    def f_agent(self, node, args) -> None:
        self.arity(node, args, 1)
        self.scn.learner = self.reader().term(args[0], {}, AGENT)

    def f_percept(self, node, args) -> None:
        self.arity(node, args, 3, 4)
        r = self.reader()
        agent = r.term(args[0], {}, AGENT)
        time = r.term(args[1], {}, MOMENT)
        phi = self.formula(args[2])
        strength = self.integer(args[3]) if len(args) == 4 else 5
        if not -5 <= strength <= 5:
            self.fail(args[3], "range", f"strength {strength} is outside -5..5")
            return
        if phi is not None:
            self.scn.events.append(PerceptEvent(agent, time, phi, strength, node.line))

    def f_step(self, node, args) -> None:
        self.arity(node, args, 0)
        self.scn.events.append(StepEvent(node.line))

    def f_world(self, node, args) -> None:
        self.arity(node, args, 2)
        lab = self.new_label(args[0])
        phi = self.formula(args[1])
        if lab is not None and phi is not None:
            self.scn.world[lab] = phi

    def f_expect(self, node, args) -> None:
        self.arity(node, args, 2)
        phi = self.formula(args[0])
        level = self.integer(args[1])
        if phi is not None:
            self.scn.expectations.append((phi, level))

    def f_interest(self, node, args) -> None:
        if not args:
            raise ParseError("interest needs a pattern", node.line, node.col)
        priority, limit = 0, 16
        term_holes: dict[str, Sort] = {}
        formula_holes: list[str] = []
        for opt in args[1:]:
            if not isinstance(opt, SList) or not opt.items:
                raise ParseError("expected (priority n), (limit n) or (holes ...)", opt.line, opt.col)
            key = self.name(opt[0])
            if key == "priority" and len(opt) == 2:
                priority = self.integer(opt[1])
            elif key == "limit" and len(opt) == 2:
                limit = self.integer(opt[1])
                if limit <= 0:
                    raise ParseError("limit must be positive", opt[1].line, opt[1].col)
            elif key == "holes":
                for h in opt.items[1:]:
                    if not isinstance(h, SList) or len(h) != 2:
                        raise ParseError("expected a hole like (?x Sort)", h.line, h.col)
                    hname = self.name(h[0])
                    if not hname.startswith("?"):
                        raise ParseError(f"hole names start with '?', got {hname!r}", h[0].line, h[0].col)
                    if self.name(h[1]) == FORMULA_SORT:
                        formula_holes.append(hname)
                    else:
                        term_holes[hname] = self.sort(h[1])
            else:
                raise ParseError(f"unknown interest option {key!r}", opt.line, opt.col)
        pattern = self.reader(holes=term_holes, formula_holes=frozenset(formula_holes)).formula(args[0])
        self.scn.interests.append(InterestTemplate(pattern, tuple(term_holes.items()), tuple(formula_holes),
                                                   priority, limit))

    def check_scenario(self) -> None:
        percepts = self.scn.percepts()
        timeline = Timeline.from_formulas(self.scn.world_formulas() + list(self.doc.assumptions.values()))
        for prev, cur in zip(percepts, percepts[1:]):
            order = timeline.leq(prev.time, cur.time)
            if order is None:
                self.diags.append(Diagnostic(cur.line, 0, "time",
                                             f"percept moments {sexpr(prev.time)} and {sexpr(cur.time)} are incomparable"))
            elif not order:
                self.diags.append(Diagnostic(cur.line, 0, "time",
                                             f"percept at {sexpr(cur.time)} is earlier than the one before it at {sexpr(prev.time)}"))
        self.check_world()

    def check_world(self) -> None:
        from ..fol import ResourceLimits, Status, prove_fol
        from ..shadow import ShadowMap, shadow

        world = self.scn.world_formulas()
        if not world:
            return
        m = ShadowMap()
        res = prove_fol([shadow(f, 1, m) for f in world], None, ResourceLimits(5000, 40, 2000))
        if res.status is Status.PROVED:
            self.diags.append(Diagnostic(0, 0, "world", "world-truth set is inconsistent"))


def parse_kb(text: str | bytes, source: str = "<input>") -> KBDocument:
    """Parse a knowledge base; raises :class:`DocumentError` listing every problem."""
    p = _Parser(text, source, scenario=False)
    p.run()
    if p.diags:
        raise DocumentError(p.diags, source)
    return p.doc


def parse_scenario(text: str | bytes, source: str = "<input>") -> ScenarioScript:
    p = _Parser(text, source, scenario=True)
    p.run()
    if p.diags:
        raise DocumentError(p.diags, source)
    return p.scn


def load_kb(path) -> KBDocument:
    with open(path, "rb") as fh:
        return parse_kb(fh.read(), str(path))


def load_scenario(path) -> ScenarioScript:
    with open(path, "rb") as fh:
        return parse_scenario(fh.read(), str(path))


# ---------------------------------------------------------------- serialization


def _name(s: str) -> str:
    return s if s and not any(c.isspace() or c in '();"' for c in s) else quote(s)


def serialize_signature(sig: Signature) -> list[str]:
    """Declarations for everything beyond the built-in calculus."""
    base = Signature.dcec()
    lines = ["(implicit)"] if sig.implicit else []
    for name, s in sig.sorts.items():
        if name in BUILTIN_SORTS:
            continue
        lines.append(f"(sort {name} {s.parent.name})" if s.parent else f"(sort {name})")
    by_sort: dict[str, list[str]] = {}
    for name, s in sig.constants.items():
        by_sort.setdefault(s.name, []).append(name)
    for sort_name, names in by_sort.items():
        lines.append(f"(const {names[0]} {sort_name})" if len(names) == 1
                     else f"(const ({' '.join(names)}) {sort_name})")
    for name, d in sig.functions.items():
        if base.functions.get(name) == d:
            continue
        lines.append(f"(fn {name} ({' '.join(a.name for a in d.args)}) {d.result.name})")
    for name, args in sig.predicates.items():
        if base.predicates.get(name) == args:
            continue
        lines.append(f"(pred {name} ({' '.join(a.name for a in args)}))" if args else f"(pred {name})")
    return lines


def serialize_kb(doc: KBDocument) -> str:
    lines = serialize_signature(doc.signature)
    for k, v in doc.options.items():
        lines.append(f"(option {_name(k)} {_name(v)})")
    for lab, phi in doc.assumptions.items():
        lines.append(f"(assume {lab} {sexpr(phi)})")
    for lab, lvl in doc.strengths.items():
        lines.append(f"(strength {lab} {lvl})")
    for lab, phi in doc.goals.items():
        lines.append(f"(goal {lab} {sexpr(phi)})")
    return "\n".join(lines) + "\n"


__all__ = [
    "Diagnostic", "DocumentError", "FORMULA_SORT", "InterestTemplate", "KBDocument",
    "PerceptEvent", "ScenarioScript", "StepEvent", "load_kb", "load_scenario", "parse_kb",
    "parse_scenario", "serialize_kb", "serialize_scenario", "serialize_signature",
]


def serialize_scenario(scn: ScenarioScript) -> str:
    """Canonical text of a scenario; parsing it back gives an equal script."""
    doc = scn.kb
    lines = [f"(scenario {scn.name})"] + serialize_signature(doc.signature)
    for k, v in doc.options.items():
        lines.append(f"(option {_name(k)} {_name(v)})")
    if scn.learner is not None:
        lines.append(f"(agent {sexpr(scn.learner)})")
    for lab, phi in doc.assumptions.items():
        lines.append(f"(assume {lab} {sexpr(phi)})")
    for lab, phi in scn.world.items():
        lines.append(f"(world {lab} {sexpr(phi)})")
    for lab, lvl in doc.strengths.items():
        lines.append(f"(strength {lab} {lvl})")
    for lab, phi in doc.goals.items():
        lines.append(f"(goal {lab} {sexpr(phi)})")
    for it in scn.interests:
        holes = [f"({n} {s.name})" for n, s in it.term_holes] + [f"({n} {FORMULA_SORT})" for n in it.formula_holes]
        extra = f" (holes {' '.join(holes)})" if holes else ""
        lines.append(f"(interest {sexpr(it.pattern)} (priority {it.priority}) (limit {it.limit}){extra})")
    for ev in scn.events:
        if isinstance(ev, PerceptEvent):
            lines.append(f"(percept {sexpr(ev.agent)} {sexpr(ev.time)} {sexpr(ev.formula)} {ev.strength})")
        else:
            lines.append("(step)")
    for phi, lvl in scn.expectations:
        lines.append(f"(expect {sexpr(phi)} {lvl})")
    return "\n".join(lines) + "\n"
