"""Modal inference schemata as forward expansion rules.

Premise rules (R_K, R_B, R3, R4, R12, R13, R14) fire on members of the
current formula set. Axiom schemes (R1, R2, R5 to R10) have infinitely
many instances, so they are minted only for formulas, agents and moments
that already occur in the set or the goal. ``lift`` adds modal formulas
that the first-order layer derives from the shadowed set; it is what lets
a schema use a premise that was concluded by first-order reasoning.

Every instance can be replayed by :func:`check_instance`, which shares no
code with the generators below.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import product
from typing import Callable, Iterable, Sequence

from .fol import ResourceLimits, Status
from .logic.normal import alpha_equal, normalize
from .logic.signature import Verdict
from .logic.sorts import AGENT, MOMENT
from .logic.subst import SortMismatch, Substitution, substitute
from .logic.syntax import (
    And,
    Atom,
    Believes,
    Common,
    Fn,
    Forall,
    Formula,
    Iff,
    Implies,
    Intends,
    Knows,
    Not,
    Ought,
    Perceives,
    Says,
    Term,
    children,
    implies_chain,
    is_closed,
    is_ground,
    is_modal,
    modal_depth,
    sexpr,
    subformulas,
    subterms,
    top_terms,
)
from .logic.timeline import Timeline
from .segment import FOLSegment, check_segment, run_segment
from .shadow import ShadowMap

SCHEMA_IDS = ("R_K", "R_B", "R1", "R2", "R3", "R4", "R5", "R6", "R7", "R8", "R9", "R10",
              "R12", "R13", "R14")
LIFT = "lift"
AXIOM_SCHEMES = ("R1", "R2", "R5", "R6", "R7", "R8", "R9", "R10")
_ORDER = {s: i for i, s in enumerate(SCHEMA_IDS + (LIFT,))}


class UnknownSchema(ValueError):
    pass


@dataclass(frozen=True)
class ExpansionPolicy:
    enabled: tuple[str, ...] = SCHEMA_IDS
    d_max: int = 4
    r3_depth: int = 2
    max_rounds: int = 16
    lift: bool = True

    def __post_init__(self):
        unknown = [s for s in self.enabled if s not in SCHEMA_IDS]
        if unknown:
            raise UnknownSchema(f"unknown schema id(s): {', '.join(unknown)}")
        if self.d_max < 1:
            raise ValueError("d_max must be at least 1")
        if self.r3_depth < 1:
            raise ValueError("r3_depth must be at least 1")
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be at least 1")
        # keep a canonical order so equal policies compare equal
        object.__setattr__(self, "enabled", tuple(s for s in SCHEMA_IDS if s in self.enabled))

    def on(self, schema: str) -> bool:
        return schema in self.enabled

    def only(self, *ids: str) -> ExpansionPolicy:
        return replace(self, enabled=tuple(ids))

    def without(self, *ids: str) -> ExpansionPolicy:
        return replace(self, enabled=tuple(s for s in self.enabled if s not in ids))

    def to_options(self) -> dict[str, str]:
        return {
            "schemata": ",".join(self.enabled) if self.enabled else "none",
            "d-max": str(self.d_max),
            "r3-depth": str(self.r3_depth),
            "max-rounds": str(self.max_rounds),
            "lift": "on" if self.lift else "off",
        }

    @classmethod
    def from_options(cls, opts: dict[str, str], base: ExpansionPolicy | None = None) -> ExpansionPolicy:
        pol = base or cls()
        kw = {}
        if "schemata" in opts:
            kw["enabled"] = parse_schema_list(opts["schemata"])
        for key, attr in (("d-max", "d_max"), ("r3-depth", "r3_depth"), ("max-rounds", "max_rounds")):
            if key in opts:
                kw[attr] = int(opts[key])
        if "lift" in opts:
            if opts["lift"] not in ("on", "off"):
                raise ValueError(f"lift must be 'on' or 'off', got {opts['lift']!r}")
            kw["lift"] = opts["lift"] == "on"
        return replace(pol, **kw)


def parse_schema_list(text: str) -> tuple[str, ...]:
    text = text.strip()
    if text in ("", "none"):
        return ()
    if text == "all":
        return SCHEMA_IDS
    out = []
    for part in text.split(","):
        part = part.strip()
        name = {"RK": "R_K", "RB": "R_B"}.get(part, part)
        if name not in SCHEMA_IDS:
            raise UnknownSchema(f"unknown schema id {part!r}")
        out.append(name)
    return tuple(out)


@dataclass(frozen=True)
class SchemaInstance:
    schema: str
    premises: tuple[Formula, ...]
    conclusion: Formula
    params: tuple[tuple[str, object], ...] = ()
    side_conditions: tuple[str, ...] = ()
    subproof: object = None

    def param(self, name: str):
        for k, v in self.params:
            if k == name:
                return v
        raise KeyError(name)

    def __str__(self) -> str:
        return f"[{self.schema}] {sexpr(self.conclusion)}"


@dataclass(frozen=True)
class Diagnostic:
    kind: str  # depth-exceeded | incomparable-times | side-condition | oracle
    schema: str
    detail: str


@dataclass
class Expansion:
    gamma: list[Formula]
    instances: list[SchemaInstance]
    diagnostics: list[Diagnostic] = field(default_factory=list)
    resource_out: bool = False
    origins: list[str] = field(default_factory=list)

    @property
    def changed(self) -> bool:
        return bool(self.instances)


# oracle(premises, goal) -> (Status, subproof or None)
Oracle = Callable[[list[Formula], Formula], tuple[Status, object]]


# ---------------------------------------------------------------- universe


def _closed_material(formulas: Iterable[Formula]) -> list[Formula]:
    seen: dict[Formula, Formula] = {}
    for phi in formulas:
        for node in subformulas(phi):
            if is_closed(node):
                seen.setdefault(normalize(node), node)
    return list(seen.values())


def _universe(formulas: Iterable[Formula]) -> tuple[list[Term], list[Term], list[Term]]:
    agents: dict[Term, None] = {}
    times: dict[Term, None] = {}
    grounds: dict[Term, None] = {}
    for phi in formulas:
        for node in subformulas(phi):
            for t in top_terms(node):
                for s in subterms(t):
                    if not is_ground(s):
                        continue
                    grounds.setdefault(s)
                    if s.sort.is_subsort_of(AGENT):
                        agents.setdefault(s)
                    if s.sort.is_subsort_of(MOMENT):
                        times.setdefault(s)
    return list(agents), list(times), list(grounds)


def _positive_surface(phi: Formula, positive: bool, out: dict[Formula, Formula]) -> None:
    """Closed modal formulas visible to the first-order layer in a positive position."""
    if is_modal(phi):
        if positive and is_closed(phi):
            out.setdefault(normalize(phi), phi)
        return
    if isinstance(phi, Not):
        _positive_surface(phi.arg, not positive, out)
    elif isinstance(phi, Implies):
        _positive_surface(phi.left, not positive, out)
        _positive_surface(phi.right, positive, out)
    elif isinstance(phi, Iff):
        for k in (phi.left, phi.right):
            _positive_surface(k, True, out)
            _positive_surface(k, False, out)
    else:
        for k in children(phi):
            _positive_surface(k, positive, out)


def _negative_surface(phi: Formula, positive: bool, out: dict[Formula, Formula]) -> None:
    """Closed modal formulas the first-order layer would consume (antecedent positions)."""
    if is_modal(phi):
        if not positive and is_closed(phi):
            out.setdefault(normalize(phi), phi)
        return
    if isinstance(phi, Not):
        _negative_surface(phi.arg, not positive, out)
    elif isinstance(phi, Implies):
        _negative_surface(phi.left, not positive, out)
        _negative_surface(phi.right, positive, out)
    elif isinstance(phi, Iff):
        for k in (phi.left, phi.right):
            _negative_surface(k, True, out)
            _negative_surface(k, False, out)
    else:
        for k in children(phi):
            _negative_surface(k, positive, out)


def _flatten_and(phi: Formula) -> list[Formula]:
    if isinstance(phi, And):
        return _flatten_and(phi.left) + _flatten_and(phi.right)
    return [phi]


# ---------------------------------------------------------------- generation


class _Round:
    def __init__(self, gamma, pol, timeline, goal, universe, oracle, limits, shadow_map, origins):
        self.gamma = list(gamma)
        self.pol = pol
        self.timeline = timeline or Timeline.from_formulas(self.gamma + ([goal] if goal else []))
        self.goal = goal
        self.keys = {normalize(g): i for i, g in reversed(list(enumerate(self.gamma)))}
        goal_part = [goal] if goal is not None else []
        if origins is None:
            seeds = self.gamma
        else:
            # formulas that exist only inside minted axioms or iterated knowledge do not seed new axioms
            seeds = [g for g, o in zip(self.gamma, origins) if o not in AXIOM_SCHEMES and o != "R3"]
        self.material = _closed_material(seeds + goal_part)
        wanted: dict[Formula, Formula] = {}
        given = self.gamma if origins is None else [g for g, o in zip(self.gamma, origins) if o == "assumption"]
        for g in given:
            _negative_surface(g, True, wanted)
        self.targets = [m for m in _closed_material(goal_part) if is_modal(m)] + list(wanted.values())
        agents, times, grounds = _universe(self.gamma + ([goal] if goal is not None else []))
        if universe:
            for a in universe.get("agents", ()):
                if a not in agents:
                    agents.append(a)
            for t in universe.get("times", ()):
                if t not in times:
                    times.append(t)
        self.agents, self.times, self.grounds = agents, times, grounds
        self.oracle = oracle
        self.limits = limits or ResourceLimits()
        self.shadow_map = shadow_map if shadow_map is not None else ShadowMap()
        self.out: list[SchemaInstance] = []
        self.out_keys: set[Formula] = set()
        self.diags: list[Diagnostic] = []
        self.diag_keys: set[tuple] = set()
        self.resource_out = False

    def has(self, phi: Formula) -> bool:
        return normalize(phi) in self.keys

    def leq(self, schema: str, a: Term, b: Term) -> bool:
        c = self.timeline.leq(a, b)
        if c is None:
            self.diag("incomparable-times", schema, f"{sexpr(a)} and {sexpr(b)} are incomparable")
            return False
        return c

    def diag(self, kind: str, schema: str, detail: str) -> None:
        key = (kind, schema, detail)
        if key not in self.diag_keys:
            self.diag_keys.add(key)
            self.diags.append(Diagnostic(kind, schema, detail))

    def emit(self, inst: SchemaInstance) -> None:
        c = inst.conclusion
        key = normalize(c)
        if key in self.keys or key in self.out_keys:
            return
        if modal_depth(c) > self.pol.d_max:
            self.diag("depth-exceeded", inst.schema, f"{sexpr(c)} has modal depth {modal_depth(c)} > {self.pol.d_max}")
            return
        self.out_keys.add(key)
        self.out.append(inst)

    def members(self, cls) -> list[Formula]:
        return [g for g in self.gamma if isinstance(g, cls)]

    def occurring(self, cls) -> list[Formula]:
        return [m for m in self.material if isinstance(m, cls)]

    # -- schemata in catalogue order

    def r_closure(self, schema: str, op) -> None:
        if self.oracle is None:
            self.diag("oracle", schema, "no recursive prover supplied; closure schema skipped")
            return
        targets: dict[Formula, Formula] = {}
        for m in self.targets:
            if isinstance(m, (Knows, Believes)) and (isinstance(m, op) or op is Knows):
                t = op(m.agent, m.time, m.body)
                targets.setdefault(normalize(t), t)
        for target in targets.values():
            if self.has(target) or normalize(target) in self.out_keys:
                continue
            groups: dict[Term, list[Formula]] = {}
            for g in self.gamma:
                if isinstance(g, op) and g.agent == target.agent:
                    groups.setdefault(g.time, []).append(g)
            for t1, members in groups.items():
                if not self.leq(schema, t1, target.time):
                    continue
                status, sub = self.oracle([g.body for g in members], target.body)
                if status is Status.RESOURCE_OUT:
                    self.resource_out = True
                    self.diag("oracle", schema, f"side condition for {sexpr(target)} ran out of resources")
                    continue
                if status is not Status.PROVED:
                    continue
                used = {normalize(u) for u in sub.assumption_formulas()}
                prem = tuple(g for g in members if normalize(g.body) in used) or tuple(members)
                self.emit(SchemaInstance(
                    schema, prem, target,
                    params=(("t1", t1), ("t2", target.time)),
                    side_conditions=(f"{sexpr(t1)} <= {sexpr(target.time)}",),
                    subproof=sub,
                ))
                break

    def r1(self) -> None:
        for p in self.occurring(Perceives):
            self.emit(SchemaInstance("R1", (), Common(p.time, Implies(p, Knows(p.agent, p.time, p.body))),
                                     params=(("a", p.agent), ("t", p.time))))

    def r2(self) -> None:
        for k in self.material:
            if isinstance(k, (Knows, Believes)):
                self.emit(SchemaInstance("R2", (), Common(k.time, Implies(Knows(k.agent, k.time, k.body),
                                                                          Believes(k.agent, k.time, k.body))),
                                         params=(("a", k.agent), ("t", k.time))))

    def r3(self) -> None:
        for c in self.members(Common):
            later = [t for t in self.times if self.leq("R3", c.time, t)]
            pairs = list(product(self.agents, later))
            for n in range(1, self.pol.r3_depth + 1):
                if n + modal_depth(c.body) > self.pol.d_max:
                    self.diag("depth-exceeded", "R3", f"{n}-fold iteration of {sexpr(c)} exceeds depth {self.pol.d_max}")
                    break
                for chain in product(pairs, repeat=n):
                    out = c.body
                    for a, t in reversed(chain):
                        out = Knows(a, t, out)
                    conds = tuple(f"{sexpr(c.time)} <= {sexpr(t)}" for _, t in chain)
                    self.emit(SchemaInstance("R3", (c,), out, params=(("n", n),), side_conditions=conds))

    def r4(self) -> None:
        for k in self.members(Knows):
            self.emit(SchemaInstance("R4", (k,), k.body))

    def r5_r6(self, schema: str, op) -> None:
        for c in self.occurring(Common):
            inner = c.body
            if not (isinstance(inner, op) and isinstance(inner.body, Implies)):
                continue
            a, p1, p2 = inner.agent, inner.body.left, inner.body.right
            starts = [m.time for m in self.material if isinstance(m, op) and m.agent == a and m.body == p1]
            for t2 in dict.fromkeys(starts):
                for t3 in self.times:
                    out = Implies(c, Implies(op(a, t2, p1), op(a, t3, p2)))
                    self.emit(SchemaInstance(schema, (), out, params=(("t2", t2), ("t3", t3))))

    def r7(self) -> None:
        for c in self.occurring(Common):
            inner = c.body
            if not (isinstance(inner, Common) and isinstance(inner.body, Implies)):
                continue
            p1, p2 = inner.body.left, inner.body.right
            starts = [m.time for m in self.material if isinstance(m, Common) and m.body == p1]
            for t2 in dict.fromkeys(starts):
                for t3 in self.times:
                    out = Implies(c, Implies(Common(t2, p1), Common(t3, p2)))
                    self.emit(SchemaInstance("R7", (), out, params=(("t2", t2), ("t3", t3))))

    def r8(self) -> None:
        for q in self.occurring(Forall):
            for s in self.grounds:
                if not s.sort.is_subsort_of(q.var.sort):
                    continue
                inst = substitute(q.body, Substitution({q.var: s}))
                for t in self.times:
                    self.emit(SchemaInstance("R8", (), Common(t, Implies(q, inst)),
                                             params=(("term", s), ("t", t))))

    def r9(self) -> None:
        for e in self.occurring(Iff):
            for t in self.times:
                out = Common(t, Implies(e, Implies(Not(e.right), Not(e.left))))
                self.emit(SchemaInstance("R9", (), out, params=(("t", t),)))

    def r10(self) -> None:
        for imp in self.occurring(Implies):
            parts = _flatten_and(imp.left)
            if len(parts) < 2:
                continue
            for t in self.times:
                out = Common(t, Implies(imp, implies_chain(parts, imp.right)))
                self.emit(SchemaInstance("R10", (), out, params=(("t", t), ("n", len(parts)))))

    def r12(self) -> None:
        for s in self.members(Says):
            if s.hearer is None:
                continue
            out = Believes(s.hearer, s.time, Believes(s.speaker, s.time, s.body))
            self.emit(SchemaInstance("R12", (s,), out))

    def r13(self) -> None:
        for i in self.members(Intends):
            h = i.body
            if not (isinstance(h, Atom) and h.pred == "happens" and len(h.args) == 2):
                continue
            act = h.args[0]
            if not (isinstance(act, Fn) and act.symbol == "action"):
                continue
            out = Perceives(i.agent, i.time, Atom("happens", (act, i.time)))
            self.emit(SchemaInstance("R13", (i,), out, params=(("t'", h.args[1]),)))

    def r14(self) -> None:
        for o in self.members(Ought):
            b1 = Believes(o.agent, o.time, o.body)
            b2 = Believes(o.agent, o.time, o)
            if self.has(b1) and self.has(b2):
                out = Knows(o.agent, o.time, Intends(o.agent, o.time, o.action))
                self.emit(SchemaInstance("R14", (b1, b2, o), out))

    def lift(self) -> None:
        cands: dict[Formula, Formula] = {}
        for g in self.gamma:
            if not is_modal(g):
                _positive_surface(g, True, cands)
        for key, phi in cands.items():
            if key in self.keys or key in self.out_keys:
                continue
            result, seg = run_segment(self.gamma, phi, self.shadow_map, self.limits)
            if result.status is Status.RESOURCE_OUT:
                self.resource_out = True
                self.diag("oracle", LIFT, f"first-order check for {sexpr(phi)} ran out of resources")
            if seg is None:
                continue
            self.emit(SchemaInstance(LIFT, seg.premises, phi, subproof=seg))

    def run(self) -> None:
        pol = self.pol
        if pol.on("R_K"):
            self.r_closure("R_K", Knows)
        if pol.on("R_B"):
            self.r_closure("R_B", Believes)
        steps = [("R1", self.r1), ("R2", self.r2), ("R3", self.r3), ("R4", self.r4),
                 ("R5", lambda: self.r5_r6("R5", Knows)), ("R6", lambda: self.r5_r6("R6", Believes)),
                 ("R7", self.r7), ("R8", self.r8), ("R9", self.r9), ("R10", self.r10),
                 ("R12", self.r12), ("R13", self.r13), ("R14", self.r14)]
        for sid, fn in steps:
            if pol.on(sid):
                fn()
        if pol.lift:
            self.lift()


def applicable(gamma: Sequence[Formula], pol: ExpansionPolicy | None = None, *,
               timeline: Timeline | None = None, goal: Formula | None = None,
               universe: dict | None = None, oracle: Oracle | None = None,
               limits: ResourceLimits | None = None, shadow_map: ShadowMap | None = None,
               origins: Sequence[str] | None = None) -> list[SchemaInstance]:
    """Every instance whose premises are in ``gamma`` and whose conclusion is new."""
    return _expand(gamma, pol, timeline, goal, universe, oracle, limits, shadow_map, origins).instances


def expand(gamma: Sequence[Formula], pol: ExpansionPolicy | None = None, *,
           timeline: Timeline | None = None, goal: Formula | None = None,
           universe: dict | None = None, oracle: Oracle | None = None,
           limits: ResourceLimits | None = None, shadow_map: ShadowMap | None = None,
           origins: Sequence[str] | None = None) -> Expansion:
    """One round: ``gamma`` plus the conclusions of every applicable instance.

    ``origins`` names, per member of ``gamma``, the schema that produced it
    ("assumption" for inputs). Axiom schemes are then seeded only by members
    that were not themselves minted axioms or iterated-knowledge expansions.
    """
    return _expand(gamma, pol, timeline, goal, universe, oracle, limits, shadow_map, origins)


def _expand(gamma, pol, timeline, goal, universe, oracle, limits, shadow_map, origins) -> Expansion:
    r = _Round(gamma, pol or ExpansionPolicy(), timeline, goal, universe, oracle, limits, shadow_map, origins)
    r.run()
    r.out.sort(key=lambda i: _ORDER[i.schema])
    new_origins = list(origins) if origins is not None else ["assumption"] * len(gamma)
    new_origins += [i.schema for i in r.out]
    return Expansion(list(gamma) + [i.conclusion for i in r.out], r.out, r.diags, r.resource_out, new_origins)


def saturate(gamma: Sequence[Formula], pol: ExpansionPolicy | None = None, **kw) -> tuple[list[Formula], int]:
    """Iterate :func:`expand` to a fixpoint (or ``pol.max_rounds``); returns the set and round count."""
    pol = pol or ExpansionPolicy()
    cur = list(gamma)
    origins = None
    for n in range(pol.max_rounds):
        ex = expand(cur, pol, origins=origins, **kw)
        if not ex.changed:
            return cur, n
        cur, origins = ex.gamma, ex.origins
    return cur, pol.max_rounds


# ---------------------------------------------------------------- replay


def _same(a: Formula, b: Formula) -> bool:
    return a == b or alpha_equal(a, b)


def _leq(timeline: Timeline, a: Term, b: Term) -> bool:
    return timeline.leq(a, b) is True


def check_instance(inst: SchemaInstance, timeline: Timeline,
                   check_sub: Callable[[object, list[Formula], Formula], Verdict] | None = None) -> Verdict:
    """Re-verify that ``inst.conclusion`` follows from ``inst.premises`` by the cited schema."""
    where = f"{inst.schema} {sexpr(inst.conclusion)}"
    try:
        ok, why = _CHECKERS[inst.schema](inst, timeline, check_sub)
    except KeyError:
        return Verdict.reject(where, f"unknown schema {inst.schema!r}")
    except (AttributeError, IndexError, TypeError, ValueError) as exc:
        return Verdict.reject(where, f"malformed instance: {exc}")
    return Verdict.accept() if ok else Verdict.reject(where, why)


def _c_closure(op):
    def check(inst, tl, check_sub):
        c, prem = inst.conclusion, inst.premises
        if not isinstance(c, op) or not prem:
            return False, "conclusion or premises have the wrong operator"
        if any(not isinstance(p, op) or p.agent != c.agent or p.time != prem[0].time for p in prem):
            return False, "premises must share one agent and one moment"
        if not _leq(tl, prem[0].time, c.time):
            return False, f"side condition {sexpr(prem[0].time)} <= {sexpr(c.time)} fails"
        if check_sub is None or inst.subproof is None:
            return False, "no sub-proof to discharge the entailment side condition"
        v = check_sub(inst.subproof, [p.body for p in prem], c.body)
        return bool(v), f"sub-proof rejected: {v.where}: {v.reason}"
    return check


def _c_r1(inst, tl, _):
    c = inst.conclusion
    ok = (not inst.premises and isinstance(c, Common) and isinstance(c.body, Implies)
          and isinstance(c.body.left, Perceives) and isinstance(c.body.right, Knows))
    if not ok:
        return False, "not of the form C(t, P(a,t,φ) → K(a,t,φ))"
    p, k = c.body.left, c.body.right
    ok = p.agent == k.agent and p.time == k.time == c.time and p.body == k.body
    return ok, "agent, moment or body differ"


def _c_r2(inst, tl, _):
    c = inst.conclusion
    ok = (not inst.premises and isinstance(c, Common) and isinstance(c.body, Implies)
          and isinstance(c.body.left, Knows) and isinstance(c.body.right, Believes))
    if not ok:
        return False, "not of the form C(t, K(a,t,φ) → B(a,t,φ))"
    k, b = c.body.left, c.body.right
    ok = k.agent == b.agent and k.time == b.time == c.time and k.body == b.body
    return ok, "agent, moment or body differ"


def _c_r3(inst, tl, _):
    if len(inst.premises) != 1 or not isinstance(inst.premises[0], Common):
        return False, "R3 needs one common-knowledge premise"
    ck = inst.premises[0]
    cur, n = inst.conclusion, 0
    while isinstance(cur, Knows) and not _same(cur, ck.body):
        if not _leq(tl, ck.time, cur.time):
            return False, f"side condition {sexpr(ck.time)} <= {sexpr(cur.time)} fails"
        cur, n = cur.body, n + 1
    if n == 0 or cur != ck.body:
        return False, "conclusion is not iterated knowledge of the premise body"
    return True, ""


def _c_r4(inst, tl, _):
    if len(inst.premises) != 1 or not isinstance(inst.premises[0], Knows):
        return False, "R4 needs one knowledge premise"
    return inst.premises[0].body == inst.conclusion, "conclusion is not the known formula"


def _c_r5_r6(op):
    def check(inst, tl, _):
        c = inst.conclusion
        if inst.premises:
            return False, "axiom scheme takes no premises"
        try:
            ck, rest = c.left, c.right
            k1, k2 = rest.left, rest.right
            inner = ck.body
            imp = inner.body
        except AttributeError:
            return False, "wrong shape"
        ok = (isinstance(c, Implies) and isinstance(ck, Common) and isinstance(inner, op)
              and isinstance(imp, Implies) and isinstance(rest, Implies)
              and isinstance(k1, op) and isinstance(k2, op)
              and inner.agent == k1.agent == k2.agent
              and k1.body == imp.left and k2.body == imp.right)
        return ok, "wrong shape"
    return check


def _c_r7(inst, tl, _):
    c = inst.conclusion
    if inst.premises:
        return False, "axiom scheme takes no premises"
    try:
        ck, rest = c.left, c.right
        inner = ck.body
        imp = inner.body
        c1, c2 = rest.left, rest.right
    except AttributeError:
        return False, "wrong shape"
    ok = (isinstance(c, Implies) and isinstance(ck, Common) and isinstance(inner, Common)
          and isinstance(imp, Implies) and isinstance(rest, Implies)
          and isinstance(c1, Common) and isinstance(c2, Common)
          and c1.body == imp.left and c2.body == imp.right)
    return ok, "wrong shape"


def _c_r8(inst, tl, _):
    c = inst.conclusion
    if inst.premises or not isinstance(c, Common) or not isinstance(c.body, Implies):
        return False, "not of the form C(t, ∀x.φ → φ[x↦s])"
    q, out = c.body.left, c.body.right
    if not isinstance(q, Forall):
        return False, "antecedent is not universally quantified"
    s = inst.param("term")
    try:
        expected = substitute(q.body, Substitution({q.var: s}))
    except SortMismatch:
        return False, "instantiating term has the wrong sort"
    return _same(expected, out), "consequent is not the stated instance"


def _c_r9(inst, tl, _):
    c = inst.conclusion
    try:
        e, rest = c.body.left, c.body.right
        ok = (not inst.premises and isinstance(c, Common) and isinstance(c.body, Implies)
              and isinstance(e, Iff) and isinstance(rest, Implies)
              and rest.left == Not(e.right) and rest.right == Not(e.left))
    except AttributeError:
        ok = False
    return ok, "not of the form C(t, (φ1 ↔ φ2) → ¬φ2 → ¬φ1)"


def _c_r10(inst, tl, _):
    c = inst.conclusion
    if inst.premises or not isinstance(c, Common) or not isinstance(c.body, Implies):
        return False, "wrong shape"
    imp, curried = c.body.left, c.body.right
    if not isinstance(imp, Implies) or not isinstance(imp.left, And):
        return False, "antecedent is not an implication from a conjunction"
    parts = []
    stack = imp.left
    while isinstance(stack, And):
        parts.append(stack.left)
        stack = stack.right
    parts.append(stack)
    cur = curried
    for p in parts:
        if not isinstance(cur, Implies) or cur.left != p:
            return False, "curried form does not list the conjuncts in order"
        cur = cur.right
    return cur == imp.right, "curried form has a different consequent"


def _c_r12(inst, tl, _):
    if len(inst.premises) != 1 or not isinstance(inst.premises[0], Says):
        return False, "R12 needs one communication premise"
    s = inst.premises[0]
    if s.hearer is None:
        return False, "communication has no hearer"
    return inst.conclusion == Believes(s.hearer, s.time, Believes(s.speaker, s.time, s.body)), "wrong conclusion"


def _c_r13(inst, tl, _):
    if len(inst.premises) != 1 or not isinstance(inst.premises[0], Intends):
        return False, "R13 needs one intention premise"
    i = inst.premises[0]
    h = i.body
    if not (isinstance(h, Atom) and h.pred == "happens" and isinstance(h.args[0], Fn)
            and h.args[0].symbol == "action"):
        return False, "intention is not about an action happening"
    return inst.conclusion == Perceives(i.agent, i.time, Atom("happens", (h.args[0], i.time))), "wrong conclusion"


def _c_r14(inst, tl, _):
    if len(inst.premises) != 3:
        return False, "R14 needs three premises"
    b1, b2, o = inst.premises
    if not isinstance(o, Ought):
        return False, "third premise is not an obligation"
    ok = (b1 == Believes(o.agent, o.time, o.body) and b2 == Believes(o.agent, o.time, o)
          and inst.conclusion == Knows(o.agent, o.time, Intends(o.agent, o.time, o.action)))
    return ok, "premises or conclusion do not fit the obligation"


def _c_lift(inst, tl, _):
    seg = inst.subproof
    if not isinstance(seg, FOLSegment):
        return False, "lift needs a first-order segment"
    if not _same(seg.goal, inst.conclusion):
        return False, "segment proves a different formula"
    if len(seg.premises) != len(inst.premises) or not all(_same(a, b) for a, b in zip(seg.premises, inst.premises)):
        return False, "segment premises differ from the instance premises"
    v = check_segment(seg)
    return bool(v), f"{v.where}: {v.reason}"


_CHECKERS = {
    "R_K": _c_closure(Knows), "R_B": _c_closure(Believes),
    "R1": _c_r1, "R2": _c_r2, "R3": _c_r3, "R4": _c_r4,
    "R5": _c_r5_r6(Knows), "R6": _c_r5_r6(Believes), "R7": _c_r7,
    "R8": _c_r8, "R9": _c_r9, "R10": _c_r10,
    "R12": _c_r12, "R13": _c_r13, "R14": _c_r14,
    LIFT: _c_lift,
}

__all__ = [
    "AXIOM_SCHEMES", "LIFT", "SCHEMA_IDS", "Diagnostic", "Expansion", "ExpansionPolicy",
    "SchemaInstance", "UnknownSchema", "applicable", "check_instance", "expand",
    "parse_schema_list", "saturate",
]
