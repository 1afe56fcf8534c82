"""Shared signature, parsing shortcut and hypothesis strategies."""

from __future__ import annotations

import itertools

from hypothesis import strategies as st

from shadowkernel.kbformat import parse_formula
from shadowkernel.logic.signature import Signature
from shadowkernel.logic.sorts import AGENT, MOMENT, OBJECT
from shadowkernel.logic.subst import substitute
from shadowkernel.logic.syntax import (
    And, Atom, Believes, Common, Const, Exists, Fn, Forall, Iff, Implies, Knows, Not, Or, Perceives, Says, Var,
    children, ground_terms, map_top_terms, rebuild, subformulas, subterms, term_vars, top_terms,
)

PROPS = ("Rainy", "Sunny", "Windy", "Cold")
OBJECTS = ("a", "b", "c")
AGENTS = ("alice", "bob")
MOMENTS = ("t0", "t1", "t2")


def make_signature() -> Signature:
    sig = Signature.dcec()
    for p in PROPS:
        sig.declare_pred(p)
    sig.declare_pred("Red", ["Object"])
    sig.declare_pred("Blue", ["Object"])
    sig.declare_pred("Rel", ["Object", "Object"])
    sig.declare_pred("Sleepy", ["Object"])
    sig.declare_fn("succ", ["Object"], "Object")
    sig.declare_fn("pair", ["Object", "Object"], "Object")
    for c in OBJECTS + ("jack",):
        sig.declare_const(c, "Object")
    for a in AGENTS + ("robert", "host"):
        sig.declare_const(a, "Agent")
    for t in MOMENTS:
        sig.declare_const(t, "Moment")
    return sig


SIG = make_signature()


def F(text: str, sig: Signature | None = None):
    return parse_formula(text, sig or SIG)


def objc(name):
    return Const(name, OBJECT)


def agent(name):
    return Const(name, AGENT)


def moment(name):
    return Const(name, MOMENT)


VARS = (Var("x", OBJECT), Var("y", OBJECT), Var("z", OBJECT))


def terms(bound: tuple = ()):
    base = st.sampled_from([objc(c) for c in OBJECTS] + list(bound))
    return st.recursive(base, lambda inner: st.builds(lambda a: Fn("succ", (a,), OBJECT), inner), max_leaves=3)


def _fo(bound: tuple, depth: int, modal: bool):
    t = terms(bound)
    leaves = st.one_of(
        st.sampled_from([Atom(p) for p in PROPS]),
        st.builds(lambda p, x: Atom(p, (x,)), st.sampled_from(["Red", "Blue"]), t),
        st.builds(lambda x, y: Atom("Rel", (x, y)), t, t),
    )
    if depth == 0:
        return leaves
    sub = _fo(bound, depth - 1, modal)
    opts = [
        leaves,
        st.builds(Not, sub),
        st.builds(lambda c, l, r: c(l, r), st.sampled_from([And, Or, Implies, Iff]), sub, sub),
    ]
    free = [v for v in VARS if v not in bound]
    if free:
        v = free[0]
        inner = _fo(bound + (v,), depth - 1, modal)
        opts.append(st.builds(lambda q, b: q(v, b), st.sampled_from([Forall, Exists]), inner))
    if modal:
        ag = st.sampled_from([agent(a) for a in AGENTS])
        tm = st.sampled_from([moment(m) for m in MOMENTS])
        opts.append(st.builds(lambda op, a, tt, b: op(a, tt, b),
                              st.sampled_from([Knows, Believes, Perceives]), ag, tm, sub))
        opts.append(st.builds(Common, tm, sub))
        opts.append(st.builds(lambda s, h, tt, b: Says(s, h, tt, b), ag, ag, tm, sub))
    return st.one_of(*opts)


def fo_formulas(depth: int = 3):
    """Closed first-order formulas over the test signature."""
    return _fo((), depth, False)


def formulas(depth: int = 3):
    """Closed formulas that may contain modal operators."""
    return _fo((), depth, True)


def prop_formulas(atoms=PROPS, depth: int = 3):
    leaf = st.sampled_from([Atom(p) for p in atoms])
    return st.recursive(
        leaf,
        lambda inner: st.one_of(
            st.builds(Not, inner),
            st.builds(lambda c, l, r: c(l, r), st.sampled_from([And, Or, Implies, Iff]), inner, inner),
        ),
        max_leaves=2 ** depth,
    )


def rename_bound(phi, suffix: str = "_r"):
    """Rename every bound variable; the result is alpha-equivalent to ``phi``."""
    if isinstance(phi, (Forall, Exists)):
        nv = Var(phi.var.name + suffix, phi.var.sort)
        body = substitute(rename_bound(phi.body, suffix), {phi.var: nv})
        return type(phi)(nv, body)
    kids = children(phi)
    if not kids:
        return phi
    return rebuild(phi, tuple(rename_bound(k, suffix) for k in kids))


# ---------------------------------------------------------------- oracles

def random_prop(rng, atoms, depth):
    if depth == 0 or rng.random() < 0.3:
        return Atom(rng.choice(atoms))
    op = rng.choice(["not", "and", "or", "implies", "iff"])
    if op == "not":
        return Not(random_prop(rng, atoms, depth - 1))
    cls = {"and": And, "or": Or, "implies": Implies, "iff": Iff}[op]
    return cls(random_prop(rng, atoms, depth - 1), random_prop(rng, atoms, depth - 1))


def evaluate(phi, val) -> bool:
    if isinstance(phi, Atom):
        return val[phi.pred]
    if isinstance(phi, Not):
        return not evaluate(phi.arg, val)
    left, right = evaluate(phi.left, val), evaluate(phi.right, val)
    if isinstance(phi, And):
        return left and right
    if isinstance(phi, Or):
        return left or right
    if isinstance(phi, Implies):
        return (not left) or right
    return left == right


def truth_table_valid(premises, goal, atoms) -> bool:
    """Brute-force semantic entailment over every assignment to ``atoms``."""
    for bits in itertools.product((False, True), repeat=len(atoms)):
        val = dict(zip(atoms, bits))
        if all(evaluate(p, val) for p in premises) and not evaluate(goal, val):
            return False
    return True


def random_sequent(rng, atoms=PROPS):
    n = rng.randint(1, len(atoms))
    used = list(atoms[:n])
    premises = [random_prop(rng, used, rng.randint(0, 3)) for _ in range(rng.randint(0, 3))]
    return premises, random_prop(rng, used, rng.randint(0, 3)), used


def _random_fo(rng, depth, bound=()):
    consts = [objc(c) for c in OBJECTS] + list(bound)
    t = rng.choice(consts)
    if rng.random() < 0.2:
        t = Fn("succ", (t,), OBJECT)
    if depth == 0 or rng.random() < 0.3:
        kind = rng.randrange(3)
        if kind == 0:
            return Atom(rng.choice(PROPS))
        if kind == 1:
            return Atom(rng.choice(["Red", "Blue"]), (t,))
        return Atom("Rel", (t, rng.choice(consts)))
    op = rng.randrange(4)
    if op == 0:
        return Not(_random_fo(rng, depth - 1, bound))
    if op == 1:
        cls = rng.choice([And, Or, Implies, Iff])
        return cls(_random_fo(rng, depth - 1, bound), _random_fo(rng, depth - 1, bound))
    free = [v for v in VARS if v not in bound]
    if not free:
        return _random_fo(rng, depth - 1, bound)
    v = free[0]
    return rng.choice([Forall, Exists])(v, _random_fo(rng, depth - 1, bound + (v,)))


def forward_provable(rng, steps: int = 3):
    """Random premises and a goal derived from them by sound forward rules.

    Each rule is a textbook natural-deduction step, so entailment holds by
    construction and never depends on the prover under test.
    """
    premises = [_random_fo(rng, rng.randint(1, 3)) for _ in range(rng.randint(1, 3))]
    if rng.random() < 0.5:
        v = VARS[0]
        body = _random_fo(rng, 2, (v,))
        premises.append(Forall(v, body))
    derived = list(premises)
    goal = rng.choice(derived)
    for _ in range(rng.randint(1, steps)):
        rule = rng.randrange(8)
        other = rng.choice(derived)
        if rule == 0:
            goal = Or(goal, _random_fo(rng, 2))
        elif rule == 1:
            goal = Or(_random_fo(rng, 2), goal)
        elif rule == 2:
            goal = And(goal, other)
        elif rule == 3:
            goal = Implies(_random_fo(rng, 2), goal)
        elif rule == 4:
            goal = Not(Not(goal))
        elif rule == 5 and isinstance(goal, And):
            goal = rng.choice([goal.left, goal.right])
        elif rule == 6 and isinstance(goal, Forall):
            goal = substitute(goal.body, {goal.var: objc(rng.choice(OBJECTS))})
        elif rule == 7 and isinstance(goal, Implies):
            derived.append(goal.left)
            premises.append(goal.left)
            goal = goal.right
        else:
            # existential generalisation over a constant argument
            c = objc(rng.choice(OBJECTS))
            v = next((w for w in VARS if w not in _vars_of(goal)), None)
            if v is not None and c in _consts(goal):
                goal = Exists(v, _replace_const(goal, c, v))
        derived.append(goal)
    return premises, goal


def _vars_of(phi):
    out = set()
    for n in subformulas(phi):
        if isinstance(n, (Forall, Exists)):
            out.add(n.var)
        for t in top_terms(n):
            out.update(term_vars(t))
    return out


def _consts(phi):
    return {s for t in ground_terms(phi) for s in subterms(t) if isinstance(s, Const)}


def _replace_const(phi, c, v):
    def rt(t):
        if t == c:
            return v
        if isinstance(t, Fn):
            return Fn(t.symbol, tuple(rt(a) for a in t.args), t.sort)
        return t

    def walk(f):
        f = map_top_terms(f, rt)
        kids = children(f)
        return rebuild(f, tuple(walk(k) for k in kids)) if kids else f

    return walk(phi)


# Every MixedProof assembled during the session, so the terminal first-order
# segments can be audited independently of the test that produced them.
PROVED: list = []

# Criterion number -> PASS/FAIL line, filled in by the acceptance suite.
ACCEPTANCE: dict = {}


def record_proofs():
    from shadowkernel import reasoner

    if getattr(reasoner._assemble, "_recording", False):
        return
    original = reasoner._assemble

    def assemble(*args, **kwargs):
        proof = original(*args, **kwargs)
        PROVED.append(proof)
        return proof

    assemble._recording = True
    reasoner._assemble = assemble


def audit_terminal_segments(proofs) -> list[str]:
    """Problems found when replaying each terminal segment as a plain first-order proof."""
    from shadowkernel.fol.checker import check_fol_proof
    from shadowkernel.segment import check_segment
    from shadowkernel.shadow import level

    problems = []
    for n, p in enumerate(proofs):
        seg = p.final
        if any(level(f) > 1 for f in (*seg.shadowed_premises, seg.shadowed_goal)):
            problems.append(f"proof {n}: modal operator in shadowed segment")
            continue
        v = check_segment(seg)
        if not v:
            problems.append(f"proof {n}: segment rejected at {v.where}: {v.reason}")
            continue
        v = check_fol_proof(seg.proof, list(seg.shadowed_premises), seg.shadowed_goal)
        if not v:
            problems.append(f"proof {n}: refutation rejected at {v.where}: {v.reason}")
    return problems


def random_formula(rng, depth, bound=()):
    """A random closed formula that may nest modal operators."""
    if depth > 0 and rng.random() < 0.35:
        a, b = agent(rng.choice(AGENTS)), agent(rng.choice(AGENTS))
        t = moment(rng.choice(MOMENTS))
        body = random_formula(rng, depth - 1, bound)
        kind = rng.randrange(5)
        if kind == 3:
            return Common(t, body)
        if kind == 4:
            return Says(a, b, t, body)
        return (Knows, Believes, Perceives)[kind](a, t, body)
    if depth == 0 or rng.random() < 0.25:
        return _random_fo(rng, 0, bound)
    op = rng.randrange(3)
    if op == 0:
        return Not(random_formula(rng, depth - 1, bound))
    if op == 1:
        cls = rng.choice([And, Or, Implies, Iff])
        return cls(random_formula(rng, depth - 1, bound), random_formula(rng, depth - 1, bound))
    free = [v for v in VARS if v not in bound]
    if not free:
        return random_formula(rng, depth - 1, bound)
    return rng.choice([Forall, Exists])(free[0], random_formula(rng, depth - 1, bound + (free[0],)))
