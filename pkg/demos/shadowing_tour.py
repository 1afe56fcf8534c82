"""Shadowing by example: how a modal problem becomes a first-order one.

A modal formula cannot be handed to a resolution prover directly. Shadowing
replaces every subformula that the prover could not read with a fresh
propositional atom, and the same subformula always gets the same atom. This
script walks through that on a few formulas, then shows the loop that
alternates first-order calls with modal schema expansion.

    python demos/shadowing_tour.py
"""

from shadowkernel import Signature, parse_formula, prove
from shadowkernel.logic.syntax import sexpr
from shadowkernel.shadow import ShadowMap, level, shadow


def show(title, formulas, sig, m):
    print(f"\n== {title}")
    for text in formulas:
        phi = parse_formula(text, sig)
        out = shadow(phi, 1, m)
        print(f"  level {level(phi)}  {text}")
        print(f"       -> {sexpr(out)}")


def main():
    sig = Signature.dcec()
    sig.declare_const("alice", "Agent")
    sig.declare_const("bob", "Agent")
    sig.declare_const("t1", "Moment")
    sig.declare_const("door", "Object")
    sig.declare_pred("Open", ["Object"])
    sig.declare_pred("Locked", ["Object"])

    m = ShadowMap()
    show("first-order formulas pass through untouched", [
        "(implies (Locked door) (not (Open door)))",
        "(forall (x Object) (or (Open x) (Locked x)))",
    ], sig, m)
    show("modal subformulas become atoms, shared across formulas", [
        "(K alice t1 (Open door))",
        "(implies (K alice t1 (Open door)) (B bob t1 (Open door)))",
        "(and (Locked door) (K alice t1 (Open door)))",
    ], sig, m)
    show("alpha-variants share an atom", [
        "(B bob t1 (exists (x Object) (Open x)))",
        "(B bob t1 (exists (y Object) (Open y)))",
    ], sig, m)
    print("\n== the shadow table")
    for name, phi in m.items():
        print(f"  {name} = {sexpr(phi)}")

    # Knowledge is factive, but a first-order prover only sees an atom for
    # (K alice t1 (Open door)). Proving (Open door) therefore needs one round
    # of schema expansion before the first-order call succeeds.
    premises = [parse_formula("(K alice t1 (Open door))", sig)]
    goal = parse_formula("(not (Locked door))", sig)
    premises.append(parse_formula("(implies (Open door) (not (Locked door)))", sig))
    res = prove(premises, goal)
    print(f"\n== proving {sexpr(goal)}: {res.outcome.value}")
    for line in res.trace:
        print(f"  {line}")
    for inst in res.proof.instances():
        print(f"  used {inst.schema}: {sexpr(inst.conclusion)}")


if __name__ == "__main__":
    main()
