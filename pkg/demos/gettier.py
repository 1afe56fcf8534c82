"""The Ford case: a justified true belief that is only weakly known.

Smith has good but not conclusive evidence that Jones owns a Ford, and
from it builds three disjunctions about where Brown is. Each disjunction
follows from the evidence. Only the Barcelona one happens to be true, and
only because Brown really is in Barcelona; Jones does not own a Ford.

Graded knowledge keeps the verdict honest. Smith does know the Barcelona
disjunction, but only as strongly as the weakest step in the argument,
which is the inductive step from Jones's history to Jones's ownership.

    python demos/gettier.py
"""

from shadowkernel import data_path, load_kb, load_scenario, prove, run_scenario
from shadowkernel.epistemics import strength_label
from shadowkernel.kbformat import parse_scenario
from shadowkernel.logic.syntax import sexpr


def main():
    doc = load_kb(data_path("gettier.dcec"))
    evidence = [("f", doc.assumptions["f"])]
    print("From the evidence alone:")
    for label, goal in doc.goals.items():
        res = prove(evidence, goal)
        print(f"  {label}: {sexpr(goal)}  {res.outcome.value}")

    print("\nRunning the scenario in which Smith reasons from percepts:")
    tr = run_scenario(load_scenario(data_path("gettier.scn")))
    for line in tr.log:
        print(f"  {line}")
    for e in tr.entries:
        print(f"\n{sexpr(e.record.agent)} knows {sexpr(e.proposition)}")
        print(f"  at level {e.level}, {strength_label(e.level)}")
        print(f"  from {', '.join(lab for lab, _ in e.proof.assumptions)}")

    print("\nWith the inductive step strengthened to 2 the same argument yields level 2:")
    text = data_path("gettier.scn").read_text().replace("(strength induction 1)", "(strength induction 2)")
    text = text.replace("(In brown barcelona)) 1)", "(In brown barcelona)) 2)")
    for e in run_scenario(parse_scenario(text)).entries:
        print(f"  {sexpr(e.proposition)} at level {e.level}")


if __name__ == "__main__":
    main()
