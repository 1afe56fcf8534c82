"""A dinner party: beliefs about beliefs, derived and then checked.

Part 1 is purely first-order and the prover closes it without any modal
reasoning. Part 2 asks what Robert and his host come to believe about each
other once champagne is served. Those conclusions nest belief operators,
so the reasoner alternates schema expansion with first-order calls until
the shadowed goal falls out. Every proof is written out and replayed by
the independent checker.

    python demos/dinner_party.py
"""

import tempfile
from pathlib import Path

from shadowkernel import (
    check_mixed_proof, data_path, load_kb, load_scenario, parse_proof, prove, run_scenario, serialize_proof,
)
from shadowkernel.logic.syntax import sexpr
from shadowkernel.reasoner import ReasonerConfig


def prove_and_replay(doc, label, outdir):
    goal = doc.formula(label)
    res = prove(doc.labelled(), goal, ReasonerConfig().with_options(doc.options))
    print(f"  {label}: {res.outcome.value} after {res.rounds} round(s) in {res.elapsed * 1000:.1f} ms")
    if not res.proved:
        return
    path = Path(outdir) / f"{label}.proof"
    path.write_text(serialize_proof(res.proof, doc.signature))
    reread, _ = parse_proof(path.read_text())
    verdict = check_mixed_proof(reread, doc.labelled(), goal)
    used = ", ".join(res.proof.schemata_used()) or "none"
    print(f"    schemata: {used}; replayed from {path.name}: {'accepted' if verdict else verdict.reason}")


def main():
    with tempfile.TemporaryDirectory() as outdir:
        print("Part 1, the aperitif:")
        part1 = load_kb(data_path("dinner_party_part1.dcec"))
        for label in part1.goals:
            prove_and_replay(part1, label, outdir)

        print("\nPart 2, single goals:")
        part2 = load_kb(data_path("dinner_party.dcec"))
        for label in part2.goals:
            prove_and_replay(part2, label, outdir)

    print("\nPart 2 as a scenario, learning as percepts arrive:")
    tr = run_scenario(load_scenario(data_path("dinner_party.scn")))
    for e in tr.entries:
        print(f"  step {e.step}: {sexpr(e.record.agent)} learns {sexpr(e.proposition)} (level {e.level})")
    print(f"  expectations {'met' if tr.matched else 'NOT met'} in {tr.wall_time:.2f} s")


if __name__ == "__main__":
    main()
