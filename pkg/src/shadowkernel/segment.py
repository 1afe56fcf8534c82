"""First-order segments over shadowed formulas.

A segment records which premises were shadowed into which level-1
formulas, the atom table needed to expand them back, and the resolution
refutation found over the shadowed signature.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .fol import FOLProof, FOLResult, ResourceLimits, Status, check_fol_proof, prove_fol
from .logic.normal import alpha_equal
from .logic.signature import Verdict
from .logic.syntax import Atom, Formula, children, rebuild
from .shadow import ShadowMap, atom_names, is_shadow_atom, level, shadow, unshadow


@dataclass(frozen=True)
class FOLSegment:
    premises: tuple[Formula, ...]
    goal: Formula
    shadowed_premises: tuple[Formula, ...]
    shadowed_goal: Formula
    atoms: dict
    proof: FOLProof


def run_segment(premises: Sequence[Formula], goal: Formula, m: ShadowMap,
                limits: ResourceLimits) -> tuple[FOLResult, FOLSegment | None]:
    """Shadow at level 1, call the first-order prover, and keep only the premises it used."""
    sp = [shadow(p, 1, m) for p in premises]
    sg = shadow(goal, 1, m)
    result = prove_fol(sp, sg, limits)
    if result.status is not Status.PROVED:
        return result, None
    used = [i for i in result.proof.sources() if i < len(premises)]
    if len(used) < len(premises):
        narrowed = prove_fol([sp[i] for i in used], sg, limits)
        if narrowed.status is Status.PROVED:
            result = narrowed
        else:
            used = list(range(len(premises)))
    names: list[str] = []
    for i in used:
        names.extend(atom_names(sp[i]))
    names.extend(atom_names(sg))
    seg = FOLSegment(
        premises=tuple(premises[i] for i in used),
        goal=goal,
        shadowed_premises=tuple(sp[i] for i in used),
        shadowed_goal=sg,
        atoms=m.slice(names),
        proof=result.proof,
    )
    return result, seg


def _first_bad_atom(shadowed: Formula, original: Formula, table: dict) -> str | None:
    """Walk both formulas in step; name the first atom whose expansion does not fit."""
    if is_shadow_atom(shadowed):
        if shadowed.pred not in table:
            return shadowed.pred
        if not alpha_equal(unshadow(shadowed, table), original):
            return shadowed.pred
        return None
    if type(shadowed) is not type(original):
        return "<structure>"
    ks, ko = children(shadowed), children(original)
    if len(ks) != len(ko):
        return "<structure>"
    if not ks:
        return None if shadowed == original else "<structure>"
    if rebuild(shadowed, ko) != original:
        return "<structure>"
    for a, b in zip(ks, ko):
        bad = _first_bad_atom(a, b, table)
        if bad:
            return bad
    return None


def check_segment(seg: FOLSegment) -> Verdict:
    """Atoms expand back to the stated premises and goal; the refutation replays."""
    table = dict(seg.atoms)
    for name in table:
        if not is_shadow_atom(Atom(name)):
            return Verdict.reject(f"atom {name}", "not a shadow atom name")
    if len(seg.premises) != len(seg.shadowed_premises):
        return Verdict.reject("segment", "premise count mismatch")
    pairs = list(zip(seg.shadowed_premises, seg.premises)) + [(seg.shadowed_goal, seg.goal)]
    for k, (s, o) in enumerate(pairs):
        if level(s) > 1:
            return Verdict.reject(f"shadowed formula {k}", "modal operator left after shadowing")
        bad = _first_bad_atom(s, o, table)
        if bad:
            where = f"atom {bad}" if bad != "<structure>" else f"shadowed formula {k}"
            return Verdict.reject(where, "shadow table does not expand to the recorded formula")
    v = check_fol_proof(seg.proof, list(seg.shadowed_premises), seg.shadowed_goal)
    if not v:
        return Verdict.reject(f"fol {v.where}", v.reason)
    return Verdict.accept()
