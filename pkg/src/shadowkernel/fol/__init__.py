"""First-order core: clausification, resolution search and proof checking."""

from .checker import check_fol_proof
from .clausify import Literal, ModalLeak, clause_str, clausify, clausify_problem, nnf
from .prover import FOLProof, FOLResult, ResourceLimits, Status, Step, prove_fol, subsumes

__all__ = [
    "FOLProof",
    "FOLResult",
    "Literal",
    "ModalLeak",
    "ResourceLimits",
    "Status",
    "Step",
    "check_fol_proof",
    "clause_str",
    "clausify",
    "clausify_problem",
    "nnf",
    "prove_fol",
    "subsumes",
]
