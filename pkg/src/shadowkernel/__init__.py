"""Modal reasoning by shadowing modal formulas onto first-order logic.

The main entry points are :func:`prove` for single goals,
:func:`check_mixed_proof` for replaying a proof, :func:`judge_knowledge`
for the justified-true-belief test and :func:`run_scenario` for the
learning agent. :func:`data_path` locates the bundled example files.
"""

from importlib import resources
from pathlib import Path

__version__ = "0.1.0"

from .agent import AgentConfig, ExpectationMismatch, Transcript, run_scenario  # noqa: E402
from .epistemics import KnowledgeRecord, NotKnowledge, combine_strengths, judge_knowledge  # noqa: E402
from .fol import ResourceLimits, prove_fol  # noqa: E402
from .kbformat import load_kb, load_scenario, parse_formula, parse_proof, serialize_proof  # noqa: E402
from .logic.signature import Signature  # noqa: E402
from .reasoner import MixedProof, Outcome, ReasonerConfig, check_mixed_proof, prove  # noqa: E402
from .schemata import ExpansionPolicy, expand  # noqa: E402
from .shadow import shadow  # noqa: E402


def data_path(name: str) -> Path:
    """Path of a bundled example file such as ``"gettier.scn"``."""
    p = resources.files(__name__).joinpath("data", name)
    if not p.is_file():
        raise FileNotFoundError(f"no bundled data file {name!r}")
    return Path(str(p))


__all__ = [
    "AgentConfig", "ExpansionPolicy", "ExpectationMismatch", "KnowledgeRecord", "MixedProof", "NotKnowledge",
    "Outcome", "ReasonerConfig", "ResourceLimits", "Signature", "Transcript", "__version__", "check_mixed_proof",
    "combine_strengths", "data_path", "expand", "judge_knowledge", "load_kb", "load_scenario", "parse_formula",
    "parse_proof", "prove", "prove_fol", "run_scenario", "serialize_proof", "shadow",
]
