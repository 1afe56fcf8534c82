"""Concrete syntax: formulas, knowledge bases, scenarios and proof files."""

from .documents import (
    Diagnostic,
    DocumentError,
    InterestTemplate,
    KBDocument,
    PerceptEvent,
    ScenarioScript,
    StepEvent,
    load_kb,
    load_scenario,
    parse_kb,
    parse_scenario,
    serialize_kb,
    serialize_scenario,
    serialize_signature,
)
from .formulas import FormulaReader, parse_formula, parse_term, serialize_formula
from .proofs import HEADER, ProofFormatError, parse_proof, proof_nodes, proof_to_json, serialize_proof
from .sexpr import ParseError, SExprSyntaxError, SortError, UnknownSymbol

__all__ = [
    "HEADER", "Diagnostic", "DocumentError", "FormulaReader", "InterestTemplate", "KBDocument",
    "ParseError", "PerceptEvent", "ProofFormatError", "SExprSyntaxError", "ScenarioScript", "SortError",
    "StepEvent", "UnknownSymbol", "load_kb", "load_scenario", "parse_formula", "parse_kb", "parse_proof",
    "parse_scenario", "parse_term", "proof_nodes", "proof_to_json", "serialize_formula", "serialize_kb",
    "serialize_proof", "serialize_scenario", "serialize_signature",
]
