"""Sorted terms, formulas, substitution, unification and alpha-normalization."""

from .normal import alpha_equal, normalize
from .signature import (
    SHADOW_PREFIX,
    SKOLEM_PREFIX,
    FnDecl,
    Signature,
    SignatureError,
    Verdict,
    check_term,
    is_happens_literal,
    well_sorted,
)
from .sorts import (
    ACTION,
    ACTION_TYPE,
    AGENT,
    BOOLEAN,
    BUILTIN_SORTS,
    EVENT,
    FLUENT,
    MOMENT,
    OBJECT,
    Sort,
)
from .subst import EMPTY, SortMismatch, Substitution, substitute
from .syntax import (
    AGENT_MODALS,
    BINARY,
    MODALS,
    QUANTIFIERS,
    And,
    Atom,
    Believes,
    Common,
    Const,
    Desires,
    Exists,
    Fn,
    Forall,
    Formula,
    Iff,
    Implies,
    Intends,
    Knows,
    Not,
    Or,
    Ought,
    Perceives,
    Says,
    Term,
    Var,
    children,
    conj,
    free_vars,
    ground_terms,
    implies_chain,
    is_closed,
    is_ground,
    is_modal,
    modal_depth,
    prop,
    rebuild,
    sexpr,
    subformulas,
    top_terms,
)
from .timeline import Timeline
from .unify import match_term, unify, unify_all, unify_atoms

__all__ = [name for name in dir() if not name.startswith("_")]
