"""Alpha-normal form."""

from __future__ import annotations

from .syntax import (
    QUANTIFIERS,
    Fn,
    Formula,
    Term,
    Var,
    children,
    free_vars,
    map_top_terms,
    rebuild,
)


def normalize(phi: Formula) -> Formula:
    """Rename every bound variable to ``_<depth>`` where depth counts enclosing binders.

    Free variables keep their names; a canonical name that collides with a
    free variable gets primed, which is still a function of the alpha class.
    """
    try:
        return phi._nf
    except AttributeError:
        pass
    taken = {v.name for v in free_vars(phi)}
    out = _norm(phi, {}, 0, taken)
    object.__setattr__(phi, "_nf", out)
    if out is not phi:
        object.__setattr__(out, "_nf", out)
    return out


def _canon(depth: int, taken: set[str]) -> str:
    name = f"_{depth}"
    while name in taken:
        name += "'"
    return name


def _rename_term(t: Term, env: dict[Var, Var]) -> Term:
    if isinstance(t, Var):
        return env.get(t, t)
    if isinstance(t, Fn):
        return Fn(t.symbol, tuple(_rename_term(a, env) for a in t.args), t.sort)
    return t


def _norm(phi: Formula, env: dict[Var, Var], depth: int, taken: set[str]) -> Formula:
    if isinstance(phi, QUANTIFIERS):
        nv = Var(_canon(depth, taken), phi.var.sort)
        inner = dict(env)
        inner[phi.var] = nv
        return type(phi)(nv, _norm(phi.body, inner, depth + 1, taken))
    node = map_top_terms(phi, lambda t: _rename_term(t, env)) if env else phi
    kids = children(node)
    if not kids:
        return node
    return rebuild(node, tuple(_norm(k, env, depth, taken) for k in kids))


def alpha_equal(a: Formula, b: Formula) -> bool:
    return normalize(a) == normalize(b)
