"""Proof graphs as line-oriented text and as JSON.

Both syntaxes carry one model: a dictionary of proofs (the top-level one
plus nested sub-proofs of closure schemata) and first-order segments.
Every proof is a list of nodes; a node has a formula, the rule that
produced it, the ids of its premise nodes and the assumption labels it
rests on. Segments carry the shadow atoms, the shadowed formulas and the
resolution steps needed to replay them.

Text layout, one record per line after the header::

    shadowkernel-proof v1
    (decl (const robert Agent))
    (proof p0 (goal <formula>) (final s0) (conclusion n4) (premises n1 n3))
    (node p0 n1 assumption (label a1) (formula <f>) (premises) (depends a1))
    (node p0 n3 R4 (round 0) (formula <f>) (premises n2) (depends a1))
    (node p0 n4 fol (formula <goal>) (premises n1 n3) (depends a1))
    (segment s0 (goal <shadowed goal>))
    (shadowed s0 <shadowed premise>)
    (atom s0 $A1 <formula>)
    (var s0 _3_0 Agent)
    (skolem s0 $sk0 (Agent) Object)
    (step s0 3 input (source 0) (clause (+ <atom>) (- <atom>)) (rename (x_0 _3_0)))
"""

from __future__ import annotations

import json

from ..fol.clausify import Literal
from ..fol.prover import FOLProof, Step
from ..logic.normal import normalize
from ..logic.signature import FnDecl, Signature
from ..logic.sorts import Sort
from ..logic.subst import EMPTY, Substitution
from ..logic.syntax import Atom, Const, Fn, Formula, Term, Var, sexpr, subformulas, term_vars, top_terms
from ..reasoner import MixedProof
from ..schemata import SchemaInstance
from ..segment import FOLSegment
from .documents import DocumentError, parse_kb, serialize_signature
from .formulas import FormulaReader
from .sexpr import ParseError, SList, Sym, quote, read_all, read_one

HEADER = "shadowkernel-proof v1"


class ProofFormatError(ValueError):
    def __init__(self, message: str, line: int = 0):
        super().__init__(f"{line}: {message}" if line else message)
        self.line = line
        self.message = message


# ---------------------------------------------------------------- objects -> model


class _Writer:
    def __init__(self):
        self.proofs: dict[str, dict] = {}
        self.segments: dict[str, dict] = {}
        self.nid = 0

    def node_id(self) -> str:
        self.nid += 1
        return f"n{self.nid}"

    def proof(self, p: MixedProof) -> str:
        pid = f"p{len(self.proofs)}"
        rec = {"goal": sexpr(p.goal), "nodes": []}
        self.proofs[pid] = rec
        ids: dict[Formula, str] = {}
        deps: dict[str, list[str]] = {}
        for lab, f in p.assumptions:
            nid = self.node_id()
            ids.setdefault(normalize(f), nid)
            deps[nid] = [lab]
            rec["nodes"].append({"id": nid, "rule": "assumption", "label": lab, "formula": sexpr(f),
                                 "premises": [], "depends": [lab]})
        for r, insts in enumerate(p.rounds):
            added = []
            for inst in insts:
                nid = self.node_id()
                prem = [ids[normalize(x)] for x in inst.premises]
                node = {"id": nid, "rule": inst.schema, "round": r, "formula": sexpr(inst.conclusion),
                        "premises": prem,
                        "params": [[k, v if isinstance(v, int) else sexpr(v)] for k, v in inst.params],
                        "side": list(inst.side_conditions)}
                if isinstance(inst.subproof, MixedProof):
                    node["subproof"] = self.proof(inst.subproof)
                elif isinstance(inst.subproof, FOLSegment):
                    node["subproof"] = self.segment(inst.subproof)
                node["depends"] = _union(deps[x] for x in prem)
                deps[nid] = node["depends"]
                rec["nodes"].append(node)
                added.append((normalize(inst.conclusion), nid))
            for key, nid in added:
                ids.setdefault(key, nid)
        seg = p.final
        prem = [ids[normalize(x)] for x in seg.premises]
        rec["final"] = self.segment(seg)
        rec["premises"] = prem
        same = [n for n in prem if rec["nodes"][_index(rec, n)]["formula"] == rec["goal"]]
        if len(prem) == 1 and same:
            rec["conclusion"] = prem[0]
        else:
            nid = self.node_id()
            rec["nodes"].append({"id": nid, "rule": "fol", "formula": rec["goal"], "premises": prem,
                                 "depends": _union(deps[x] for x in prem)})
            rec["conclusion"] = nid
        return pid

    def segment(self, seg: FOLSegment) -> str:
        sid = f"s{len(self.segments)}"
        var_sorts: dict[str, str] = {}
        skolems: dict[str, list] = {}

        def note_term(t: Term):
            for v in term_vars(t):
                var_sorts.setdefault(v.name, v.sort.name)
            _note_skolems(t, skolems)

        def note_sub(s: Substitution):
            for v, t in s.items():
                var_sorts.setdefault(v.name, v.sort.name)
                note_term(t)

        steps = []
        for st in seg.proof.steps:
            for lit in st.clause:
                for a in lit.atom.args:
                    note_term(a)
            for s in (st.unifier, st.copy, st.rename):
                note_sub(s)
            rec = {"id": st.id, "rule": st.rule, "clause": [["+" if l.positive else "-", sexpr(l.atom)]
                                                            for l in st.clause]}
            if st.premises:
                rec["premises"] = list(st.premises)
            if st.source is not None:
                rec["source"] = st.source
            if st.literals:
                rec["literals"] = list(st.literals)
            for key in ("unifier", "copy", "rename"):
                s = getattr(st, key)
                if s:
                    rec[key] = [[v.name, sexpr(t)] for v, t in s.items()]
            steps.append(rec)
        for f in list(seg.shadowed_premises) + [seg.shadowed_goal]:
            for node in subformulas(f):
                for t in top_terms(node):
                    _note_skolems(t, skolems)
        self.segments[sid] = {
            "goal": sexpr(seg.shadowed_goal),
            "shadowed": [sexpr(f) for f in seg.shadowed_premises],
            "atoms": [[k, sexpr(v)] for k, v in seg.atoms.items()],
            "vars": [[k, v] for k, v in var_sorts.items()],
            "skolems": [[k, *v] for k, v in skolems.items()],
            "steps": steps,
        }
        return sid


def _note_skolems(t: Term, out: dict) -> None:
    if isinstance(t, Const) and t.name.startswith("$"):
        out.setdefault(t.name, [[], t.sort.name])
    elif isinstance(t, Fn):
        if t.symbol.startswith("$"):
            out.setdefault(t.symbol, [[a.sort.name for a in t.args], t.sort.name])
        for a in t.args:
            _note_skolems(a, out)


def _union(groups) -> list[str]:
    out: dict[str, None] = {}
    for g in groups:
        for x in g:
            out.setdefault(x)
    return sorted(out)


def _index(rec: dict, nid: str) -> int:
    for i, n in enumerate(rec["nodes"]):
        if n["id"] == nid:
            return i
    raise KeyError(nid)


def proof_model(p: MixedProof, sig: Signature) -> dict:
    w = _Writer()
    w.proof(p)
    return {"format": HEADER, "signature": serialize_signature(sig), "root": "p0",
            "proofs": w.proofs, "segments": w.segments}


# ---------------------------------------------------------------- model -> text


def _field(key: str, values) -> str:
    return "(" + " ".join([key] + [str(v) for v in values]) + ")"


def model_to_text(model: dict) -> str:
    lines = [model["format"]]
    lines += [f"(decl {d})" for d in model["signature"]]
    for pid, rec in model["proofs"].items():
        lines.append(f"(proof {pid} (goal {rec['goal']}) (final {rec['final']}) "
                     f"(conclusion {rec['conclusion']}) {_field('premises', rec['premises'])})")
        for n in rec["nodes"]:
            parts = [f"(node {pid} {n['id']} {n['rule']}"]
            if n["rule"] == "assumption":
                parts.append(f"(label {n['label']})")
            if "round" in n:
                parts.append(f"(round {n['round']})")
            parts.append(f"(formula {n['formula']})")
            parts.append(_field("premises", n["premises"]))
            if n.get("params"):
                parts.append(_field("params", [f"({k} {v})" for k, v in n["params"]]))
            if n.get("side"):
                parts.append(_field("side", [quote(s) for s in n["side"]]))
            if n.get("subproof"):
                parts.append(f"(subproof {n['subproof']})")
            parts.append(_field("depends", n["depends"]) + ")")
            lines.append(" ".join(parts))
    for sid, seg in model["segments"].items():
        lines.append(f"(segment {sid} (goal {seg['goal']}))")
        lines += [f"(shadowed {sid} {f})" for f in seg["shadowed"]]
        lines += [f"(atom {sid} {k} {v})" for k, v in seg["atoms"]]
        lines += [f"(var {sid} {k} {v})" for k, v in seg["vars"]]
        lines += [f"(skolem {sid} {k} ({' '.join(args)}) {res})" for k, args, res in seg["skolems"]]
        for st in seg["steps"]:
            parts = [f"(step {sid} {st['id']} {st['rule']}"]
            if "source" in st:
                parts.append(f"(source {st['source']})")
            if "premises" in st:
                parts.append(_field("premises", st["premises"]))
            if "literals" in st:
                parts.append(_field("literals", st["literals"]))
            parts.append(_field("clause", [f"({s} {a})" for s, a in st["clause"]]))
            for key in ("unifier", "copy", "rename"):
                if key in st:
                    parts.append(_field(key, [f"({v} {t})" for v, t in st[key]]))
            lines.append(" ".join(parts) + ")")
    return "\n".join(lines) + "\n"


def _show(node) -> str:
    if isinstance(node, Sym):
        return quote(node.text) if node.quoted else node.text
    return "(" + " ".join(_show(x) for x in node.items) + ")"


def _fields(items, line: int) -> dict[str, list]:
    out: dict[str, list] = {}
    for it in items:
        if not isinstance(it, SList) or not it.items or not isinstance(it[0], Sym):
            raise ProofFormatError(f"expected a (key value...) field, got {_show(it)}", line)
        out[it[0].text] = it.items[1:]
    return out


def _one(fields: dict, key: str, line: int):
    vals = fields.get(key)
    if vals is None or len(vals) != 1:
        raise ProofFormatError(f"missing or malformed ({key} ...) field", line)
    return vals[0]


def _int(node, line: int) -> int:
    try:
        return int(_show(node))
    except ValueError:
        raise ProofFormatError(f"expected an integer, got {_show(node)}", line) from None


def text_to_model(text: str) -> dict:
    head, _, body = text.partition("\n")
    if head.strip() != HEADER:
        raise ProofFormatError(f"first line must be {HEADER!r}", 1)
    try:
        forms = read_all(body)
    except ParseError as exc:
        raise ProofFormatError(exc.message, exc.line + 1) from None
    model = {"format": HEADER, "signature": [], "root": None, "proofs": {}, "segments": {}}
    for f in forms:
        line = f.line + 1 if isinstance(f, SList) else 0
        if not isinstance(f, SList) or len(f) < 2 or not isinstance(f[0], Sym):
            raise ProofFormatError(f"unexpected record {_show(f)}", line)
        kind = f[0].text
        if kind == "decl":
            model["signature"].append(_show(f[1]))
            continue
        owner = _show(f[1])
        if kind == "proof":
            fl = _fields(f.items[2:], line)
            model["proofs"][owner] = {
                "goal": _show(_one(fl, "goal", line)), "final": _show(_one(fl, "final", line)),
                "conclusion": _show(_one(fl, "conclusion", line)),
                "premises": [_show(x) for x in fl.get("premises", [])], "nodes": []}
            if model["root"] is None:
                model["root"] = owner
        elif kind == "node":
            if owner not in model["proofs"] or len(f) < 4:
                raise ProofFormatError("node before its proof record", line)
            fl = _fields(f.items[4:], line)
            n = {"id": _show(f[2]), "rule": _show(f[3]), "formula": _show(_one(fl, "formula", line)),
                 "premises": [_show(x) for x in fl.get("premises", [])],
                 "depends": [_show(x) for x in fl.get("depends", [])]}
            if "label" in fl:
                n["label"] = _show(_one(fl, "label", line))
            if "round" in fl:
                n["round"] = _int(_one(fl, "round", line), line)
            if "params" in fl:
                n["params"] = [[_show(p[0]), _show(p[1])] for p in fl["params"] if isinstance(p, SList) and len(p) == 2]
            if "side" in fl:
                n["side"] = [x.text for x in fl["side"] if isinstance(x, Sym)]
            if "subproof" in fl:
                n["subproof"] = _show(_one(fl, "subproof", line))
            model["proofs"][owner]["nodes"].append(n)
        elif kind == "segment":
            fl = _fields(f.items[2:], line)
            model["segments"][owner] = {"goal": _show(_one(fl, "goal", line)), "shadowed": [], "atoms": [],
                                        "vars": [], "skolems": [], "steps": []}
        elif kind in ("shadowed", "atom", "var", "skolem", "step"):
            seg = model["segments"].get(owner)
            if seg is None:
                raise ProofFormatError(f"{kind} record before segment {owner}", line)
            if kind == "shadowed":
                seg["shadowed"].append(_show(f[2]))
            elif kind == "atom" and len(f) == 4:
                seg["atoms"].append([_show(f[2]), _show(f[3])])
            elif kind == "var" and len(f) == 4:
                seg["vars"].append([_show(f[2]), _show(f[3])])
            elif kind == "skolem" and len(f) == 5 and isinstance(f[3], SList):
                seg["skolems"].append([_show(f[2]), [_show(x) for x in f[3].items], _show(f[4])])
            elif kind == "step" and len(f) >= 4:
                fl = _fields(f.items[4:], line)
                st = {"id": _int(f[2], line), "rule": _show(f[3]),
                      "clause": [[_show(l[0]), _show(l[1])] for l in fl.get("clause", [])
                                 if isinstance(l, SList) and len(l) == 2]}
                if len(st["clause"]) != len(fl.get("clause", [])):
                    raise ProofFormatError("malformed clause literal", line)
                if "source" in fl:
                    st["source"] = _int(_one(fl, "source", line), line)
                for key in ("premises", "literals"):
                    if key in fl:
                        st[key] = [_int(x, line) for x in fl[key]]
                for key in ("unifier", "copy", "rename"):
                    if key in fl:
                        st[key] = [[_show(b[0]), _show(b[1])] for b in fl[key] if isinstance(b, SList) and len(b) == 2]
                seg["steps"].append(st)
            else:
                raise ProofFormatError(f"malformed {kind} record", line)
        else:
            raise ProofFormatError(f"unknown record {kind!r}", line)
    if model["root"] is None:
        raise ProofFormatError("no proof record")
    return model


# ---------------------------------------------------------------- model -> objects


class _Builder:
    def __init__(self, model: dict, sig: Signature):
        self.model = model
        self.sig = sig
        self.building: set[str] = set()

    def formula(self, text: str, reader: FormulaReader | None = None) -> Formula:
        try:
            return (reader or FormulaReader(self.sig, allow_shadow=True)).formula(read_one(text))
        except ParseError as exc:
            raise ProofFormatError(f"in {text[:60]!r}: {exc.message}") from None

    def proof(self, pid: str) -> MixedProof:
        rec = self.model["proofs"].get(pid)
        if rec is None:
            raise ProofFormatError(f"unknown proof {pid!r}")
        if pid in self.building:
            raise ProofFormatError(f"proof {pid!r} refers to itself")
        self.building.add(pid)
        goal = self.formula(rec["goal"])
        by_id: dict[str, Formula] = {}
        deps: dict[str, list[str]] = {}
        assumptions = []
        rounds: dict[int, list[SchemaInstance]] = {}
        for n in rec["nodes"]:
            nid = n["id"]
            if nid in by_id:
                raise ProofFormatError(f"duplicate node id {nid}")
            phi = self.formula(n["formula"])
            missing = [x for x in n["premises"] if x not in by_id]
            if missing:
                raise ProofFormatError(f"node {nid} cites unknown premise {missing[0]}")
            if n["rule"] == "assumption":
                lab = n.get("label")
                if not lab:
                    raise ProofFormatError(f"assumption node {nid} has no label")
                assumptions.append((lab, phi))
                expected = [lab]
            else:
                expected = _union(deps[x] for x in n["premises"])
                if n["rule"] != "fol":
                    rounds.setdefault(n.get("round", 0), []).append(self.instance(n, phi, by_id))
            if list(n["depends"]) != expected:
                raise ProofFormatError(f"node {nid} lists dependencies {n['depends']}, expected {expected}")
            by_id[nid] = phi
            deps[nid] = expected
        for x in rec["premises"]:
            if x not in by_id:
                raise ProofFormatError(f"final segment cites unknown node {x}")
        final = self.segment(rec["final"], [by_id[x] for x in rec["premises"]], goal)
        self.building.discard(pid)
        ordered = tuple(tuple(rounds[r]) for r in sorted(rounds))
        return MixedProof(goal, tuple(assumptions), ordered, final)

    def instance(self, n: dict, phi: Formula, by_id) -> SchemaInstance:
        params = []
        for k, v in n.get("params", []):
            if isinstance(v, int) or v.lstrip("-").isdigit():
                params.append((k, int(v)))
            else:
                try:
                    params.append((k, FormulaReader(self.sig).term(read_one(v), {}, None)))
                except ParseError as exc:
                    raise ProofFormatError(f"node {n['id']} parameter {k}: {exc.message}") from None
        sub = None
        ref = n.get("subproof")
        if ref:
            if ref in self.model["proofs"]:
                sub = self.proof(ref)
            elif ref in self.model["segments"]:
                sub = self.segment(ref, [by_id[x] for x in n["premises"]], phi)
            else:
                raise ProofFormatError(f"node {n['id']} cites unknown sub-proof {ref}")
        return SchemaInstance(n["rule"], tuple(by_id[x] for x in n["premises"]), phi, tuple(params),
                              tuple(n.get("side", [])), sub)

    def segment(self, sid: str, premises: list[Formula], goal: Formula) -> FOLSegment:
        rec = self.model["segments"].get(sid)
        if rec is None:
            raise ProofFormatError(f"unknown segment {sid!r}")
        sig = self.sig.copy()
        for name, args, res in rec["skolems"]:
            try:
                if args:
                    sig.functions[name] = FnDecl(tuple(sig.sort(a) for a in args), sig.sort(res))
                else:
                    sig.constants[name] = sig.sort(res)
            except ValueError as exc:
                raise ProofFormatError(f"segment {sid}: {exc}") from None
        try:
            holes: dict[str, Sort] = {k: sig.sort(v) for k, v in rec["vars"]}
        except ValueError as exc:
            raise ProofFormatError(f"segment {sid}: {exc}") from None
        plain = FormulaReader(sig, allow_shadow=True)
        reader = FormulaReader(sig, allow_shadow=True, holes=holes)
        shadowed = tuple(self.formula(t, plain) for t in rec["shadowed"])
        if len(shadowed) != len(premises):
            raise ProofFormatError(f"segment {sid} has {len(shadowed)} shadowed premises for {len(premises)} premises")
        atoms = {k: self.formula(v) for k, v in rec["atoms"]}

        def sub(pairs) -> Substitution:
            out = []
            for v, t in pairs or []:
                if v not in holes:
                    raise ProofFormatError(f"segment {sid}: undeclared variable {v}")
                term = reader.term(read_one(t), {}, None)
                out.append((Var(v, holes[v]), term))
            try:
                return Substitution(out) if out else EMPTY
            except TypeError as exc:
                raise ProofFormatError(f"segment {sid}: {exc}") from None

        steps = []
        for st in rec["steps"]:
            lits = []
            for sign, atom_text in st["clause"]:
                if sign not in ("+", "-"):
                    raise ProofFormatError(f"segment {sid} step {st['id']}: bad literal sign {sign!r}")
                atom = self.formula(atom_text, reader)
                if not isinstance(atom, Atom):
                    raise ProofFormatError(f"segment {sid} step {st['id']}: literal is not an atom")
                lits.append(Literal(sign == "+", atom))
            try:
                steps.append(Step(st["id"], st["rule"], tuple(lits), tuple(st.get("premises", ())),
                                  st.get("source"), tuple(st.get("literals", ())),
                                  sub(st.get("unifier")), sub(st.get("copy")), sub(st.get("rename"))))
            except ParseError as exc:
                raise ProofFormatError(f"segment {sid} step {st['id']}: {exc.message}") from None
        return FOLSegment(tuple(premises), goal, shadowed, self.formula(rec["goal"], plain), atoms,
                          FOLProof(tuple(steps)))


def _signature(model: dict, sig: Signature | None) -> Signature:
    if model["signature"]:
        try:
            return parse_kb("\n".join(model["signature"])).signature
        except DocumentError as exc:
            raise ProofFormatError(f"signature: {exc.diagnostics[0]}") from None
    return sig.copy() if sig is not None else Signature.dcec()


def model_to_proof(model: dict, sig: Signature | None = None) -> tuple[MixedProof, Signature]:
    if model.get("format") != HEADER:
        raise ProofFormatError(f"unsupported format {model.get('format')!r}")
    s = _signature(model, sig)
    try:
        return _Builder(model, s).proof(model["root"]), s
    except (KeyError, TypeError) as exc:
        raise ProofFormatError(f"incomplete proof record: {exc}") from None


# ---------------------------------------------------------------- public API


def serialize_proof(p: MixedProof, sig: Signature) -> str:
    """Line-oriented proof graph, starting with the version header."""
    return model_to_text(proof_model(p, sig))


def proof_to_json(p: MixedProof, sig: Signature) -> str:
    return json.dumps(proof_model(p, sig), indent=1, sort_keys=True) + "\n"


def parse_proof(text: str | bytes, sig: Signature | None = None) -> tuple[MixedProof, Signature]:
    """Read either syntax; the signature embedded in the file wins over ``sig``."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError:
            raise ProofFormatError("proof file is not UTF-8") from None
    if text.lstrip().startswith("{"):
        try:
            model = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ProofFormatError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    else:
        model = text_to_model(text)
    return model_to_proof(model, sig)


def proof_nodes(p: MixedProof, sig: Signature | None = None) -> list[dict]:
    """The top-level node list, as shown to users."""
    return proof_model(p, sig or Signature.dcec())["proofs"]["p0"]["nodes"]


__all__ = [
    "HEADER", "ProofFormatError", "model_to_proof", "parse_proof", "proof_model", "proof_nodes",
    "proof_to_json", "serialize_proof", "text_to_model",
]
