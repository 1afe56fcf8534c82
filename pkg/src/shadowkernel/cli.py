"""Command-line entry point.

Exit codes are the same for every subcommand:

    0  proved / accepted / scenario matched
    1  bad input (usage, parse or sort errors, unreadable files)
    2  not proved / rejected / scenario mismatch
    3  resource limits reached before a verdict
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .agent import ExpectationMismatch, config_for, run_scenario, transcript_json, transcript_text
from .fol import ResourceLimits
from .kbformat import (
    DocumentError,
    ParseError,
    ProofFormatError,
    load_kb,
    load_scenario,
    parse_formula,
    parse_proof,
    proof_to_json,
    serialize_kb,
    serialize_proof,
    serialize_scenario,
)
from .kbformat.proofs import proof_model
from .logic.syntax import sexpr
from .reasoner import Outcome, ReasonerConfig, check_mixed_proof, prove
from .schemata import AXIOM_SCHEMES, LIFT, SCHEMA_IDS, ExpansionPolicy, UnknownSchema, parse_schema_list

EXIT_OK, EXIT_INPUT, EXIT_NO, EXIT_RESOURCE = 0, 1, 2, 3
SEED_ENV = "SHADOWKERNEL_SEED"

_OUTCOME_EXIT = {Outcome.PROVED: EXIT_OK, Outcome.FAIL: EXIT_NO, Outcome.RESOURCE_OUT: EXIT_RESOURCE}

SCHEMA_SUMMARY = {
    "R_K": "knowledge is closed under proof: K(a,t1,premises) and premises |- p give K(a,t2,p) for t1 <= t2",
    "R_B": "belief is closed under proof, as R_K",
    "R1": "axiom: C(t, P(a,t,p) -> K(a,t,p))",
    "R2": "axiom: C(t, K(a,t,p) -> B(a,t,p))",
    "R3": "C(t,p) gives K(a1,t1,...K(an,tn,p)...) for t <= t1 ... tn",
    "R4": "K(a,t,p) gives p",
    "R5": "axiom: C(t, K(a,t1,p -> q)) -> K(a,t2,p) -> K(a,t3,q)",
    "R6": "axiom: C(t, B(a,t1,p -> q)) -> B(a,t2,p) -> B(a,t3,q)",
    "R7": "axiom: C(t, C(t1,p -> q)) -> C(t2,p) -> C(t3,q)",
    "R8": "axiom: C(t, forall x. p -> p[x := s]) for ground terms s",
    "R9": "axiom: C(t, (p <-> q) -> not q -> not p)",
    "R10": "axiom: C(t, (p1 and ... and pn -> q) -> p1 -> ... -> pn -> q)",
    "R12": "S(s,h,t,p) gives B(h,t,B(s,t,p))",
    "R13": "I(a,t,happens(action(a*,x),t')) gives P(a,t,happens(action(a*,x),t))",
    "R14": "B(a,t,p), B(a,t,O(a,t,p,q)) and O(a,t,p,q) give K(a,t,I(a,t,q))",
    LIFT: "modal formulas derivable at first order from the shadowed set join the set",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _add_limits(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("limits")
    g.add_argument("--max-clauses", type=int, help="derived-clause budget per first-order call")
    g.add_argument("--max-weight", type=int, help="largest clause weight kept")
    g.add_argument("--fol-time-ms", type=int, help="time budget per first-order call")
    g.add_argument("--time-ms", type=int, help="overall time budget")
    g.add_argument("--max-rounds", type=int, help="expansion rounds before giving up")
    g.add_argument("--depth", type=int, help="largest modal nesting an expansion may create")
    g.add_argument("--recursion-depth", type=int, help="nesting of side-condition proofs for R_K and R_B")
    g.add_argument("--schemata", help="comma-separated schemata to enable (ids, 'all' or 'none')")
    g.add_argument("--disable", help="comma-separated schemata to switch off")
    g.add_argument("--no-lift", action="store_true", help="do not add first-order consequences that are modal")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="shadowkernel", description="Modal reasoning by shadowing onto first-order logic.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    pr = sub.add_parser("prove", help="prove a goal from a knowledge base")
    pr.add_argument("kb", help=".dcec knowledge base")
    pr.add_argument("goal", help="goal label from the knowledge base, or a formula")
    pr.add_argument("-o", "--output", help="where to write the proof (default: <kb>-<goal>.proof)")
    pr.add_argument("--no-write", action="store_true", help="do not write a proof file")
    pr.add_argument("--format", choices=("text", "json"), default="text", help="stdout format")
    pr.add_argument("--trace", action="store_true", help="print the round-by-round trace to stderr")
    _add_limits(pr)

    ck = sub.add_parser("check", help="replay a proof file against a knowledge base")
    ck.add_argument("proof", help=".proof file (text or JSON)")
    ck.add_argument("kb", help=".dcec knowledge base holding the assumptions")
    ck.add_argument("--goal", help="also require the proof to conclude this goal label or formula")

    rn = sub.add_parser("run", help="replay a learning scenario")
    rn.add_argument("scenario", help=".scn scenario")
    rn.add_argument("--expect", choices=("strict", "lenient"), default="strict",
                    help="strict also fails on learnings the script does not expect")
    rn.add_argument("-o", "--transcript",
                    help="text transcript path (default: <scenario-stem>.transcript in the current directory)")
    rn.add_argument("--no-write", action="store_true", help="do not write a transcript file")
    rn.add_argument("--json", dest="json_path", help="write the machine-readable transcript here")
    rn.add_argument("--format", choices=("text", "json"), default="text", help="stdout format")
    rn.add_argument("--trace", action="store_true", help="print the loop log to stderr")
    _add_limits(rn)

    fm = sub.add_parser("fmt", help="print a knowledge base, scenario or proof in canonical form")
    fm.add_argument("file")
    fm.add_argument("--check", action="store_true", help="exit 2 if the file is not already canonical")

    sc = sub.add_parser("schemata", help="list the inference schemata")
    sc.add_argument("--format", choices=("text", "json"), default="text")
    return p


# ---------------------------------------------------------------- helpers


def _seed() -> str | None:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return None
    try:
        return str(int(raw))
    except ValueError:
        raise ValueError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _config(args, base: ReasonerConfig) -> ReasonerConfig:
    cfg = base
    lim = cfg.limits
    lim = ResourceLimits(
        args.max_clauses if args.max_clauses is not None else lim.max_clauses,
        args.max_weight if args.max_weight is not None else lim.max_weight,
        args.fol_time_ms if args.fol_time_ms is not None else lim.time_ms,
    )
    pol: ExpansionPolicy = cfg.policy
    if args.schemata is not None:
        pol = replace(pol, enabled=parse_schema_list(args.schemata))
    if args.disable:
        pol = pol.without(*parse_schema_list(args.disable))
    if args.depth is not None:
        pol = replace(pol, d_max=args.depth)
    if args.no_lift:
        pol = replace(pol, lift=False)
    kw = {"limits": lim, "policy": pol}
    if args.time_ms is not None:
        kw["time_ms"] = args.time_ms
    if args.max_rounds is not None:
        kw["max_rounds"] = args.max_rounds
    if args.recursion_depth is not None:
        kw["recursion_depth"] = args.recursion_depth
    return replace(cfg, **kw)


def _goal(doc, text: str):
    if text in doc.goals or text in doc.assumptions:
        return text, doc.formula(text)
    sig = doc.signature.copy()
    sig.implicit = True
    return "goal", parse_formula(text, sig)


def _err(msg: str) -> None:
    print(f"shadowkernel: {msg}", file=sys.stderr)


# ---------------------------------------------------------------- commands


def cmd_prove(args) -> int:
    doc = load_kb(args.kb)
    label, goal = _goal(doc, args.goal)
    cfg = _config(args, ReasonerConfig().with_options(doc.options))
    res = prove(doc.labelled(), goal, cfg)
    if args.trace:
        for line in res.trace:
            print(line, file=sys.stderr)
        for d in res.diagnostics:
            print(f"diagnostic {d.kind} {d.schema}: {d.detail}", file=sys.stderr)
    seed = _seed()
    out_path = None
    if res.proved and not args.no_write:
        out_path = Path(args.output) if args.output else Path(f"{Path(args.kb).stem}-{label}.proof")
        text = proof_to_json(res.proof, doc.signature) if out_path.suffix == ".json" \
            else serialize_proof(res.proof, doc.signature)
        out_path.write_text(text, encoding="utf-8")
    if args.format == "json":
        data = {"verdict": res.outcome.value, "goal": sexpr(goal), "rounds": res.rounds, "seed": seed,
                "proof_file": str(out_path) if out_path else None,
                "proof": proof_model(res.proof, doc.signature) if res.proof else None}
        print(json.dumps(data, indent=1, sort_keys=True))
    else:
        print(f"{res.outcome.value} {sexpr(goal)} ({res.rounds} rounds, {res.elapsed:.3f} s)")
        if res.proof:
            for n in proof_model(res.proof, doc.signature)["proofs"]["p0"]["nodes"]:
                deps = " ".join(n["depends"]) or "-"
                name = n.get("label", n["id"])
                print(f"  {name:>10} [{n['rule']}] {n['formula']}   depends: {deps}")
        if out_path:
            print(f"proof written to {out_path}")
    return _OUTCOME_EXIT[res.outcome]


def cmd_check(args) -> int:
    doc = load_kb(args.kb)
    try:
        data = Path(args.proof).read_bytes()
    except OSError as exc:
        raise ValueError(str(exc)) from None
    proof, _ = parse_proof(data, doc.signature)
    goal = proof.goal
    if args.goal:
        _, goal = _goal(doc, args.goal)
    v = check_mixed_proof(proof, doc.labelled(), goal)
    if v:
        print(f"ACCEPT {sexpr(goal)}")
        return EXIT_OK
    print(f"REJECT at {v.where}: {v.reason}")
    return EXIT_NO


def cmd_run(args) -> int:
    scn = load_scenario(args.scenario)
    acfg = config_for(scn)
    acfg = replace(acfg, reasoner=_config(args, acfg.reasoner))
    tr = run_scenario(scn, acfg, strict=args.expect == "strict", raise_on_mismatch=False)
    seed = _seed()
    text = transcript_text(tr, seed)
    if not args.no_write:
        target = Path(args.transcript or f"{Path(args.scenario).stem}.transcript")
        target.write_text(text, encoding="utf-8")
    if args.json_path:
        Path(args.json_path).write_text(transcript_json(tr, seed), encoding="utf-8")
    if args.trace:
        for line in tr.log:
            print(line, file=sys.stderr)
    if args.format == "json":
        print(transcript_json(tr, seed), end="")
    else:
        for e in tr.entries:
            print(f"learned {e.label} level {e.level}: {sexpr(e.proposition)}")
        for m in tr.missing:
            print(f"missing {m}")
        for x in tr.extra:
            print(f"unexpected {x}")
        print(f"{'MATCH' if tr.matched else 'MISMATCH'} {len(tr.entries)} learned in {tr.wall_time:.3f} s")
    if tr.matched:
        return EXIT_OK
    return EXIT_RESOURCE if tr.resource_out and tr.missing else EXIT_NO


def cmd_fmt(args) -> int:
    path = Path(args.file)
    try:
        original = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ValueError(str(exc)) from None
    if path.suffix == ".scn":
        out = serialize_scenario(load_scenario(path))
    elif path.suffix in (".proof", ".json"):
        proof, sig = parse_proof(original)
        out = proof_to_json(proof, sig) if original.lstrip().startswith("{") else serialize_proof(proof, sig)
    else:
        out = serialize_kb(load_kb(path))
    if args.check:
        return EXIT_OK if out == original else EXIT_NO
    print(out, end="")
    return EXIT_OK


def cmd_schemata(args) -> int:
    rows = [{"id": s, "kind": "axiom scheme" if s in AXIOM_SCHEMES else "rule", "summary": SCHEMA_SUMMARY[s]}
            for s in SCHEMA_IDS + (LIFT,)]
    if args.format == "json":
        print(json.dumps(rows, indent=1))
    else:
        for r in rows:
            print(f"{r['id']:>5}  {r['kind']:<12}  {r['summary']}")
    return EXIT_OK


COMMANDS = {"prove": cmd_prove, "check": cmd_check, "run": cmd_run, "fmt": cmd_fmt, "schemata": cmd_schemata}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except DocumentError as exc:
        for d in exc.diagnostics:
            _err(f"{exc.source}:{d}")
        return EXIT_INPUT
    except (ParseError, ProofFormatError, UnknownSchema, ValueError, OSError) as exc:
        _err(str(exc))
        return EXIT_INPUT
    except ExpectationMismatch as exc:  # raised only by library callers that ask for it
        _err(str(exc))
        return EXIT_NO


if __name__ == "__main__":
    sys.exit(main())
