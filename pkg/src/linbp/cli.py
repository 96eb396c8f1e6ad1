"""Command-line front end: ``linbp <group> <verb> [flags]``.

Every run prints one JSON report on stdout.  Exit status is 0 for PASS,
1 for FAIL (the report carries a witness) and 2 for ERROR.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__, bp as bpmod, boolfn, extract, f2, reslin
from .boolfn import TruthTable
from .errors import BPError, LinBPError, ProofError
from .gf2k import GF2k, field

PASS, FAIL, ERROR = "PASS", "FAIL", "ERROR"
EXIT = {PASS: 0, FAIL: 1, ERROR: 2}


class Outcome:
    def __init__(self, verdict: str, result=None, witness=None, consumed: int | None = None):
        self.verdict = verdict
        self.result = result
        self.witness = witness
        self.consumed = consumed


def _frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _hex(text: str) -> int:
    try:
        return f2.from_hex(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


# --- input helpers -----------------------------------------------------------------


def _function(args) -> TruthTable:
    if args.table_file:
        data = json.loads(Path(args.table_file).read_text())
        return TruthTable.from_hex(data["table"], int(data["n"]))
    if args.table is not None:
        if args.n is None:
            raise ValueError("--table needs --n")
        return TruthTable.from_hex(args.table, args.n)
    if args.k is not None:
        return boolfn.construct_daf(field(args.k))
    raise ValueError("give a function: --k K, --n N --table HEX, or --table-file FILE")


def _table_doc(f: TruthTable) -> dict:
    return {"n": f.n, "table": f.to_hex()}


def _write(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text)


def _load_bp(path: str) -> bpmod.LinearBP:
    return bpmod.LinearBP.from_json(Path(path).read_text())


def _load_cnf(path: str) -> reslin.Cnf:
    return reslin.parse_dimacs(Path(path).read_text())


def _load_proof(path: str, n: int) -> reslin.Proof:
    return reslin.parse_proof(Path(path).read_text(), n)


# --- gf2k --------------------------------------------------------------------------


def cmd_gf2k_tr(args) -> Outcome:
    fld = field(args.k)
    return Outcome(PASS, {"k": args.k, "elem": f2.to_hex(fld.check(args.elem)), "trace": fld.trace(args.elem)})


def cmd_gf2k_mul(args) -> Outcome:
    fld = field(args.k)
    prod = fld.mul(fld.check(args.a), fld.check(args.b))
    return Outcome(PASS, {"k": args.k, "product": f2.to_hex(prod)})


def cmd_gf2k_modulus(args) -> Outcome:
    return Outcome(PASS, {"k": args.k, "modulus": f2.to_hex(GF2k(args.k).modulus)})


# --- boolfn ------------------------------------------------------------------------


def cmd_gen_daf(args) -> Outcome:
    f = boolfn.construct_daf(field(args.k))
    _write(args.out, json.dumps(_table_doc(f)) + "\n")
    return Outcome(PASS, _table_doc(f))


def cmd_gen_g(args) -> Outcome:
    f = boolfn.construct_g(field(args.k), args.a0, args.a1, args.a2, args.a3)
    _write(args.out, json.dumps(_table_doc(f)) + "\n")
    return Outcome(PASS, _table_doc(f))


def cmd_bias(args) -> Outcome:
    f = _function(args)
    return Outcome(PASS, {"n": f.n, "bias": str(boolfn.bias(f))})


def cmd_dist(args) -> Outcome:
    f = _function(args)
    g = TruthTable.from_hex(args.other, f.n)
    return Outcome(PASS, {"n": f.n, "distance": str(boolfn.distance(f, g))})


def cmd_walsh(args) -> Outcome:
    f = _function(args)
    w = boolfn.walsh(f)
    res = {"n": f.n, "spectrum": [int(v) for v in w], "max_abs": int(np.abs(w).max())}
    if f.n % 2 == 0:
        res["bent"] = boolfn.is_bent(f)
    return Outcome(PASS, res)


def _extractor(args, directional: bool) -> Outcome:
    f = _function(args)
    if args.sample is not None and args.seed is None:
        raise ValueError("sampled mode requires --seed")
    rep = extract.check(
        f,
        args.d,
        None if args.disperser else args.eps,
        directional=directional,
        sample=args.sample,
        seed=args.seed,
        budget=args.budget,
        jobs=args.jobs,
        all_dims_geq=args.all_dims,
    )
    doc = rep.to_dict()
    witness = doc.pop("witness")
    return Outcome(PASS if rep.holds else FAIL, doc, witness, rep.work)


def cmd_check_ext(args) -> Outcome:
    return _extractor(args, directional=False)


def cmd_check_dae(args) -> Outcome:
    return _extractor(args, directional=True)


def _assignment(p: boolfn.PartialAssignment) -> dict:
    return {"domain": p.dom(), "values": f2.to_hex(p.values)}


def cmd_check_mixed(args) -> Outcome:
    f = _function(args)
    if args.alt:
        w = boolfn.mixed_alt_witness(f, args.d)
        witness = None if w is None else {"sigma": _assignment(w[0]), "shift": f2.to_hex(w[1])}
    else:
        w = boolfn.mixed_witness(f, args.d)
        witness = None if w is None else {"sigma": _assignment(w[0]), "tau": _assignment(w[1])}
    return Outcome(PASS if w is None else FAIL, {"n": f.n, "d": args.d, "definition": "alt" if args.alt else "restrictions"}, witness)


def cmd_check_affine_mixed(args) -> Outcome:
    f = _function(args)
    w = boolfn.affine_mixed_witness(f, args.d, args.budget)
    witness = None if w is None else {"subspace": w[0].describe(), "shift": f2.to_hex(w[1])}
    return Outcome(PASS if w is None else FAIL, {"n": f.n, "d": args.d}, witness)


# --- bp ----------------------------------------------------------------------------


def cmd_bp_validate(args) -> Outcome:
    try:
        prog = _load_bp(args.file)
    except BPError as exc:
        return Outcome(FAIL, None, {"node": exc.node, "reason": str(exc)})
    return Outcome(PASS, {"n": prog.n, "mode": prog.mode, "size": prog.size, "ro": bpmod.ro_status(prog)})


def cmd_bp_eval(args) -> Outcome:
    prog = _load_bp(args.file)
    path, label = bpmod.evaluate(prog, args.x)
    return Outcome(PASS, {"x": f2.to_hex(args.x), "path": path, "output": prog.label_str(path[-1])})


def cmd_bp_check_ro(args) -> Outcome:
    prog = _load_bp(args.file)
    strong = args.strong
    ok, v = (bpmod.is_strongly_read_once if strong else bpmod.is_weakly_read_once)(prog)
    res = {"property": "strong" if strong else "weak"}
    witness = None
    if not ok:
        spaces = bpmod.node_spaces(prog, v)
        witness = {
            "node": v,
            "query": f2.to_hex(prog.queries[v]),
            "pre": [f2.to_hex(b) for b in spaces.pre.basis],
            "post": [f2.to_hex(b) for b in spaces.post.basis],
        }
    return Outcome(PASS if ok else FAIL, res, witness)


def cmd_bp_make_full(args) -> Outcome:
    prog = _load_bp(args.file)
    full = bpmod.make_full(prog)
    _write(args.out, full.to_json() + "\n")
    return Outcome(PASS, {"size_before": prog.size, "size_after": full.size, "full": bpmod.is_full(full), "program": full.to_dict()})


def cmd_bp_antichain(args) -> Outcome:
    prog = _load_bp(args.file)
    return Outcome(PASS, {"size": prog.size, "max_antichain": bpmod.max_antichain(prog)})


def cmd_bp_solves(args) -> Outcome:
    prog = _load_bp(args.file)
    cnf = _load_cnf(args.cnf)
    ok, x = bpmod.solves_search(prog, cnf)
    witness = None
    if not ok:
        _, label = bpmod.evaluate(prog, x)
        witness = {"x": f2.to_hex(x), "clause": label}
    return Outcome(PASS if ok else FAIL, {"size": prog.size, "clauses": cnf.m}, witness)


def cmd_bp_claim1(args) -> Outcome:
    prog = _load_bp(args.file)
    f = _function(args)
    rep, _ = bpmod.verify_claim1(prog, f, args.d, args.eps)
    doc = rep.to_dict()
    bad = [c for c in doc["nodes"] if not c["holds"]]
    witness = None
    if not rep.holds:
        witness = {"nodes": bad, "path_total_ok": rep.path_total_ok}
    return Outcome(PASS if rep.holds else FAIL, doc, witness)


# --- reslin ------------------------------------------------------------------------


def cmd_reslin_check(args) -> Outcome:
    cnf = _load_cnf(args.cnf)
    proof = _load_proof(args.proof, cnf.n)
    try:
        reslin.check_proof(cnf, proof, refutation=args.refutation)
    except ProofError as exc:
        return Outcome(FAIL, {"lines": len(proof)}, {"line": exc.line, "reason": exc.reason})
    return Outcome(PASS, {"lines": len(proof), "refutation": args.refutation})


def cmd_reslin_bp2proof(args) -> Outcome:
    cnf = _load_cnf(args.cnf)
    prog = _load_bp(args.bp)
    proof = reslin.bp_to_proof(cnf, prog, debug=args.debug)
    text = proof.render()
    _write(args.out, text)
    ceiling = 10 * cnf.n * prog.size + cnf.m
    return Outcome(PASS, {"lines": len(proof), "ceiling": ceiling, "proof": text.splitlines()})


def cmd_reslin_proof2bp(args) -> Outcome:
    cnf = _load_cnf(args.cnf)
    proof = _load_proof(args.proof, cnf.n)
    prog = reslin.proof_to_bp(cnf, proof)
    _write(args.out, prog.to_json() + "\n")
    return Outcome(PASS, {"lines": len(proof), "size": prog.size, "program": prog.to_dict()})


def cmd_reslin_stats(args) -> Outcome:
    cnf = _load_cnf(args.cnf)
    proof = _load_proof(args.proof, cnf.n)
    return Outcome(PASS, reslin.proof_stats(proof))


# --- parser ------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None, help="RNG seed (required for sampled checks)")
    p.add_argument("--budget", type=int, default=extract.DEFAULT_BUDGET, help="bit-operation ceiling")
    p.add_argument("--jobs", type=int, default=1, help="worker processes; never changes results")


def _function_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=int, help="use the trace construction Tr(xyz) over GF(2^K)")
    p.add_argument("--n", type=int, help="number of variables for --table")
    p.add_argument("--table", help="truth table as hex, bit x = f(x)")
    p.add_argument("--table-file", help='JSON file {"n": N, "table": HEX}')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="linbp", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"linbp {__version__}")
    groups = parser.add_subparsers(dest="group", required=True)

    def verb(sub, name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        _common(p)
        p.set_defaults(fn=fn)
        return p

    g = groups.add_parser("gf2k", help="finite field arithmetic").add_subparsers(dest="verb", required=True)
    p = verb(g, "tr", cmd_gf2k_tr, "trace of an element")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--elem", type=_hex, required=True)
    p = verb(g, "mul", cmd_gf2k_mul, "product of two elements")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("a", type=_hex)
    p.add_argument("b", type=_hex)
    p = verb(g, "modulus", cmd_gf2k_modulus, "the fixed irreducible modulus")
    p.add_argument("--k", type=int, required=True)

    b = groups.add_parser("boolfn", help="Boolean functions and extractor checks").add_subparsers(
        dest="verb", required=True
    )
    p = verb(b, "gen-daf", cmd_gen_daf, "truth table of Tr(xyz)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out")
    p = verb(b, "gen-g", cmd_gen_g, "truth table of Tr(a0 xy + a1 x + a2 y + a3)")
    p.add_argument("--k", type=int, required=True)
    for name in ("a0", "a1", "a2", "a3"):
        p.add_argument(f"--{name}", type=_hex, default=1 if name == "a0" else 0)
    p.add_argument("--out")
    for name, fn, text in (("bias", cmd_bias, "bias of f"), ("walsh", cmd_walsh, "Walsh spectrum")):
        _function_source(verb(b, name, fn, text))
    p = verb(b, "dist", cmd_dist, "normalized Hamming distance to another table")
    _function_source(p)
    p.add_argument("--other", required=True, help="second truth table as hex")
    for name, fn, text in (
        ("check-ext", cmd_check_ext, "affine extractor/disperser check"),
        ("check-dae", cmd_check_dae, "directional affine extractor/disperser check"),
    ):
        p = verb(b, name, fn, text)
        _function_source(p)
        p.add_argument("--d", type=int, required=True)
        mode = p.add_mutually_exclusive_group(required=True)
        mode.add_argument("--eps", type=_frac, help="bias bound P/Q")
        mode.add_argument("--disperser", action="store_true", help="only require non-constancy")
        p.add_argument("--sample", type=int, help="sample N subspaces instead of enumerating")
        p.add_argument("--all-dims", action="store_true", help="cover every dimension >= d")
    p = verb(b, "check-mixed", cmd_check_mixed, "d-mixedness")
    _function_source(p)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--alt", action="store_true", help="use the shift-invariance characterization")
    p = verb(b, "check-affine-mixed", cmd_check_affine_mixed, "d-affine-mixedness")
    _function_source(p)
    p.add_argument("--d", type=int, required=True)

    q = groups.add_parser("bp", help="linear branching programs").add_subparsers(dest="verb", required=True)
    for name, fn, text in (
        ("validate", cmd_bp_validate, "parse and validate a program file"),
        ("make-full", cmd_bp_make_full, "equivalent full program"),
        ("antichain", cmd_bp_antichain, "largest antichain"),
    ):
        p = verb(q, name, fn, text)
        p.add_argument("file")
        if name == "make-full":
            p.add_argument("--out")
    p = verb(q, "eval", cmd_bp_eval, "run the program on one input")
    p.add_argument("file")
    p.add_argument("--x", type=_hex, required=True)
    p = verb(q, "check-ro", cmd_bp_check_ro, "weakly/strongly read-once check")
    p.add_argument("file")
    kind = p.add_mutually_exclusive_group(required=True)
    kind.add_argument("--weak", action="store_true")
    kind.add_argument("--strong", action="store_true")
    p = verb(q, "solves", cmd_bp_solves, "does the program solve the CNF search problem")
    p.add_argument("file")
    p.add_argument("--cnf", required=True)
    p = verb(q, "claim1", cmd_bp_claim1, "wrong-input bound at depth n-d")
    p.add_argument("file")
    _function_source(p)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--eps", type=_frac, required=True)

    r = groups.add_parser("reslin", help="Res[+] proofs").add_subparsers(dest="verb", required=True)
    p = verb(r, "check", cmd_reslin_check, "check a proof against a CNF")
    p.add_argument("--cnf", required=True)
    p.add_argument("--proof", required=True)
    p.add_argument("--refutation", action="store_true", help="also require the empty final clause")
    p = verb(r, "bp2proof", cmd_reslin_bp2proof, "refutation from a weakly read-once search program")
    p.add_argument("--cnf", required=True)
    p.add_argument("--bp", required=True)
    p.add_argument("--out")
    p.add_argument("--debug", action="store_true", help="verify node clauses by enumeration")
    p = verb(r, "proof2bp", cmd_reslin_proof2bp, "search program from a refutation")
    p.add_argument("--cnf", required=True)
    p.add_argument("--proof", required=True)
    p.add_argument("--out")
    p = verb(r, "stats", cmd_reslin_stats, "proof size statistics")
    p.add_argument("--cnf", required=True)
    p.add_argument("--proof", required=True)
    return parser


def _echo(args) -> dict:
    """Normalized arguments; --jobs is an execution detail and lives under timing."""
    skip = {"fn", "group", "verb", "jobs"}
    out = {}
    for key, val in sorted(vars(args).items()):
        if key in skip:
            continue
        out[key] = str(val) if isinstance(val, Fraction) else val
    return out


def dispatch(argv: list[str] | None = None) -> tuple[int, dict]:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        outcome = args.fn(args)
    except BPError as exc:
        outcome = Outcome(ERROR, None, {"node": exc.node, "reason": str(exc)})
    except (LinBPError, ValueError, OSError, KeyError, json.JSONDecodeError, ZeroDivisionError) as exc:
        outcome = Outcome(ERROR, None, {"reason": f"{type(exc).__name__}: {exc}"})
    report = {
        "command": {"group": args.group, "verb": args.verb, "args": _echo(args)},
        "verdict": outcome.verdict,
        "result": outcome.result,
        "witness": outcome.witness,
        "seed": args.seed,
        "budget": {"limit": args.budget, "consumed": outcome.consumed},
        "timing": {"seconds": round(time.perf_counter() - started, 6), "jobs": args.jobs},
    }
    return EXIT[outcome.verdict], report


def main(argv: list[str] | None = None) -> int:
    code, report = dispatch(argv)
    json.dump(report, sys.stdout, sort_keys=True, indent=1)
    sys.stdout.write("\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
