"""One invocation per CLI verb, shared by the CLI and determinism tests."""

from __future__ import annotations

import json
import shutil
from pathlib import Path

DATA = Path(__file__).parent / "data"


def prepare(tmp: Path) -> Path:
    for name in ("trivial.cnf", "trivial.rlp", "trivial.bp.json", "tseitin3.cnf", "tseitin3.rlp", "weak_not_strong.bp.json"):
        shutil.copy(DATA / name, tmp / name)
    (tmp / "and2.json").write_text(json.dumps({"n": 2, "table": "8"}))
    return tmp


def cases(tmp: Path) -> list[list[str]]:
    t = str(tmp)
    return [
        ["gf2k", "tr", "--k", "2", "--elem", "2"],
        ["gf2k", "mul", "--k", "3", "2", "6"],
        ["gf2k", "modulus", "--k", "5"],
        ["boolfn", "gen-daf", "--k", "2", "--out", f"{t}/daf2.json"],
        ["boolfn", "gen-g", "--k", "2", "--a0", "1", "--a3", "1"],
        ["boolfn", "bias", "--table-file", f"{t}/and2.json"],
        ["boolfn", "dist", "--n", "2", "--table", "8", "--other", "7"],
        ["boolfn", "walsh", "--n", "2", "--table", "8"],
        ["boolfn", "check-ext", "--n", "4", "--table", "7888", "--d", "3", "--eps", "1/2"],
        ["boolfn", "check-dae", "--k", "2", "--d", "5", "--eps", "1/2"],
        ["boolfn", "check-dae", "--k", "3", "--d", "7", "--eps", "1/2", "--sample", "4096", "--seed", "42"],
        ["boolfn", "check-mixed", "--k", "1", "--d", "1"],
        ["boolfn", "check-mixed", "--k", "1", "--d", "1", "--alt"],
        ["boolfn", "check-affine-mixed", "--k", "1", "--d", "2"],
        ["bp", "validate", f"{t}/weak_not_strong.bp.json"],
        ["bp", "eval", f"{t}/weak_not_strong.bp.json", "--x", "5"],
        ["bp", "check-ro", f"{t}/weak_not_strong.bp.json", "--strong"],
        ["bp", "make-full", f"{t}/weak_not_strong.bp.json", "--out", f"{t}/full.bp.json"],
        ["bp", "antichain", f"{t}/weak_not_strong.bp.json"],
        ["bp", "solves", f"{t}/trivial.bp.json", "--cnf", f"{t}/trivial.cnf"],
        ["bp", "claim1", f"{t}/daf1_full.bp.json", "--k", "1", "--d", "2", "--eps", "1/2"],
        ["reslin", "check", "--cnf", f"{t}/tseitin3.cnf", "--proof", f"{t}/tseitin3.rlp", "--refutation"],
        ["reslin", "bp2proof", "--cnf", f"{t}/trivial.cnf", "--bp", f"{t}/trivial.bp.json", "--debug"],
        ["reslin", "proof2bp", "--cnf", f"{t}/tseitin3.cnf", "--proof", f"{t}/tseitin3.rlp"],
        ["reslin", "stats", "--cnf", f"{t}/tseitin3.cnf", "--proof", f"{t}/tseitin3.rlp"],
    ]


def write_claim1_program(tmp: Path) -> None:
    """A full strongly read-once program for x1 x2 x3 (k = 1 construction)."""
    from linbp.bp import FUNCTION, LinearBP, make_full

    and3 = LinearBP(3, FUNCTION, 0, {0: 1, 1: 2, 2: 4}, {0: (3, 1), 1: (3, 2), 2: (3, 4)}, {3: 0, 4: 1})
    (tmp / "daf1_full.bp.json").write_text(make_full(and3).to_json() + "\n")


def strip_timing(text: str) -> str:
    doc = json.loads(text)
    doc.pop("timing")
    return json.dumps(doc, sort_keys=True, indent=1)
