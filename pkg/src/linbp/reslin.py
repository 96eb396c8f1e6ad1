"""Res[+]: resolution over linear clauses, proof checking and BP translations.

A linear clause is a disjunction of equations ``form = bit`` over F2.  The
proof system has two rules: weakening to any semantically implied clause,
and resolution ``(f = 0) v C, (f = 1) v D |- C v D``.

Proof text format, one step per line::

    <id> <eq>|<eq>|... <rule>        eq = <hexmask>=<bit>, empty clause = []
    rule: ax <clause index> | wk <id> | res <id0> <id1> <pivot hexmask>

``res a b f`` expects line ``a`` to contain ``f=0`` and line ``b`` to contain
``f=1``.  Lines starting with ``c`` or ``#`` are comments.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from . import f2
from .bp import SEARCH, LinearBP, is_weakly_read_once, make_full, pre_spaces, route_all, solves_search
from .errors import BPError, DimensionError, ProofError
from .f2 import LinearSystem, Subspace


@dataclass(frozen=True)
class LinearClause:
    """Set of equations ``(form, rhs)``; the empty set is the false clause.

    Equations ``0 = 1`` are dropped on construction (they are false
    disjuncts).  ``0 = 0`` is kept and makes the clause a tautology, as does
    any pair ``f = 0, f = 1``.
    """

    n: int
    equations: frozenset

    @classmethod
    def of(cls, n: int, eqs: Iterable[tuple[int, int]]) -> "LinearClause":
        keep = set()
        for form, rhs in eqs:
            f2.check_word(form, n)
            if rhs not in (0, 1):
                raise ValueError(f"right-hand side must be a bit, got {rhs!r}")
            if form == 0 and rhs == 1:
                continue
            keep.add((form, rhs))
        return cls(n, frozenset(keep))

    @classmethod
    def empty(cls, n: int) -> "LinearClause":
        return cls(n, frozenset())

    @property
    def is_empty(self) -> bool:
        return not self.equations

    @property
    def tautology(self) -> bool:
        return (0, 0) in self.equations or any((f, 1 - a) in self.equations for f, a in self.equations)

    def __len__(self) -> int:
        return len(self.equations)

    def __or__(self, other: "LinearClause") -> "LinearClause":
        if self.n != other.n:
            raise DimensionError(f"clauses over {self.n} and {other.n} variables")
        return LinearClause(self.n, self.equations | other.equations)

    def without(self, eq: tuple[int, int]) -> "LinearClause":
        return LinearClause(self.n, self.equations - {eq})

    def negation(self) -> LinearSystem:
        """The system ``f_i = a_i + 1`` whose solutions falsify the clause."""
        return LinearSystem(self.n, tuple(sorted((f, a ^ 1) for f, a in self.equations)))

    def forms(self) -> Subspace:
        return f2.rref((f for f, _ in self.equations), self.n)

    def satisfied_by(self, x: int) -> bool:
        return any(f2.dot(f, x) == a for f, a in self.equations)

    def sorted_equations(self) -> list[tuple[int, int]]:
        return sorted(self.equations)

    def render(self) -> str:
        if not self.equations:
            return "[]"
        return "|".join(f"{f2.to_hex(f)}={a}" for f, a in self.sorted_equations())

    @classmethod
    def parse(cls, text: str, n: int) -> "LinearClause":
        if text == "[]":
            return cls.empty(n)
        eqs = []
        for part in text.split("|"):
            form, _, rhs = part.partition("=")
            if rhs not in ("0", "1"):
                raise ValueError(f"bad equation {part!r}")
            eqs.append((f2.from_hex(form, n), int(rhs)))
        return cls.of(n, eqs)

    def __str__(self) -> str:
        return self.render()


# --- CNF ------------------------------------------------------------------------


@dataclass(frozen=True)
class Cnf:
    """Ordinary CNF; clause indices are 1-based as in DIMACS order."""

    n: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        f2.check_n(self.n)
        for clause in self.clauses:
            for lit in clause:
                if lit == 0 or abs(lit) > self.n:
                    raise ValueError(f"literal {lit} outside 1..{self.n}")

    @property
    def m(self) -> int:
        return len(self.clauses)

    def linear_clause(self, index: int) -> LinearClause:
        """Clause ``index`` with ``x -> (x = 1)`` and ``~x -> (x = 0)``."""
        if not 1 <= index <= self.m:
            raise IndexError(f"clause index {index} outside 1..{self.m}")
        return LinearClause.of(
            self.n, ((1 << (abs(lit) - 1), int(lit > 0)) for lit in self.clauses[index - 1])
        )

    def satisfied_mask(self, i0: int, xs: np.ndarray) -> np.ndarray:
        """Which inputs in ``xs`` satisfy clause ``i0`` (0-based)."""
        out = np.zeros(xs.shape, dtype=bool)
        for lit in self.clauses[i0]:
            bit = (xs >> (abs(lit) - 1)) & 1
            out |= bit == (1 if lit > 0 else 0)
        return out

    def falsified(self, x: int) -> list[int]:
        """1-based indices of the clauses ``x`` falsifies."""
        xs = np.array([x], dtype=np.int64)
        return [i + 1 for i in range(self.m) if not self.satisfied_mask(i, xs)[0]]

    def satisfying_assignment(self) -> int | None:
        """Brute force over all 2^n inputs."""
        xs = np.arange(1 << self.n, dtype=np.int64)
        sat = np.ones(xs.shape, dtype=bool)
        for i in range(self.m):
            sat &= self.satisfied_mask(i, xs)
        hits = np.flatnonzero(sat)
        return int(hits[0]) if hits.size else None

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.n} {self.m}"]
        lines += [" ".join(map(str, c + (0,))) for c in self.clauses]
        return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> Cnf:
    n = m = None
    lits: list[int] = []
    clauses: list[tuple[int, ...]] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad header {line!r}")
            n, m = int(parts[2]), int(parts[3])
            continue
        if n is None:
            raise ValueError("clause before 'p cnf' header")
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(tuple(lits))
                lits = []
            else:
                lits.append(lit)
    if n is None:
        raise ValueError("missing 'p cnf' header")
    if lits:
        raise ValueError("last clause is not 0-terminated")
    if len(clauses) != m:
        raise ValueError(f"header announces {m} clauses, found {len(clauses)}")
    return Cnf(n, tuple(clauses))


# --- proofs ---------------------------------------------------------------------


@dataclass(frozen=True)
class Axiom:
    index: int


@dataclass(frozen=True)
class Weaken:
    premise: int


@dataclass(frozen=True)
class Resolve:
    zero: int  # premise containing pivot = 0
    one: int  # premise containing pivot = 1
    pivot: int


Rule = Union[Axiom, Weaken, Resolve]


@dataclass(frozen=True)
class ProofLine:
    id: int
    clause: LinearClause
    rule: Rule

    def premises(self) -> tuple[int, ...]:
        if isinstance(self.rule, Weaken):
            return (self.rule.premise,)
        if isinstance(self.rule, Resolve):
            return (self.rule.zero, self.rule.one)
        return ()

    def render(self) -> str:
        r = self.rule
        if isinstance(r, Axiom):
            rule = f"ax {r.index}"
        elif isinstance(r, Weaken):
            rule = f"wk {r.premise}"
        else:
            rule = f"res {r.zero} {r.one} {f2.to_hex(r.pivot)}"
        return f"{self.id} {self.clause.render()} {rule}"


@dataclass(frozen=True)
class Proof:
    n: int
    lines: tuple[ProofLine, ...]

    def __len__(self) -> int:
        return len(self.lines)

    def by_id(self) -> dict[int, ProofLine]:
        return {ln.id: ln for ln in self.lines}

    @property
    def final(self) -> ProofLine:
        return self.lines[-1]

    def is_refutation_shaped(self) -> bool:
        return bool(self.lines) and self.final.clause.is_empty

    def render(self) -> str:
        return "".join(ln.render() + "\n" for ln in self.lines)


def parse_proof(text: str, n: int) -> Proof:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith(("c", "#")):
            continue
        tok = line.split()
        try:
            ident = int(tok[0])
            clause = LinearClause.parse(tok[1], n)
            kind = tok[2]
            if kind == "ax" and len(tok) == 4:
                rule: Rule = Axiom(int(tok[3]))
            elif kind == "wk" and len(tok) == 4:
                rule = Weaken(int(tok[3]))
            elif kind == "res" and len(tok) == 6:
                rule = Resolve(int(tok[3]), int(tok[4]), f2.from_hex(tok[5], n))
            else:
                raise ValueError(f"unknown rule {' '.join(tok[2:])!r}")
        except (IndexError, ValueError) as exc:
            raise ValueError(f"proof text line {lineno}: {exc}") from exc
        lines.append(ProofLine(ident, clause, rule))
    return Proof(n, tuple(lines))


def implies(d: LinearClause, c: LinearClause) -> bool:
    """Whether every assignment satisfying ``d`` satisfies ``c``.

    ``d |= c`` iff ``~c`` is inconsistent or ``~c`` together with any single
    disjunct of ``d`` is inconsistent.
    """
    if d.n != c.n:
        raise DimensionError(f"clauses over {d.n} and {c.n} variables")
    neg = c.negation()
    if not f2.is_consistent(neg):
        return True
    return all(not f2.is_consistent(neg.add([eq])) for eq in d.equations)


def resolution_error(p0: LinearClause, p1: LinearClause, pivot: int, derived: LinearClause) -> str | None:
    """Why ``derived`` is not the resolvent of ``p0``, ``p1`` on ``pivot``."""
    if pivot == 0:
        return "pivot form is zero"
    if (pivot, 0) not in p0.equations:
        return f"first premise lacks {f2.to_hex(pivot)}=0"
    if (pivot, 1) not in p1.equations:
        return f"second premise lacks {f2.to_hex(pivot)}=1"
    expect = p0.without((pivot, 0)) | p1.without((pivot, 1))
    if expect != derived:
        return f"resolvent should be {expect.render()}"
    return None


def check_resolution(p0: LinearClause, p1: LinearClause, pivot: int, derived: LinearClause) -> bool:
    return resolution_error(p0, p1, pivot, derived) is None


def check_proof(cnf: Cnf, proof: Proof, refutation: bool = False) -> None:
    """Raise :class:`ProofError` at the first invalid line."""
    if proof.n != cnf.n:
        raise ProofError(None, f"proof over {proof.n} variables, CNF over {cnf.n}")
    seen: dict[int, LinearClause] = {}
    for ln in proof.lines:
        if ln.id in seen:
            raise ProofError(ln.id, "duplicate line id")
        for p in ln.premises():
            if p not in seen:
                raise ProofError(ln.id, f"premise {p} is not an earlier line")
        rule = ln.rule
        if isinstance(rule, Axiom):
            if not 1 <= rule.index <= cnf.m:
                raise ProofError(ln.id, f"axiom index {rule.index} outside 1..{cnf.m}")
            if ln.clause != cnf.linear_clause(rule.index):
                raise ProofError(ln.id, f"clause differs from CNF clause {rule.index}")
        elif isinstance(rule, Weaken):
            if not implies(seen[rule.premise], ln.clause):
                raise ProofError(ln.id, f"not implied by line {rule.premise}")
        else:
            why = resolution_error(seen[rule.zero], seen[rule.one], rule.pivot, ln.clause)
            if why:
                raise ProofError(ln.id, why)
        seen[ln.id] = ln.clause
    if refutation:
        if not proof.lines:
            raise ProofError(None, "empty proof is not a refutation")
        if not proof.final.clause.is_empty:
            raise ProofError(proof.final.id, "final clause is not empty")


def proof_stats(proof: Proof) -> dict:
    rules = Counter(type(ln.rule).__name__.lower() for ln in proof.lines)
    return {
        "lines": len(proof),
        "axioms": rules.get("axiom", 0),
        "weakenings": rules.get("weaken", 0),
        "resolutions": rules.get("resolve", 0),
        "max_width": max((len(ln.clause) for ln in proof.lines), default=0),
        "ends_empty": proof.is_refutation_shaped(),
    }


# --- translations -----------------------------------------------------------------


def proof_to_bp(cnf: Cnf, proof: Proof) -> LinearBP:
    """Search program read off the reversed proof DAG.

    A resolution on ``f`` becomes a node querying ``f``; answer ``b`` leads
    to the premise containing ``f = b + 1``.  Weakening lines are contracted
    and axioms become sinks.
    """
    check_proof(cnf, proof, refutation=True)
    lines = proof.by_id()

    def contract(i: int) -> int:
        while isinstance(lines[i].rule, Weaken):
            i = lines[i].rule.premise
        return i

    source = contract(proof.final.id)
    queries, edges, sinks = {}, {}, {}
    stack = [source]
    while stack:
        i = stack.pop()
        if i in queries or i in sinks:
            continue
        rule = lines[i].rule
        if isinstance(rule, Axiom):
            sinks[i] = rule.index
            continue
        lo, hi = contract(rule.one), contract(rule.zero)
        queries[i] = rule.pivot
        edges[i] = (lo, hi)
        stack += [lo, hi]
    return LinearBP(cnf.n, SEARCH, source, queries, edges, sinks).renumber()


class _Emitter:
    def __init__(self, n: int):
        self.n = n
        self.lines: list[ProofLine] = []

    def emit(self, clause: LinearClause, rule: Rule) -> int:
        ident = len(self.lines) + 1
        self.lines.append(ProofLine(ident, clause, rule))
        return ident


def _project(clause: LinearClause, q: int, answer: int, pre: Subspace) -> list[tuple[int, int]]:
    """Rows of ``~clause`` with ``q`` fixed to ``answer``, rewritten inside ``pre``.

    Every form of the clause lies in ``pre + span(q)``; a form ``beta + q``
    turns into ``beta`` with the right-hand side shifted by ``answer``.
    """
    rows = []
    for f, a in clause.negation().rows:
        if f in pre:
            rows.append((f, a))
        elif (f ^ q) in pre:
            rows.append((f ^ q, a ^ answer))
        else:
            raise AssertionError(f"clause form {f:#x} escapes Pre + span(q)")
    table = f2.eliminate(rows, clause.n)
    if table is None:
        raise AssertionError("projected system is inconsistent")
    return list(table.values())


def bp_to_proof(cnf: Cnf, bp: LinearBP, debug: bool = False) -> Proof:
    """Refutation of ``cnf`` from a weakly read-once search program.

    The program is made full; then, bottom-up, each node ``v`` gets a clause
    ``C_v`` falsified by every input reaching ``v`` whose forms lie in
    ``Pre(v)``.  At a node querying ``q`` with children ``u`` (``q = 0``) and
    ``w`` (``q = 1``): if the forms of ``C_u`` (else ``C_w``) already lie in
    ``Pre(v)`` that clause is reused.  Otherwise both child clauses are
    weakened to ``(q = 1) v ~B_u`` and ``(q = 0) v ~B_w`` and resolved on
    ``q``, where ``B_u`` is ``~C_u`` with ``q = 0`` substituted.
    """
    if bp.mode != SEARCH:
        raise BPError("bp_to_proof needs a search-mode program")
    ok, v = is_weakly_read_once(bp)
    if not ok:
        raise BPError("program is not weakly read-once", node=v)
    ok, x = solves_search(bp, cnf)
    if not ok:
        raise BPError(f"program does not solve the search problem (input {f2.to_hex(x)})")
    full = make_full(bp)
    pre = pre_spaces(full)
    out = _Emitter(cnf.n)
    axiom_line: dict[int, int] = {}
    at: dict[int, tuple[int, LinearClause]] = {}
    for v in reversed(full.topo_order):
        if v in full.sinks:
            c = full.sinks[v]
            if c not in axiom_line:
                axiom_line[c] = out.emit(cnf.linear_clause(c), Axiom(c))
            at[v] = (axiom_line[c], cnf.linear_clause(c))
            continue
        q = full.queries[v]
        u, w = full.edges[v]
        here = pre[v]
        if here.contains_all(f for f, _ in at[u][1].equations):
            at[v] = at[u]
            continue
        if here.contains_all(f for f, _ in at[w][1].equations):
            at[v] = at[w]
            continue
        halves = []
        for child, answer in ((w, 1), (u, 0)):
            line, clause = at[child]
            rows = _project(clause, q, answer, here)
            target = LinearClause.of(cnf.n, [(q, answer ^ 1)] + [(f, a ^ 1) for f, a in rows])
            if target != clause:
                line = out.emit(target, Weaken(line))
            halves.append((line, target))
        (zero_line, zero_clause), (one_line, one_clause) = halves
        derived = zero_clause.without((q, 0)) | one_clause.without((q, 1))
        at[v] = (out.emit(derived, Resolve(zero_line, one_line, q)), derived)
    # a reused clause can make the source's line an early one; later lines are not needed
    last = at[full.source][0]
    proof = Proof(cnf.n, tuple(out.lines[:last]))
    if debug:
        _check_node_clauses(full, pre, at)
    return proof


def _check_node_clauses(full: LinearBP, pre, at) -> None:
    reach = route_all(full)
    for v, (_, clause) in at.items():
        if not pre[v].contains_all(f for f, _ in clause.equations):
            raise AssertionError(f"clause at node {v} uses forms outside Pre(v)")
        neg = clause.negation()
        for x in reach[v]:
            if not neg.holds(int(x)):
                raise AssertionError(f"input {int(x):#x} reaches node {v} but satisfies its clause")


def dependency_depths(proof: Proof) -> dict[int, int]:
    """Wavefront level of each line (axioms at 0); lines on one level are independent."""
    level: dict[int, int] = defaultdict(int)
    for ln in proof.lines:
        level[ln.id] = 1 + max((level[p] for p in ln.premises()), default=-1)
    return dict(level)
