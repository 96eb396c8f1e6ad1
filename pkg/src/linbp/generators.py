"""Random instances for tests and benchmarks: programs, CNFs, proof mutations."""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from . import f2
from .bp import FUNCTION, SEARCH, LinearBP, route_all
from .f2 import LinearSystem
from .reslin import Axiom, Cnf, LinearClause, Proof, ProofLine, Resolve, Weaken


def _prune(n, mode, source, queries, edges, sinks) -> LinearBP:
    """Keep the part reachable from ``source``."""
    keep = set()
    stack = [source]
    while stack:
        v = stack.pop()
        if v in keep:
            continue
        keep.add(v)
        stack.extend(edges.get(v, ()))
    return LinearBP(
        n,
        mode,
        source,
        {v: q for v, q in queries.items() if v in keep},
        {v: e for v, e in edges.items() if v in keep},
        {v: c for v, c in sinks.items() if v in keep},
    ).renumber()


def random_invertible(rng: np.random.Generator, n: int) -> list[int]:
    """Columns of a uniformly random invertible n x n matrix over F2."""
    while True:
        cols = [int(c) for c in rng.integers(0, 1 << n, size=n)] if n else []
        if f2.rank(cols, n) == n:
            return cols


def transform_form(form: int, cols: list[int]) -> int:
    """The form ``x -> form(A x)`` where ``A`` has the given columns."""
    out = 0
    for j, c in enumerate(cols):
        if f2.dot(form, c):
            out |= 1 << j
    return out


def random_strongly_ro(rng: np.random.Generator, n: int, size: int, mode: str = FUNCTION) -> LinearBP:
    """Oblivious read-once program over variables, then a random change of basis.

    Layer ``i`` queries variable ``perm[i]`` and points only to later layers
    or sinks, so past and future queries have disjoint supports; an
    invertible substitution preserves that ``Pre`` and ``Post`` meet in 0.
    """
    if n < 1:
        raise ValueError("need at least one variable")
    layers = int(rng.integers(1, n + 1))
    perm = [int(p) for p in rng.permutation(n)[:layers]]
    inner = max(1, size - 2)
    layer_of = sorted(int(rng.integers(0, layers)) for _ in range(inner))
    layer_of[0] = 0
    sinks = {inner: 0, inner + 1: 1} if mode == FUNCTION else {inner + i: i + 1 for i in range(2)}
    queries, edges = {}, {}
    for v in range(inner):
        later = [w for w in range(v + 1, inner) if layer_of[w] > layer_of[v]] + list(sinks)
        queries[v] = 1 << perm[layer_of[v]]
        a, b = (int(t) for t in rng.choice(later, size=2))
        edges[v] = (a, b)
    bp = _prune(n, mode, 0, queries, edges, sinks)
    cols = random_invertible(rng, n)
    return replace_queries(bp, {v: transform_form(q, cols) for v, q in bp.queries.items()})


def replace_queries(bp: LinearBP, queries: dict[int, int]) -> LinearBP:
    return LinearBP(bp.n, bp.mode, bp.source, queries, bp.edges, bp.sinks)


def random_weakly_ro(rng: np.random.Generator, n: int, size: int, mode: str = FUNCTION) -> LinearBP:
    """Random DAG whose node queries avoid the node's ``Pre`` space.

    Children always have larger ids, so ``Pre`` is known when a node is
    reached in id order; nodes with a full ``Pre`` become sinks.
    """
    inner = max(1, size - 2)
    sink_ids = [inner, inner + 1]
    child = {v: tuple(int(t) for t in rng.choice(list(range(v + 1, inner)) + sink_ids, size=2)) for v in range(inner)}
    gens: dict[int, set[int]] = {0: set()}
    queries, edges = {}, {}
    sinks = {inner: 0, inner + 1: 1} if mode == FUNCTION else {inner: 1, inner + 1: 2}
    for v in range(inner):
        if v not in gens:
            continue
        pre = f2.rref(gens[v], n)
        if pre.dim == n:
            # every form is already known on this node's paths; redirect it to a sink
            sinks[v] = int(rng.integers(2)) if mode == FUNCTION else 1
            continue
        while True:
            q = int(rng.integers(1, 1 << n))
            if q not in pre:
                break
        queries[v] = q
        edges[v] = child[v]
        out = set(pre.basis) | {q}
        for t in child[v]:
            gens.setdefault(t, set()).update(out)
    if mode == FUNCTION:
        # merge sinks carrying the same bit so labels stay distinct
        canon = {}
        for v in sorted(sinks):
            canon.setdefault(sinks[v], v)
        alias = {v: canon[sinks[v]] for v in sinks}
        edges = {v: (alias.get(a, a), alias.get(b, b)) for v, (a, b) in edges.items()}
        sinks = {v: b for b, v in canon.items()}
    return _prune(n, mode, 0, queries, edges, sinks)


def subcube_clause(n: int, xs: np.ndarray) -> tuple[int, ...]:
    """The widest ordinary clause falsified by every input in ``xs``."""
    lits = []
    for i in range(n):
        bits = (xs >> i) & 1
        if np.all(bits == 0):
            lits.append(i + 1)
        elif np.all(bits == 1):
            lits.append(-(i + 1))
    return tuple(lits)


def cnf_for_search_bp(bp: LinearBP) -> tuple[Cnf, LinearBP]:
    """A CNF the given program solves: each sink gets its own clause.

    The clause of a sink is falsified exactly on the subcube spanned by the
    inputs that reach it; sinks are relabelled with their clause index.
    """
    reach = route_all(bp)
    clauses, labels = [], {}
    for v in sorted(bp.sinks):
        clauses.append(subcube_clause(bp.n, reach[v]))
        labels[v] = len(clauses)
    cnf = Cnf(bp.n, tuple(clauses))
    return cnf, LinearBP(bp.n, SEARCH, bp.source, bp.queries, bp.edges, labels)


def random_unsat_cnf(rng: np.random.Generator, n: int, max_width: int = 3) -> Cnf:
    """Random clauses of width 1..max_width added until no assignment survives."""
    xs = np.arange(1 << n, dtype=np.int64)
    alive = np.ones(xs.shape, dtype=bool)
    clauses = []
    while alive.any():
        width = int(rng.integers(1, min(max_width, n) + 1))
        vars_ = rng.choice(n, size=width, replace=False)
        clause = tuple(int(v + 1) * (1 if rng.integers(2) else -1) for v in vars_)
        sat = np.zeros(xs.shape, dtype=bool)
        for lit in clause:
            sat |= ((xs >> (abs(lit) - 1)) & 1) == (lit > 0)
        if np.array_equal(alive & sat, alive):
            continue  # useless clause
        alive &= sat
        clauses.append(clause)
    return Cnf(n, tuple(clauses))


def random_tree_search_bp(rng: np.random.Generator, cnf: Cnf, p_linear: float = 0.5) -> LinearBP:
    """Tree-like linear decision tree solving the search problem of ``cnf``.

    Each node stops at the first clause falsified on its whole affine
    region; otherwise it queries a fresh form (a single variable with
    probability ``1 - p_linear``) independent of the path so far.
    """
    n = cnf.n
    xs_all = np.arange(1 << n, dtype=np.int64)
    queries, edges, sinks = {}, {}, {}
    counter = [0]

    def grow(rows: tuple[tuple[int, int], ...]) -> int:
        v = counter[0]
        counter[0] += 1
        region = f2.solve(LinearSystem(n, rows)).points() if rows else xs_all
        for i in range(cnf.m):
            if not cnf.satisfied_mask(i, region).any():
                sinks[v] = i + 1
                return v
        known = f2.rref((f for f, _ in rows), n)
        while True:
            if rng.random() < p_linear:
                q = int(rng.integers(1, 1 << n))
            else:
                q = 1 << int(rng.integers(n))
            if q not in known:
                break
        queries[v] = q
        lo = grow(rows + ((q, 0),))
        hi = grow(rows + ((q, 1),))
        edges[v] = (lo, hi)
        return v

    grow(())
    return LinearBP(n, SEARCH, 0, queries, edges, sinks)


# --- proof mutations ------------------------------------------------------------

MUTATIONS = ("axiom_flip", "res_add", "res_remove", "wk_non_implied", "bad_reference")


def _brute_implies(d: LinearClause, c: LinearClause) -> bool:
    for x in range(1 << d.n):
        if d.satisfied_by(x) and not c.satisfied_by(x):
            return False
    return True


def mutate_proof(rng: np.random.Generator, proof: Proof, kind: str) -> tuple[Proof, int] | None:
    """Corrupt one line so that it is certainly invalid.

    Returns ``(mutated proof, corrupted line id)``, or ``None`` when the
    proof has no line the mutation applies to.  Validity of the corruption
    is established by brute force, not by the checker under test.
    """
    n = proof.n
    lines = list(proof.lines)
    order = [int(i) for i in rng.permutation(len(lines))]
    for pos in order:
        ln = lines[pos]
        new = _mutate_line(rng, n, ln, pos, lines, kind)
        if new is not None:
            lines[pos] = new
            return Proof(n, tuple(lines)), ln.id
    return None


def _random_equation(rng, n) -> tuple[int, int]:
    return int(rng.integers(1, 1 << n)), int(rng.integers(2))


def _mutate_line(rng, n, ln: ProofLine, pos: int, lines, kind: str) -> ProofLine | None:
    eqs = ln.clause.equations
    if kind == "axiom_flip":
        if not isinstance(ln.rule, Axiom) or not eqs:
            return None
        f, a = sorted(eqs)[int(rng.integers(len(eqs)))]
        clause = LinearClause(n, (eqs - {(f, a)}) | {(f, a ^ 1)})
        return replace(ln, clause=clause) if clause != ln.clause else None
    if kind == "res_add":
        if not isinstance(ln.rule, Resolve):
            return None
        for _ in range(20):
            eq = _random_equation(rng, n)
            if eq not in eqs:
                return replace(ln, clause=LinearClause(n, eqs | {eq}))
        return None
    if kind == "res_remove":
        if not isinstance(ln.rule, Resolve) or not eqs:
            return None
        eq = sorted(eqs)[int(rng.integers(len(eqs)))]
        return replace(ln, clause=LinearClause(n, eqs - {eq}))
    if kind == "wk_non_implied":
        if not isinstance(ln.rule, Weaken):
            return None
        premise = next(p for p in lines if p.id == ln.rule.premise).clause
        for _ in range(50):
            width = int(rng.integers(0, 3))
            clause = LinearClause.of(n, (_random_equation(rng, n) for _ in range(width)))
            if not _brute_implies(premise, clause):
                return replace(ln, clause=clause)
        return None
    if kind == "bad_reference":
        if isinstance(ln.rule, Axiom):
            return None
        bogus = max(p.id for p in lines) + 1 + int(rng.integers(3)) if rng.integers(2) else ln.id
        if isinstance(ln.rule, Weaken):
            return replace(ln, rule=Weaken(bogus))
        if rng.integers(2):
            return replace(ln, rule=Resolve(bogus, ln.rule.one, ln.rule.pivot))
        return replace(ln, rule=Resolve(ln.rule.zero, bogus, ln.rule.pivot))
    raise ValueError(f"unknown mutation {kind!r}")
