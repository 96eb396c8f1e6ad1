from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from linbp import bp as B
from linbp.bp import SEARCH, LinearBP
from linbp.errors import BPError, ProofError
from linbp.generators import cnf_for_search_bp, random_tree_search_bp, random_unsat_cnf, random_weakly_ro
from linbp.reslin import (
    Axiom,
    Cnf,
    LinearClause,
    Proof,
    ProofLine,
    Resolve,
    Weaken,
    bp_to_proof,
    check_proof,
    check_resolution,
    dependency_depths,
    implies,
    parse_dimacs,
    parse_proof,
    proof_stats,
    proof_to_bp,
)

X1, X2, X3 = 1, 2, 4


def clause(n, *eqs):
    return LinearClause.of(n, eqs)


def load(data_dir, name):
    cnf = parse_dimacs((data_dir / f"{name}.cnf").read_text())
    return cnf, parse_proof((data_dir / f"{name}.rlp").read_text(), cnf.n)


@st.composite
def clauses(draw, n, max_width=3):
    eqs = draw(st.lists(st.tuples(st.integers(0, (1 << n) - 1), st.integers(0, 1)), max_size=max_width))
    return LinearClause.of(n, eqs)


# --- clauses -----------------------------------------------------------------------


def test_clause_normalization():
    assert clause(2, (0, 1)).is_empty
    assert clause(2, (0, 0)).tautology
    assert clause(2, (X1, 0), (X1, 1)).tautology
    assert not clause(2, (X1, 0), (X2, 1)).tautology
    assert clause(2, (X1, 1), (X1, 1)) == clause(2, (X1, 1))
    with pytest.raises(ValueError):
        clause(2, (8, 0))


@given(st.integers(1, 6).flatmap(lambda n: clauses(n)))
def test_clause_text_round_trip(c):
    assert LinearClause.parse(c.render(), c.n) == c


@given(st.integers(1, 6).flatmap(lambda n: clauses(n)), st.data())
def test_negation_is_the_falsifying_set(c, data):
    neg = c.negation()
    for x in range(1 << c.n):
        assert neg.holds(x) == (not c.satisfied_by(x))


def test_implies_examples():
    assert implies(clause(2, (X1, 1)), clause(2, (X1, 1), (X2, 0)))
    assert implies(clause(2, (X2, 1)), clause(2, (X1, 0), (X1, 1)))
    assert not implies(clause(2, (X1 | X2, 0)), clause(2, (X1, 0)))
    assert implies(LinearClause.empty(2), LinearClause.empty(2))
    assert not implies(clause(2, (X1, 1)), LinearClause.empty(2))


@settings(max_examples=300)
@given(st.integers(1, 10).flatmap(lambda n: st.tuples(clauses(n), clauses(n))))
def test_implies_matches_enumeration(pair):
    d, c = pair
    assert implies(d, c) == oracles.implies(d.satisfied_by, c.satisfied_by, d.n)


def test_resolution_examples():
    n = 3
    assert check_resolution(clause(n, (X1, 0)), clause(n, (X1, 1)), X1, LinearClause.empty(n))
    p0 = clause(n, (X1 | X2, 0), (X3, 1))
    p1 = clause(n, (X1 | X2, 1), (X3, 0))
    derived = clause(n, (X3, 1), (X3, 0))
    assert derived.tautology and check_resolution(p0, p1, X1 | X2, derived)
    assert not check_resolution(p0, p1, X3, derived)
    assert not check_resolution(p1, p0, X1 | X2, derived)
    assert not check_resolution(p0, p1, X1 | X2, clause(n, (X3, 1)))


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(clauses(n), clauses(n), st.integers(1, (1 << n) - 1))))
def test_resolution_is_sound(args):
    c, d, f = args
    p0 = c | clause(c.n, (f, 0))
    p1 = d | clause(c.n, (f, 1))
    derived = p0.without((f, 0)) | p1.without((f, 1))
    assert check_resolution(p0, p1, f, derived)
    for x in range(1 << c.n):
        if p0.satisfied_by(x) and p1.satisfied_by(x):
            assert derived.satisfied_by(x)


# --- CNF ingestion ----------------------------------------------------------------------


def test_dimacs_parsing(data_dir):
    cnf = parse_dimacs((data_dir / "trivial.cnf").read_text())
    assert cnf.n == 1 and cnf.clauses == ((1,), (-1,))
    assert parse_dimacs(cnf.to_dimacs()) == cnf
    assert parse_dimacs("c hi\np cnf 2 1\n1 -2\n 0\n%\n0\n").clauses == ((1, -2),)
    for bad in ("1 0\n", "p cnf 2 2\n1 0\n", "p cnf 2 1\n1 2\n", "p cnf 1 1\n2 0\n", "p dnf 1 1\n1 0\n"):
        with pytest.raises(ValueError):
            parse_dimacs(bad)
    assert cnf.linear_clause(2) == clause(1, (X1, 0))
    assert cnf.satisfying_assignment() is None
    assert Cnf(2, ((1, 2),)).satisfying_assignment() is not None


# --- proof checking ------------------------------------------------------------------------


def test_trivial_refutation(data_dir):
    cnf, proof = load(data_dir, "trivial")
    check_proof(cnf, proof, refutation=True)
    assert parse_proof(proof.render(), 1) == proof
    swapped = Proof(1, (
        ProofLine(1, clause(1, (X1, 1)), Axiom(2)),
        ProofLine(2, clause(1, (X1, 0)), Axiom(1)),
        ProofLine(3, LinearClause.empty(1), Resolve(2, 1, X1)),
    ))
    with pytest.raises(ProofError) as e:
        check_proof(cnf, swapped)
    assert e.value.line == 1


def test_parity_cycle_refutation(data_dir):
    cnf, proof = load(data_dir, "tseitin3")
    check_proof(cnf, proof, refutation=True)
    assert cnf.satisfying_assignment() is None
    stats = proof_stats(proof)
    assert stats["lines"] == 18 and stats["ends_empty"] and stats["axioms"] == 6


def test_checker_reports_first_bad_line(data_dir):
    cnf, proof = load(data_dir, "tseitin3")
    lines = list(proof.lines)
    lines[9] = ProofLine(10, clause(3, (X1, 1), (X3, 1)), Weaken(3))
    with pytest.raises(ProofError) as e:
        check_proof(cnf, Proof(3, tuple(lines)))
    assert e.value.line == 10 and "not implied" in e.value.reason
    lines = list(proof.lines)
    lines[4] = ProofLine(5, lines[4].clause, Resolve(7, 1, X1))
    with pytest.raises(ProofError) as e:
        check_proof(cnf, Proof(3, tuple(lines)))
    assert e.value.line == 5 and "earlier" in e.value.reason


def test_refutation_flag():
    cnf = Cnf(1, ((1,), (-1,)))
    proof = Proof(1, (ProofLine(1, clause(1, (X1, 1)), Axiom(1)),))
    check_proof(cnf, proof)
    with pytest.raises(ProofError):
        check_proof(cnf, proof, refutation=True)
    with pytest.raises(ProofError):
        check_proof(cnf, Proof(1, ()), refutation=True)


def test_proof_text_errors():
    with pytest.raises(ValueError):
        parse_proof("1 1=1 ax\n", 1)
    with pytest.raises(ValueError):
        parse_proof("1 1=2 ax 1\n", 1)
    assert len(parse_proof("c comment\n# other\n1 [] ax 1\n", 1)) == 1


def test_dependency_depths(data_dir):
    _, proof = load(data_dir, "tseitin3")
    depth = dependency_depths(proof)
    assert all(depth[i] == 0 for i in range(1, 7))
    for ln in proof.lines:
        assert all(depth[p] < depth[ln.id] for p in ln.premises())


# --- proofs to programs -----------------------------------------------------------------------


def test_trivial_proof_to_bp(data_dir):
    cnf, proof = load(data_dir, "trivial")
    bp = proof_to_bp(cnf, proof)
    assert bp.mode == SEARCH and list(bp.queries.values()) == [X1]
    assert bp.size == 3
    assert B.solves_search(bp, cnf)[0]


def test_weakening_chains_are_contracted():
    cnf = Cnf(2, ((1,), (-1,)))
    proof = Proof(2, (
        ProofLine(1, clause(2, (X1, 1)), Axiom(1)),
        ProofLine(2, clause(2, (X1, 1), (X2, 1)), Weaken(1)),
        ProofLine(3, clause(2, (X1, 1), (X2, 1), (X2, 0)), Weaken(2)),
        ProofLine(4, clause(2, (X1, 0)), Axiom(2)),
        ProofLine(5, clause(2, (X2, 1), (X2, 0)), Resolve(4, 3, X1)),
        ProofLine(6, clause(2, (X1, 1)), Axiom(1)),
        ProofLine(7, LinearClause.empty(2), Resolve(4, 6, X1)),
    ))
    check_proof(cnf, proof, refutation=True)
    bp = proof_to_bp(cnf, proof)
    assert bp.size == 3 and B.solves_search(bp, cnf)[0]
    assert bp.size <= len(proof)


def test_parity_cycle_proof_to_bp(data_dir):
    cnf, proof = load(data_dir, "tseitin3")
    bp = proof_to_bp(cnf, proof)
    assert B.solves_search(bp, cnf)[0]
    assert bp.size <= len(proof)


def test_proof_to_bp_needs_refutation(data_dir):
    cnf, proof = load(data_dir, "trivial")
    with pytest.raises(ProofError):
        proof_to_bp(cnf, Proof(1, proof.lines[:2]))


# --- programs to proofs ------------------------------------------------------------------------


def test_trivial_bp_to_proof(data_dir):
    cnf = parse_dimacs((data_dir / "trivial.cnf").read_text())
    bp = LinearBP.from_json((data_dir / "trivial.bp.json").read_text())
    proof = bp_to_proof(cnf, bp, debug=True)
    assert len(proof) == 3
    check_proof(cnf, proof, refutation=True)


def parity_tree(cnf):
    """Decision tree on x1, x2, x3 with every leaf at a falsified clause."""
    queries, edges, sinks = {}, {}, {}
    for v in range(7):
        queries[v] = 1 << ((v + 1).bit_length() - 1)
        edges[v] = (2 * v + 1, 2 * v + 2)
    for leaf in range(8):
        x = 0
        v = leaf + 7
        # recover the input bits from the heap position
        path = []
        while v:
            path.append((v - 1) % 2)
            v = (v - 1) // 2
        for depth, bit in enumerate(reversed(path)):
            x |= bit << depth
        sinks[leaf + 7] = cnf.falsified(x)[0]
    return LinearBP(cnf.n, SEARCH, 0, queries, edges, sinks)


def test_parity_cycle_round_trip(data_dir):
    cnf = parse_dimacs((data_dir / "tseitin3.cnf").read_text())
    tree = parity_tree(cnf)
    assert B.solves_search(tree, cnf)[0]
    proof = bp_to_proof(cnf, tree, debug=True)
    check_proof(cnf, proof, refutation=True)
    assert len(proof) <= 10 * cnf.n * tree.size + cnf.m
    back = proof_to_bp(cnf, proof)
    assert B.solves_search(back, cnf)[0] and back.size <= len(proof)


def test_bp_to_proof_preconditions(data_dir):
    cnf = Cnf(1, ((1,), (-1,)))
    swapped = LinearBP(1, SEARCH, 0, {0: X1}, {0: (1, 2)}, {1: 2, 2: 1})
    with pytest.raises(BPError):
        bp_to_proof(cnf, swapped)
    rep = LinearBP(1, SEARCH, 0, {0: X1, 1: X1}, {0: (1, 2), 1: (2, 3)}, {2: 1, 3: 2})
    with pytest.raises(BPError) as e:
        bp_to_proof(cnf, rep)
    assert e.value.node == 1
    with pytest.raises(BPError):
        bp_to_proof(cnf, LinearBP(1, "function", 0, {0: X1}, {0: (1, 2)}, {1: 0, 2: 1}))


@settings(max_examples=60)
@given(st.integers(0, 2**32 - 1))
def test_tree_round_trips(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7))
    cnf = random_unsat_cnf(rng, n)
    tree = random_tree_search_bp(rng, cnf)
    proof = bp_to_proof(cnf, tree, debug=True)
    check_proof(cnf, proof, refutation=True)
    assert len(proof) <= 10 * n * tree.size + cnf.m
    back = proof_to_bp(cnf, proof)
    assert B.solves_search(back, cnf)[0] and back.size <= len(proof)


@settings(max_examples=60)
@given(st.integers(0, 2**32 - 1))
def test_dag_programs_give_refutations(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 8))
    bp = random_weakly_ro(rng, n, int(rng.integers(3, 16)), SEARCH)
    cnf, search = cnf_for_search_bp(bp)
    proof = bp_to_proof(cnf, search, debug=True)
    check_proof(cnf, proof, refutation=True)
    assert len(proof) <= 10 * n * search.size + cnf.m
