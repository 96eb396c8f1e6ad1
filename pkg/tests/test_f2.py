from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from linbp import f2
from linbp.errors import DimensionError
from linbp.f2 import LinearSystem, Subspace, from_bits


def bits(*words: str) -> list[int]:
    return [from_bits(w) for w in words]


@st.composite
def spaces(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    rows = draw(st.lists(st.integers(0, (1 << n) - 1), max_size=n + 1))
    return f2.rref(rows, n)


@st.composite
def space_pairs(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    a = draw(st.lists(st.integers(0, (1 << n) - 1), max_size=n))
    b = draw(st.lists(st.integers(0, (1 << n) - 1), max_size=n))
    return f2.rref(a, n), f2.rref(b, n)


def test_hex_and_bit_notation():
    assert f2.to_hex(f2.from_bits("100001")) == "21"
    assert f2.from_hex("21", 6) == 0b100001
    assert f2.to_bits(from_bits("110"), 3) == "110"
    with pytest.raises(ValueError):
        f2.from_hex("40", 6)


def test_rref_examples():
    assert f2.rref([], 3).dim == 0
    assert f2.rref(bits("110", "011", "101"), 3).dim == 2
    assert f2.rref([1 << i for i in range(5)], 5) == Subspace.full(5)


def test_rref_rejects_wide_rows():
    with pytest.raises(ValueError):
        f2.rref([8], 3)


@given(spaces())
def test_rref_is_canonical(v):
    assert f2.rref(v.basis, v.n) == v
    piv = [f2.lowbit(b) for b in v.basis]
    assert len(set(piv)) == len(piv) == v.dim
    for b in v.basis:
        for p in piv:
            if p != f2.lowbit(b):
                assert not (b >> p) & 1
    assert set(int(x) for x in v.points()) == oracles.span(v.basis, v.n)


def test_annihilator_examples():
    assert f2.annihilator(Subspace.zero(3)) == Subspace.full(3)
    assert f2.annihilator(Subspace.full(3)) == Subspace.zero(3)
    assert f2.annihilator(f2.rref(bits("110"), 3)) == f2.rref(bits("110", "001"), 3)


@given(spaces())
def test_annihilator_matches_enumeration(v):
    ann = f2.annihilator(v)
    assert set(int(x) for x in ann.points()) == oracles.annihilator(set(int(x) for x in v.points()), v.n)
    assert f2.annihilator(ann) == v


def test_double_annihilator_exhaustive_n4():
    for s in oracles.all_subspaces(4):
        v = f2.rref(s, 4)
        assert f2.annihilator(f2.annihilator(v)) == v


@given(st.integers(1, 24).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.integers(0, (1 << n) - 1), max_size=n))))
def test_double_annihilator_large(arg):
    n, rows = arg
    v = f2.rref(rows, n)
    assert f2.annihilator(f2.annihilator(v)) == v
    assert v.dim + f2.annihilator(v).dim == n


def test_intersect_examples():
    v = f2.rref(bits("110", "001"), 3)
    assert f2.intersect(v, f2.rref(bits("111"), 3)) == f2.rref(bits("111"), 3)
    assert f2.intersect(f2.rref(bits("100"), 3), f2.rref(bits("010"), 3)).dim == 0


@given(space_pairs())
def test_sum_intersection_dimensions(pair):
    v, w = pair
    inter = f2.intersect(v, w)
    assert (v + w).dim + inter.dim == v.dim + w.dim
    pv, pw = set(int(x) for x in v.points()), set(int(x) for x in w.points())
    assert set(int(x) for x in inter.points()) == pv & pw
    assert f2.is_complement_free(v, w) == (pv & pw == {0})


def test_solve_examples():
    one = f2.solve(LinearSystem(2, [(from_bits("10"), 1)]))
    assert one.shift == from_bits("10") and one.space == f2.rref(bits("01"), 2)
    assert f2.solve(LinearSystem(2, [(1, 0), (1, 1)])).empty
    # x1+x2=1 and x2+x3=1: enumeration gives {010, 101}
    sol = f2.solve(LinearSystem(3, [(from_bits("110"), 1), (from_bits("011"), 1)]))
    assert sorted(f2.to_bits(int(x), 3) for x in sol.points()) == ["010", "101"]


@st.composite
def systems(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    rows = draw(st.lists(st.tuples(st.integers(0, (1 << n) - 1), st.integers(0, 1)), max_size=n + 2))
    return LinearSystem(n, rows)


@given(systems())
def test_solve_matches_enumeration(system):
    sol = f2.solve(system)
    expect = oracles.solutions(system.rows, system.n)
    got = set(int(x) for x in sol.points())
    assert got == expect
    assert sol.empty == (not expect)
    assert f2.is_consistent(system) == bool(expect)
    assert all(system.holds(x) for x in got)


def test_canonical_shift_examples():
    assert f2.canonical_shift(LinearSystem(2, [(from_bits("10"), 1)]), f2.rref(bits("01"), 2)) == from_bits("10")
    assert f2.canonical_shift(LinearSystem(3), f2.rref(bits("110", "011"), 3)) == 0
    assert f2.canonical_shift(LinearSystem(3, [(from_bits("110"), 1)]), f2.rref(bits("001"), 3)) == from_bits("100")


def test_canonical_shift_rejects_dependent_post():
    with pytest.raises(DimensionError):
        f2.canonical_shift(LinearSystem(2, [(1, 1)]), f2.rref([1], 2))


@given(systems(), st.data())
def test_canonical_shift_satisfies_equations(system, data):
    if not f2.is_consistent(system):
        return
    n = system.n
    own = system.forms()
    rest = f2.annihilator(own).annihilator()  # == own; build a post space outside it
    extra = [q for q in data.draw(st.lists(st.integers(1, (1 << n) - 1), max_size=n)) if q not in own]
    post = Subspace.zero(n)
    for q in extra:
        if (own + post.extend([q])).dim == own.dim + post.dim + 1:
            post = post.extend([q])
    assert rest == own
    b = f2.canonical_shift(system, post)
    assert system.holds(b)
    assert all(f2.dot(q, b) == 0 for q in post.basis)
    assert f2.canonical_shift(system, post) == b


def test_affine_counts():
    assert f2.count_affine(2, 1) == 6
    assert f2.count_affine(6, 5) == 126
    assert f2.count_affine(4, 4) == 1
    assert len(list(f2.enumerate_affine(2, 1))) == 6
    assert len(list(f2.enumerate_affine(3, 3))) == 1


@pytest.mark.parametrize("n", range(1, 5))
def test_enumerate_affine_matches_brute_force(n):
    for d in range(n + 1):
        got = [frozenset(int(x) for x in s.points()) for s in f2.enumerate_affine(n, d)]
        assert len(got) == len(set(got)) == f2.count_affine(n, d)
        assert set(got) == oracles.affine_subspaces(n, d)


@pytest.mark.parametrize("n,d", [(5, 2), (6, 3), (6, 5)])
def test_enumerate_affine_counts(n, d):
    got = {(s.space.basis, s.shift) for s in f2.enumerate_affine(n, d)}
    assert len(got) == f2.count_affine(n, d)


def test_enumerate_affine_partitions():
    whole = [(s.space.basis, s.shift) for s in f2.enumerate_affine(4, 2)]
    parts = [(s.space.basis, s.shift) for p in range(3) for s in f2.enumerate_affine(4, 2, start=p, stride=3)]
    assert sorted(parts) == sorted(whole)


def test_affine_membership_and_empty():
    s = f2.solve(LinearSystem(3, [(1, 1)]))
    assert all((x & 1) == 1 for x in s.points()) and len(s) == 4
    e = f2.AffineSubspace.empty_set(3)
    assert len(e) == 0 and 0 not in e


def test_dimension_cap():
    with pytest.raises(ValueError):
        f2.rref([], 25)
