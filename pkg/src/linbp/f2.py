"""Bit-packed linear algebra over F2.

Vectors of F2^n and linear forms on F2^n are both plain ``int`` masks:
bit ``i`` is the coordinate (or coefficient) of ``x_{i+1}``.  A form ``l``
evaluates at ``x`` as the parity of ``l & x``.  Containers (``Subspace``,
``AffineSubspace``, ``LinearSystem``) carry the ambient dimension.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import BudgetExceeded, DimensionError

MAX_N = 24


def parity(x: int) -> int:
    return bin(x).count("1") & 1


def dot(form: int, x: int) -> int:
    """Evaluate the linear form ``form`` at the vector ``x``."""
    return bin(form & x).count("1") & 1


def support(c: int) -> list[int]:
    """1-based indices of the nonzero coordinates of ``c``."""
    out = []
    i = 0
    while c:
        if c & 1:
            out.append(i + 1)
        c >>= 1
        i += 1
    return out


def lowbit(x: int) -> int:
    return (x & -x).bit_length() - 1


def to_hex(mask: int) -> str:
    return format(mask, "x")


def from_hex(text: str, n: int | None = None) -> int:
    text = text.strip().lower()
    if text.startswith("0x"):
        text = text[2:]
    value = int(text, 16)
    if n is not None:
        check_word(value, n)
    return value


def from_bits(bits: str) -> int:
    """Parse ``"110"`` as x1=1, x2=1, x3=0 (leftmost character is x1)."""
    return sum(1 << i for i, ch in enumerate(bits) if ch == "1")


def to_bits(x: int, n: int) -> str:
    return "".join("1" if (x >> i) & 1 else "0" for i in range(n))


def check_n(n: int) -> None:
    if not 0 <= n <= MAX_N:
        raise DimensionError(f"dimension {n} outside [0, {MAX_N}]")


def check_word(x: int, n: int) -> None:
    if x < 0 or x >> n:
        raise DimensionError(f"word {x:#x} does not fit in {n} bits")


def _insert(pivots: dict[int, int], v: int) -> bool:
    """Add ``v`` to a fully reduced pivot->row table; False if dependent."""
    for p, row in pivots.items():
        if (v >> p) & 1:
            v ^= row
    if not v:
        return False
    p = lowbit(v)
    for q, row in pivots.items():
        if (row >> p) & 1:
            pivots[q] = row ^ v
    pivots[p] = v
    return True


@dataclass(frozen=True)
class Subspace:
    """Subspace of F2^n held as a fully reduced row-echelon basis.

    Pivots are the lowest set bit of each row; rows are sorted by pivot and
    every pivot column is clear in every other row, so equal subspaces have
    equal ``basis`` tuples.
    """

    n: int
    basis: tuple[int, ...] = ()

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, tuple(1 << i for i in range(n)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(lowbit(b) for b in self.basis)

    def reduce(self, v: int) -> int:
        """Reduce ``v`` modulo the subspace; zero iff ``v`` is a member."""
        for b in self.basis:
            if (v >> lowbit(b)) & 1:
                v ^= b
        return v

    def __contains__(self, v: int) -> bool:
        return self.reduce(v) == 0

    def contains_all(self, vs: Iterable[int]) -> bool:
        return all(self.reduce(v) == 0 for v in vs)

    def __add__(self, other: "Subspace") -> "Subspace":
        _same_n(self.n, other.n)
        return rref(self.basis + other.basis, self.n)

    def extend(self, vs: Iterable[int]) -> "Subspace":
        return rref(self.basis + tuple(vs), self.n)

    def __le__(self, other: "Subspace") -> bool:
        return other.contains_all(self.basis)

    def annihilator(self) -> "Subspace":
        return annihilator(self)

    def intersect(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)

    def points(self) -> np.ndarray:
        """All 2^dim elements as an int64 array, in subset order of the basis."""
        return span_points(self.basis)

    def __iter__(self) -> Iterator[int]:
        return iter(int(p) for p in self.points())

    def __len__(self) -> int:
        return 1 << self.dim


def _same_n(a: int, b: int) -> None:
    if a != b:
        raise DimensionError(f"dimension mismatch: {a} != {b}")


def rref(rows: Iterable[int], n: int) -> Subspace:
    """Row-reduce ``rows`` (int masks of width ``n``) to a canonical basis."""
    check_n(n)
    pivots: dict[int, int] = {}
    for v in rows:
        check_word(v, n)
        _insert(pivots, v)
    return Subspace(n, tuple(pivots[p] for p in sorted(pivots)))


def rank(rows: Iterable[int], n: int) -> int:
    return rref(rows, n).dim


def span_points(basis: Sequence[int]) -> np.ndarray:
    pts = np.zeros(1, dtype=np.int64)
    for b in basis:
        pts = np.concatenate([pts, pts ^ b])
    return pts


def annihilator(space: Subspace) -> Subspace:
    """All forms vanishing on ``space``.

    For each non-pivot column ``j`` the form ``e_j + sum(e_pivot(r))`` over
    basis rows ``r`` with bit ``j`` set kills every basis row.
    """
    n = space.n
    pivots = space.pivots
    pivot_set = set(pivots)
    rows = []
    for j in range(n):
        if j in pivot_set:
            continue
        form = 1 << j
        for p, r in zip(pivots, space.basis):
            if (r >> j) & 1:
                form |= 1 << p
        rows.append(form)
    return rref(rows, n)


def intersect(v: Subspace, w: Subspace) -> Subspace:
    _same_n(v.n, w.n)
    return annihilator(annihilator(v) + annihilator(w))


def is_complement_free(v: Subspace, w: Subspace) -> bool:
    """True iff ``v`` and ``w`` meet only in zero."""
    return (v + w).dim == v.dim + w.dim


@dataclass(frozen=True)
class AffineSubspace:
    """``space + shift`` with ``shift`` reduced against ``space``.

    The empty set is a separate tagged value (``empty=True``) so that
    intersections and inconsistent systems need no exceptions.
    """

    space: Subspace
    shift: int = 0
    empty: bool = False

    def __post_init__(self):
        if self.empty:
            object.__setattr__(self, "shift", 0)
        else:
            check_word(self.shift, self.space.n)
            object.__setattr__(self, "shift", self.space.reduce(self.shift))

    @classmethod
    def empty_set(cls, n: int) -> "AffineSubspace":
        return cls(Subspace.zero(n), 0, True)

    @classmethod
    def whole(cls, n: int) -> "AffineSubspace":
        return cls(Subspace.full(n), 0)

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def dim(self) -> int:
        return -1 if self.empty else self.space.dim

    def __contains__(self, x: int) -> bool:
        return not self.empty and (x ^ self.shift) in self.space

    def points(self) -> np.ndarray:
        if self.empty:
            return np.zeros(0, dtype=np.int64)
        return self.space.points() ^ self.shift

    def __len__(self) -> int:
        return 0 if self.empty else len(self.space)

    def describe(self) -> dict:
        if self.empty:
            return {"empty": True}
        return {
            "dim": self.dim,
            "basis": [to_hex(b) for b in self.space.basis],
            "shift": to_hex(self.shift),
        }


@dataclass(frozen=True)
class LinearSystem:
    """Conjunction of equations ``form(x) = bit``."""

    n: int
    rows: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        check_n(self.n)
        object.__setattr__(self, "rows", tuple((int(f), int(a)) for f, a in self.rows))
        for form, bit in self.rows:
            check_word(form, self.n)
            if bit not in (0, 1):
                raise ValueError(f"right-hand side must be a bit, got {bit!r}")

    def __and__(self, other: "LinearSystem") -> "LinearSystem":
        _same_n(self.n, other.n)
        return LinearSystem(self.n, self.rows + other.rows)

    def add(self, rows: Iterable[tuple[int, int]]) -> "LinearSystem":
        return LinearSystem(self.n, self.rows + tuple(rows))

    def forms(self) -> Subspace:
        return rref((f for f, _ in self.rows), self.n)

    def holds(self, x: int) -> bool:
        return all(dot(f, x) == a for f, a in self.rows)


def eliminate(rows: Iterable[tuple[int, int]], n: int) -> dict[int, tuple[int, int]] | None:
    """Fully reduce an augmented system; ``None`` when it derives ``0 = 1``.

    Returns ``{pivot: (form, rhs)}`` where each form has its pivot at its
    lowest set bit and no other row touches that pivot.
    """
    aug: dict[int, int] = {}
    for form, bit in rows:
        v = form | (bit << n)
        for p, row in aug.items():
            if (v >> p) & 1:
                v ^= row
        if not v & ((1 << n) - 1):
            if v:
                return None
            continue
        p = lowbit(v)
        for q, row in aug.items():
            if (row >> p) & 1:
                aug[q] = row ^ v
        aug[p] = v
    mask = (1 << n) - 1
    return {p: (row & mask, row >> n) for p, row in sorted(aug.items())}


def solve(system: LinearSystem) -> AffineSubspace:
    """Solution set of ``system``; tagged empty when inconsistent.

    The shift sets every free (non-pivot) coordinate to 0.
    """
    n = system.n
    table = eliminate(system.rows, n)
    if table is None:
        return AffineSubspace.empty_set(n)
    shift = 0
    for p, (_, rhs) in table.items():
        if rhs:
            shift |= 1 << p
    forms = Subspace(n, tuple(f for f, _ in table.values()))
    return AffineSubspace(annihilator(forms), shift)


def is_consistent(system: LinearSystem) -> bool:
    return eliminate(system.rows, system.n) is not None


def canonical_shift(system: LinearSystem, post: Subspace) -> int:
    """A solution ``b`` of ``system`` on which every form of ``post`` vanishes.

    The joint system ``system + {q = 0 : q in post}`` is solved with free
    coordinates set to 0, so the result depends only on the inputs.
    """
    _same_n(system.n, post.n)
    own = system.forms()
    if (own + post).dim != own.dim + post.dim:
        raise DimensionError("system forms are not independent of the post space")
    table = eliminate(system.rows + tuple((q, 0) for q in post.basis), system.n)
    if table is None:
        raise DimensionError("system is inconsistent")
    return sum(1 << p for p, (_, rhs) in table.items() if rhs)


def gaussian_binomial(n: int, d: int) -> int:
    if d < 0 or d > n:
        return 0
    num = den = 1
    for i in range(d):
        num *= (1 << (n - i)) - 1
        den *= (1 << (i + 1)) - 1
    return num // den


def count_affine(n: int, d: int) -> int:
    return gaussian_binomial(n, d) << (n - d)


def enumerate_subspaces(n: int, d: int) -> Iterator[Subspace]:
    """Every ``d``-dimensional subspace of F2^n exactly once, in rref form.

    Row ``i`` has its pivot ``p_i`` as lowest bit and may carry any of the
    non-pivot columns above ``p_i``.
    """
    check_n(n)
    if not 0 <= d <= n:
        return
    for pivots in combinations(range(n), d):
        pset = set(pivots)
        free = [[j for j in range(p + 1, n) if j not in pset] for p in pivots]
        total = sum(len(f) for f in free)
        for code in range(1 << total):
            rows = []
            for p, cols in zip(pivots, free):
                row = 1 << p
                for j in cols:
                    if code & 1:
                        row |= 1 << j
                    code >>= 1
                rows.append(row)
            yield Subspace(n, tuple(rows))


def coset_shifts(space: Subspace) -> np.ndarray:
    """Normalized shifts (supported on non-pivot columns) of all cosets."""
    pset = set(space.pivots)
    free = [1 << j for j in range(space.n) if j not in pset]
    return span_points(free)


def enumerate_affine(
    n: int,
    d: int,
    start: int = 0,
    stride: int = 1,
    budget: int | None = None,
) -> Iterator[AffineSubspace]:
    """Each ``d``-dimensional affine subspace of F2^n exactly once.

    ``(start, stride)`` selects the items whose global index is congruent to
    ``start`` mod ``stride``; the union over ``start`` is the full stream.
    """
    total = count_affine(n, d)
    if budget is not None and total > budget:
        raise BudgetExceeded(
            f"{total} affine subspaces of dimension {d} in F2^{n} exceed budget {budget}"
        )
    index = 0
    for space in enumerate_subspaces(n, d):
        for shift in coset_shifts(space):
            if index % stride == start:
                yield AffineSubspace(space, int(shift))
            index += 1
