"""Truth-table Boolean functions, spectra, mixedness and the trace constructions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable

import numpy as np

from . import f2
from .errors import BudgetExceeded, DimensionError
from .f2 import AffineSubspace, Subspace
from .gf2k import GF2k

MIXED_MAX_N = 12
AFFINE_MIXED_MAX_N = 10


@dataclass(frozen=True, eq=False)
class TruthTable:
    """Boolean function on ``n`` variables; ``values[x]`` is f(x).

    Input ``x`` is an int with bit ``i`` holding ``x_{i+1}``.
    """

    n: int
    values: np.ndarray

    def __post_init__(self):
        f2.check_n(self.n)
        vals = np.ascontiguousarray(self.values, dtype=np.uint8)
        if vals.shape != (1 << self.n,):
            raise DimensionError(f"table of length {vals.size} does not match n={self.n}")
        if vals.size and vals.max() > 1:
            raise ValueError("truth table entries must be 0 or 1")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, n: int, fn: Callable[[int], int]) -> "TruthTable":
        return cls(n, np.array([fn(x) & 1 for x in range(1 << n)], dtype=np.uint8))

    @classmethod
    def from_form(cls, n: int, form: int, constant: int = 0) -> "TruthTable":
        x = np.arange(1 << n, dtype=np.int64)
        return cls(n, (np.bitwise_count(x & form) & 1) ^ constant)

    @classmethod
    def constant(cls, n: int, bit: int) -> "TruthTable":
        return cls(n, np.full(1 << n, bit, dtype=np.uint8))

    @classmethod
    def from_hex(cls, text: str, n: int) -> "TruthTable":
        word = f2.from_hex(text)
        if word >> (1 << n):
            raise DimensionError(f"hex table has more than 2^{n} bits")
        raw = word.to_bytes(max(1, (1 << n) // 8 if n >= 3 else 1), "little")
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
        return cls(n, bits[: 1 << n])

    def to_hex(self) -> str:
        """Bit ``x`` of the printed integer is f(x); padded to 2^n bits."""
        packed = np.packbits(self.values, bitorder="little")
        word = int.from_bytes(packed.tobytes(), "little")
        width = max(1, (1 << self.n) // 4)
        return format(word, f"0{width}x")

    def __call__(self, x: int) -> int:
        return int(self.values[x])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TruthTable)
            and self.n == other.n
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash((self.n, self.values.tobytes()))

    def __invert__(self) -> "TruthTable":
        return TruthTable(self.n, self.values ^ 1)

    def __xor__(self, other: "TruthTable") -> "TruthTable":
        _same(self, other)
        return TruthTable(self.n, self.values ^ other.values)

    def __repr__(self):
        return f"TruthTable(n={self.n}, hex={self.to_hex()!r})"

    def signs(self) -> np.ndarray:
        return 1 - 2 * self.values.astype(np.int64)


def _same(f: TruthTable, g: TruthTable) -> None:
    if f.n != g.n:
        raise DimensionError(f"functions on {f.n} and {g.n} variables")


@dataclass(frozen=True)
class PartialAssignment:
    """Values for the variables in ``domain`` (both int masks)."""

    n: int
    domain: int
    values: int

    def __post_init__(self):
        f2.check_word(self.domain, self.n)
        if self.values & ~self.domain:
            raise ValueError("assignment sets a variable outside its domain")

    def dom(self) -> list[int]:
        return f2.support(self.domain)

    def consistent(self, x: int) -> bool:
        return x & self.domain == self.values


def bias(f: TruthTable) -> Fraction:
    ones = int(f.values.sum())
    return Fraction(abs((1 << f.n) - 2 * ones), 1 << f.n)


def restrict_bias(f: TruthTable, s: AffineSubspace) -> Fraction:
    if s.empty:
        raise ValueError("bias over the empty set is undefined")
    if s.n != f.n:
        raise DimensionError(f"subspace of F2^{s.n} for a function on {f.n} variables")
    vals = f.values[s.points()]
    return Fraction(abs(len(vals) - 2 * int(vals.sum())), len(vals))


def directional_derivative(f: TruthTable, a: int) -> TruthTable:
    """D_a f(x) = f(x + a) + f(x)."""
    f2.check_word(a, f.n)
    if a == 0:
        raise ValueError("derivative direction must be non-zero")
    x = np.arange(1 << f.n, dtype=np.int64)
    return TruthTable(f.n, f.values[x ^ a] ^ f.values)


def walsh(f: TruthTable) -> np.ndarray:
    """W[alpha] = sum_x (-1)^(f(x) + alpha.x), via the fast transform."""
    w = f.signs().copy()
    h = 1
    size = w.size
    while h < size:
        w = w.reshape(-1, 2, h)
        a = w[:, 0, :] + w[:, 1, :]
        b = w[:, 0, :] - w[:, 1, :]
        w = np.stack([a, b], axis=1).reshape(size)
        h *= 2
    return w


def is_bent(f: TruthTable) -> bool:
    if f.n % 2:
        raise ValueError("bent functions need an even number of variables")
    return bool(np.all(np.abs(walsh(f)) == 1 << (f.n // 2)))


def distance(f: TruthTable, g: TruthTable) -> Fraction:
    _same(f, g)
    return Fraction(int(np.count_nonzero(f.values != g.values)), 1 << f.n)


# --- mixedness -------------------------------------------------------------


def _subsets(n: int, max_size: int):
    for size in range(max_size + 1):
        for idx in combinations(range(n), size):
            yield sum(1 << i for i in idx)


def _check_mixed_budget(n: int, limit: int) -> None:
    if n > limit:
        raise BudgetExceeded(f"exhaustive mixedness check limited to n <= {limit}, got {n}")


def mixed_witness(f: TruthTable, d: int):
    """Two distinct assignments on one domain with equal restrictions, or None.

    Restrictions are compared as whole sub-tables: the table is reshaped so
    the coordinates in ``I`` index rows and the rest index columns.
    """
    n = f.n
    _check_mixed_budget(n, MIXED_MAX_N)
    cube = f.values.reshape((2,) * n) if n else f.values
    for dom in _subsets(n, n - d):
        idx = f2.support(dom)
        size = len(idx)
        if size == 0:
            continue
        # numpy axis j holds bit n-1-j of the index
        axes = [n - i for i in idx]  # support() is 1-based
        rest = [j for j in range(n) if j not in axes]
        rows = np.transpose(cube, axes[::-1] + rest).reshape(1 << size, -1)
        seen: dict[bytes, int] = {}
        for r in range(1 << size):
            key = rows[r].tobytes()
            if key in seen:
                sigma = _spread(seen[key], idx)
                tau = _spread(r, idx)
                return PartialAssignment(n, dom, sigma), PartialAssignment(n, dom, tau)
            seen[key] = r
    return None


def _spread(code: int, idx: list[int]) -> int:
    """Place bit j of ``code`` on variable ``idx[j]`` (1-based)."""
    out = 0
    for j, var in enumerate(idx):
        if (code >> j) & 1:
            out |= 1 << (var - 1)
    return out


def is_d_mixed(f: TruthTable, d: int) -> bool:
    return mixed_witness(f, d) is None


def mixed_alt_witness(f: TruthTable, d: int):
    """A partial assignment sigma and c != 0 inside dom(sigma) such that
    f(x) = f(x + c) for every x consistent with sigma, or None."""
    n = f.n
    _check_mixed_budget(n, MIXED_MAX_N)
    xs = np.arange(1 << n, dtype=np.int64)
    vals = f.values
    for dom in _subsets(n, n - d):
        if dom == 0:
            continue
        cs = [c for c in range(1, dom + 1) if c & ~dom == 0]
        restricted = xs & dom
        # ok[c, sigma]: f(x) = f(x + c) for every x consistent with sigma
        ok = np.empty((len(cs), dom + 1), dtype=bool)
        for j, c in enumerate(cs):
            moved = vals != vals[xs ^ c]
            ok[j] = np.bincount(restricted[moved], minlength=dom + 1) == 0
        ok[:, [t for t in range(dom + 1) if t & ~dom]] = False
        hits = np.argwhere(ok.T)
        if hits.size:
            sigma, j = (int(t) for t in hits[0])
            return PartialAssignment(n, dom, sigma), cs[j]
    return None


def is_d_mixed_alt(f: TruthTable, d: int) -> bool:
    return mixed_alt_witness(f, d) is None


def affine_mixed_witness(f: TruthTable, d: int, budget: int | None = None):
    """An affine S (dim >= d) and c outside its direction space with
    f(x) = f(x + c) on all of S, or None."""
    n = f.n
    _check_mixed_budget(n, AFFINE_MIXED_MAX_N)
    if budget is not None:
        cost = sum(f2.gaussian_binomial(n, m) for m in range(max(d, 0), n)) << (2 * n)
        if cost > budget:
            raise BudgetExceeded(f"affine mixedness scan needs {cost} operations, budget {budget}")
    vals = f.values
    everything = np.arange(1 << n, dtype=np.int64)
    for m in range(max(d, 0), n):
        for space in f2.enumerate_subspaces(n, m):
            pts = space.points()
            shifts = f2.coset_shifts(space)
            idx = shifts[:, None] ^ pts[None, :]
            member = np.zeros(1 << n, dtype=bool)
            member[pts] = True
            cs = everything[~member]
            base = vals[idx]
            moved = vals[idx[None, :, :] ^ cs[:, None, None]]
            differs = (moved != base[None]).any(axis=2)
            bad = np.argwhere(~differs)
            if bad.size:
                ci, si = bad[0]
                return AffineSubspace(space, int(shifts[si])), int(cs[ci])
    return None


def is_d_affine_mixed(f: TruthTable, d: int, budget: int | None = None) -> bool:
    return affine_mixed_witness(f, d, budget) is None


# --- trace constructions -----------------------------------------------------


def _split(k: int, parts: int) -> list[np.ndarray]:
    idx = np.arange(1 << (k * parts), dtype=np.int64)
    mask = (1 << k) - 1
    return [(idx >> (k * i)) & mask for i in range(parts)]


def construct_g(field: GF2k, a0: int, a1: int = 0, a2: int = 0, a3: int = 0) -> TruthTable:
    """g(x, y) = Tr(a0 x y + a1 x + a2 y + a3) on 2k variables.

    ``x`` is the low k bits of the input, ``y`` the high k bits.
    """
    for a in (a0, a1, a2, a3):
        field.check(a)
    if a0 == 0:
        raise ValueError("a0 must be non-zero")
    k = field.k
    f2.check_n(2 * k)
    x, y = _split(k, 2)
    arg = field.mul_vec(field.mul_vec(x, y), a0)
    arg ^= field.mul_vec(x, a1) ^ field.mul_vec(y, a2) ^ a3
    return TruthTable(2 * k, field.trace_table()[arg])


def construct_daf(field: GF2k) -> TruthTable:
    """f(x, y, z) = Tr(x y z) on 3k variables (x lowest, z highest)."""
    k = field.k
    if 3 * k > f2.MAX_N:
        raise DimensionError(f"3k = {3 * k} exceeds {f2.MAX_N} variables")
    x, y, z = _split(k, 3)
    return TruthTable(3 * k, field.trace_table()[field.mul_vec(field.mul_vec(x, y), z)])
