"""Arithmetic in GF(2^k), the trace map, and trace forms of linear functionals.

Elements are ``int`` coefficient vectors in the polynomial basis
``1, t, ..., t^{k-1}``.  The isomorphism F2^k -> GF(2^k) is the identity on
bit patterns, so a Boolean vector and its field element share one int.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import f2
from .errors import DimensionError

MAX_K = 24


def poly_degree(p: int) -> int:
    return p.bit_length() - 1


def poly_mod(a: int, m: int) -> int:
    dm = poly_degree(m)
    while a and poly_degree(a) >= dm:
        a ^= m << (poly_degree(a) - dm)
    return a


def is_irreducible(p: int) -> bool:
    """Trial division by every polynomial of degree 1..deg(p)//2."""
    d = poly_degree(p)
    if d < 1:
        return False
    for q in range(2, 1 << (d // 2 + 1)):
        if poly_mod(p, q) == 0:
            return False
    return True


@lru_cache(maxsize=None)
def least_irreducible(k: int) -> int:
    """Smallest (as an integer) irreducible polynomial of degree ``k``."""
    if not 1 <= k <= MAX_K:
        raise DimensionError(f"extension degree {k} outside [1, {MAX_K}]")
    for p in range(1 << k, 1 << (k + 1)):
        if is_irreducible(p):
            return p
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class GF2k:
    """The field GF(2^k) for a fixed irreducible modulus."""

    def __init__(self, k: int, modulus: int | None = None):
        if not 1 <= k <= MAX_K:
            raise DimensionError(f"extension degree {k} outside [1, {MAX_K}]")
        if modulus is None:
            modulus = least_irreducible(k)
        if poly_degree(modulus) != k or not is_irreducible(modulus):
            raise ValueError(f"{modulus:#x} is not an irreducible polynomial of degree {k}")
        self.k = k
        self.modulus = modulus
        self.order = 1 << k
        self._trace_table = None

    def __repr__(self):
        return f"GF2k(k={self.k}, modulus={self.modulus:#x})"

    def __eq__(self, other):
        return isinstance(other, GF2k) and (self.k, self.modulus) == (other.k, other.modulus)

    def __hash__(self):
        return hash((self.k, self.modulus))

    def check(self, a: int) -> int:
        if a < 0 or a >> self.k:
            raise DimensionError(f"{a:#x} is not an element of GF(2^{self.k})")
        return a

    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        top = 1 << self.k
        out = 0
        while b:
            if b & 1:
                out ^= a
            b >>= 1
            a <<= 1
            if a & top:
                a ^= self.modulus
        return out

    def square(self, a: int) -> int:
        return self.mul(a, a)

    def pow(self, a: int, e: int) -> int:
        out = 1
        while e:
            if e & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            e >>= 1
        return out

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in GF(2^k)")
        return self.pow(a, self.order - 2)

    def trace(self, a: int) -> int:
        """Tr(a) = a + a^2 + a^4 + ... + a^(2^(k-1))."""
        total = a
        x = a
        for _ in range(self.k - 1):
            x = self.mul(x, x)
            total ^= x
        if total not in (0, 1):
            raise AssertionError(f"trace left the prime field: {total:#x}")
        return total

    def trace_table(self) -> np.ndarray:
        """Tr of every element, indexed by element."""
        if self._trace_table is None:
            # Tr is F2-linear, so it is the dot product with the traces of the basis.
            mask = 0
            for i in range(self.k):
                if self.trace(1 << i):
                    mask |= 1 << i
            elems = np.arange(self.order, dtype=np.int64)
            self._trace_table = (np.bitwise_count(elems & mask) & 1).astype(np.uint8)
        return self._trace_table

    def trace_mask(self) -> int:
        """The form x -> Tr(x) as a coefficient mask."""
        return self.form_from_mu(1)

    def mul_vec(self, a: np.ndarray, b) -> np.ndarray:
        """Elementwise product of int64 arrays (broadcasting)."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        a, b = np.broadcast_arrays(a, b)
        a = a.copy()
        b = b.copy()
        out = np.zeros_like(a)
        top = 1 << self.k
        for _ in range(self.k):
            out ^= np.where(b & 1, a, 0)
            b >>= 1
            a <<= 1
            a ^= np.where(a & top, self.modulus, 0)
        return out

    def form_from_mu(self, mu: int) -> int:
        """The linear form x -> Tr(mu * x) as a coefficient mask.

        Coefficient ``i`` is Tr(mu * e_i) for the basis element e_i = t^i.
        """
        self.check(mu)
        form = 0
        for i in range(self.k):
            if self.trace(self.mul(mu, 1 << i)):
                form |= 1 << i
        return form

    def mu_from_form(self, form: int) -> int:
        """Inverse of :meth:`form_from_mu`.

        ``mu -> form`` is F2-linear with matrix ``M[i][j] = Tr(e_i e_j)``;
        solve ``M mu = form``.
        """
        f2.check_word(form, self.k)
        rows = []
        for i in range(self.k):
            row = 0
            for j in range(self.k):
                if self.trace(self.mul(1 << i, 1 << j)):
                    row |= 1 << j
            rows.append((row, (form >> i) & 1))
        sol = f2.solve(f2.LinearSystem(self.k, tuple(rows)))
        if sol.empty or sol.space.dim:
            raise AssertionError("trace form is degenerate")  # pragma: no cover
        return sol.shift


@lru_cache(maxsize=None)
def field(k: int) -> GF2k:
    """Shared default field of degree ``k``."""
    return GF2k(k)
