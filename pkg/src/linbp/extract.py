"""Brute-force and sampled verification of (directional) affine extractors.

The scan works on sign tables ``(-1)^g`` for each tested function ``g``
(``f`` itself, or every derivative ``D_a f``) and sums them over all cosets
of each candidate subspace in one gather.  Every candidate carries a global
position key and partial results merge by (largest bias, earliest key), so
the number of worker processes never changes the report.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
import dataclasses
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import f2
from .boolfn import TruthTable, directional_derivative, restrict_bias
from .errors import BudgetExceeded
from .f2 import AffineSubspace, Subspace

DEFAULT_BUDGET = 10**10
SAMPLE_CHUNK = 2048


@dataclass
class ExtractorReport:
    mode: str  # "exhaustive" | "sampled"
    kind: str  # "extractor" | "disperser"
    directional: bool
    d: int
    dims: list[int]
    eps: Fraction | None
    holds: bool
    worst_bias: Fraction
    witness_direction: int | None
    witness: AffineSubspace | None
    trials: int
    seed: int | None = None
    work: int = 0
    per_dim: dict[int, Fraction] = dataclasses.field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "kind": self.kind,
            "directional": self.directional,
            "d": self.d,
            "dims": self.dims,
            "eps": None if self.eps is None else str(self.eps),
            "holds": self.holds,
            "worst_bias": str(self.worst_bias),
            "witness": None
            if self.witness is None
            else {
                "direction": None
                if self.witness_direction is None
                else f2.to_hex(self.witness_direction),
                "subspace": self.witness.describe(),
            },
            "trials": self.trials,
            "seed": self.seed,
            "work": self.work,
            "per_dim": {str(m): str(b) for m, b in self.per_dim.items()},
        }

    def witness_bias(self, f: TruthTable) -> Fraction:
        """Recompute the witness bias straight from the definition."""
        g = f if self.witness_direction is None else directional_derivative(f, self.witness_direction)
        return restrict_bias(g, self.witness)


def exhaustive_cost(n: int, d: int, n_funcs: int) -> int:
    return f2.count_affine(n, d) * (1 << d) * n_funcs


def _sign_rows(f: TruthTable, directional: bool) -> tuple[np.ndarray, list[int] | None]:
    vals = f.values.astype(np.int8)
    if not directional:
        return (1 - 2 * vals)[None, :], None
    dirs = list(range(1, 1 << f.n))
    x = np.arange(1 << f.n, dtype=np.int64)
    a = np.array(dirs, dtype=np.int64)
    deriv = vals[x[None, :] ^ a[:, None]] ^ vals[None, :]
    return 1 - 2 * deriv, dirs


# A result is (abs_sum, key, payload); key orders positions globally.
def _better(a, b):
    if a is None:
        return b
    if b is None:
        return a
    if b[0] > a[0] or (b[0] == a[0] and b[1] < a[1]):
        return b
    return a


def _scan_part(signs: np.ndarray, n: int, d: int, start: int, stride: int):
    best = None
    count = 0
    for si, space in enumerate(f2.enumerate_subspaces(n, d)):
        if si % stride != start:
            continue
        pts = space.points()
        shifts = f2.coset_shifts(space)
        idx = shifts[:, None] ^ pts[None, :]
        sums = np.abs(signs[:, idx].sum(axis=2, dtype=np.int64))
        count += sums.size
        flat = int(np.argmax(sums))
        fi, ci = divmod(flat, sums.shape[1])
        cand = (int(sums[fi, ci]), (si, fi, ci), (space.basis, int(shifts[ci])))
        best = _better(best, cand)
    return best, count


def _scan_exhaustive(signs, n, d, jobs):
    stride = max(1, jobs)
    parts = [(signs, n, d, p, stride) for p in range(stride)]
    results = _run(_scan_part, parts, jobs)
    best = None
    count = 0
    for res, c in results:
        best = _better(best, res)
        count += c
    return best, count


def _random_basis(rng: np.random.Generator, n: int, d: int) -> tuple[int, ...]:
    while True:
        rows = [int(v) for v in rng.integers(0, 1 << n, size=d)]
        space = f2.rref(rows, n)
        if space.dim == d:
            return tuple(rows)


def _sample_chunk(values: np.ndarray, n: int, d: int, directional: bool, seed: int, chunk: int, size: int):
    rng = np.random.default_rng([seed, d, chunk])
    dirs = rng.integers(1, 1 << n, size=size) if directional else np.zeros(size, dtype=np.int64)
    bases = np.array([_random_basis(rng, n, d) for _ in range(size)], dtype=np.int64).reshape(size, d)
    shifts = rng.integers(0, 1 << n, size=size)
    pts = shifts[:, None].astype(np.int64)
    for j in range(d):
        pts = np.concatenate([pts, pts ^ bases[:, j : j + 1]], axis=1)
    vals = values[pts]
    if directional:
        vals = vals ^ values[pts ^ dirs[:, None]]
    sums = np.abs((1 - 2 * vals.astype(np.int64)).sum(axis=1))
    i = int(np.argmax(sums))
    return (
        int(sums[i]),
        (chunk, i),
        (tuple(int(b) for b in bases[i]), int(shifts[i]), int(dirs[i]) if directional else None),
    )


def _run(fn, arglist, jobs):
    if jobs <= 1 or len(arglist) <= 1:
        return [fn(*args) for args in arglist]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, *zip(*arglist)))


def check(
    f: TruthTable,
    d: int,
    eps: Fraction | None = None,
    *,
    directional: bool = False,
    sample: int | None = None,
    seed: int | None = None,
    budget: int = DEFAULT_BUDGET,
    jobs: int = 1,
    all_dims_geq: bool = False,
) -> ExtractorReport:
    """Core verifier behind the public ``is_*`` functions.

    With ``eps`` set this checks the extractor property (bias <= eps);
    otherwise the disperser property (bias < 1).
    """
    n = f.n
    if not 0 <= d <= n:
        raise ValueError(f"dimension {d} outside [0, {n}]")
    kind = "disperser" if eps is None else "extractor"
    dims = list(range(d, n + 1)) if all_dims_geq else [d]
    n_funcs = (1 << n) - 1 if directional else 1
    if directional and n == 0:
        raise ValueError("no non-zero directions in F2^0")

    if sample is None:
        work = sum(exhaustive_cost(n, m, n_funcs) for m in dims)
        if work > budget:
            raise BudgetExceeded(
                f"exhaustive check needs {work} bit-operations (budget {budget}); "
                "use sampled mode (--sample N --seed S)"
            )
        signs, dirs = _sign_rows(f, directional)
        worst = None
        per_dim = {}
        trials = 0
        for m in dims:
            best, count = _scan_exhaustive(signs, n, m, jobs)
            trials += count
            per_dim[m] = Fraction(best[0], 1 << m)
            best = (best[0], (m,) + best[1], best[2], m)
            if worst is None or best[0] * (1 << worst[3]) > worst[0] * (1 << m):
                worst = best
        abs_sum, key, (basis, shift), m = worst
        fi = key[2]
        direction = dirs[fi] if directional else None
        witness = AffineSubspace(Subspace(n, basis), shift)
        mode = "exhaustive"
    else:
        if seed is None or seed < 0:
            raise ValueError("sampled mode requires a non-negative seed")
        work = 0
        worst = None
        per_dim = {}
        trials = 0
        for m in dims:
            chunks = []
            left = sample
            c = 0
            while left > 0:
                size = min(SAMPLE_CHUNK, left)
                chunks.append((f.values, n, m, directional, seed, c, size))
                left -= size
                c += 1
            best = None
            for res in _run(_sample_chunk, chunks, jobs):
                best = _better(best, res)
            trials += sample
            work += sample << m
            per_dim[m] = Fraction(best[0], 1 << m)
            best = (best[0], (m,) + best[1], best[2], m)
            if worst is None or best[0] * (1 << worst[3]) > worst[0] * (1 << m):
                worst = best
        abs_sum, key, (basis, shift, direction), m = worst
        witness = AffineSubspace(f2.rref(basis, n), shift)
        mode = "sampled"

    worst_bias = Fraction(abs_sum, 1 << m)
    holds = worst_bias < 1 if eps is None else worst_bias <= eps
    return ExtractorReport(
        mode=mode,
        kind=kind,
        directional=directional,
        d=d,
        dims=dims,
        eps=eps,
        holds=bool(holds),
        worst_bias=worst_bias,
        witness_direction=direction,
        witness=witness,
        trials=trials,
        seed=seed if sample is not None else None,
        work=work,
        per_dim=per_dim,
    )


def is_affine_extractor(f: TruthTable, d: int, eps: Fraction, **kw) -> ExtractorReport:
    return check(f, d, Fraction(eps), **kw)


def is_affine_disperser(f: TruthTable, d: int, **kw) -> ExtractorReport:
    return check(f, d, None, **kw)


def is_directional_affine_extractor(f: TruthTable, d: int, eps: Fraction, **kw) -> ExtractorReport:
    return check(f, d, Fraction(eps), directional=True, **kw)


def is_directional_affine_disperser(f: TruthTable, d: int, **kw) -> ExtractorReport:
    return check(f, d, None, directional=True, **kw)
