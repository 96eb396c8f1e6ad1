"""Linear branching programs: evaluation, read-once checks and full form.

A program is a DAG whose inner nodes query linear forms (int masks) and
branch on the answer; sinks carry an output bit (``function`` mode) or a
1-based CNF clause index (``search`` mode).  Programs are immutable; the
transformations return new programs with dense node ids in topological
order.
"""

from __future__ import annotations

import heapq
import json
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from . import f2
from .boolfn import TruthTable
from .errors import BPError, BudgetExceeded
from .f2 import AffineSubspace, LinearSystem, Subspace

FUNCTION = "function"
SEARCH = "search"


@dataclass(frozen=True, eq=False)
class LinearBP:
    n: int
    mode: str
    source: int
    queries: Mapping[int, int]
    edges: Mapping[int, tuple[int, int]]
    sinks: Mapping[int, int]

    def __post_init__(self):
        object.__setattr__(self, "queries", dict(self.queries))
        object.__setattr__(self, "edges", {v: (int(a), int(b)) for v, (a, b) in self.edges.items()})
        object.__setattr__(self, "sinks", dict(self.sinks))
        self._validate()

    def _validate(self):
        f2.check_n(self.n)
        if self.mode not in (FUNCTION, SEARCH):
            raise BPError(f"unknown mode {self.mode!r}")
        inner = set(self.queries)
        if set(self.edges) != inner:
            raise BPError("every inner node needs a query and exactly two out-edges")
        both = inner & set(self.sinks)
        if both:
            raise BPError("node is both inner and sink", node=min(both))
        nodes = inner | set(self.sinks)
        if self.source not in nodes:
            raise BPError("source is not a node", node=self.source)
        for v, q in self.queries.items():
            if q < 0 or q >> self.n:
                raise BPError(f"query {q:#x} does not fit in {self.n} variables", node=v)
        indeg = {v: 0 for v in nodes}
        for v, succ in self.edges.items():
            for t in succ:
                if t not in nodes:
                    raise BPError(f"edge to unknown node {t}", node=v)
                indeg[t] += 1
        roots = [v for v, k in indeg.items() if k == 0]
        if roots != [self.source]:
            raise BPError(f"program must have exactly one source, found {sorted(roots)}")
        if len(self.topo_order) != len(nodes):
            raise BPError("program graph has a cycle")
        if self.mode == FUNCTION:
            labels = list(self.sinks.values())
            if any(b not in (0, 1) for b in labels) or len(set(labels)) != len(labels):
                raise BPError("function programs have at most one sink per output bit")
        else:
            for v, c in self.sinks.items():
                if c < 1:
                    raise BPError(f"clause index {c} must be >= 1", node=v)

    @cached_property
    def topo_order(self) -> tuple[int, ...]:
        """Kahn order, smallest id first among ready nodes."""
        nodes = set(self.queries) | set(self.sinks)
        indeg = {v: 0 for v in nodes}
        for succ in self.edges.values():
            for t in succ:
                if t in indeg:
                    indeg[t] += 1
        ready = [v for v in nodes if indeg[v] == 0]
        heapq.heapify(ready)
        order = []
        while ready:
            v = heapq.heappop(ready)
            order.append(v)
            for t in self.edges.get(v, ()):
                indeg[t] -= 1
                if indeg[t] == 0:
                    heapq.heappush(ready, t)
        return tuple(order)

    @property
    def nodes(self) -> tuple[int, ...]:
        return self.topo_order

    @property
    def size(self) -> int:
        return len(self.queries) + len(self.sinks)

    def is_inner(self, v: int) -> bool:
        return v in self.queries

    def in_edges(self) -> dict[int, list[tuple[int, int]]]:
        """``v -> [(u, bit), ...]`` ordered by the topological position of ``u``."""
        pos = {v: i for i, v in enumerate(self.topo_order)}
        out: dict[int, list[tuple[int, int]]] = defaultdict(list)
        for u in sorted(self.edges, key=pos.__getitem__):
            for bit, t in enumerate(self.edges[u]):
                out[t].append((u, bit))
        return out

    # --- serialization -------------------------------------------------------

    def label_str(self, v: int) -> str:
        c = self.sinks[v]
        return str(c) if self.mode == FUNCTION else f"clause:{c}"

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "mode": self.mode,
            "source": self.source,
            "nodes": [{"id": v, "query": f2.to_hex(q)} for v, q in sorted(self.queries.items())],
            "edges": [
                {"from": v, "bit": bit, "to": t}
                for v, succ in sorted(self.edges.items())
                for bit, t in enumerate(succ)
            ],
            "sinks": [{"id": v, "label": self.label_str(v)} for v in sorted(self.sinks)],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "LinearBP":
        try:
            n = int(data["n"])
            mode = data.get("mode", FUNCTION)
            queries = {int(nd["id"]): f2.from_hex(nd["query"]) for nd in data["nodes"]}
            half: dict[int, dict[int, int]] = defaultdict(dict)
            for e in data["edges"]:
                src, bit, dst = int(e["from"]), int(e["bit"]), int(e["to"])
                if bit not in (0, 1) or bit in half[src]:
                    raise BPError(f"bad or duplicate edge bit {bit}", node=src)
                half[src][bit] = dst
            edges = {}
            for v, d in half.items():
                if set(d) != {0, 1}:
                    raise BPError("inner node needs edges for both bits", node=v)
                edges[v] = (d[0], d[1])
            sinks = {}
            for s in data["sinks"]:
                label = str(s["label"])
                if label.startswith("clause:"):
                    if mode != SEARCH:
                        raise BPError("clause label in a function program", node=s["id"])
                    sinks[int(s["id"])] = int(label[len("clause:"):])
                else:
                    if mode != FUNCTION:
                        raise BPError("bit label in a search program", node=s["id"])
                    sinks[int(s["id"])] = int(label)
            return cls(n, mode, int(data["source"]), queries, edges, sinks)
        except (KeyError, TypeError, ValueError) as exc:
            raise BPError(f"malformed program: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "LinearBP":
        return cls.from_dict(json.loads(text))

    def renumber(self) -> "LinearBP":
        """Dense ids ``0..size-1`` in topological order."""
        ids = {v: i for i, v in enumerate(self.topo_order)}
        return LinearBP(
            self.n,
            self.mode,
            ids[self.source],
            {ids[v]: q for v, q in self.queries.items()},
            {ids[v]: (ids[a], ids[b]) for v, (a, b) in self.edges.items()},
            {ids[v]: c for v, c in self.sinks.items()},
        )


# --- evaluation ---------------------------------------------------------------


def evaluate(bp: LinearBP, x: int) -> tuple[list[int], int]:
    """Follow the path of ``x``; returns (node ids on the path, sink label)."""
    f2.check_word(x, bp.n)
    path = [bp.source]
    v = bp.source
    while v in bp.queries:
        v = bp.edges[v][f2.dot(bp.queries[v], x)]
        path.append(v)
    return path, bp.sinks[v]


def route_all(bp: LinearBP) -> dict[int, np.ndarray]:
    """For every node, the sorted array of inputs whose path visits it."""
    reach: dict[int, list[np.ndarray]] = defaultdict(list)
    reach[bp.source].append(np.arange(1 << bp.n, dtype=np.int64))
    out = {}
    for v in bp.topo_order:
        xs = np.sort(np.concatenate(reach.pop(v))) if reach.get(v) else np.zeros(0, dtype=np.int64)
        out[v] = xs
        if v in bp.queries:
            ans = np.bitwise_count(xs & bp.queries[v]) & 1
            lo, hi = bp.edges[v]
            reach[lo].append(xs[ans == 0])
            reach[hi].append(xs[ans == 1])
    return out


def outputs(bp: LinearBP) -> np.ndarray:
    """Sink label reached by every input, indexed by input."""
    res = np.zeros(1 << bp.n, dtype=np.int64)
    for v, xs in route_all(bp).items():
        if v in bp.sinks:
            res[xs] = bp.sinks[v]
    return res


def computed_function(bp: LinearBP) -> TruthTable:
    if bp.mode != FUNCTION:
        raise BPError("only function programs compute a Boolean function")
    return TruthTable(bp.n, outputs(bp).astype(np.uint8))


# --- query spaces -------------------------------------------------------------


@dataclass(frozen=True)
class NodeSpaces:
    pre: Subspace
    post: Subspace


def pre_spaces(bp: LinearBP) -> dict[int, Subspace]:
    """Span of the queries on all source->v paths, excluding v's own query."""
    gens: dict[int, set[int]] = defaultdict(set)
    pre: dict[int, Subspace] = {}
    for v in bp.topo_order:
        pre[v] = f2.rref(gens.pop(v, ()), bp.n)
        if v in bp.queries:
            out = set(pre[v].basis) | {bp.queries[v]}
            for t in bp.edges[v]:
                gens[t] |= out
    return pre


def post_spaces(bp: LinearBP) -> dict[int, Subspace]:
    """Span of all queries in the subprogram rooted at v (zero at sinks)."""
    post: dict[int, Subspace] = {}
    for v in reversed(bp.topo_order):
        if v in bp.queries:
            lo, hi = bp.edges[v]
            post[v] = f2.rref((bp.queries[v],) + post[lo].basis + post[hi].basis, bp.n)
        else:
            post[v] = Subspace.zero(bp.n)
    return post


def node_spaces(bp: LinearBP, v: int) -> NodeSpaces:
    if v not in bp.queries:
        raise BPError("node spaces are defined for inner nodes", node=v)
    return NodeSpaces(pre_spaces(bp)[v], post_spaces(bp)[v])


def is_weakly_read_once(bp: LinearBP) -> tuple[bool, int | None]:
    """(verdict, first violating node in topological order)."""
    pre = pre_spaces(bp)
    for v in bp.topo_order:
        if v in bp.queries and bp.queries[v] in pre[v]:
            return False, v
    return True, None


def is_strongly_read_once(bp: LinearBP) -> tuple[bool, int | None]:
    pre = pre_spaces(bp)
    post = post_spaces(bp)
    for v in bp.topo_order:
        if v in bp.queries and not f2.is_complement_free(pre[v], post[v]):
            return False, v
    return True, None


def ro_status(bp: LinearBP) -> str:
    """``"strong"``, ``"weak"`` or ``"none"``."""
    if is_strongly_read_once(bp)[0]:
        return "strong"
    if is_weakly_read_once(bp)[0]:
        return "weak"
    return "none"


@dataclass(frozen=True)
class CanonicalSubspace:
    """A path's solution set ``space + shift`` with every Post form vanishing
    on ``shift`` (so ``shift`` is generally not the reduced coset shift)."""

    space: Subspace
    shift: int

    @property
    def affine(self) -> AffineSubspace:
        return AffineSubspace(self.space, self.shift)


def path_system(bp: LinearBP, steps: Sequence[tuple[int, int]]) -> tuple[LinearSystem, int]:
    """System of a path given as ``(node, answer)`` steps, and its end node."""
    v = bp.source
    rows = []
    for node, bit in steps:
        if node != v:
            raise BPError(f"path step at {node} does not continue from {v}", node=node)
        if node not in bp.queries:
            raise BPError("path continues past a sink", node=node)
        rows.append((bp.queries[node], bit))
        v = bp.edges[node][bit]
    return LinearSystem(bp.n, tuple(rows)), v


def canonical_path_subspace(bp: LinearBP, steps: Sequence[tuple[int, int]]) -> CanonicalSubspace:
    system, end = path_system(bp, steps)
    post = post_spaces(bp)[end]
    try:
        b = f2.canonical_shift(system, post)
    except Exception as exc:
        raise BPError(f"no canonical representation at node {end}: {exc}", node=end) from exc
    return CanonicalSubspace(f2.annihilator(system.forms()), b)


def all_paths(bp: LinearBP, target: int | None = None) -> list[list[tuple[int, int]]]:
    """Every source->target path as ``(node, answer)`` steps (small programs only)."""
    out = []

    def walk(v, steps):
        if v == target or (target is None and v in bp.sinks):
            out.append(list(steps))
            if target is not None:
                return
        if v not in bp.queries:
            return
        for bit, t in enumerate(bp.edges[v]):
            steps.append((v, bit))
            walk(t, steps)
            steps.pop()

    walk(bp.source, [])
    return out


def path_counts(bp: LinearBP) -> dict[int, int]:
    """Number of distinct source->v paths (edge sequences) for each node."""
    cnt: dict[int, int] = defaultdict(int)
    cnt[bp.source] = 1
    for v in bp.topo_order:
        for t in bp.edges.get(v, ()):
            cnt[t] += cnt[v]
    return {v: cnt[v] for v in bp.topo_order}


# --- fullness -------------------------------------------------------------------


def fullness_violation(bp: LinearBP) -> int | None:
    """First non-source node whose incoming edges carry different query spaces.

    The space carried by edge ``u -> v`` is ``Pre(u) + span(q_u)``; sinks are
    checked as well as inner nodes.
    """
    pre = pre_spaces(bp)
    ins = bp.in_edges()
    for v in bp.topo_order:
        spaces = {pre[u].extend([bp.queries[u]]) for u, _ in ins.get(v, ())}
        if len(spaces) > 1:
            return v
    return None


def is_full(bp: LinearBP) -> bool:
    return fullness_violation(bp) is None


class _Builder:
    def __init__(self, bp: LinearBP):
        self.n = bp.n
        self.mode = bp.mode
        self.source = bp.source
        self.queries = dict(bp.queries)
        self.edges = {v: list(e) for v, e in bp.edges.items()}
        self.sinks = dict(bp.sinks)
        self.next_id = max(self.queries.keys() | self.sinks.keys()) + 1

    def chain(self, forms: Sequence[int], target: int) -> int:
        """Multipath querying ``forms`` in order and ending at ``target``."""
        head = target
        for q in reversed(forms):
            w = self.next_id
            self.next_id += 1
            self.queries[w] = q
            self.edges[w] = [head, head]
            head = w
        return head

    def build(self) -> LinearBP:
        return LinearBP(
            self.n,
            self.mode,
            self.source,
            self.queries,
            {v: tuple(e) for v, e in self.edges.items()},
            self.sinks,
        ).renumber()


def completion(start: Subspace, target: Subspace) -> list[int]:
    """Greedy extension of ``start`` to ``target`` using ``target``'s rref rows."""
    cur = start
    out = []
    for b in target.basis:
        if b not in cur:
            out.append(b)
            cur = cur.extend([b])
    return out


def ancestors(bp: LinearBP) -> dict[int, frozenset[int]]:
    """Strict ancestors of every node."""
    ins = bp.in_edges()
    out: dict[int, frozenset[int]] = {}
    for v in bp.topo_order:
        acc: set[int] = set()
        for u, _ in ins.get(v, ()):
            acc |= out[u]
            acc.add(u)
        out[v] = frozenset(acc)
    return out


MAKE_FULL_SEARCH_LIMIT = 200_000


def _ro_preserving_completions(bp: LinearBP, pre, tasks, limit: int) -> list[list[int]] | None:
    """Completions for every ``(u, v, have)`` task that keep strong read-once.

    Adding ``r`` to the edge ``u -> v`` grows ``Post(c)`` by ``r`` for ``u``
    and all its ancestors ``c``; that is harmless iff ``r`` already lies in
    ``Post(c)`` or stays outside ``Pre(c) + Post(c)``.  Inserted multipath
    nodes never violate the property, so these are the only constraints.
    Candidates are tried by fewest ``Post`` spaces grown, then by value,
    with backtracking over a memo of failed states.  Returns ``None`` when
    no assignment exists or ``limit`` search steps run out.
    """
    anc = ancestors(bp)
    post = dict(post_spaces(bp))
    both = {c: pre[c] + post[c] for c in bp.queries}
    failed: set = set()
    steps = [0]
    chosen: list[list[int]] = [[] for _ in tasks]

    def state_key(i, cur):
        return i, cur.basis, tuple(post[c].basis for c in sorted(post) if c in bp.queries)

    def go(i: int, cur: Subspace | None) -> bool:
        if i == len(tasks):
            return True
        u, v, have = tasks[i]
        if cur is None:
            cur = have
        if cur.dim == pre[v].dim:
            return go(i + 1, None)
        key = state_key(i, cur)
        if key in failed:
            return False
        steps[0] += 1
        if steps[0] > limit:
            raise BudgetExceeded("make_full search limit reached")
        owners = sorted(anc[u] | {u})
        cands = []
        for r in pre[v].points():
            r = int(r)
            if r in cur:
                continue
            grow = [c for c in owners if r not in post[c]]
            if any(r in both[c] for c in grow):
                continue
            cands.append((len(grow), r, grow))
        cands.sort(key=lambda t: t[:2])
        for _, r, grow in cands:
            saved = {c: (post[c], both[c]) for c in grow}
            for c in grow:
                post[c] = post[c].extend([r])
                both[c] = both[c].extend([r])
            chosen[i].append(r)
            if go(i, cur.extend([r])):
                return True
            chosen[i].pop()
            for c, (p, w) in saved.items():
                post[c], both[c] = p, w
        failed.add(key)
        return False

    try:
        found = go(0, None)
    except BudgetExceeded:
        return None
    return chosen if found else None


def make_full(bp: LinearBP, *, search_limit: int = MAKE_FULL_SEARCH_LIMIT) -> LinearBP:
    """Equivalent full program by inserting multipaths on incoming edges.

    Each edge ``u -> v`` whose space ``Pre(u) + q_u`` falls short of
    ``Pre(v)`` is routed through a multipath querying a completion; when
    both edges of ``u`` enter ``v`` they share one multipath.  A weakly
    read-once input gets the greedy completion from ``Pre(v)``'s rref rows.
    For a strongly read-once input the completions are chosen so that the
    output is strongly read-once too (a careless choice can break it); if
    that search exceeds ``search_limit`` steps the greedy completion is used.
    """
    if not is_weakly_read_once(bp)[0]:
        raise BPError("make_full needs a weakly or strongly read-once program")
    pre = pre_spaces(bp)
    tasks = []
    for u in reversed(bp.topo_order):
        if u in bp.sinks:
            continue
        have = pre[u].extend([bp.queries[u]])
        for v in dict.fromkeys(bp.edges[u]):
            if have.dim < pre[v].dim:
                tasks.append((u, v, have))
    chosen = None
    if tasks and is_strongly_read_once(bp)[0]:
        chosen = _ro_preserving_completions(bp, pre, tasks, search_limit)
    if chosen is None:
        chosen = [completion(have, pre[v]) for _, v, have in tasks]
    b = _Builder(bp)
    for (u, v, _), missing in zip(tasks, chosen):
        head = b.chain(missing, v)
        for bit in (0, 1):
            if bp.edges[u][bit] == v:
                b.edges[u][bit] = head
    return b.build()


def pad_depth(bp: LinearBP, depth: int) -> LinearBP:
    """Extend every sink shallower than ``depth`` by a multipath.

    Expects a full program, so every path into a sink has the same rank.
    """
    pre = pre_spaces(bp)
    b = _Builder(bp)
    ins = bp.in_edges()
    for s in bp.sinks:
        if s == bp.source or pre[s].dim >= depth:
            continue
        missing = completion(pre[s], Subspace.full(bp.n))[: depth - pre[s].dim]
        head = b.chain(missing, s)
        for u, bit in ins[s]:
            b.edges[u][bit] = head
    if bp.source in bp.sinks and depth > 0:
        # a constant program: the multipath becomes the whole program
        s = bp.source
        head = b.chain(completion(Subspace.zero(bp.n), Subspace.full(bp.n))[:depth], s)
        b.source = head
    return b.build()


def depths(bp: LinearBP) -> dict[int, int]:
    """Path rank of each node (well defined once the program is full)."""
    return {v: s.dim for v, s in pre_spaces(bp).items()}


# --- antichains -------------------------------------------------------------------


def max_antichain(bp: LinearBP) -> int:
    """Largest set of pairwise incomparable nodes (Dilworth via matching).

    Equals ``#nodes - maximum matching`` in the bipartite graph of the
    transitive closure, i.e. ``#nodes`` minus the edges of a minimum
    chain cover.
    """
    order = bp.topo_order
    pos = {v: i for i, v in enumerate(order)}
    size = len(order)
    reach = [0] * size
    for v in reversed(order):
        i = pos[v]
        acc = 0
        for t in bp.edges.get(v, ()):
            j = pos[t]
            acc |= reach[j] | (1 << j)
        reach[i] = acc
    rows, cols = [], []
    for i, mask in enumerate(reach):
        j = 0
        while mask:
            if mask & 1:
                rows.append(i)
                cols.append(j)
            mask >>= 1
            j += 1
    if not rows:
        return size
    graph = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(size, size))
    match = maximum_bipartite_matching(graph, perm_type="column")
    return size - int(np.count_nonzero(match >= 0))


def brute_max_antichain(bp: LinearBP) -> int:
    """Exponential reference for tiny programs."""
    order = bp.topo_order
    desc = {}
    for v in reversed(order):
        acc = set()
        for t in bp.edges.get(v, ()):
            acc |= desc[t] | {t}
        desc[v] = acc
    best = 0
    for r in range(1, len(order) + 1):
        found = False
        for combo in combinations(order, r):
            if all(b not in desc[a] and a not in desc[b] for a, b in combinations(combo, 2)):
                found = True
                break
        if not found:
            break
        best = r
    return best


# --- search problems ----------------------------------------------------------------


def solves_search(bp: LinearBP, cnf) -> tuple[bool, int | None]:
    """(verdict, an input whose sink clause it does not falsify)."""
    if bp.mode != SEARCH:
        raise BPError("search verification needs a search-mode program")
    if bp.n != cnf.n:
        raise BPError(f"program has {bp.n} variables, CNF has {cnf.n}")
    for v, c in bp.sinks.items():
        if not 1 <= c <= len(cnf.clauses):
            raise BPError(f"clause index {c} out of range 1..{len(cnf.clauses)}", node=v)
    reach = route_all(bp)
    for v in sorted(bp.sinks):
        xs = reach[v]
        if not xs.size:
            continue
        sat = cnf.satisfied_mask(bp.sinks[v] - 1, xs)
        if sat.any():
            return False, int(xs[np.argmax(sat)])
    return True, None


# --- wrong-input bound for full programs ---------------------------------------------


@dataclass(frozen=True)
class Claim1Node:
    node: int
    paths: int
    wrong: int
    radicand: Fraction
    holds: bool

    def bound(self, d: int) -> float:
        return self.paths * 2**d / 2 * (1 - math.sqrt(self.radicand))


@dataclass
class Claim1Report:
    d: int
    eps: Fraction
    depth: int
    nodes: list[Claim1Node]
    path_total: int
    path_total_ok: bool
    holds: bool

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "eps": str(self.eps),
            "depth": self.depth,
            "path_total": self.path_total,
            "path_total_ok": self.path_total_ok,
            "holds": self.holds,
            "nodes": [
                {
                    "node": c.node,
                    "paths": c.paths,
                    "wrong": c.wrong,
                    "radicand": str(c.radicand),
                    "holds": c.holds,
                }
                for c in self.nodes
            ],
        }


def meets_wrong_bound(wrong: int, k: int, d: int, eps: Fraction) -> tuple[bool, Fraction]:
    """Exact test of ``wrong >= (k 2^d / 2)(1 - sqrt(eps + 1/k))``.

    Rearranged as ``sqrt(r) >= t`` with ``t = 1 - 2 wrong / (k 2^d)``; true
    when ``t <= 0`` and otherwise iff ``r >= t^2``.
    """
    r = Fraction(eps) + Fraction(1, k)
    t = 1 - Fraction(2 * wrong, k << d)
    return (t <= 0 or r >= t * t), r


def verify_claim1(bp: LinearBP, f: TruthTable, d: int, eps: Fraction) -> tuple[Claim1Report, LinearBP]:
    """Check the wrong-input lower bound at every node of depth ``n - d``.

    ``bp`` must be full and strongly read-once; it is padded so every path
    has length at least ``n - d``.  Returns the report and the padded program.
    """
    if bp.mode != FUNCTION:
        raise BPError("claim check needs a function program")
    if f.n != bp.n:
        raise BPError(f"function has {f.n} variables, program has {bp.n}")
    if not 0 <= d <= bp.n:
        raise BPError(f"dimension {d} outside [0, {bp.n}]")
    ok, v = is_strongly_read_once(bp)
    if not ok:
        raise BPError("program is not strongly read-once", node=v)
    v = fullness_violation(bp)
    if v is not None:
        raise BPError("program is not full", node=v)
    depth = bp.n - d
    padded = pad_depth(bp, depth)
    eps = Fraction(eps)
    dep = depths(padded)
    counts = path_counts(padded)
    reach = route_all(padded)
    g = outputs(padded)
    wrong_input = f.values.astype(np.int64) != g
    nodes = []
    total = 0
    for u in padded.topo_order:
        if dep[u] != depth:
            continue
        k = counts[u]
        total += k
        wrong = int(np.count_nonzero(wrong_input[reach[u]]))
        holds, r = meets_wrong_bound(wrong, k, d, eps)
        nodes.append(Claim1Node(u, k, wrong, r, holds))
    total_ok = total == 1 << depth
    report = Claim1Report(d, eps, depth, nodes, total, total_ok, total_ok and all(c.holds for c in nodes))
    return report, padded
