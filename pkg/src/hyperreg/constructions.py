"""Instance generators: Steiner triple systems, random linear hypergraphs,
the probabilistic lower-bound construction and planted coloured instances."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from math import comb, factorial

from .errors import InfeasibleParameters, HypergraphError, UnsupportedOrder
from .hypercore import ColouredGraph, LinearHypergraph
from .oracles import OracleBudget, find_r_regular_exact
from .rng import np_stream, stream

log = logging.getLogger(__name__)


# --------------------------------------------------------------------------
# Steiner triple systems


def _bose(n: int) -> list[tuple[int, int, int]]:
    v = n // 3
    half = (v + 1) // 2  # inverse of 2 modulo v

    def pt(x, i):
        return 3 * x + i

    def op(x, y):
        return (x + y) * half % v

    triples = [(pt(x, 0), pt(x, 1), pt(x, 2)) for x in range(v)]
    for x, y in combinations(range(v), 2):
        for i in range(3):
            triples.append((pt(x, i), pt(y, i), pt(op(x, y), (i + 1) % 3)))
    return triples


def _skolem(n: int) -> list[tuple[int, int, int]]:
    t = (n - 1) // 6
    N = 2 * t
    inf = n - 1

    def pt(x, i):
        return 3 * x + i

    def op(x, y):  # half-idempotent commutative quasigroup of order 2t
        s = (x + y) % N
        return s // 2 if s % 2 == 0 else (s + N - 1) // 2

    triples = [(pt(x, 0), pt(x, 1), pt(x, 2)) for x in range(t)]
    for x in range(t):
        for i in range(3):
            triples.append((inf, pt(x + t, i), pt(x, (i + 1) % 3)))
    for x, y in combinations(range(N), 2):
        for i in range(3):
            triples.append((pt(x, i), pt(y, i), pt(op(x, y), (i + 1) % 3)))
    return triples


def gen_sts(n: int, seed: int | None = None) -> LinearHypergraph:
    """Steiner triple system of order ``n`` (Bose for n = 3 mod 6, Skolem for n = 1 mod 6).

    With a seed the points are relabelled by a random permutation.
    """
    if n < 3 or n % 6 not in (1, 3):
        raise UnsupportedOrder(f"no Steiner triple system of order {n} (need n = 1 or 3 mod 6)")
    triples = _bose(n) if n % 6 == 3 else _skolem(n)
    if seed is not None:
        perm = list(range(n))
        stream(seed, "sts", n).shuffle(perm)
        triples = [tuple(perm[v] for v in t) for t in triples]
    return LinearHypergraph(n, triples, k=3)


def gen_random_linear(
    n: int, k: int, target_m: int, seed: int | None = None, max_attempts: int | None = None
) -> LinearHypergraph:
    """Random linear k-graph built by rejection: keep a uniform k-set if it
    shares no pair with an earlier edge.  Stops at ``target_m`` edges or after
    ``max_attempts`` draws; check ``.m`` for what was achieved."""
    if k < 2:
        raise HypergraphError("k must be at least 2")
    if target_m <= 0 or n < k:
        return LinearHypergraph(n, [], k=k)
    rng = stream(seed, "random-linear", n, k)
    attempts = max_attempts if max_attempts is not None else 200 * target_m + 1000
    used_pairs = set()
    edges = []
    for _ in range(attempts):
        e = tuple(sorted(rng.sample(range(n), k)))
        pairs = list(combinations(e, 2))
        if any(p in used_pairs for p in pairs):
            continue
        used_pairs.update(pairs)
        edges.append(e)
        if len(edges) == target_m:
            break
    return LinearHypergraph(n, edges, k=k)


def _capped_degree_linear(n: int, k: int, cap: int, rng) -> LinearHypergraph:
    """Greedy random linear k-graph with maximum degree at most ``cap``."""
    deg = [0] * n
    used_pairs = set()
    edges = []
    stall = 0
    while stall < 50 * n + 500:
        e = tuple(sorted(rng.sample(range(n), k)))
        pairs = list(combinations(e, 2))
        if any(deg[v] >= cap for v in e) or any(p in used_pairs for p in pairs):
            stall += 1
            continue
        stall = 0
        used_pairs.update(pairs)
        for v in e:
            deg[v] += 1
        edges.append(e)
    return LinearHypergraph(n, edges, k=k)


# --------------------------------------------------------------------------
# lower-bound construction


@dataclass(frozen=True)
class ConstructionParams:
    n: int
    k: int = 3
    r: int = 3
    c0: float = 0.5
    seed: int = 0
    bad_check_depth: int = 12

    def __post_init__(self):
        if not 2 <= self.r <= self.n:
            raise InfeasibleParameters("need 2 <= r <= n")
        if self.k < 2:
            raise InfeasibleParameters("need k >= 2")
        if self.c0 <= 0:
            raise InfeasibleParameters("c0 must be positive")
        if self.bad_check_depth < 1:
            raise InfeasibleParameters("bad_check_depth must be positive")

    @property
    def exponent(self) -> float:
        """r / ((r-1)(k-1))."""
        return self.r / ((self.r - 1) * (self.k - 1))

    @property
    def p(self) -> float:
        return 1.0 / (8 * factorial(self.k - 1) * self.n ** (self.k - 2))

    @property
    def a_size(self) -> int:
        e = self.exponent
        return int(-(-(self.c0 * self.r**e * self.n ** (1 - e)) // 1))


@dataclass
class LowerBoundReport:
    branch: str
    n: int
    k: int
    r: int
    a_size: int = 0
    b_size: int = 0
    p: float = 0.0
    expected_edges: float = 0.0
    X: int = 0
    Y: int = 0
    Z: int = 0
    deleted_phase1: int = 0
    deleted_phase2: int = 0
    final_edges: int = 0
    scan_depth: int = 0
    scan_partial: bool = False
    bad_found: list = field(default_factory=list)

    def as_dict(self) -> dict:
        d = dict(self.__dict__)
        d.pop("bad_found")
        return d


def _unrank_combination(index: int, N: int, r: int) -> tuple[int, ...]:
    """The ``index``-th r-subset of range(N) in lexicographic order."""
    out = []
    x = 0
    for left in range(r, 0, -1):
        while True:
            c = comb(N - x - 1, left - 1)
            if index < c:
                break
            index -= c
            x += 1
        out.append(x)
        x += 1
    return tuple(out)


def _sample_indices(gen, total: int, count: int) -> list[int]:
    if count == 0:
        return []
    if total <= 1_000_000:
        return sorted(int(i) for i in gen.choice(total, size=count, replace=False))
    picked = set()
    while len(picked) < count:
        picked.add(int(gen.integers(total)))
    return sorted(picked)


def find_bad_subhypergraph(restricted, r: int, k: int, max_vertices: int):
    """First edge subset ``E'`` of the (k-1)-graph ``restricted`` that spans
    ``w <= max_vertices`` vertices with ``|E'| (k-1) = w r``, or ``None``.

    Subsets are enumerated by index order, growing while the span stays
    within ``max_vertices``.
    """
    m = len(restricted)
    chosen = []
    span = {}

    def grow(start):
        if chosen and len(chosen) * (k - 1) == len(span) * r:
            return list(chosen)
        for j in range(start, m):
            new = [v for v in restricted[j] if v not in span]
            if len(span) + len(new) > max_vertices:
                continue
            chosen.append(j)
            for v in restricted[j]:
                span[v] = span.get(v, 0) + 1
            got = grow(j + 1)
            if got is not None:
                return got
            chosen.pop()
            for v in restricted[j]:
                span[v] -= 1
                if not span[v]:
                    del span[v]
        return None

    return grow(0)


def gen_lower_bound(params: ConstructionParams):
    """Random linear k-graph without r-regular subhypergraphs, by deletion.

    Vertices ``0..|A|-1`` form A, the rest B.  Every k-set with exactly one
    vertex in A is an edge with probability p.  Phase 1 removes the
    higher-indexed edge of every pair sharing two or more vertices; phase 2
    repeatedly finds a bad subhypergraph of the restriction to B (``|E'|(k-1) =
    v r`` on ``v <= |A|(k-1)`` vertices, scanned up to ``bad_check_depth``
    vertices) and deletes the edge behind its last member.

    Returns ``(G, report)``.  If r/((r-1)(k-1)) >= 1 the trivial branch returns
    a linear k-graph with maximum degree below r instead.
    """
    P = params
    n, k, r = P.n, P.k, P.r
    report = LowerBoundReport(branch="random", n=n, k=k, r=r)
    if P.exponent >= 1:
        report.branch = "trivial"
        G = _capped_degree_linear(n, k, r - 1, stream(P.seed, "lower-bound", "trivial"))
        report.final_edges = G.m
        return G, report

    a = P.a_size
    b = n - a
    if a < 1 or b < k - 1:
        raise InfeasibleParameters(f"|A| = {a} leaves |B| = {b} < k - 1 = {k - 1}")
    report.a_size, report.b_size, report.p = a, b, P.p
    total = comb(b, k - 1)
    report.expected_edges = a * total * P.p

    gen = np_stream(P.seed, "lower-bound", "edges")
    edges = []
    for x in range(a):
        cnt = int(gen.binomial(total, P.p))
        for idx in _sample_indices(gen, total, cnt):
            edges.append((x,) + tuple(a + j for j in _unrank_combination(idx, b, k - 1)))
    report.X = len(edges)

    # phase 1: pairs of edges sharing >= 2 vertices
    by_pair = {}
    for i, e in enumerate(edges):
        for pr in combinations(e, 2):
            by_pair.setdefault(pr, []).append(i)
    clashing = {(i, j) for lst in by_pair.values() for i, j in combinations(lst, 2)}
    report.Y = len(clashing)
    owner = {}
    alive = []
    for i, e in enumerate(edges):
        prs = list(combinations(e, 2))
        if any(pr in owner for pr in prs):
            continue
        for pr in prs:
            owner[pr] = i
        alive.append(i)
    report.deleted_phase1 = len(edges) - len(alive)

    # phase 2: bad subhypergraphs of the restriction to B
    depth = min(P.bad_check_depth, a * (k - 1))
    report.scan_depth = depth
    report.scan_partial = P.bad_check_depth < a * (k - 1)
    while True:
        restricted = [edges[i][1:] for i in alive]
        bad = find_bad_subhypergraph(restricted, r, k, depth)
        if bad is None:
            break
        report.Z += 1
        report.bad_found.append([restricted[j] for j in bad])
        del alive[bad[-1]]
        report.deleted_phase2 += 1

    G = LinearHypergraph(n, [edges[i] for i in alive], k=k)
    report.final_edges = G.m
    if report.final_edges < report.X - report.Y - report.Z:
        raise AssertionError("deletions exceeded X - Y - Z")
    return G, report


# --------------------------------------------------------------------------
# negative-control probes


PASCH_FREE_ORDERS = range(6, 41)


def gen_pasch_free_probe(n: int, seed: int | None = None, witness_edges: int = 8) -> LinearHypergraph:
    """A linear 3-graph meant as a negative control for small 2-regular witnesses.

    For ``n = 9`` this is the anti-Pasch Steiner system AG(2,3).  Otherwise a
    random linear 3-graph with about ``2n`` edges is thinned until the exact
    oracle finds no 2-regular subhypergraph with at most ``witness_edges``
    edges.
    """
    if n == 9:
        return gen_sts(9)
    if n not in PASCH_FREE_ORDERS:
        raise UnsupportedOrder(f"pasch-free probes are available for n in 6..40, got {n}")
    H = gen_random_linear(n, 3, 2 * n, seed=seed)
    edges = list(H.edges)
    budget = OracleBudget(max_edges_in_witness=witness_edges)
    while True:
        cur = LinearHypergraph(n, edges, k=3)
        w = find_r_regular_exact(cur, 2, budget)
        if w is None:
            return cur
        del edges[w.edges[-1]]


# --------------------------------------------------------------------------
# planted coloured instances


def random_proper_noise(n: int, n_colours: int, n_edges: int, rng, graph_edges=None):
    """Add up to ``n_edges`` random edges to ``graph_edges`` keeping the colouring proper."""
    edges = list(graph_edges or [])
    adj = {frozenset((u, v)) for u, v, _ in edges}
    at = {(x, c) for u, v, c in edges for x in (u, v)}
    added = 0
    tries = 0
    while added < n_edges and tries < 100 * n_edges + 1000:
        tries += 1
        u, v = rng.sample(range(n), 2)
        c = rng.randrange(n_colours)
        if frozenset((u, v)) in adj or (u, c) in at or (v, c) in at:
            continue
        adj.add(frozenset((u, v)))
        at.update({(u, c), (v, c)})
        edges.append((u, v, c))
        added += 1
    return edges


def gen_planted_rainbow_pair(
    n: int, ell: int, noise_edges: int, n_colours: int | None = None, seed=None, same_order: bool = True
):
    """Two vertex-disjoint rainbow 2*ell-cycles on the same colour set, plus
    random proper-coloured noise.

    With ``same_order`` the second cycle meets the colours in the same cyclic
    order as the first (the form the pair-product search detects); otherwise
    the order is a random permutation.

    Returns ``(G, planted)`` where ``planted`` lists the 4*ell planted edge
    indices (which come first in ``G.edges``).
    """
    if 4 * ell > n:
        raise InfeasibleParameters("not enough vertices for two disjoint cycles")
    n_colours = n if n_colours is None else n_colours
    if n_colours < 2 * ell:
        raise InfeasibleParameters("not enough colours for a rainbow cycle")
    rng = stream(seed, "planted-pair", n, ell)
    verts = rng.sample(range(n), 4 * ell)
    colours = rng.sample(range(n_colours), 2 * ell)
    second = colours[:]
    if same_order:
        r = rng.randrange(2 * ell)
        second = second[r:] + second[:r]
    else:
        rng.shuffle(second)
    L = 2 * ell
    planted = []
    for cyc, cols in ((verts[:L], colours), (verts[L:], second)):
        for j in range(L):
            planted.append((cyc[j], cyc[(j + 1) % L], cols[j]))
    edges = random_proper_noise(n, n_colours, noise_edges, rng, planted)
    return ColouredGraph(n, edges, s=n_colours), list(range(len(planted)))
