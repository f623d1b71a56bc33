"""Degree regularization: pass from a linear k-graph to a k-partite
subhypergraph whose parts have controlled maximum degree.

A k-partite hypergraph with parts X_1..X_k is mu-balanced when every vertex of
X_i has degree at most ``mu * e / |X_i|``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from math import factorial

from .errors import HypergraphError, InfeasibleParameters, InsufficientDensity, RetryLimitExceeded
from .hypercore import ColouredGraph, LinearHypergraph, random_partition, to_coloured_graph, transversal_edges
from .rng import stream


def log_level(n: int) -> int:
    """ceil(log2 n), at least 1."""
    return max(1, math.ceil(math.log2(n))) if n > 1 else 1


@dataclass(frozen=True)
class BalancedHypergraph:
    """A balanced k-partite subhypergraph of ``host``.

    ``edges`` are indices into ``host.edges``; ``parts`` are sorted vertex tuples.
    """

    host: LinearHypergraph
    edges: tuple[int, ...]
    parts: tuple[tuple[int, ...], ...]
    mu: float
    lam: int
    per_part_max_degree: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def graph(self) -> LinearHypergraph:
        """The subhypergraph itself, on the host's vertex ids."""
        return self.host.subhypergraph(self.edges)

    def degrees(self) -> Counter:
        return Counter(v for i in self.edges for v in self.host.edges[i])

    def coloured_graph(self, colour_part: int = 0) -> ColouredGraph:
        """Coloured view (k = 3) whose ``source_edges`` index the host."""
        return to_coloured_graph(self.host, colour_part, self.parts, self.edges)


def balance_violations(host, edges, parts, mu: float) -> list[str]:
    """Vertices breaking ``max degree <= mu * e / |part|``; empty when balanced."""
    deg = Counter(v for i in edges for v in host.edges[i])
    e = len(edges)
    out = []
    for pi, part in enumerate(parts):
        if not part:
            out.append(f"part {pi} is empty")
            continue
        bound = mu * e / len(part)
        for v in part:
            if deg[v] > bound:
                out.append(f"vertex {v} in part {pi} has degree {deg[v]} > {bound:.3g}")
    return out


def _pack(host, edges, parts, mu, lam) -> BalancedHypergraph:
    deg = Counter(v for i in edges for v in host.edges[i])
    parts = tuple(tuple(sorted(p)) for p in parts)
    return BalancedHypergraph(
        host=host,
        edges=tuple(sorted(edges)),
        parts=parts,
        mu=mu,
        lam=lam,
        per_part_max_degree=tuple(max((deg[v] for v in p), default=0) for p in parts),
    )


def balanced_kpartite(
    H: LinearHypergraph, seed=None, retry_limit: int = 100, parts=None
) -> BalancedHypergraph:
    """A 2*lam^k-balanced k-partite subhypergraph with at least
    ``e(H) k! / (k lam)^k`` edges, lam = ceil(log2 n).

    Random k-partitions are drawn until at least ``k! e(H) / k^k`` edges are
    transversal.  Each part is then split into dyadic degree classes
    ``2^(j-1) <= d < 2^j`` and the class combination keeping the most edges is
    returned (ties: lexicographically least combination).  A given ``parts``
    replaces the random draw; it must still meet the transversal bound.
    """
    if H.m < 1:
        raise InsufficientDensity("need at least one edge")
    k, n, m = H.k, H.n, H.m
    lam = log_level(n)
    if parts is not None:
        parts = [list(p) for p in parts]
        T = transversal_edges(H, parts)
        if len(T) * k**k < factorial(k) * m:
            raise InfeasibleParameters("given partition has too few transversal edges")
    else:
        rng = stream(seed, "balanced-kpartite")
        for _ in range(retry_limit):
            parts = random_partition(n, k, rng)
            T = transversal_edges(H, parts)
            if len(T) * k**k >= factorial(k) * m:
                break
        else:
            raise RetryLimitExceeded(f"no good {k}-partition in {retry_limit} tries")

    where = {v: pi for pi, p in enumerate(parts) for v in p}
    deg = Counter(v for i in T for v in H.edges[i])
    level = {v: d.bit_length() for v, d in deg.items()}  # floor(log2 d) + 1

    def key(i):
        out = [0] * k
        for v in H.edges[i]:
            out[where[v]] = level[v]
        return tuple(out)

    buckets = {}
    for i in T:
        buckets.setdefault(key(i), []).append(i)
    best = min(buckets, key=lambda c: (-len(buckets[c]), c))
    chosen = buckets[best]
    out_parts = [[v for v in parts[pi] if level.get(v) == best[pi]] for pi in range(k)]

    mu = 2 * lam**k
    res = _pack(H, chosen, out_parts, mu, lam)
    bad = balance_violations(H, res.edges, res.parts, mu)
    if bad:
        raise AssertionError(f"regularized output not {mu}-balanced: {bad[:3]}")
    if res.m * (k * lam) ** k < m * factorial(k):
        raise AssertionError("regularized output below its edge bound")
    return res


@dataclass(frozen=True)
class EqualPartsReport:
    edges_before: int
    edges_removed: int
    size_ratios: tuple[float, ...]
    tries: int


# slack for d given as a float ratio such as m / n
_DENSITY_RTOL = 1e-12


def balanced_equal_parts(
    H: LinearHypergraph, d: float, seed=None, retry_limit: int = 200, with_report: bool = False
):
    """A 96*lam^6-balanced tripartite subhypergraph with parts ``X, Y, Z`` where
    ``|X| <= |Y| = |Z|`` and at least ``(|X|+|Y|+|Z|) d / (81 lam^3)`` edges.

    Starting from :func:`balanced_kpartite`, vertices of degree below
    ``e(F) / (6 |W|)`` in their part ``W`` are deleted (parts scanned round
    robin, smallest degree first).  The parts are then sorted by size and the
    largest is cut down to the size of the middle one by a uniformly random
    subset, resampled until the balance condition holds.  Parts come back in
    the order ``(X, Y, Z)``.
    """
    if H.k != 3:
        raise HypergraphError("balanced_equal_parts needs a 3-graph")
    n = H.n
    if d <= 0:
        raise InfeasibleParameters("d must be positive")
    if H.m < n * d * (1 - _DENSITY_RTOL):
        raise InsufficientDensity(f"e(H) = {H.m} < n*d = {n * d:g}")
    lam = log_level(n)
    if lam < 2:
        raise InfeasibleParameters("need n >= 3 so that lam >= 2")

    F = balanced_kpartite(H, seed=seed, retry_limit=retry_limit)
    eF = F.m
    edges = set(F.edges)
    inc = {}
    for i in edges:
        for v in H.edges[i]:
            inc.setdefault(v, set()).add(i)
    sizes = [len(p) for p in F.parts]
    alive = [set(p) for p in F.parts]

    removed = True
    while removed:
        removed = False
        for pi in range(3):
            thresh = eF / (6 * sizes[pi])
            if not alive[pi]:
                continue
            w = min(alive[pi], key=lambda v: (len(inc.get(v, ())), v))
            if len(inc.get(w, ())) < thresh:
                for i in list(inc.get(w, ())):
                    edges.discard(i)
                    for u in H.edges[i]:
                        inc[u].discard(i)
                alive[pi].discard(w)
                removed = True
    removed_edges = eF - len(edges)
    if 2 * removed_edges > eF:
        raise AssertionError("deletion removed more than half the edges")
    ratios = tuple(len(alive[pi]) / sizes[pi] for pi in range(3))
    if min(ratios) * 4 * lam**3 < 1:
        raise AssertionError(f"part shrank below 1/(4 lam^3): {ratios}")

    order = sorted(range(3), key=lambda pi: (len(alive[pi]), pi))
    A, B, C = (sorted(alive[pi]) for pi in order)
    mu = 96 * lam**6
    rng = stream(seed, "balanced-equal-parts", "z")
    for attempt in range(1, retry_limit + 1):
        Z = set(rng.sample(C, len(B)))
        keep = [i for i in sorted(edges) if any(v in Z for v in H.edges[i])]
        parts = (A, B, sorted(Z))
        nv = sum(len(p) for p in parts)
        if len(keep) * 81 * lam**3 < nv * d * (1 - _DENSITY_RTOL):
            raise AssertionError("equal-parts output below its edge bound")
        if not balance_violations(H, keep, parts, mu):
            res = _pack(H, keep, parts, mu, lam)
            if with_report:
                return res, EqualPartsReport(eF, removed_edges, ratios, attempt)
            return res
    raise RetryLimitExceeded(f"no balanced choice of Z in {retry_limit} tries")


def max_transversal_partition(H, k: int | None = None, seed=None, restarts: int = 4, sweeps: int = 50):
    """A k-partition with many transversal edges, by randomized local search.

    Each restart begins from a uniform random partition and moves single
    vertices to the part that most increases the number of transversal edges
    until no move helps.  The best partition over all restarts is returned
    (ties keep the earliest).
    """
    k = k or H.k
    n = H.n
    rng = stream(seed, "max-transversal")
    inc = H.incidence
    best, best_score = None, -1
    for _ in range(restarts):
        where = [rng.randrange(k) for _ in range(n)]

        def gain_of(v, p):
            old = where[v]
            score = 0
            for i in inc[v]:
                e = H.edges[i]
                before = len({where[u] for u in e}) == k
                where[v] = p
                after = len({where[u] for u in e}) == k
                where[v] = old
                score += after - before
            return score

        for _ in range(sweeps):
            moved = False
            order = list(range(n))
            rng.shuffle(order)
            for v in order:
                gains = [(gain_of(v, p), -p) for p in range(k) if p != where[v]]
                g, negp = max(gains)
                if g > 0:
                    where[v] = -negp
                    moved = True
            if not moved:
                break
        parts = [[v for v in range(n) if where[v] == p] for p in range(k)]
        score = len(transversal_edges(H, parts))
        if score > best_score:
            best, best_score = parts, score
    return best
