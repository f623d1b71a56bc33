"""Exact (slow, trusted) baselines that every randomized pipeline is checked against."""

from __future__ import annotations

import sys
import time
from bisect import bisect_left
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExhausted, HypergraphError
from .hypercore import ColouredGraph, EvenCertificate, Hypergraph, RegularCertificate


@dataclass(frozen=True)
class OracleBudget:
    """Limits for exhaustive search.  ``None`` means unlimited.

    ``max_edges_in_witness`` restricts the search to witnesses with at most that
    many edges; a ``None`` answer is then exhaustive *within that size*.
    """

    max_edges_in_witness: int | None = None
    max_nodes: int | None = None
    time_limit: float | None = None

    def __post_init__(self):
        for name in ("max_edges_in_witness", "max_nodes", "time_limit"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise HypergraphError(f"{name} must be positive")


def find_even_subhypergraph(H: Hypergraph) -> EvenCertificate | None:
    """A small nonempty edge set covering every vertex an even number of times.

    Works over GF(2) with edges as bit-packed incidence columns.  Every column
    that reduces to zero against the running basis yields one nullspace vector;
    the sparsest of those is then greedily improved by adding other basis
    vectors while that lowers the support.  The result is small, not
    necessarily minimum.  Returns ``None`` iff the incidence columns are
    linearly independent.
    """
    basis = {}  # lowest set bit -> (reduced column, combination of edges)
    null = []
    for j, col in enumerate(H.edge_bitmasks()):
        combo = 1 << j
        while col:
            low = col & -col
            hit = basis.get(low)
            if hit is None:
                basis[low] = (col, combo)
                break
            col ^= hit[0]
            combo ^= hit[1]
        else:
            null.append(combo)
    if not null:
        return None

    best = min(null, key=int.bit_count)
    improved = True
    while improved:
        improved = False
        for vec in null:
            cand = best ^ vec
            if cand and cand.bit_count() < best.bit_count():
                best, improved = cand, True
    return EvenCertificate(tuple(j for j in range(H.m) if best >> j & 1))


def find_r_regular_exact(
    H: Hypergraph, r: int, budget: OracleBudget | None = None
) -> RegularCertificate | None:
    """Exhaustive search for an r-regular subhypergraph.

    Edge subsets are visited in lexicographic order of their sorted index tuples,
    so the first witness found is the lexicographically least one.  Branches are
    cut when a vertex would exceed degree ``r`` or when a vertex of positive
    degree below ``r`` has too few candidate edges left.

    Returns ``None`` when no witness exists (within ``max_edges_in_witness``)
    and raises :class:`BudgetExhausted` when the node or time limit is hit.
    """
    if r < 2:
        raise HypergraphError("r must be at least 2")
    budget = budget or OracleBudget()
    m = H.m
    if m == 0:
        return None
    edges = H.edges
    inc = H.incidence
    cap = m if budget.max_edges_in_witness is None else min(m, budget.max_edges_in_witness)
    kmax = max(len(e) for e in edges)
    max_nodes = budget.max_nodes
    deadline = None if budget.time_limit is None else time.monotonic() + budget.time_limit

    deg = [0] * H.n
    deficit = set()
    chosen = []
    nodes = 0

    def visit(start: int) -> bool:
        nonlocal nodes
        nodes += 1
        if max_nodes is not None and nodes > max_nodes:
            raise BudgetExhausted(f"node budget {max_nodes} exhausted", nodes)
        if deadline is not None and nodes & 1023 == 0 and time.monotonic() > deadline:
            raise BudgetExhausted(f"time limit {budget.time_limit}s exhausted", nodes)
        if chosen and not deficit:
            return True
        if len(chosen) >= cap:
            return False
        hi = m - 1
        total_need = 0
        for v in deficit:
            lst = inc[v]
            need = r - deg[v]
            if len(lst) - bisect_left(lst, start) < need:
                return False
            hi = min(hi, lst[len(lst) - need])
            total_need += need
        if len(chosen) + -(-total_need // kmax) > cap:
            return False
        for j in range(start, hi + 1):
            e = edges[j]
            if any(deg[v] >= r for v in e):
                continue
            for v in e:
                deg[v] += 1
                if deg[v] == r:
                    deficit.discard(v)
                else:
                    deficit.add(v)
            chosen.append(j)
            if visit(j + 1):
                return True
            chosen.pop()
            for v in e:
                deg[v] -= 1
                if deg[v] == 0:
                    deficit.discard(v)
                else:
                    deficit.add(v)
        return False

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, cap + 200))
    try:
        found = visit(0)
    finally:
        sys.setrecursionlimit(limit)
    return RegularCertificate(r, tuple(chosen)) if found else None


def _adjacency(G) -> np.ndarray:
    if isinstance(G, ColouredGraph):
        n, pairs = G.n, [(u, v) for u, v, _ in G.edges]
    elif isinstance(G, Hypergraph):
        if G.m and G.k != 2:
            raise HypergraphError("hom counts need a graph (2-uniform hypergraph)")
        n, pairs = G.n, G.edges
    elif isinstance(G, np.ndarray):
        return (G != 0).astype(np.int64)
    else:
        n, pairs = G
    A = np.zeros((n, n), dtype=np.int64)
    for u, v in pairs:
        A[u, v] = A[v, u] = 1
    return A


def hom_cycle_count(G, h: int) -> int:
    """hom(C_{2h}, G): the number of closed walks of length 2h, i.e. tr(A^{2h}).

    ``G`` may be a :class:`ColouredGraph`, a 2-uniform :class:`Hypergraph`, a
    0/1 adjacency matrix or a pair ``(n, edges)``.  Computed exactly: A^h is
    formed by repeated multiplication (switching to Python integers whenever
    int64 could overflow) and tr(A^{2h}) is the sum of squares of its entries.
    """
    if h < 2:
        raise HypergraphError("h must be at least 2")
    A = _adjacency(G)
    n = A.shape[0]
    if n == 0 or not A.any():
        return 0
    delta = int(A.sum(axis=1).max())
    exact = delta**h < 2**62
    P = A.copy() if exact else A.astype(object)
    base = A if exact else A.astype(object)
    for _ in range(h - 1):
        P = P @ base
    if exact and delta ** (2 * h) * n < 2**62:
        return int((P * P).sum())
    P = P.astype(object)
    return int((P * P).sum())


def count_rainbow_paths(G: ColouredGraph, h: int, limit: int | None = None) -> int:
    """Number of labelled rainbow paths with ``h`` edges, capped at ``limit``.

    A return value equal to ``limit`` means "at least ``limit``".
    """
    if h < 1:
        raise HypergraphError("h must be at least 1")
    count = 0
    on_path = [False] * G.n
    used = set()

    class _Stop(Exception):
        pass

    def extend(v: int, depth: int):
        nonlocal count
        if depth == h:
            count += 1
            if limit is not None and count >= limit:
                raise _Stop
            return
        for w, i in G.adj[v].items():
            c = G.edges[i][2]
            if on_path[w] or c in used:
                continue
            on_path[w] = True
            used.add(c)
            extend(w, depth + 1)
            used.discard(c)
            on_path[w] = False

    try:
        for v in range(G.n):
            if G.adj[v]:
                on_path[v] = True
                extend(v, 0)
                on_path[v] = False
    except _Stop:
        return limit
    return count
