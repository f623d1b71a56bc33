import itertools
import random
from collections import Counter
from pathlib import Path

import numpy as np
import pytest

from hyperreg.constructions import gen_random_linear
from hyperreg.hypercore import Hypergraph

DATA = Path(__file__).parent / "data"


@pytest.fixture
def data_dir():
    return DATA


def brute_regular_witnesses(H, r):
    """All r-regular edge subsets (as sorted index tuples), by 2^m enumeration."""
    if H.m == 0:
        return []
    masks = np.arange(1, 1 << H.m, dtype=np.int64)
    chosen = (masks[:, None] >> np.arange(H.m)) & 1
    inc = np.zeros((H.m, H.n), dtype=np.int64)
    for i, e in enumerate(H.edges):
        inc[i, list(e)] = 1
    deg = chosen @ inc
    ok = np.all((deg == 0) | (deg == r), axis=1)
    return sorted(tuple(np.flatnonzero(row)) for row in chosen[ok])


def gf2_sum_zero(H, edges):
    parity = Counter()
    for i in edges:
        parity.update(H.edges[i])
    return all(c % 2 == 0 for c in parity.values())


def walk_ends(adj, start, length):
    """Endpoint tally of every walk with ``length`` steps from ``start``, enumerated one by one."""
    ends = Counter()
    stack = [(start, 0)]
    while stack:
        v, steps = stack.pop()
        if steps == length:
            ends[v] += 1
            continue
        stack.extend((w, steps + 1) for w in adj[v])
    return ends


def closed_walks(adj, length):
    """Closed walks of even ``length``, each split at its midpoint into two
    enumerated half walks."""
    half = length // 2
    tallies = [walk_ends(adj, s, half) for s in range(len(adj))]
    return sum(tallies[s][t] * tallies[t][s] for s in range(len(adj)) for t in tallies[s])


def random_simple_graph(n, p, rng):
    edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < p]
    return Hypergraph(n, edges, k=2)


def random_linear_3graph(seed, n_range=(6, 12), m_max=14):
    rng = random.Random(seed)
    n = rng.randint(*n_range)
    return gen_random_linear(n, 3, rng.randint(1, m_max), seed=seed)


def adjacency_lists(H):
    adj = [[] for _ in range(H.n)]
    for u, v in H.edges:
        adj[u].append(v)
        adj[v].append(u)
    return adj


def incidence_rank(H):
    """GF(2) rank of the vertex-edge incidence matrix, via numpy row reduction."""
    M = np.zeros((H.n, H.m), dtype=np.uint8)
    for j, e in enumerate(H.edges):
        M[list(e), j] = 1
    rank = 0
    for col in range(H.m):
        piv = next((r for r in range(rank, H.n) if M[r, col]), None)
        if piv is None:
            continue
        M[[rank, piv]] = M[[piv, rank]]
        for r in range(H.n):
            if r != rank and M[r, col]:
                M[r] ^= M[rank]
        rank += 1
    return rank
