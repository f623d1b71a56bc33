"""Randomized search for 2-regular coloured subgraphs in which every colour is
used exactly twice or not at all.

Three samplers produce sequences of rainbow structures (cycles, paths or
matchings).  Sequences are bucketed by a collision key; two distinct sequences
with the same key are combined by edge-level symmetric difference, and the
result is kept if it verifies.
"""

from __future__ import annotations

import logging
import math
import threading
from collections import deque
from dataclasses import dataclass, replace
from typing import NamedTuple

from .errors import HypergraphError
from .hypercore import ColouredGraph, Hypergraph, TwoRegularColouredCertificate, check_certificate, coloured_view
from .oracles import hom_cycle_count
from .regularize import max_transversal_partition
from .rng import as_random, derive_seed, stream

log = logging.getLogger(__name__)

STRATEGIES = ("cycles", "paths", "matchings")
NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class SearchParams:
    """Knobs for the samplers and the collision search.

    ``t`` is the sequence length (``None``: chosen per strategy, see
    :func:`default_t`), ``q`` the cap on homomorphic 2h-cycles extending a
    sampled path (``None``: ``2 * alpha * 16**h``).  ``symmetry`` selects how
    cycle labellings are normalized before keying: ``"canonical"`` rotates and
    reflects to a fixed form, ``"partition"`` only keeps labellings that follow
    random vertex and colour partitions into 2h classes.
    """

    h: int = 2
    t: int | None = None
    q: float | None = None
    alpha: float = 2.0
    sample_budget: int = 100_000
    seed: int = 0
    retry_limit: int = 100
    dfs_nodes: int = 2_000
    bucket_cap: int = 16
    symmetry: str = "canonical"
    workers: int = 1

    def __post_init__(self):
        if self.h < 1:
            raise HypergraphError("h must be at least 1")
        if self.t is not None and self.t < 1:
            raise HypergraphError("t must be at least 1")
        if self.sample_budget < 0 or self.retry_limit < 1 or self.dfs_nodes < 1:
            raise HypergraphError("budgets must be positive")
        if self.symmetry not in ("canonical", "partition"):
            raise HypergraphError(f"unknown symmetry mode {self.symmetry!r}")
        if self.workers < 1:
            raise HypergraphError("workers must be at least 1")

    @property
    def extension_cap(self) -> float:
        return self.q if self.q is not None else 2 * self.alpha * 16**self.h


class RainbowPath(NamedTuple):
    vertices: tuple[int, ...]
    edges: tuple[int, ...]


class RainbowCycle(NamedTuple):
    """Vertices ``v_0..v_{L-1}``; edge ``j`` joins ``v_j`` and ``v_{j+1 mod L}``."""

    vertices: tuple[int, ...]
    edges: tuple[int, ...]


def _colours_at(G: ColouredGraph, v: int):
    return G.by_colour[v].keys()


# --------------------------------------------------------------------------
# single structures


def greedy_rainbow_path(
    G: ColouredGraph,
    h: int,
    forbidden_vertices=frozenset(),
    forbidden_colours=frozenset(),
    seed=None,
    retry_limit: int = 100,
) -> RainbowPath | None:
    """A random rainbow path with ``h`` edges, or ``None``.

    From a random allowed start vertex, repeatedly step to a random neighbour
    that is new, allowed, and reached by an allowed, unused colour.  Dead ends
    restart from a fresh start vertex, up to ``retry_limit`` times.
    """
    if h < 1:
        raise HypergraphError("h must be at least 1")
    rng = as_random(seed)
    starts = [v for v in sorted(G.vertex_set) if v not in forbidden_vertices and G.adj[v]]
    if not starts:
        return None
    for _ in range(retry_limit):
        v = rng.choice(starts)
        verts, edges, used = [v], [], set()
        on = {v}
        while len(edges) < h:
            options = [
                (w, i)
                for w, i in G.adj[verts[-1]].items()
                if w not in on
                and w not in forbidden_vertices
                and G.edges[i][2] not in used
                and G.edges[i][2] not in forbidden_colours
            ]
            if not options:
                break
            w, i = options[rng.randrange(len(options))]
            verts.append(w)
            edges.append(i)
            on.add(w)
            used.add(G.edges[i][2])
        if len(edges) == h:
            return RainbowPath(tuple(verts), tuple(edges))
    return None


def random_rainbow_cycle(
    G: ColouredGraph,
    length: int,
    vertex_ok=None,
    colour_ok=None,
    rng=None,
    retry_limit: int = 100,
    dfs_nodes: int = 2_000,
    classes=None,
) -> RainbowCycle | None:
    """A rainbow cycle with ``length`` edges found by randomized DFS.

    Each attempt starts at a random allowed vertex and explores rainbow paths
    of ``length - 1`` edges in random order, closing the first one whose end
    is joined to the start by an allowed edge of a fresh colour.  With
    ``classes = (vertex_class, colour_class)`` only cycles whose j-th vertex
    is in vertex class j and j-th edge in colour class j are explored.
    """
    rng = as_random(rng)
    vertex_ok = vertex_ok or (lambda v: True)
    colour_ok = colour_ok or (lambda c: True)
    vcls, ccls = classes if classes is not None else (None, None)
    starts = [
        v for v in sorted(G.vertex_set)
        if G.adj[v] and vertex_ok(v) and (vcls is None or vcls.get(v) == 0)
    ]
    if not starts or length < 3:
        return None
    for _ in range(retry_limit):
        s = rng.choice(starts)
        verts, edges, used, on = [s], [], set(), {s}
        nodes = 0

        def dfs():
            nonlocal nodes
            nodes += 1
            if nodes > dfs_nodes:
                return False
            v = verts[-1]
            if len(edges) == length - 1:
                i = G.adj[v].get(s)
                if i is None:
                    return False
                c = G.edges[i][2]
                if c in used or not colour_ok(c):
                    return False
                if ccls is not None and ccls.get(c) != length - 1:
                    return False
                edges.append(i)
                return True
            j = len(edges)
            nbrs = list(G.adj[v].items())
            rng.shuffle(nbrs)
            for w, i in nbrs:
                c = G.edges[i][2]
                if w in on or c in used or not vertex_ok(w) or not colour_ok(c):
                    continue
                if vcls is not None and (vcls.get(w) != j + 1 or ccls.get(c) != j):
                    continue
                verts.append(w)
                edges.append(i)
                on.add(w)
                used.add(c)
                if dfs():
                    return True
                verts.pop()
                edges.pop()
                on.discard(w)
                used.discard(c)
            return False

        if dfs():
            return RainbowCycle(tuple(verts), tuple(edges))
    return None


def canonical_cycle(G: ColouredGraph, cyc: RainbowCycle) -> RainbowCycle:
    """Rotate so the smallest vertex comes first, then orient towards its smaller neighbour."""
    vs = list(cyc.vertices)
    L = len(vs)
    i0 = vs.index(min(vs))
    fwd = vs[i0:] + vs[:i0]
    if fwd[-1] < fwd[1]:
        fwd = [fwd[0]] + fwd[1:][::-1]
    edges = tuple(G.adj[fwd[j]][fwd[(j + 1) % L]] for j in range(L))
    return RainbowCycle(tuple(fwd), edges)


def partition_labelling(G: ColouredGraph, cyc: RainbowCycle, vpart, cpart) -> RainbowCycle | None:
    """The labelling of ``cyc`` whose j-th vertex lies in vertex class j and
    j-th edge colour in colour class j, or ``None`` if there is none."""
    vs = list(cyc.vertices)
    L = len(vs)
    for seq in (vs, [vs[0]] + vs[1:][::-1]):
        for r in range(L):
            lab = seq[r:] + seq[:r]
            edges = [G.adj[lab[j]][lab[(j + 1) % L]] for j in range(L)]
            if all(vpart[lab[j]] == j and cpart[G.edges[edges[j]][2]] == j for j in range(L)):
                return RainbowCycle(tuple(lab), tuple(edges))
    return None


def sample_rainbow_matching(G: ColouredGraph, t: int, seed=None, retry_limit: int = 1) -> tuple[int, ...] | None:
    """A rainbow matching with ``t`` edges (sorted edge ids), or ``None``.

    Edges are scanned in random order and kept when they touch no kept vertex
    and repeat no kept colour.
    """
    if t < 1:
        raise HypergraphError("t must be at least 1")
    if 2 * t > len(G.vertex_set) or t > G.m:
        return None
    rng = as_random(seed)
    order = list(range(G.m))
    for _ in range(retry_limit):
        rng.shuffle(order)
        touched, colours, picked = set(), set(), []
        for i in order:
            u, v, c = G.edges[i]
            if u in touched or v in touched or c in colours:
                continue
            touched.update((u, v))
            colours.add(c)
            picked.append(i)
            if len(picked) == t:
                return tuple(sorted(picked))
    return None


# --------------------------------------------------------------------------
# sequences


def _colour_closure(G: ColouredGraph, vertices):
    out = set()
    for v in vertices:
        out.update(_colours_at(G, v))
    return out


def sample_nice_cycle_sequence(G: ColouredGraph, params: SearchParams, rng=None, partitions=None):
    """``t`` rainbow 2h-cycles, no cycle's vertices touching another cycle's colours.

    After each cycle is chosen, vertices incident to a used colour and edges
    whose colour appears at a used cycle vertex are removed; the next cycle is
    sampled in what remains.  Returns a list of :class:`RainbowCycle` or ``None``.
    """
    if params.h < 2:
        raise HypergraphError("cycle sequences need h >= 2")
    rng = as_random(rng)
    t = params.t or 1
    L = 2 * params.h
    used_colours, banned_colours = set(), set()
    cycles = []
    for _ in range(t):
        cyc = random_rainbow_cycle(
            G,
            L,
            vertex_ok=lambda v: used_colours.isdisjoint(_colours_at(G, v)),
            colour_ok=lambda c: c not in banned_colours,
            rng=rng,
            retry_limit=params.retry_limit,
            dfs_nodes=params.dfs_nodes,
            classes=partitions,
        )
        if cyc is None:
            return None
        if partitions is not None:
            cyc = partition_labelling(G, cyc, *partitions)
            if cyc is None:
                return None
        else:
            cyc = canonical_cycle(G, cyc)
        cycles.append(cyc)
        used_colours.update(G.edges[i][2] for i in cyc.edges)
        banned_colours.update(_colour_closure(G, cyc.vertices))
    return cycles


def is_nice_cycle_sequence(G: ColouredGraph, cycles, h: int) -> bool:
    for cyc in cycles:
        cols = [G.edges[i][2] for i in cyc.edges]
        if len(cyc.vertices) != 2 * h or len(set(cyc.vertices)) != 2 * h or len(set(cols)) != 2 * h:
            return False
        L = len(cyc.vertices)
        for j, i in enumerate(cyc.edges):
            u, v, _ = G.edges[i]
            if {u, v} != {cyc.vertices[j], cyc.vertices[(j + 1) % L]}:
                return False
    for a, ca in enumerate(cycles):
        for b, cb in enumerate(cycles):
            if a != b:
                cols_b = {G.edges[i][2] for i in cb.edges}
                if not cols_b.isdisjoint(_colour_closure(G, ca.vertices)):
                    return False
    return True


def walks_between(G: ColouredGraph, src: int, dst: int, length: int) -> int:
    """Number of walks with ``length`` edges from ``src`` to ``dst`` (exact)."""
    cur = {src: 1}
    for _ in range(length):
        nxt = {}
        for v, c in cur.items():
            for w in G.adj[v]:
                nxt[w] = nxt.get(w, 0) + c
        cur = nxt
    return cur.get(dst, 0)


def extension_count(G: ColouredGraph, path: RainbowPath) -> int:
    """Homomorphic 2h-cycles whose first h+1 vertices follow ``path``."""
    h = len(path.edges)
    return walks_between(G, path.vertices[-1], path.vertices[0], h)


def within_distance(G: ColouredGraph, sources, radius: int) -> set[int]:
    """Vertices at distance at most ``radius`` from ``sources`` in ``G``."""
    seen = set(sources)
    frontier = deque((v, 0) for v in seen)
    while frontier:
        v, dist = frontier.popleft()
        if dist == radius:
            continue
        for w in G.adj[v]:
            if w not in seen:
                seen.add(w)
                frontier.append((w, dist + 1))
    return seen


def labelled_paths_between(G: ColouredGraph, u: int, v: int, h: int, limit: int = 100_000):
    """All simple paths with ``h`` edges from ``u`` to ``v`` (vertex tuples)."""
    out = []
    path = [u]
    on = {u}

    def dfs():
        if len(out) >= limit:
            return
        x = path[-1]
        if len(path) == h + 1:
            if x == v:
                out.append(tuple(path))
            return
        for w in G.adj[x]:
            if w in on or (w == v and len(path) < h):
                continue
            path.append(w)
            on.add(w)
            dfs()
            path.pop()
            on.discard(w)

    dfs()
    return out


def designated_path(G: ColouredGraph, u: int, v: int, h: int, salt: int) -> tuple[int, ...] | None:
    """The one labelled h-path between ``{u, v}`` kept by the seeded selection.

    Among all simple h-paths between ``u`` and ``v`` in either direction the one
    with the smallest salted hash is designated, so distinct sampled paths with
    the same endpoints can never both be designated.
    """
    cands = labelled_paths_between(G, u, v, h) + labelled_paths_between(G, v, u, h)
    if not cands:
        return None
    return min(cands, key=lambda p: derive_seed(salt, "designated", *p))


def sample_nice_path_sequence(G: ColouredGraph, params: SearchParams, rng=None, salt: int | None = None):
    """``t`` rainbow h-paths, colour-disjoint, pairwise more than ``h-1`` apart,
    each extending to at most ``q`` homomorphic 2h-cycles.

    Vertices within distance ``h-1`` (in all of ``G``) of earlier paths and
    edges with used colours are excluded.  With ``salt`` set, every sampled
    path is replaced by the designated path between its endpoints, which must
    then satisfy the same constraints.  Returns a list of :class:`RainbowPath`
    or ``None``.
    """
    if params.h < 2:
        raise HypergraphError("path sequences need h >= 2")
    rng = as_random(rng)
    h, t, q = params.h, params.t or 1, params.extension_cap
    forbidden_v, used_c = set(), set()
    paths = []
    for _ in range(t):
        for _ in range(params.retry_limit):
            P = greedy_rainbow_path(G, h, forbidden_v, used_c, rng, retry_limit=1)
            if P is None:
                continue
            if salt is not None:
                D = designated_path(G, P.vertices[0], P.vertices[-1], h, salt)
                edges = tuple(G.adj[D[j]][D[j + 1]] for j in range(h))
                cols = {G.edges[i][2] for i in edges}
                if len(cols) < h or not cols.isdisjoint(used_c) or not forbidden_v.isdisjoint(D):
                    continue
                P = RainbowPath(D, edges)
            if extension_count(G, P) > q:
                continue
            break
        else:
            return None
        paths.append(P)
        used_c.update(G.edges[i][2] for i in P.edges)
        forbidden_v |= within_distance(G, P.vertices, h - 1)
    return paths


def is_nice_path_sequence(G: ColouredGraph, paths, h: int, q: float) -> bool:
    cols = [G.edges[i][2] for P in paths for i in P.edges]
    if len(cols) != len(set(cols)):
        return False
    for P in paths:
        if len(P.edges) != h or len(set(P.vertices)) != h + 1:
            return False
        if extension_count(G, P) > q:
            return False
    for a in range(len(paths)):
        near = within_distance(G, paths[a].vertices, h - 1)
        for b in range(a + 1, len(paths)):
            if not near.isdisjoint(paths[b].vertices):
                return False
    return True


# --------------------------------------------------------------------------
# collision search


def _verify(G, edges):
    cert = TwoRegularColouredCertificate(tuple(sorted(edges)))
    return cert if not check_certificate(G, cert) else None


def default_t(G: ColouredGraph, strategy: str, h: int) -> int:
    """Sequence length per strategy at desk scale.

    matchings: the largest rainbow matching seen in a short greedy pilot;
    cycles: 1; paths: 2 (one designated path per endpoint pair means a single
    path can never collide).
    """
    if strategy == "cycles":
        return 1
    if strategy == "paths":
        return 2
    rng = stream(0, "pilot-matching")
    best = 0
    for _ in range(64):
        for t in range(best + 1, len(G.vertex_set) // 2 + 1):
            if sample_rainbow_matching(G, t, rng) is None:
                break
            best = t
    return max(best, 1)


class _Store:
    def __init__(self, cap):
        self.cap = cap
        self.lock = threading.Lock()
        self.buckets = {}
        self.result = None
        self.stats = {"samples": 0, "sequences": 0, "collisions": 0, "rejected": 0}


def collision_search(
    G: ColouredGraph,
    strategy: str,
    params: SearchParams,
    stats: dict | None = None,
    on_collision=None,
    partitions=None,
) -> TwoRegularColouredCertificate | None:
    """Birthday search for a verified 2-regular subgraph using each colour 0 or 2 times.

    Keys: cycles, the colour set of the union; paths, the colour set together
    with the endpoint set; matchings, the vertex set together with the colour
    set.  Each bucket keeps up to ``bucket_cap`` distinct sequences.  For
    matchings with ``t=None`` sizes 2..t_max are sampled round robin.

    ``on_collision(seq_a, seq_b, valid)`` is called for every key collision.
    ``partitions = (vertex_class, colour_class)`` fixes the classes used by
    the ``"partition"`` symmetry mode instead of drawing them per worker.
    With more than one worker the outcome depends on thread timing.
    """
    if strategy not in STRATEGIES:
        raise HypergraphError(f"unknown strategy {strategy!r}")
    if strategy != "matchings" and params.h < 2:
        raise HypergraphError(f"{strategy} need h >= 2")
    store = _Store(params.bucket_cap)
    if params.sample_budget == 0 or G.m == 0:
        if stats is not None:
            stats.update(store.stats)
        return None

    if strategy == "matchings":
        if params.t is not None:
            sizes = [params.t]
        else:
            top = default_t(G, "matchings", 1)
            sizes = list(range(2, top + 1)) or [1]
    else:
        sizes = [params.t or default_t(G, strategy, params.h)]

    def worker(wid: int, budget: int):
        rng = stream(params.seed, "collision", strategy, wid)
        classes = partitions
        if classes is None and strategy == "cycles" and params.symmetry == "partition":
            L = 2 * params.h
            classes = (
                {v: rng.randrange(L) for v in range(G.n)},
                {c: rng.randrange(L) for c in range(G.s)},
            )
        salt = derive_seed(params.seed, "designated")
        for j in range(budget):
            if store.result is not None:
                return
            t = sizes[j % len(sizes)]
            if strategy == "matchings":
                seq = sample_rainbow_matching(G, t, rng)
                if seq is None:
                    with store.lock:
                        store.stats["samples"] += 1
                    continue
                edges = frozenset(seq)
                key = ("m", t, frozenset(x for i in seq for x in G.edges[i][:2]),
                       frozenset(G.edges[i][2] for i in seq))
            elif strategy == "cycles":
                p = replace(params, t=t)
                seq = sample_nice_cycle_sequence(G, p, rng, classes)
                if seq is None:
                    with store.lock:
                        store.stats["samples"] += 1
                    continue
                edges = frozenset(i for c in seq for i in c.edges)
                key = ("c", frozenset(G.edges[i][2] for i in edges))
            else:
                p = replace(params, t=t)
                seq = sample_nice_path_sequence(G, p, rng, salt)
                if seq is None:
                    with store.lock:
                        store.stats["samples"] += 1
                    continue
                edges = frozenset(i for P in seq for i in P.edges)
                key = ("p", frozenset(G.edges[i][2] for i in edges),
                       frozenset(x for P in seq for x in (P.vertices[0], P.vertices[-1])))
            with store.lock:
                store.stats["samples"] += 1
                store.stats["sequences"] += 1
                if store.result is not None:
                    return
                bucket = store.buckets.setdefault(key, [])
                if any(edges == e for e, _ in bucket):
                    continue
                for other, other_seq in bucket:
                    store.stats["collisions"] += 1
                    cert = _verify(G, edges ^ other)
                    if on_collision is not None:
                        on_collision(other_seq, seq, cert is not None)
                    if cert is not None:
                        store.result = cert
                        return
                    store.stats["rejected"] += 1
                if len(bucket) < store.cap:
                    bucket.append((edges, seq))

    if params.workers == 1:
        worker(0, params.sample_budget)
    else:
        share = math.ceil(params.sample_budget / params.workers)
        threads = [threading.Thread(target=worker, args=(w, share)) for w in range(params.workers)]
        for th in threads:
            th.start()
        for th in threads:
            th.join()
    if stats is not None:
        stats.update(store.stats)
    return store.result


def choose_strategy(G: ColouredGraph, alpha: float = 2.0, seed: int = 0):
    """Pick the sampler for ``G`` from its colour count and cycle density.

    With n vertices, average degree d and s colours, h is the least positive
    integer with ``s >= n d^(1/2 - h)``.  h = 1 selects matchings.  Otherwise the
    exact count hom(C_2h, G) is compared with ``(128 h^1.5 mu^0.5)^(2h) n d^h``:
    at or above it selects cycles, below it paths.  Returns
    ``(strategy, SearchParams)`` or ``(NOT_APPLICABLE, None)`` for edgeless input.
    """
    if G.m == 0:
        return NOT_APPLICABLE, None
    n = len(G.vertex_set)
    d = G.average_degree
    s = len(G.colour_counts())
    if d <= 1:
        h = 1
    else:
        h = 1
        while s < n * d ** (0.5 - h):
            h += 1
    if h == 1:
        return "matchings", SearchParams(h=1, alpha=alpha, seed=seed)
    mu = G.balance()
    threshold = (128 * h**1.5 * mu**0.5) ** (2 * h) * n * d**h
    hom = hom_cycle_count(G, h)
    strategy = "cycles" if hom >= threshold else "paths"
    return strategy, SearchParams(h=h, t=default_t(G, strategy, h), alpha=alpha, seed=seed)


def theoretical_t(G: ColouredGraph, strategy: str, h: int) -> int:
    """The sequence lengths from the counting arguments, for reference."""
    s = len(G.colour_counts())
    mu = G.balance()
    d = G.average_degree
    if strategy == "cycles":
        return math.ceil(s / (32 * d * mu**2 * h))
    if strategy == "paths":
        return math.ceil(s / (8 * h * mu))
    return math.ceil(s / (16 * mu))


def find_two_regular(H: Hypergraph, strategy: str = "auto", params: SearchParams | None = None, parts=None):
    """2-regular subhypergraph of a 3-graph through its coloured view.

    ``parts`` defaults to a partition with many transversal edges; colours come
    from part 0.  Returns ``(certificate, coloured graph)``; the certificate
    refers to the coloured graph and carries the partition, and
    ``cert.pull_back(G)`` gives host edge indices.
    """
    params = params or SearchParams()
    if parts is None:
        parts = max_transversal_partition(H, 3, seed=params.seed)
    parts = tuple(tuple(sorted(p)) for p in parts)
    G = coloured_view(H, parts, 0)
    if strategy == "auto":
        strategy, chosen = choose_strategy(G, params.alpha, params.seed)
        if strategy == NOT_APPLICABLE:
            return None, G
        params = replace(params, h=chosen.h, t=params.t or chosen.t)
    cert = collision_search(G, strategy, params)
    if cert is None:
        return None, G
    return TwoRegularColouredCertificate(cert.edges, parts, 0), G
