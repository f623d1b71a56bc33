"""Bounded-size 2-regular witnesses through the ordered-pair product graph.

Pair vertices ``(u1, u2)`` and ``(v1, v2)`` are adjacent when ``u1 v1`` and
``u2 v2`` are host edges of the same colour.  A cycle of pair vertices that
uses 4*ell distinct host vertices and 2*ell distinct colours projects onto two
vertex-disjoint rainbow 2*ell-cycles with the same colours, i.e. a 2-regular
subgraph with every colour used exactly twice.
"""

from __future__ import annotations

from dataclasses import replace

from .errors import BudgetExhausted, CapExceeded, HypergraphError, ProjectionInvalid
from .hypercore import ColouredGraph, Hypergraph, TwoRegularColouredCertificate, check_certificate, coloured_view
from .regularize import max_transversal_partition
from .rng import as_random

Pair = tuple[int, int]


class PairProductGraph:
    """Lazy product graph over ordered pairs of distinct host vertices.

    The two host edges behind a product edge are always distinct, so
    ``(a, b) - (b, a)`` from a single host edge ``ab`` is not an edge.  With
    ``eager=True`` the edge list is materialized, which is refused beyond
    ``max_vertices`` pair vertices.
    """

    def __init__(self, G: ColouredGraph, max_vertices: int | None = None, eager: bool = False):
        self.host = G
        self.max_vertices = max_vertices
        n = len(G.vertex_set)
        if eager and max_vertices is not None and n * (n - 1) > max_vertices:
            raise CapExceeded(f"{n * (n - 1)} pair vertices exceed the cap {max_vertices}")
        self._edges = list(self.iter_edges()) if eager else None

    def neighbours(self, x: Pair):
        """Yield ``(y, colour, host_edge_1, host_edge_2)`` for every neighbour ``y`` of ``x``."""
        G = self.host
        v1, v2 = x
        b1, b2 = G.by_colour[v1], G.by_colour[v2]
        small, large = (b1, b2) if len(b1) <= len(b2) else (b2, b1)
        for c in sorted(small):
            if c not in large:
                continue
            i1, i2 = b1[c], b2[c]
            if i1 == i2:
                continue
            w1 = G.neighbour_by_colour(v1, c)
            w2 = G.neighbour_by_colour(v2, c)
            yield (w1, w2), c, i1, i2

    def edge(self, x: Pair, y: Pair):
        """``(colour, host_edge_1, host_edge_2)`` if ``x`` and ``y`` are adjacent, else ``None``."""
        G = self.host
        i1 = G.edge_id(x[0], y[0])
        i2 = G.edge_id(x[1], y[1])
        if i1 is None or i2 is None or i1 == i2:
            return None
        c = G.edges[i1][2]
        return (c, i1, i2) if G.edges[i2][2] == c else None

    def iter_edges(self):
        """Each product edge once, as ``(x, y, colour, host_edge_1, host_edge_2)``."""
        if getattr(self, "_edges", None) is not None:
            yield from self._edges
            return
        G = self.host
        by_col = {}
        for i, (_, _, c) in enumerate(G.edges):
            by_col.setdefault(c, []).append(i)
        for c in sorted(by_col):
            ids = by_col[c]
            for a in ids:
                for b in ids:
                    if a == b:
                        continue
                    p, q, _ = G.edges[a]
                    r, s, _ = G.edges[b]
                    # edge a oriented p -> q supplies first coordinates, edge b both ways
                    for x, y in (((p, r), (q, s)), ((p, s), (q, r))):
                        yield x, y, c, a, b

    def edge_count(self) -> int:
        return sum(1 for _ in self.iter_edges())

    def colour_of(self, x: Pair, y: Pair):
        e = self.edge(x, y)
        return None if e is None else e[0]


def build_pair_product_graph(G: ColouredGraph, max_vertices: int | None = None, eager: bool = False):
    return PairProductGraph(G, max_vertices=max_vertices, eager=eager)


def find_constrained_cycle(PG: PairProductGraph, two_ell: int, budget: int = 1_000_000, seed=None):
    """A cycle ``x_1..x_{2 ell}`` in the product graph whose pair vertices share no
    host vertex and whose edges carry distinct colours.

    Randomized DFS from the product edges in shuffled order, with at most
    ``budget`` DFS nodes in total.  Returns the list of pair vertices, ``None``
    when the search space is exhausted, and raises :class:`BudgetExhausted`
    when the budget runs out first.
    """
    if two_ell < 4 or two_ell % 2:
        raise HypergraphError("cycle length must be even and at least 4")
    rng = as_random(seed)
    roots = []
    for x, y, c, _, _ in PG.iter_edges():
        roots.append((x, y, c))
        roots.append((y, x, c))
    rng.shuffle(roots)
    nodes = 0
    path: list[Pair] = []
    used_v: set[int] = set()
    used_c: set[int] = set()

    def dfs():
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExhausted(f"node budget {budget} exhausted", nodes)
        x = path[-1]
        if len(path) == two_ell:
            e = PG.edge(x, path[0])
            return e is not None and e[0] not in used_c
        nbrs = list(PG.neighbours(x))
        rng.shuffle(nbrs)
        for y, c, _, _ in nbrs:
            if c in used_c or y[0] in used_v or y[1] in used_v:
                continue
            path.append(y)
            used_v.update(y)
            used_c.add(c)
            if dfs():
                return True
            path.pop()
            used_v.difference_update(y)
            used_c.discard(c)
        return False

    for x, y, c in roots:
        path[:] = [x, y]
        used_v.clear()
        used_v.update(x + y)
        used_c.clear()
        used_c.add(c)
        if dfs():
            return list(path)
    return None


def extract_disjoint_rainbow_pair(cycle, PG: PairProductGraph) -> TwoRegularColouredCertificate:
    """Project a constrained product cycle onto its two host cycles.

    Raises :class:`ProjectionInvalid` if the cycle breaks any constraint.
    """
    G = PG.host
    L = len(cycle)
    firsts = [x[0] for x in cycle]
    seconds = [x[1] for x in cycle]
    if len(set(firsts + seconds)) != 2 * L:
        raise ProjectionInvalid("pair vertices share host vertices")
    edges, colours = [], []
    for j in range(L):
        e = PG.edge(cycle[j], cycle[(j + 1) % L])
        if e is None:
            raise ProjectionInvalid(f"no product edge between positions {j} and {(j + 1) % L}")
        colours.append(e[0])
        edges.extend(e[1:])
    if len(set(colours)) != L:
        raise ProjectionInvalid("product cycle repeats a colour")
    cert = TwoRegularColouredCertificate(tuple(sorted(edges)))
    problems = check_certificate(G, cert)
    if problems:
        raise ProjectionInvalid(f"projected edges fail verification: {problems[:3]}")
    return cert


def find_small_two_regular(G: ColouredGraph, ell: int = 2, budget: int = 1_000_000, seed=None):
    """A 4*ell-edge certificate in ``G`` or ``None`` (raises BudgetExhausted when undecided)."""
    PG = build_pair_product_graph(G)
    cyc = find_constrained_cycle(PG, 2 * ell, budget=budget, seed=seed)
    if cyc is None:
        return None
    return extract_disjoint_rainbow_pair(cyc, PG)


def find_small_two_regular_hypergraph(H: Hypergraph, ell: int = 2, budget: int = 1_000_000, seed=None, parts=None):
    """Same search on the coloured view of a 3-graph; returns ``(certificate, view)``."""
    if parts is None:
        parts = max_transversal_partition(H, 3, seed=seed)
    parts = tuple(tuple(sorted(p)) for p in parts)
    G = coloured_view(H, parts, 0)
    cert = find_small_two_regular(G, ell, budget, seed)
    if cert is None:
        return None, G
    return replace(cert, parts=parts, colour_part=0), G
