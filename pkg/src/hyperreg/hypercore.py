"""Core data types: hypergraphs, coloured graphs, certificates and conversions.

Vertices are dense integer ids ``0..n-1``.  Edges are stored as sorted tuples and
certificates refer to edges by their index in the host's edge list, so a
witness can be re-checked against the host without any lookup by vertex set.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .errors import (
    CertificateFormatError,
    DuplicateEdge,
    DuplicateVertexInEdge,
    HypergraphError,
    ImproperColouring,
    IndexOutOfRange,
    LinearityViolation,
    MalformedHeader,
    NonUniformEdge,
    NotTripartite,
    VertexOutOfRange,
    WrongUniformity,
)


def _canonical_edges(n: int, edges: Iterable[Iterable[int]], k: int | None):
    out = []
    for idx, e in enumerate(edges):
        t = tuple(sorted(int(v) for v in e))
        if not t:
            raise HypergraphError(f"edge {idx} is empty")
        if k is not None and len(t) != k:
            raise NonUniformEdge(f"edge {idx} has {len(t)} vertices, expected {k}")
        if len(set(t)) != len(t):
            raise DuplicateVertexInEdge(f"edge {idx} repeats a vertex: {list(t)}")
        if t[0] < 0 or t[-1] >= n:
            raise VertexOutOfRange(f"edge {idx} has a vertex outside [0, {n})")
        out.append(t)
    return tuple(out)


class Hypergraph:
    """A simple hypergraph: no empty edges, no repeated edges.

    Edges may have different sizes unless ``k`` is given.  Instances are treated
    as immutable; derived data (incidence lists) is computed lazily and cached.
    """

    def __init__(self, n: int, edges: Iterable[Iterable[int]] = (), k: int | None = None):
        n = int(n)
        if n < 0:
            raise HypergraphError("vertex count must be non-negative")
        self.n = n
        self.edges = _canonical_edges(n, edges, k)
        if k is None and self.edges:
            sizes = {len(e) for e in self.edges}
            k = sizes.pop() if len(sizes) == 1 else None
        self.k = k
        self._incidence = None
        self._check_distinct()

    def _check_distinct(self):
        seen = {}
        for i, e in enumerate(self.edges):
            if e in seen:
                raise DuplicateEdge(f"edges {seen[e]} and {i} are identical")
            seen[e] = i

    @property
    def m(self) -> int:
        return len(self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, m={self.m}, k={self.k})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Hypergraph)
            and self.n == other.n
            and self.k == other.k
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash((self.n, self.k, self.edges))

    @property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """For every vertex, the sorted indices of the edges containing it."""
        if self._incidence is None:
            inc = [[] for _ in range(self.n)]
            for i, e in enumerate(self.edges):
                for v in e:
                    inc[v].append(i)
            self._incidence = tuple(tuple(x) for x in inc)
        return self._incidence

    def degree(self, v: int) -> int:
        return len(self.incidence[v])

    def degrees(self) -> list[int]:
        return [len(x) for x in self.incidence]

    def vertices(self) -> list[int]:
        """Non-isolated vertices."""
        return [v for v, x in enumerate(self.incidence) if x]

    def is_linear(self) -> bool:
        return _first_linearity_violation(self.edges) is None

    def subhypergraph(self, indices: Iterable[int]):
        """Same vertex set, edges ``indices`` (in the given order)."""
        idx = list(indices)
        return Hypergraph(self.n, [self.edges[i] for i in idx], k=self.k)

    def edge_bitmasks(self) -> list[int]:
        return [sum(1 << v for v in e) for e in self.edges]


def _first_linearity_violation(edges):
    owner = {}
    for i, e in enumerate(edges):
        for pair in combinations(e, 2):
            j = owner.get(pair)
            if j is not None:
                return j, i
            owner[pair] = i
    return None


class LinearHypergraph(Hypergraph):
    """A k-uniform hypergraph in which two edges share at most one vertex."""

    def __init__(self, n: int, edges: Iterable[Iterable[int]] = (), k: int | None = None):
        edges = [tuple(e) for e in edges]
        if k is None:
            if not edges:
                raise HypergraphError("uniformity k is required for an empty hypergraph")
            k = len(edges[0])
        if k < 2:
            raise HypergraphError("linear hypergraphs need k >= 2")
        super().__init__(n, edges, k=k)

    def _check_distinct(self):
        bad = _first_linearity_violation(self.edges)
        if bad is not None:
            i, j = bad
            raise LinearityViolation(i, j, set(self.edges[i]) & set(self.edges[j]))

    def subhypergraph(self, indices: Iterable[int]) -> "LinearHypergraph":
        return LinearHypergraph(self.n, [self.edges[i] for i in indices], k=self.k)


# --------------------------------------------------------------------------
# text format


def parse_hypergraph(text: str | bytes, linear: bool = True) -> Hypergraph:
    """Parse the ``k n m`` line format.  Lines starting with ``#`` are comments."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = []
    for raw in text.splitlines():
        s = raw.strip()
        if s and not s.startswith("#"):
            lines.append(s)
    if not lines:
        raise MalformedHeader("missing header line 'k n m'")
    head = lines[0].split()
    try:
        k, n, m = (int(x) for x in head)
    except ValueError:
        raise MalformedHeader(f"bad header {lines[0]!r}; expected three integers 'k n m'")
    if k < 1 or n < 0 or m < 0:
        raise MalformedHeader(f"bad header values k={k} n={n} m={m}")
    body = lines[1:]
    if len(body) != m:
        raise MalformedHeader(f"header announces {m} edges but {len(body)} edge lines follow")
    edges = []
    for i, line in enumerate(body):
        try:
            e = [int(x) for x in line.split()]
        except ValueError:
            raise MalformedHeader(f"edge line {i} is not a list of integers: {line!r}")
        if len(e) != k:
            raise NonUniformEdge(f"edge {i} has {len(e)} vertices, expected {k}")
        edges.append(e)
    if linear:
        return LinearHypergraph(n, edges, k=k)
    return Hypergraph(n, edges, k=k)


def serialize_hypergraph(H: Hypergraph, comment: str | None = None) -> str:
    if H.k is None:
        raise NonUniformEdge("only uniform hypergraphs have a text serialization")
    out = []
    if comment:
        out.extend(f"# {line}" for line in comment.splitlines())
    out.append(f"{H.k} {H.n} {H.m}")
    out.extend(" ".join(map(str, e)) for e in H.edges)
    return "\n".join(out) + "\n"


def read_hypergraph(path, linear: bool = True) -> Hypergraph:
    with open(path, "rb") as fh:
        return parse_hypergraph(fh.read(), linear=linear)


# --------------------------------------------------------------------------
# coloured graphs


class ColouredGraph:
    """A properly edge-coloured simple graph.

    ``vertex_set`` is the set of vertices the graph is considered to live on
    (statistics such as the average degree use its size); by default it is all
    of ``0..n-1``.  ``source_edges`` and ``colour_vertices`` record where edges
    and colours came from when the graph was derived from a 3-partite
    hypergraph.
    """

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, int, int]],
        s: int | None = None,
        vertex_set: Iterable[int] | None = None,
        source_edges: Sequence[int] | None = None,
        colour_vertices: Sequence[int] | None = None,
    ):
        self.n = int(n)
        canon = []
        for i, (u, v, c) in enumerate(edges):
            u, v, c = int(u), int(v), int(c)
            if u == v:
                raise HypergraphError(f"edge {i} is a loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise VertexOutOfRange(f"edge {i} has a vertex outside [0, {self.n})")
            if c < 0:
                raise HypergraphError(f"edge {i} has a negative colour")
            canon.append((min(u, v), max(u, v), c))
        self.edges = tuple(canon)
        self.s = int(s) if s is not None else (max((c for *_, c in canon), default=-1) + 1)
        self.vertex_set = frozenset(range(self.n) if vertex_set is None else vertex_set)
        self.source_edges = tuple(source_edges) if source_edges is not None else None
        self.colour_vertices = tuple(colour_vertices) if colour_vertices is not None else None

        self.adj = [dict() for _ in range(self.n)]  # v -> {neighbour: edge index}
        self.by_colour = [dict() for _ in range(self.n)]  # v -> {colour: edge index}
        for i, (u, v, c) in enumerate(self.edges):
            if c >= self.s:
                raise HypergraphError(f"edge {i} colour {c} outside [0, {self.s})")
            if v in self.adj[u]:
                raise HypergraphError(f"edges {self.adj[u][v]} and {i} are parallel")
            for x in (u, v):
                if c in self.by_colour[x]:
                    raise ImproperColouring(
                        f"edges {self.by_colour[x][c]} and {i} both have colour {c} at vertex {x}"
                    )
                self.by_colour[x][c] = i
            self.adj[u][v] = i
            self.adj[v][u] = i

    @property
    def m(self) -> int:
        return len(self.edges)

    def __repr__(self) -> str:
        return f"ColouredGraph(n={len(self.vertex_set)}, m={self.m}, s={self.s})"

    def edge_id(self, u: int, v: int) -> int | None:
        return self.adj[u].get(v)

    def colour(self, i: int) -> int:
        return self.edges[i][2]

    def neighbour_by_colour(self, v: int, c: int) -> int | None:
        i = self.by_colour[v].get(c)
        if i is None:
            return None
        a, b, _ = self.edges[i]
        return b if a == v else a

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    @property
    def average_degree(self) -> float:
        nv = len(self.vertex_set)
        return 2 * self.m / nv if nv else 0.0

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def colour_counts(self) -> Counter:
        return Counter(c for *_, c in self.edges)

    @property
    def max_colour_use(self) -> int:
        return max(self.colour_counts().values(), default=0)

    def balance(self) -> float:
        """Smallest mu for which the graph is mu-balanced.

        That is, the least mu with max degree <= mu*d and every colour used at
        most n*d*mu/s times.
        """
        d = self.average_degree
        if self.m == 0:
            return 0.0
        nv = len(self.vertex_set)
        return max(self.max_degree / d, self.max_colour_use * self.s / (nv * d))

    def is_properly_coloured(self) -> bool:
        seen = set()
        for u, v, c in self.edges:
            if (u, c) in seen or (v, c) in seen:
                return False
            seen.add((u, c))
            seen.add((v, c))
        return True


def _parts_lookup(n: int, parts: Sequence[Iterable[int]]):
    where = [-1] * n
    for pi, part in enumerate(parts):
        for v in part:
            if not 0 <= v < n:
                raise VertexOutOfRange(f"part {pi} contains vertex {v} outside [0, {n})")
            if where[v] != -1:
                raise HypergraphError(f"vertex {v} is in parts {where[v]} and {pi}")
            where[v] = pi
    return where


def transversal_edges(H: Hypergraph, parts: Sequence[Iterable[int]]) -> list[int]:
    """Indices of edges with exactly one vertex in each part."""
    where = _parts_lookup(H.n, parts)
    k = len(parts)
    out = []
    for i, e in enumerate(H.edges):
        if len(e) == k and sorted(where[v] for v in e) == list(range(k)):
            out.append(i)
    return out


def to_coloured_graph(
    H: Hypergraph,
    colour_part: int,
    parts: Sequence[Iterable[int]],
    edge_indices: Sequence[int] | None = None,
) -> ColouredGraph:
    """View a 3-partite 3-graph as a properly coloured graph.

    Each hyperedge ``xyz`` (``x`` in the colour part) becomes the graph edge
    ``yz`` with colour equal to the position of ``x`` in the sorted colour part.
    Graph vertices keep their host ids.  ``edge_indices`` restricts to a subset
    of host edges (all of which must be transversal).
    """
    if H.k != 3 and H.m:
        raise WrongUniformity("coloured-graph view needs a 3-uniform hypergraph")
    if len(parts) != 3:
        raise NotTripartite("exactly three parts are required")
    where = _parts_lookup(H.n, parts)
    colour_vertices = sorted(parts[colour_part])
    colour_of = {x: i for i, x in enumerate(colour_vertices)}
    idx = range(H.m) if edge_indices is None else edge_indices
    graph_edges, source = [], []
    for i in idx:
        e = H.edges[i]
        if sorted(where[v] for v in e) != [0, 1, 2]:
            raise NotTripartite(f"edge {i} = {list(e)} is not transversal to the partition")
        x = next(v for v in e if where[v] == colour_part)
        y, z = (v for v in e if where[v] != colour_part)
        graph_edges.append((y, z, colour_of[x]))
        source.append(i)
    vset = set().union(*(set(p) for j, p in enumerate(parts) if j != colour_part))
    try:
        G = ColouredGraph(
            H.n,
            graph_edges,
            s=len(colour_vertices),
            vertex_set=vset,
            source_edges=source,
            colour_vertices=colour_vertices,
        )
    except ImproperColouring as exc:  # pragma: no cover - impossible for linear input
        raise AssertionError(f"linear input produced an improper colouring: {exc}")
    return G


def coloured_view(H: Hypergraph, parts: Sequence[Iterable[int]], colour_part: int = 0) -> ColouredGraph:
    """Coloured graph of the transversal edges of ``H`` w.r.t. ``parts``."""
    return to_coloured_graph(H, colour_part, parts, transversal_edges(H, parts))


def link_graph(H: Hypergraph, v: int) -> list[tuple[int, int]]:
    """Edges ``{a, b}`` of the link of ``v``: pairs with ``{v, a, b}`` an edge."""
    if H.k != 3 and H.m:
        raise WrongUniformity("link graphs are defined here for 3-graphs only")
    out = []
    for i in H.incidence[v]:
        a, b = (x for x in H.edges[i] if x != v)
        out.append((a, b))
    return sorted(out)


def pair_index(u: int, v: int, n: int) -> int:
    """Lexicographic rank of the pair ``u < v`` among all pairs of ``0..n-1``."""
    if u > v:
        u, v = v, u
    return u * n - u * (u + 1) // 2 + (v - u - 1)


def pair_hypergraph(G: Hypergraph, drop_isolated: bool = False):
    """Lift a 3-graph to the linear 3-graph on vertex pairs.

    Each edge ``uvw`` of ``G`` becomes ``{uv, vw, uw}``.  Returns
    ``(H, pair_map)`` where ``pair_map[i]`` is the pair of ``G`` behind vertex
    ``i`` of ``H``; edge ``j`` of ``H`` comes from edge ``j`` of ``G``.
    """
    if G.m and G.k != 3:
        raise WrongUniformity("pair hypergraph needs a 3-uniform input")
    n = G.n
    if drop_isolated:
        pairs = sorted({p for e in G.edges for p in combinations(e, 2)})
        index = {p: i for i, p in enumerate(pairs)}
        pair_map = tuple(pairs)
    else:
        pair_map = tuple(combinations(range(n), 2))
        index = None
    edges = []
    for e in G.edges:
        ps = list(combinations(e, 2))
        if index is None:
            edges.append([pair_index(a, b, n) for a, b in ps])
        else:
            edges.append([index[p] for p in ps])
    try:
        H = LinearHypergraph(len(pair_map), edges, k=3)
    except LinearityViolation as exc:  # pragma: no cover - distinct triangles share <= 1 pair
        raise AssertionError(f"pair hypergraph is not linear: {exc}")
    return H, pair_map


def random_partition(n: int, k: int, rng) -> list[list[int]]:
    parts = [[] for _ in range(k)]
    for v in range(n):
        parts[rng.randrange(k)].append(v)
    return parts


# --------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class RegularCertificate:
    """Edge indices of an r-regular subhypergraph (or subgraph)."""

    r: int
    edges: tuple[int, ...]
    kind: str = field(default="regular", init=False)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "r": self.r, "edges": list(self.edges)}


@dataclass(frozen=True)
class EvenCertificate:
    edges: tuple[int, ...]
    kind: str = field(default="even", init=False)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "edges": list(self.edges)}


@dataclass(frozen=True)
class TwoRegularColouredCertificate:
    """Edges of a coloured graph forming a 2-regular subgraph, colours used 0 or 2 times.

    ``parts``/``colour_part`` identify the coloured view of a host hypergraph the
    indices refer to; they are ``None`` for a free-standing coloured graph.
    """

    edges: tuple[int, ...]
    parts: tuple[tuple[int, ...], ...] | None = None
    colour_part: int | None = None
    kind: str = field(default="two-regular-coloured", init=False)

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "edges": list(self.edges)}
        if self.parts is not None:
            d["parts"] = [list(p) for p in self.parts]
            d["colour_part"] = self.colour_part
        return d

    def pull_back(self, G: ColouredGraph) -> RegularCertificate:
        """The 2-regular subhypergraph of the host behind the coloured view ``G``."""
        if G.source_edges is None:
            raise HypergraphError("coloured graph carries no source edge map")
        return RegularCertificate(2, tuple(sorted(G.source_edges[i] for i in self.edges)))


def _edge_vertex_lists(host):
    if isinstance(host, ColouredGraph):
        return [(u, v) for u, v, _ in host.edges]
    return host.edges


def _check_indices(indices, m):
    for i in indices:
        if not 0 <= i < m:
            raise IndexOutOfRange(f"edge index {i} outside [0, {m})")


def check_certificate(host, cert) -> list[str]:
    """Recompute a certificate's invariants; return the list of violations.

    An empty list means the certificate is valid for ``host``.
    """
    if hasattr(cert, "surface") and hasattr(cert, "phi"):
        from .immersion import check_immersion

        return check_immersion(host, cert)

    edges = _edge_vertex_lists(host)
    _check_indices(cert.edges, len(edges))
    problems = []
    if not cert.edges:
        problems.append("empty edge set")
    dup = [i for i, c in Counter(cert.edges).items() if c > 1]
    if dup:
        problems.append(f"repeated edge indices {sorted(dup)}")
    deg = Counter(v for i in set(cert.edges) for v in edges[i])

    if isinstance(cert, RegularCertificate):
        for v in sorted(deg):
            if deg[v] != cert.r:
                problems.append(f"vertex {v} has degree {deg[v]}, expected {cert.r}")
    elif isinstance(cert, EvenCertificate):
        for v in sorted(deg):
            if deg[v] % 2:
                problems.append(f"vertex {v} has odd degree {deg[v]}")
    elif isinstance(cert, TwoRegularColouredCertificate):
        if not isinstance(host, ColouredGraph):
            raise HypergraphError("a two-regular-coloured certificate needs a coloured graph host")
        for v in sorted(deg):
            if deg[v] != 2:
                problems.append(f"vertex {v} has degree {deg[v]}, expected 2")
        uses = Counter(host.edges[i][2] for i in set(cert.edges))
        for c in sorted(uses):
            if uses[c] != 2:
                problems.append(f"colour {c} used {uses[c]} times, expected 0 or 2")
    else:
        raise HypergraphError(f"unknown certificate type {type(cert).__name__}")
    return problems


def certificate_to_json(cert) -> str:
    return json.dumps(cert.to_dict(), indent=2, sort_keys=True) + "\n"


def certificate_from_dict(d: dict):
    try:
        kind = d["kind"]
        if kind == "regular":
            return RegularCertificate(int(d["r"]), tuple(int(i) for i in d["edges"]))
        if kind == "even":
            return EvenCertificate(tuple(int(i) for i in d["edges"]))
        if kind == "two-regular-coloured":
            parts = d.get("parts")
            return TwoRegularColouredCertificate(
                tuple(int(i) for i in d["edges"]),
                None if parts is None else tuple(tuple(int(v) for v in p) for p in parts),
                None if parts is None else int(d["colour_part"]),
            )
        if kind == "immersion":
            from .immersion import immersion_from_dict

            return immersion_from_dict(d)
    except (KeyError, TypeError, ValueError) as exc:
        raise CertificateFormatError(f"malformed certificate: {exc}")
    raise CertificateFormatError(f"unknown certificate kind {d.get('kind')!r}")


def certificate_from_json(text: str | bytes):
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateFormatError(f"certificate is not valid JSON: {exc}")
    if not isinstance(d, dict):
        raise CertificateFormatError("certificate must be a JSON object")
    return certificate_from_dict(d)


def certificate_host_view(H: Hypergraph, cert):
    """The object a certificate's indices refer to, derived from host file ``H``."""
    if isinstance(cert, TwoRegularColouredCertificate):
        if cert.parts is None:
            raise CertificateFormatError("two-regular-coloured certificate lacks 'parts'")
        return coloured_view(H, cert.parts, cert.colour_part)
    return H
