"""Closed surfaces inside 3-graphs.

A 3-graph in which every vertex link is 2-regular becomes a disjoint union of
closed surfaces once each vertex whose link has several cycles is split into
one clone per cycle.  Mapping clones back to their originals gives a map that
is injective on edges and triangles.  Such 3-graphs are found as 2-regular
subhypergraphs of the pair lift, whose vertices are the vertex pairs of the
host.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations

from .errors import BudgetExhausted, CertificateFormatError, LinkNotTwoRegular, NotASurface
from .hypercore import Hypergraph, link_graph, pair_hypergraph
from .oracles import OracleBudget, find_r_regular_exact


def _components(pairs):
    """Connected components (sorted vertex lists) of the graph with edge list ``pairs``."""
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups = {}
    for x in list(parent):
        groups.setdefault(find(x), []).append(x)
    return sorted(sorted(g) for g in groups.values())


def _link_cycles_ok(pairs) -> bool:
    deg = Counter(x for p in pairs for x in p)
    return bool(pairs) and all(d == 2 for d in deg.values())


@dataclass(frozen=True)
class SurfaceComponent:
    vertices: tuple[int, ...]
    triangles: tuple[int, ...]
    euler: int
    orientable: bool
    name: str

    def to_dict(self) -> dict:
        return {
            "chi": self.euler,
            "orientable": self.orientable,
            "name": self.name,
            "triangles": len(self.triangles),
        }


@dataclass(frozen=True)
class SurfaceComplex:
    """A pure 2-complex: ``n`` vertices and sorted triangles, with per-component data."""

    n: int
    triangles: tuple[tuple[int, int, int], ...]
    components: tuple[SurfaceComponent, ...] = ()

    @property
    def pairs(self) -> set:
        return {p for t in self.triangles for p in combinations(t, 2)}


def surface_name(chi: int, orientable: bool) -> str:
    if orientable:
        g = (2 - chi) // 2
        return {0: "sphere", 1: "torus"}.get(g, f"genus-{g}")
    c = 2 - chi
    return {1: "projective plane", 2: "Klein bottle"}.get(c, f"{c}-crosscap")


def classify_surface(triangles) -> tuple[int, bool, str]:
    """``(chi, orientable, name)`` of a connected closed surface given by its triangles.

    Orientability: orient one triangle, push orientations across shared
    pairs (a neighbour must traverse the shared pair in the opposite
    direction) and report non-orientable on the first conflict.
    """
    tris = [tuple(sorted(t)) for t in triangles]
    if not tris:
        raise NotASurface("no triangles")
    by_pair = {}
    for i, t in enumerate(tris):
        for p in combinations(t, 2):
            by_pair.setdefault(p, []).append(i)
    bad = [p for p, lst in by_pair.items() if len(lst) != 2]
    if bad:
        raise NotASurface(f"pair {bad[0]} lies in {len(by_pair[bad[0]])} triangles, expected 2")
    verts = sorted({v for t in tris for v in t})
    for v in verts:
        link = [tuple(x for x in t if x != v) for t in tris if v in t]
        if len(_components(link)) != 1 or not _link_cycles_ok(link):
            raise NotASurface(f"link of vertex {v} is not a single cycle")
    if len(_components([(t[0], t[1]) for t in tris] + [(t[1], t[2]) for t in tris])) != 1:
        raise NotASurface("complex is not connected")

    chi = len(verts) - len(by_pair) + len(tris)
    orient = {0: tris[0]}
    stack = [0]
    orientable = True
    while stack and orientable:
        i = stack.pop()
        o = orient[i]
        for a, b in ((o[0], o[1]), (o[1], o[2]), (o[2], o[0])):
            j = next(x for x in by_pair[tuple(sorted((a, b)))] if x != i)
            c = next(x for x in tris[j] if x not in (a, b))
            want = (b, a, c)
            if j not in orient:
                orient[j] = want
                stack.append(j)
            elif not _same_cycle(orient[j], want):
                orientable = False
                break
    if orientable and chi % 2:
        raise AssertionError("orientable surface with odd Euler characteristic")
    if chi > 2:
        raise NotASurface(f"Euler characteristic {chi} > 2")
    return chi, orientable, surface_name(chi, orientable)


def _same_cycle(a, b) -> bool:
    return b in (a, (a[1], a[2], a[0]), (a[2], a[0], a[1]))


def _complex_from(n, triangles) -> SurfaceComplex:
    tris = tuple(tuple(sorted(t)) for t in triangles)
    comps = _components([p for t in tris for p in combinations(t, 2)])
    out = []
    where = {}
    for ci, vs in enumerate(comps):
        for v in vs:
            where[v] = ci
    members = [[] for _ in comps]
    for i, t in enumerate(tris):
        members[where[t[0]]].append(i)
    for vs, idx in zip(comps, members):
        chi, orientable, name = classify_surface([tris[i] for i in idx])
        out.append(SurfaceComponent(tuple(vs), tuple(idx), chi, orientable, name))
    return SurfaceComplex(n, tris, tuple(out))


def clone_decompose(G: Hypergraph, order=None, with_log: bool = False):
    """Split vertices with disconnected links into one clone per link cycle.

    Every non-isolated vertex of ``G`` must have a 2-regular link.  Vertices
    are processed in increasing id order unless ``order`` is given.  Returns
    ``(surface, phi)``: vertices of ``surface`` are numbered densely and
    ``phi[i]`` is the vertex of ``G`` that surface vertex ``i`` came from.
    Isolated vertices of ``G`` are dropped.
    """
    tris = [list(e) for e in G.edges]
    for v in G.vertices():
        if not _link_cycles_ok(link_graph(G, v)):
            raise LinkNotTwoRegular(v)
    origin = {v: v for v in G.vertices()}
    faces_before = len(tris)
    pairs_before = len({p for t in tris for p in combinations(sorted(t), 2)})
    next_id = G.n
    clones = set()
    log = []
    todo = list(order) if order is not None else sorted(G.vertices())
    for v in todo:
        link = [tuple(x for x in t if x != v) for t in tris if v in t]
        comps = _components(link)
        if len(comps) <= 1:
            continue
        if v in clones:
            raise AssertionError("a clone was about to be cloned again")
        comp_of = {x: ci for ci, vs in enumerate(comps) for x in vs}
        new = list(range(next_id, next_id + len(comps)))
        next_id += len(comps)
        for t in tris:
            if v in t:
                other = next(x for x in t if x != v)
                t[t.index(v)] = new[comp_of[other]]
        for c in new:
            origin[c] = origin[v]
            clones.add(c)
        del origin[v]
        log.append((v, len(comps)))
        if len(tris) != faces_before:
            raise AssertionError("cloning changed the number of triangles")
        if len({p for t in tris for p in combinations(sorted(t), 2)}) != pairs_before:
            raise AssertionError("cloning changed the number of edges")

    used = sorted({x for t in tris for x in t})
    relabel = {x: i for i, x in enumerate(used)}
    surface = _complex_from(len(used), [[relabel[x] for x in t] for t in tris])
    phi = tuple(origin[x] for x in used)
    if with_log:
        return surface, phi, log
    return surface, phi


@dataclass(frozen=True)
class ImmersionCertificate:
    """A closed surface with a vertex map to the host that is injective on
    edges and triangles.  ``edges`` lists the host edge hit by each triangle."""

    surface: SurfaceComplex
    phi: tuple[int, ...]
    edges: tuple[int, ...] = ()
    kind: str = field(default="immersion", init=False)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "edges": list(self.edges),
            "phi": list(self.phi),
            "triangles": [list(t) for t in self.surface.triangles],
            "surfaces": [c.to_dict() for c in self.surface.components],
        }


def immersion_from_dict(d: dict) -> ImmersionCertificate:
    try:
        tris = [tuple(int(v) for v in t) for t in d["triangles"]]
        phi = tuple(int(v) for v in d["phi"])
        edges = tuple(int(i) for i in d.get("edges", ()))
    except (KeyError, TypeError, ValueError) as exc:
        raise CertificateFormatError(f"malformed immersion certificate: {exc}")
    n = len(phi)
    if any(not 0 <= v < n for t in tris for v in t):
        raise CertificateFormatError("triangle vertex outside the phi table")
    claimed = tuple(
        SurfaceComponent((), (), int(s["chi"]), bool(s["orientable"]), str(s["name"]))
        for s in d.get("surfaces", ())
    )
    return ImmersionCertificate(SurfaceComplex(n, tuple(tris), claimed), phi, edges)


def check_immersion(host: Hypergraph, cert: ImmersionCertificate) -> list[str]:
    """Recheck a surface certificate against ``host``; empty list means valid."""
    problems = []
    S = cert.surface
    tris = [tuple(sorted(t)) for t in S.triangles]
    if not tris:
        return ["empty surface"]
    if len(cert.phi) != S.n:
        problems.append(f"phi has {len(cert.phi)} entries for {S.n} vertices")
        return problems
    try:
        recomputed = _complex_from(S.n, tris)
    except NotASurface as exc:
        return [f"not a closed surface: {exc}"]
    got = sorted((c.euler, c.orientable, c.name) for c in recomputed.components)
    if S.components:
        claimed = sorted((c.euler, c.orientable, c.name) for c in S.components)
        if claimed != got:
            problems.append(f"surfaces block {claimed} does not match recomputed {got}")
    host_index = {e: i for i, e in enumerate(host.edges)}
    images = []
    for t in tris:
        img = tuple(sorted(cert.phi[v] for v in t))
        if len(set(img)) < 3 or img not in host_index:
            problems.append(f"triangle {list(t)} maps to {list(img)}, not a host edge")
        images.append(img)
    if len(set(images)) != len(images):
        problems.append("phi is not injective on triangles")
    pair_images = [tuple(sorted((cert.phi[a], cert.phi[b]))) for a, b in S.pairs]
    if len(set(pair_images)) != len(pair_images):
        problems.append("phi is not injective on edges")
    if cert.edges and not problems:
        expected = sorted(host_index[img] for img in images)
        if sorted(cert.edges) != expected:
            problems.append("edges list does not match the triangle images")
    return problems


def _two_regular_witness(H, budget, seed, fallback):
    try:
        w = find_r_regular_exact(H, 2, budget)
        return None if w is None else list(w.edges)
    except BudgetExhausted:
        if not fallback:
            raise
        from .regsearch import SearchParams, find_two_regular

        cert, view = find_two_regular(H, "matchings", SearchParams(seed=seed or 0))
        if cert is None:
            raise
        return list(cert.pull_back(view).edges)


def find_zero_immersion(
    G: Hypergraph, budget: OracleBudget | None = None, seed=None, fallback: bool = True, maximal: bool = True
):
    """A closed surface mapped into ``G`` injectively on edges and triangles.

    Lifts ``G`` to its pair hypergraph, searches that for a 2-regular
    subhypergraph (exact oracle first, then the randomized collision search
    when the oracle runs out of budget), pulls the witness back to ``G`` and
    splits it into surfaces.  With ``maximal`` the search is repeated on the
    lift edges avoiding all pairs used so far and the witnesses are merged.

    Returns ``None`` when the oracle proves there is no witness (within
    ``budget.max_edges_in_witness`` if set) and raises
    :class:`BudgetExhausted` when neither search decides.
    """
    H, _ = pair_hypergraph(G, drop_isolated=True)
    if H.m == 0:
        return None
    chosen = []
    used_pairs = set()
    live = list(range(H.m))
    while live:
        sub = H.subhypergraph(live)
        try:
            w = _two_regular_witness(sub, budget, seed, fallback)
        except BudgetExhausted:
            if chosen:
                break
            raise
        if w is None:
            break
        picked = [live[i] for i in w]
        chosen.extend(picked)
        used_pairs.update(v for i in picked for v in H.edges[i])
        if not maximal:
            break
        live = [i for i in live if used_pairs.isdisjoint(H.edges[i])]
    if not chosen:
        return None
    chosen.sort()
    surface, phi = clone_decompose(G.subhypergraph(chosen))
    return ImmersionCertificate(surface, phi, tuple(chosen))
