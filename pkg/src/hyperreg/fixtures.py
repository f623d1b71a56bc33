"""Small named instances used in tests, demos and documentation."""

from __future__ import annotations

from itertools import product

from .hypercore import Hypergraph, LinearHypergraph


def pasch() -> LinearHypergraph:
    """The Pasch configuration: 6 points, 4 lines, 2-regular."""
    return LinearHypergraph(6, [(0, 1, 2), (0, 3, 4), (1, 3, 5), (2, 4, 5)], k=3)


FANO_LINES = [(0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5)]


def fano() -> LinearHypergraph:
    return LinearHypergraph(7, FANO_LINES, k=3)


def star3() -> LinearHypergraph:
    """Three triples through vertex 0 on 7 vertices."""
    return LinearHypergraph(7, [(0, 1, 2), (0, 3, 4), (0, 5, 6)], k=3)


def cycle_graph(n: int) -> Hypergraph:
    return Hypergraph(n, [(i, (i + 1) % n) for i in range(n)], k=2)


def tetrahedron() -> Hypergraph:
    return Hypergraph(4, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)], k=3)


def octahedron() -> Hypergraph:
    """Boundary of the octahedron; antipodal pairs are (0,1), (2,3), (4,5)."""
    return Hypergraph(6, list(product((0, 1), (2, 3), (4, 5))), k=3)


def glued_tetrahedra() -> Hypergraph:
    """Two tetrahedron boundaries sharing only vertex 0."""
    faces = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
    faces += [(0, 4, 5), (0, 4, 6), (0, 5, 6), (4, 5, 6)]
    return Hypergraph(7, faces, k=3)


def torus7() -> Hypergraph:
    """Minimal 7-vertex triangulation of the torus (14 triangles)."""
    faces = [(i, (i + 1) % 7, (i + 3) % 7) for i in range(7)]
    faces += [(i, (i + 2) % 7, (i + 3) % 7) for i in range(7)]
    return Hypergraph(7, faces, k=3)


def projective_plane6() -> Hypergraph:
    """Minimal 6-vertex triangulation of the real projective plane (10 triangles)."""
    faces = [
        (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1),
        (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3),
    ]
    return Hypergraph(6, faces, k=3)
