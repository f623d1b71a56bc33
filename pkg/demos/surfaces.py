"""Triangulated surfaces as 3-graphs, and how they immerse into a host.

Run:  python demos/surfaces.py
"""

from hyperreg.constructions import gen_sts
from hyperreg.fixtures import glued_tetrahedra, octahedron, projective_plane6, tetrahedron, torus7
from hyperreg.hypercore import check_certificate, link_graph
from hyperreg.immersion import clone_decompose, find_zero_immersion
from hyperreg.oracles import OracleBudget

fixtures = {
    "tetrahedron": tetrahedron(),
    "octahedron": octahedron(),
    "two tetrahedra sharing a vertex": glued_tetrahedra(),
    "7-vertex torus": torus7(),
    "6-vertex projective plane": projective_plane6(),
}

for name, G in fixtures.items():
    surface, phi = clone_decompose(G)
    parts = ", ".join(f"{c.name} (chi={c.euler})" for c in surface.components)
    print(f"{name}: {G.n} vertices, {G.m} triangles -> {parts}")

# The shared vertex of the glued tetrahedra has a link made of two triangles;
# splitting it into two clones separates the spheres.
print("\nlink of the shared vertex:", link_graph(glued_tetrahedra(), 0))
surface, phi = clone_decompose(glued_tetrahedra())
print("clone map phi:", phi)

# A host that contains a surface gets an immersion certificate back.
cert = find_zero_immersion(torus7(), seed=0)
print("\ntorus host: surface", [c.name for c in cert.surface.components],
      "violations", check_certificate(torus7(), cert))

# In a linear host no two triples share a pair, so no set of them closes up into a surface.
print("STS(9) host:", find_zero_immersion(gen_sts(9), OracleBudget(max_edges_in_witness=12), seed=0))
