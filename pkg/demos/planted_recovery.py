"""Hide two disjoint rainbow cycles in coloured noise, then find them again.

Run:  python demos/planted_recovery.py
"""

from hyperreg.constructions import gen_planted_rainbow_pair
from hyperreg.hypercore import check_certificate
from hyperreg.smallreg import find_small_two_regular

for ell in (2, 3):
    G, planted = gen_planted_rainbow_pair(60, ell, 150, seed=ell)
    print(f"\ncycle length {2 * ell}: {G.m} coloured edges, properly coloured = {G.is_properly_coloured()}")
    print("  planted edges:", sorted(planted))
    cert = find_small_two_regular(G, ell, budget=1_000_000, seed=0)
    if cert is None:
        print("  nothing recovered")
        continue
    print("  recovered edges:", list(cert.edges))
    print("  same as planted:", sorted(cert.edges) == sorted(planted))
    print("  violations:", check_certificate(G, cert))
    colours = sorted(G.edges[i][2] for i in cert.edges)
    print("  colour multiset:", colours)  # each colour twice, once per cycle
