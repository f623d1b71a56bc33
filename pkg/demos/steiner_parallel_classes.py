"""Steiner triple systems and the 2-regular subhypergraphs hiding inside them.

Run:  python demos/steiner_parallel_classes.py
"""

from itertools import combinations

from hyperreg.constructions import gen_sts
from hyperreg.hypercore import check_certificate
from hyperreg.oracles import OracleBudget, find_r_regular_exact
from hyperreg.regsearch import SearchParams, find_two_regular
from hyperreg.rregsearch import SunflowerParams, find_r_regular_sunflower

S = gen_sts(9)  # the affine plane of order 3: 12 lines on 9 points
print(f"STS(9): {S.n} points, {S.m} triples, every pair of points on exactly one triple")

# Four edges are never enough: the exact search proves it.
print("2-regular with at most 4 edges:", find_r_regular_exact(S, 2, OracleBudget(max_edges_in_witness=4)))

# Six edges are: two parallel classes, each covering the 9 points once.
w = find_r_regular_exact(S, 2, OracleBudget(max_edges_in_witness=6))
print("lex-least 6-edge witness:", [S.edges[i] for i in w.edges])
classes = [M for M in combinations(w.edges, 3) if len({v for i in M for v in S.edges[i]}) == 9]
print("parallel classes inside it:", [[S.edges[i] for i in M] for M in classes])

# The randomized collision search finds one without enumerating anything.
cert, G = find_two_regular(S, "matchings", SearchParams(sample_budget=100_000, seed=7))
host = cert.pull_back(G)
print(f"collision search: {len(host.edges)} edges, violations {check_certificate(S, host)}")

# So does the sunflower pipeline, which works one vertex part at a time.
stats = {}
sf = find_r_regular_sunflower(S, 2, SunflowerParams(matching_budget=100_000), seed=7, stats=stats)
print(f"sunflower pipeline: {len(sf.edges)} edges after {stats['matchings']} matchings")

# A larger system, still found quickly.
S13 = gen_sts(13)
cert, G = find_two_regular(S13, "matchings", SearchParams(sample_budget=1_000_000, seed=1))
print("STS(13):", "found" if cert else "not found within budget",
      "" if cert is None else f"{len(cert.edges)} edges")
