"""r-regular subhypergraphs from sunflowers of matchings.

Matchings of a balanced k-partite hypergraph are sampled greedily and grouped
by the vertex set they span.  r matchings on the same vertex set forming a
sunflower (pairwise intersection equal to a common core) leave, after the core
is removed, r disjoint perfect matchings of what remains: an r-regular
subhypergraph.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import BudgetExhausted, HypergraphError, RetryLimitExceeded
from .hypercore import LinearHypergraph, RegularCertificate, check_certificate
from .regularize import BalancedHypergraph, balanced_kpartite
from .rng import as_random, derive_seed

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Sunflower:
    petals: tuple[frozenset, ...]
    core: frozenset

    def is_valid(self) -> bool:
        ps = self.petals
        return len(set(ps)) == len(ps) and all(
            ps[i] & ps[j] == self.core for i in range(len(ps)) for j in range(i + 1, len(ps))
        )


def find_sunflower(family: Iterable[Iterable], r: int, max_nodes: int | None = 100_000) -> Sunflower | None:
    """An r-sunflower in a family of equal-size sets, or ``None``.

    Greedily collect pairwise disjoint sets; r of them form a sunflower with
    empty core.  Otherwise every set meets the union of the greedy sets, and
    the search recurses on the link of each element of that union (most
    frequent first), adding the element to the core.
    """
    if r < 2:
        raise HypergraphError("r must be at least 2")
    fam = list(dict.fromkeys(frozenset(s) for s in family))
    if len({len(s) for s in fam}) > 1:
        raise HypergraphError("all sets must have the same size")
    nodes = 0

    def rec(sets):
        nonlocal nodes
        nodes += 1
        if max_nodes is not None and nodes > max_nodes:
            raise BudgetExhausted(f"sunflower search exceeded {max_nodes} nodes", nodes)
        if len(sets) < r:
            return None
        picked, union = [], set()
        for S in sets:
            if union.isdisjoint(S):
                picked.append(S)
                union |= S
                if len(picked) == r:
                    return picked, frozenset()
        counts = {}
        for S in sets:
            for x in S & union:
                counts[x] = counts.get(x, 0) + 1
        for x in sorted(counts, key=lambda y: (-counts[y], repr(y))):
            if counts[x] < r:
                break
            link = [S - {x} for S in sets if x in S]
            got = rec(link)
            if got is not None:
                petals, core = got
                return [P | {x} for P in petals], core | {x}
        return None

    got = rec(fam)
    if got is None:
        return None
    sf = Sunflower(tuple(got[0]), got[1])
    if not sf.is_valid():
        raise AssertionError("sunflower extraction produced an invalid family")
    return sf


def _greedy_matching(host: LinearHypergraph, edges, t: int, rng) -> tuple[int, ...] | None:
    alive = list(edges)
    picked = []
    while len(picked) < t and alive:
        e = alive[rng.randrange(len(alive))]
        picked.append(e)
        verts = set(host.edges[e])
        alive = [f for f in alive if verts.isdisjoint(host.edges[f])]
    return tuple(sorted(picked)) if len(picked) == t else None


def sample_matchings(
    B: BalancedHypergraph, t: int, budget: int, seed=None, stall: int | None = None
) -> Iterator[tuple[int, ...]]:
    """Distinct matchings of ``t`` edges (host edge indices) from the greedy
    procedure: pick a random surviving edge, drop everything meeting it.

    At most ``budget`` draws are made; with ``stall`` set the stream also ends
    after that many consecutive draws produce nothing new.
    """
    if t < 1:
        raise HypergraphError("t must be at least 1")
    smallest = min(len(p) for p in B.parts)
    k = len(B.parts)
    if t > smallest / (2 * k * B.mu) + 1:
        log.debug("t=%d exceeds |X_1|/(2 k mu) + 1 = %.3g", t, smallest / (2 * k * B.mu) + 1)
    rng = as_random(seed)
    seen = set()
    idle = 0
    for _ in range(budget):
        M = _greedy_matching(B.host, B.edges, t, rng)
        if M is None or M in seen:
            idle += 1
            if stall is not None and idle >= stall:
                return
            continue
        idle = 0
        seen.add(M)
        yield M


@dataclass(frozen=True)
class SunflowerParams:
    """``t=None`` samples sizes 2..t_max round robin, t_max being the largest
    greedy matching seen in a pilot; ``t="theoretical"`` uses ceil(|X_1| / (2 k mu)).
    ``matching_budget`` bounds the total number of greedy draws over all
    regularization attempts; ``stall`` ends an attempt after that many
    consecutive draws yield no new matching."""

    t: int | str | None = None
    matching_budget: int = 100_000
    stall: int = 64
    pilot: int = 32
    regularization_retries: int = 100
    sunflower_nodes: int = 100_000


def _pilot_max(B: BalancedHypergraph, rng, draws: int) -> int:
    best = 0
    for _ in range(draws):
        alive = list(B.edges)
        size = 0
        while alive:
            e = alive[rng.randrange(len(alive))]
            size += 1
            vs = set(B.host.edges[e])
            alive = [f for f in alive if vs.isdisjoint(B.host.edges[f])]
        best = max(best, size)
    return best


def find_r_regular_sunflower(
    H: LinearHypergraph, r: int, params: SunflowerParams | None = None, seed=None, stats: dict | None = None
) -> RegularCertificate | None:
    """Randomized r-regular subhypergraph search.  ``None`` means not found
    within budget; every returned certificate has been verified."""
    if r < 2:
        raise HypergraphError("r must be at least 2")
    params = params or SunflowerParams()
    st = {"attempts": 0, "matchings": 0, "draws": 0, "sunflower_calls": 0}
    if stats is not None:
        stats.update(st)
    if H.m == 0:
        return None
    remaining = params.matching_budget
    attempt = 0
    while remaining > 0:
        attempt += 1
        st["attempts"] = attempt
        try:
            B = balanced_kpartite(H, seed=derive_seed(seed, "sunflower-regularize", attempt),
                                  retry_limit=params.regularization_retries)
        except RetryLimitExceeded:
            break
        rng = as_random(derive_seed(seed, "sunflower-matchings", attempt))
        k = len(B.parts)
        if params.t == "theoretical":
            sizes = [max(1, math.ceil(min(len(p) for p in B.parts) / (2 * k * B.mu)))]
        elif params.t is not None:
            sizes = [int(params.t)]
        else:
            top = _pilot_max(B, rng, params.pilot)
            sizes = list(range(2, top + 1))
        if not sizes:
            remaining -= 1
            st["draws"] += 1
            continue
        buckets = {}
        per_size = max(1, remaining // len(sizes))
        streams = {t: sample_matchings(B, t, per_size, rng, params.stall) for t in sizes}
        live = list(sizes)
        while live and remaining > 0:
            for t in list(live):
                M = next(streams[t], None)
                remaining -= 1
                st["draws"] += 1
                if M is None:
                    live.remove(t)
                    continue
                st["matchings"] += 1
                U = frozenset(v for e in M for v in H.edges[e])
                bucket = buckets.setdefault((t, U), [])
                bucket.append(frozenset(M))
                if len(bucket) < r:
                    continue
                st["sunflower_calls"] += 1
                try:
                    sf = find_sunflower(bucket, r, params.sunflower_nodes)
                except BudgetExhausted:
                    continue
                if sf is None:
                    continue
                cert = RegularCertificate(r, tuple(sorted(set().union(*sf.petals) - sf.core)))
                if check_certificate(H, cert):
                    raise AssertionError("sunflower petals did not form an r-regular subhypergraph")
                if stats is not None:
                    stats.update(st)
                return cert
    if stats is not None:
        stats.update(st)
    return None
