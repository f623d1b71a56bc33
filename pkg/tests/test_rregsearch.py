import itertools
import random
from math import factorial

import pytest

from hyperreg.constructions import gen_sts
from hyperreg.errors import HypergraphError
from hyperreg.fixtures import fano, pasch
from hyperreg.hypercore import LinearHypergraph, check_certificate
from hyperreg.oracles import find_r_regular_exact
from hyperreg.regularize import balanced_kpartite, max_transversal_partition
from hyperreg.rregsearch import (
    Sunflower,
    SunflowerParams,
    find_r_regular_sunflower,
    find_sunflower,
    sample_matchings,
)

from conftest import random_linear_3graph


def brute_sunflower(family, r):
    fam = list({frozenset(s) for s in family})
    for combo in itertools.combinations(fam, r):
        core = combo[0] & combo[1]
        if all(a & b == core for a, b in itertools.combinations(combo, 2)):
            return True
    return False


def sts9_balanced():
    H = gen_sts(9)
    return balanced_kpartite(H, parts=max_transversal_partition(H, 3, seed=0))


def test_sunflower_disjoint():
    sf = find_sunflower([{1, 2}, {3, 4}, {5, 6}], 3)
    assert sf.core == frozenset() and sf.is_valid()


def test_sunflower_common_element():
    sf = find_sunflower([{1, 2}, {1, 3}, {1, 4}], 3)
    assert sf.core == frozenset({1}) and len(sf.petals) == 3


def test_sunflower_none():
    assert find_sunflower([{1, 2}, {2, 3}, {1, 3}], 3) is None


def test_sunflower_rejects_mixed_sizes():
    with pytest.raises(HypergraphError):
        find_sunflower([{1}, {1, 2}], 2)


def test_sunflower_invalid_object():
    assert not Sunflower((frozenset({1, 2}), frozenset({1, 3})), frozenset()).is_valid()


@pytest.mark.parametrize("seed", range(10))
def test_sunflower_random_family(seed):
    rng = random.Random(seed)
    family = [frozenset(rng.sample(range(15), 3)) for _ in range(200)]
    sf = find_sunflower(family, 3)
    assert sf is not None and sf.is_valid()
    assert all(p in set(family) for p in sf.petals)


@pytest.mark.parametrize("seed", range(30))
def test_sunflower_small_families(seed):
    rng = random.Random(seed)
    size = rng.randint(2, 3)
    family = [frozenset(rng.sample(range(7), size)) for _ in range(rng.randint(3, 16))]
    sf = find_sunflower(family, 3)
    exists = brute_sunflower(family, 3)
    if sf is not None:
        assert exists and sf.is_valid()
    # more than k!(r-1)^k distinct sets always contain a sunflower
    if len(set(family)) > factorial(size) * 2**size:
        assert sf is not None


def test_matchings_single_edges_cover_all():
    B = sts9_balanced()
    seen = set(sample_matchings(B, 1, 2000, seed=0))
    assert seen == {(i,) for i in B.edges}


def test_matchings_include_parallel_classes():
    B = sts9_balanced()
    H = B.host
    matchings = set(sample_matchings(B, 3, 20_000, seed=1))
    perfect = {M for M in matchings if len({v for i in M for v in H.edges[i]}) == 9}
    # all four parallel classes of the affine plane, minus the one formed by the parts
    classes = {M for M in itertools.combinations(range(H.m), 3)
               if len({v for i in M for v in H.edges[i]}) == 9}
    assert len(classes) == 4
    assert perfect == {M for M in classes if set(M) <= set(B.edges)}
    assert len(perfect) == 3


def test_matchings_too_large_is_empty():
    assert list(sample_matchings(sts9_balanced(), 4, 500, seed=0)) == []


@pytest.mark.parametrize("seed", range(5))
def test_pipeline_sts9(seed):
    H = gen_sts(9)
    stats = {}
    cert = find_r_regular_sunflower(H, 2, seed=seed, stats=stats)
    assert cert is not None and len(cert.edges) == 6
    assert check_certificate(H, cert) == []
    assert stats["matchings"] <= 100_000


def test_pipeline_pasch_returns_none():
    # any two Pasch edges meet, so no matching has two edges
    assert find_r_regular_sunflower(pasch(), 2, SunflowerParams(matching_budget=5_000), seed=0) is None


def test_pipeline_fano_returns_none():
    # any two Fano lines meet, so no matching has two edges
    assert find_r_regular_sunflower(fano(), 2, SunflowerParams(matching_budget=5_000), seed=0) is None


def test_pipeline_empty():
    assert find_r_regular_sunflower(LinearHypergraph(5, [], k=3), 2) is None


def test_pipeline_theoretical_t_runs():
    cert = find_r_regular_sunflower(gen_sts(9), 2, SunflowerParams(t="theoretical", matching_budget=5_000), seed=0)
    if cert is not None:
        assert check_certificate(gen_sts(9), cert) == []


@pytest.mark.parametrize("seed", range(25))
def test_pipeline_sound_on_regular_free_hosts(seed):
    H = random_linear_3graph(seed, m_max=14)
    for r in (2, 3):
        cert = find_r_regular_sunflower(H, r, SunflowerParams(matching_budget=1_000), seed=seed)
        if find_r_regular_exact(H, r) is None:
            assert cert is None
        elif cert is not None:
            assert check_certificate(H, cert) == []
