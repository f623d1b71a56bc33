import json
from math import comb

import pytest

from hyperreg.constructions import gen_sts
from hyperreg.errors import (
    CertificateFormatError,
    DuplicateVertexInEdge,
    IndexOutOfRange,
    LinearityViolation,
    MalformedHeader,
    NonUniformEdge,
    NotTripartite,
    VertexOutOfRange,
    WrongUniformity,
)
from hyperreg.fixtures import fano, octahedron, pasch, tetrahedron
from hyperreg.hypercore import (
    EvenCertificate,
    Hypergraph,
    RegularCertificate,
    TwoRegularColouredCertificate,
    certificate_from_json,
    certificate_to_json,
    check_certificate,
    link_graph,
    pair_hypergraph,
    parse_hypergraph,
    read_hypergraph,
    serialize_hypergraph,
    to_coloured_graph,
    transversal_edges,
)
from hyperreg.regularize import max_transversal_partition

PASCH_TEXT = "3 6 4\n0 1 2\n0 3 4\n1 3 5\n2 4 5\n"


def test_parse_pasch():
    H = parse_hypergraph(PASCH_TEXT)
    assert (H.k, H.n, H.m) == (3, 6, 4)
    assert H.edges[0] == (0, 1, 2)


def test_parse_bytes_and_comments():
    H = parse_hypergraph(b"# pasch\n3 6 4\n0 1 2\n# mid\n0 3 4\n1 3 5\n2 4 5\n")
    assert H == pasch()


@pytest.mark.parametrize(
    "text, err",
    [
        ("3 4 2\n0 1 2\n0 1 3\n", LinearityViolation),
        ("3 6\n0 1 2\n", MalformedHeader),
        ("3 6 1\n0 1\n", NonUniformEdge),
        ("3 6 1\n0 1 1\n", DuplicateVertexInEdge),
        ("3 6 1\n0 1 6\n", VertexOutOfRange),
        ("3 6 2\n0 1 2\n", MalformedHeader),
    ],
)
def test_parse_errors(text, err):
    with pytest.raises(err):
        parse_hypergraph(text)


def test_linearity_violation_names_pair():
    with pytest.raises(LinearityViolation) as exc:
        parse_hypergraph("3 4 2\n0 1 2\n0 1 3\n")
    assert "0" in str(exc.value) and "1" in str(exc.value)


def test_fano_file_degrees(data_dir):
    H = read_hypergraph(data_dir / "fano.txt")
    assert H.m == 7 and H.degrees() == [3] * 7


def test_roundtrip_canonical():
    H = parse_hypergraph("3 6 4\n2 1 0\n0 3 4\n5 3 1\n2 4 5\n")
    text = serialize_hypergraph(H)
    assert parse_hypergraph(text) == H
    assert serialize_hypergraph(parse_hypergraph(text)) == text
    assert text.splitlines()[1] == "0 1 2"


def test_non_linear_allowed_when_requested():
    H = parse_hypergraph("3 4 2\n0 1 2\n0 1 3\n", linear=False)
    assert H.m == 2 and not H.is_linear()


def test_link_graphs():
    assert sorted(link_graph(tetrahedron(), 0)) == [(1, 2), (1, 3), (2, 3)]
    assert sorted(link_graph(pasch(), 0)) == [(1, 2), (3, 4)]
    O = octahedron()
    for v in range(6):
        link = link_graph(O, v)
        assert len(link) == 4
        degs = {}
        for a, b in link:
            degs[a] = degs.get(a, 0) + 1
            degs[b] = degs.get(b, 0) + 1
        assert sorted(degs.values()) == [2, 2, 2, 2]
        antipode = v ^ 1
        assert antipode not in degs and v not in degs


def test_link_requires_three_uniform():
    with pytest.raises(WrongUniformity):
        link_graph(Hypergraph(3, [(0, 1)], k=2), 0)


def test_coloured_graph_pasch():
    parts = [(0, 5), (1, 4), (2, 3)]
    G = to_coloured_graph(pasch(), 0, parts)
    assert (1, 2, 0) in G.edges
    assert G.is_properly_coloured()


def test_coloured_graph_requires_transversal():
    with pytest.raises(NotTripartite):
        to_coloured_graph(pasch(), 0, [(0, 1), (2, 3), (4, 5)])


def test_coloured_graph_sts9():
    H = gen_sts(9)
    parts = max_transversal_partition(H, 3, seed=0)
    idx = transversal_edges(H, parts)
    G = to_coloured_graph(H, 0, parts, idx)
    assert G.m == len(idx)
    assert len(G.colour_counts()) <= len(parts[0])
    assert G.is_properly_coloured()


def test_pair_hypergraph_examples():
    H, pairs = pair_hypergraph(tetrahedron())
    assert (H.n, H.m) == (6, 4) and H.degrees() == [2] * 6
    H, pairs = pair_hypergraph(Hypergraph(3, [(0, 1, 2)], k=3))
    assert H.m == 1 and sorted(pairs[v] for v in H.edges[0]) == [(0, 1), (0, 2), (1, 2)]
    H, pairs = pair_hypergraph(Hypergraph(4, [(0, 1, 2), (0, 1, 3)], k=3))
    shared = set(H.edges[0]) & set(H.edges[1])
    assert len(shared) == 1 and pairs[shared.pop()] == (0, 1)
    assert H.is_linear()


def test_pair_hypergraph_drop_isolated():
    G = Hypergraph(6, [(0, 1, 2)], k=3)
    full, _ = pair_hypergraph(G)
    dropped, pairs = pair_hypergraph(G, drop_isolated=True)
    assert full.n == comb(6, 2) and dropped.n == 3 and len(pairs) == 3


def test_check_certificate_examples():
    assert check_certificate(pasch(), RegularCertificate(2, (0, 1, 2, 3))) == []
    assert check_certificate(fano(), RegularCertificate(3, tuple(range(7)))) == []
    bad = check_certificate(pasch(), RegularCertificate(2, (0, 1)))
    assert len(bad) == 4
    for v in (1, 2, 3, 4):
        assert any(f"vertex {v} " in p for p in bad)


def test_check_certificate_index_range():
    with pytest.raises(IndexOutOfRange):
        check_certificate(pasch(), RegularCertificate(2, (0, 9)))


def test_check_even_and_coloured():
    assert check_certificate(pasch(), EvenCertificate((0, 1, 2, 3))) == []
    assert check_certificate(pasch(), EvenCertificate((0,)))
    assert check_certificate(pasch(), EvenCertificate(()))
    parts = [(0, 5), (1, 4), (2, 3)]
    G = to_coloured_graph(pasch(), 0, parts)
    # the view is a 4-cycle using each colour twice
    assert check_certificate(G, TwoRegularColouredCertificate((0, 1, 2, 3))) == []
    assert check_certificate(G, TwoRegularColouredCertificate((0, 1)))


def test_certificate_json_roundtrip():
    for cert in (
        RegularCertificate(2, (0, 1, 2, 3)),
        EvenCertificate((0, 1, 2, 3)),
        TwoRegularColouredCertificate((0, 2), ((0, 5), (1, 4), (2, 3)), 0),
    ):
        text = certificate_to_json(cert)
        assert certificate_from_json(text) == cert
        assert json.loads(text)["kind"] == cert.kind


def test_certificate_json_rejects_garbage():
    with pytest.raises(CertificateFormatError):
        certificate_from_json('{"kind": "nonsense", "edges": []}')
    with pytest.raises(CertificateFormatError):
        certificate_from_json("not json")
