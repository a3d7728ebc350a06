import json

import pytest
from hypothesis import given, strategies as st

from gbh.errors import (
    DuplicateId,
    InputError,
    InvalidK,
    LoopEdge,
    NotAdjacencyPreserving,
    ParallelEdge,
    UnknownEndpoint,
    UnknownVertex,
)
from gbh.graph import (
    HalfEdge,
    build_graph,
    compose_or_check_hom,
    cycle_graph,
    dump_graph,
    essential_vertices,
    girth,
    half_edges_at,
    handshake_holds,
    id_key,
    identity_hom,
    load_graph,
    segment,
    star_graph,
    subdivide,
)

K31 = build_graph(["u", "v", "w", "x"], [("e1", ("u", "v")), ("e2", ("u", "w")), ("e3", ("u", "x"))])


def test_segment_shape():
    G = build_graph(["a", "b"], [("e1", ("a", "b"))])
    assert (G.num_vertices, G.num_edges) == (2, 1)


@pytest.mark.parametrize(
    "verts, edges, err",
    [
        (["c"], [("e1", ("c", "c"))], LoopEdge),
        (["a", "b"], [("e1", ("a", "b")), ("e2", ("b", "a"))], ParallelEdge),
        (["a"], [("e1", ("a", "z"))], UnknownEndpoint),
        (["a", "a"], [], DuplicateId),
        (["a", "b", "c"], [("e1", ("a", "b")), ("e1", ("b", "c"))], DuplicateId),
    ],
)
def test_invalid_graphs(verts, edges, err):
    with pytest.raises(err):
        build_graph(verts, edges)


def test_star_center_degree():
    assert K31.degree("u") == 3


def test_half_edges():
    assert half_edges_at(K31, "u") == [HalfEdge("u", "e1"), HalfEdge("u", "e2"), HalfEdge("u", "e3")]
    assert half_edges_at(segment(), "a") == [HalfEdge("a", "e1")]
    assert half_edges_at(K31, "v") == [HalfEdge("v", "e1")]
    with pytest.raises(UnknownVertex):
        half_edges_at(K31, "nope")


def test_essential_vertices():
    assert essential_vertices(segment()) == {"a", "b"}
    assert essential_vertices(cycle_graph(3)) == set()
    assert essential_vertices(K31) == {"u", "v", "w", "x"}


def test_subdivide():
    P, prov = subdivide(segment(), 2)
    assert (P.num_vertices, P.num_edges) == (3, 2)
    assert len(prov["e1"]) == 2
    C6, _ = subdivide(cycle_graph(3), 2)
    assert C6.num_edges == 6 and girth(C6) == 6 and all(C6.degree(v) == 2 for v in C6.vertices)
    same, prov = subdivide(K31, 1)
    assert same == K31 and prov == {e: [e] for e in K31.edge_ids}
    with pytest.raises(InvalidK):
        subdivide(K31, 0)


@pytest.mark.parametrize("k", [1, 2, 3, 5])
def test_subdivide_keeps_essential_vertices(k):
    G = star_graph(4)
    S, _ = subdivide(G, k)
    assert essential_vertices(S) == essential_vertices(G)
    assert all(S.degree(v) == 2 for v in S.vertices if v not in G.vertex_index)
    assert S.num_edges == k * G.num_edges


def test_homomorphisms():
    assert identity_hom(K31).injective
    swap = compose_or_check_hom({"u": "u", "v": "w", "w": "v", "x": "x"}, K31, K31)
    assert swap.injective
    assert swap.edge_map == {"e1": "e2", "e2": "e1", "e3": "e3"}
    collapse = compose_or_check_hom({"u": "u", "v": "v", "w": "v", "x": "v"}, K31, K31)
    assert not collapse.injective
    with pytest.raises(NotAdjacencyPreserving):
        compose_or_check_hom({"u": "v", "v": "w", "w": "w", "x": "w"}, K31, K31)


def test_composition_of_injective_homs_is_injective():
    swap = compose_or_check_hom({"u": "u", "v": "w", "w": "v", "x": "x"}, K31, K31)
    rot = compose_or_check_hom({"u": "u", "v": "w", "w": "x", "x": "v"}, K31, K31)
    assert swap.compose(rot).injective


def test_natural_sort():
    assert sorted(["e10", "e2", "e1"], key=id_key) == ["e1", "e2", "e10"]


def test_json_round_trip(tmp_path):
    path = tmp_path / "g.json"
    path.write_text(dump_graph(K31))
    assert load_graph(path) == K31


def test_json_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"vertices": ["a", "b"],\n "edges": [{"id": "e1", "ends": ["a", "a"]}]}')
    with pytest.raises(LoopEdge):
        load_graph(bad)
    broken = tmp_path / "broken.json"
    broken.write_text('{"vertices": ["a"],\n "edges": [}')
    with pytest.raises(InputError, match="line 2"):
        load_graph(broken)
    missing = tmp_path / "missing.json"
    missing.write_text(json.dumps({"vertices": ["a"]}))
    with pytest.raises(InputError, match="edges"):
        load_graph(missing)


@st.composite
def random_graphs(draw):
    n = draw(st.integers(1, 7))
    verts = [f"v{i}" for i in range(n)]
    pairs = [(a, b) for i, a in enumerate(verts) for b in verts[i + 1:]]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    return build_graph(verts, [(f"e{i}", p) for i, p in enumerate(chosen)])


@given(random_graphs())
def test_handshake(G):
    assert handshake_holds(G)
    halves = {h for v in G.vertices for h in half_edges_at(G, v)}
    assert halves == {HalfEdge(v, e) for e, ends in G.edges for v in ends}
