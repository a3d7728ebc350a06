from itertools import combinations
from math import comb, prod

import pytest
import sympy

from gbh.errors import IsolatedVertexInReducedMode, SliceMismatch, UnknownEdge
from gbh.graph import HalfEdge, build_graph, compose_or_check_hom, segment, star_graph
from gbh.linalg import IntegerMatrix
from gbh.swiatkowski import (
    EMPTY,
    VERTEX,
    Half,
    HalfDiff,
    PureTensor,
    boundary_matrix,
    differential,
    dump_matrix,
    edge_action_matrix,
    enumerate_basis,
    format_tensor,
    inclusion_matrix,
    induced_chain_map,
    load_matrix,
)

from conftest import CORPUS

K31 = star_graph(3)


def test_segment_full_basis():
    sl = enumerate_basis(segment(), 0, 1, reduced=False)
    assert sl.basis == (
        PureTensor((1,), (EMPTY, EMPTY)),
        PureTensor((0,), (VERTEX, EMPTY)),
        PureTensor((0,), (EMPTY, VERTEX)),
    )


def test_segment_reduced_q1_empty():
    assert enumerate_basis(segment(), 1, 1).dim == 0


def test_star_reduced_q1():
    sl = enumerate_basis(K31, 1, 1)
    u = K31.vertex_index["u"]
    h = [HalfEdge("u", e) for e in ("e1", "e2", "e3")]
    assert [t.states[u] for t in sl.basis] == [HalfDiff(h[1], h[0]), HalfDiff(h[2], h[0])]
    assert all(sum(t.monomial) == 0 for t in sl.basis)


def test_star_reduced_boundary():
    d = boundary_matrix(enumerate_basis(K31, 1, 1), enumerate_basis(K31, 0, 1))
    assert d.to_lists() == [[-1, -1], [1, 0], [0, 1]]


def test_segment_full_boundary():
    d = differential(segment(), 1, 1, reduced=False)
    src = enumerate_basis(segment(), 1, 1, reduced=False)
    assert [format_tensor(segment(), t) for t in src.basis] == ["1 | a:h(a,e1)", "1 | b:h(b,e1)"]
    # ∂h(a,e1) = x_e1 - a
    assert d.to_lists() == [[1, 1], [-1, 0], [0, -1]]


def test_q0_boundary_has_no_rows():
    assert differential(K31, 0, 2).shape == (0, enumerate_basis(K31, 0, 2).dim)


def test_slice_mismatch():
    with pytest.raises(SliceMismatch):
        boundary_matrix(enumerate_basis(K31, 2, 2), enumerate_basis(K31, 0, 2))
    with pytest.raises(SliceMismatch):
        inclusion_matrix(enumerate_basis(K31, 1, 1), enumerate_basis(K31, 1, 2, reduced=False))


def test_isolated_vertex_rejected():
    G = build_graph(["a", "b", "z"], [("e1", ("a", "b"))])
    with pytest.raises(IsolatedVertexInReducedMode):
        enumerate_basis(G, 0, 1)
    assert enumerate_basis(G, 0, 1, reduced=False).dim == 4


def test_unknown_edge():
    with pytest.raises(UnknownEdge):
        edge_action_matrix(enumerate_basis(K31, 0, 1), "nope")


def test_segment_edge_action_is_identity_shaped():
    for n in range(4):
        M = edge_action_matrix(enumerate_basis(segment(), 0, n), "e1")
        assert M.to_lists() == [[1]]


def test_star_edge_action_shape():
    M = edge_action_matrix(enumerate_basis(K31, 1, 1), "e2")
    assert M.shape == (6, 2)
    assert all(len(c) == 1 for c in M.columns)


def test_inclusion_examples():
    inc = inclusion_matrix(enumerate_basis(K31, 1, 1), enumerate_basis(K31, 1, 1, reduced=False))
    assert [sorted(c.values()) for c in inc.columns] == [[-1, 1], [-1, 1]]
    inc0 = inclusion_matrix(enumerate_basis(K31, 0, 0), enumerate_basis(K31, 0, 0, reduced=False))
    assert inc0.to_lists() == [[1]]


# -- generating-function oracles for slice dimensions ---------------------------------

s, t = sympy.symbols("s t")


def full_dim_oracle(G, q, n):
    series = prod(1 + t + G.degree(v) * s * t for v in G.vertices) * (1 - t) ** (-G.num_edges)
    expansion = sympy.series(series, t, 0, n + 1).removeO()
    return int(sympy.Poly(sympy.expand(expansion), s, t).coeff_monomial(s**q * t**n))


def reduced_dim_oracle(G, q, n):
    if n < q:
        return 0
    ess = [v for v in G.vertices if G.degree(v) >= 2]
    weight = sum(prod(G.degree(v) - 1 for v in S) for S in combinations(ess, q))
    return weight * comb(n - q + G.num_edges - 1, n - q)


@pytest.mark.parametrize("name", ["segment", "star3", "cycle3", "k23"])
def test_slice_dimensions(name):
    G = CORPUS[name]
    for n in range(4):
        for q in range(3):
            assert enumerate_basis(G, q, n, reduced=False).dim == full_dim_oracle(G, q, n)
            assert enumerate_basis(G, q, n).dim == reduced_dim_oracle(G, q, n)


def test_basis_duplicate_free_and_graded(corpus_graph):
    for reduced in (True, False):
        for n in range(4):
            for q in range(3):
                sl = enumerate_basis(corpus_graph, q, n, reduced)
                assert len(set(sl.basis)) == sl.dim
                assert all((b.q, b.n) == (q, n) for b in sl.basis)


# -- structural identities -------------------------------------------------------------

def test_boundary_squares_to_zero(corpus_graph):
    for reduced in (True, False):
        for n in range(5):
            for q in range(2, 4):
                d1 = differential(corpus_graph, q - 1, n, reduced)
                d2 = differential(corpus_graph, q, n, reduced)
                if d1.rows:
                    assert (d1 @ d2).is_zero()


def test_edge_actions_commute_with_each_other_and_boundary(corpus_graph):
    G = corpus_graph
    for reduced in (True, False):
        for n in range(3):
            for q in range(3):
                sl = enumerate_basis(G, q, n, reduced)
                up = enumerate_basis(G, q, n + 1, reduced)
                for e in G.edge_ids:
                    xe = edge_action_matrix(sl, e)
                    if q:
                        below = enumerate_basis(G, q - 1, n, reduced)
                        assert differential(G, q, n + 1, reduced) @ xe == edge_action_matrix(below, e) @ differential(G, q, n, reduced)
                    for f in G.edge_ids:
                        assert edge_action_matrix(up, f) @ xe == edge_action_matrix(up, e) @ edge_action_matrix(sl, f)


def test_inclusion_is_chain_map():
    for n in range(5):
        for q in range(1, 3):
            inc_q = inclusion_matrix(enumerate_basis(K31, q, n), enumerate_basis(K31, q, n, reduced=False))
            inc_qm = inclusion_matrix(enumerate_basis(K31, q - 1, n), enumerate_basis(K31, q - 1, n, reduced=False))
            assert differential(K31, q, n, reduced=False) @ inc_q == inc_qm @ differential(K31, q, n)


def test_induced_maps_commute_with_boundary():
    C = build_graph(["a", "b", "c", "d"], [("e1", ("a", "b")), ("e2", ("b", "c")), ("e3", ("c", "d")), ("e4", ("b", "d"))])
    S = build_graph(["x", "y", "z"], [("f1", ("x", "y")), ("f2", ("y", "z"))])
    for vm in ({"x": "a", "y": "b", "z": "c"}, {"x": "c", "y": "b", "z": "d"}, {"x": "d", "y": "b", "z": "a"}):
        hom = compose_or_check_hom(vm, S, C)
        for reduced in (True, False):
            for n in range(4):
                for q in range(1, 3):
                    lhs = differential(C, q, n, reduced) @ induced_chain_map(hom, q, n, reduced)
                    rhs = induced_chain_map(hom, q - 1, n, reduced) @ differential(S, q, n, reduced)
                    assert lhs == rhs


def test_induced_map_of_identity():
    from gbh.graph import identity_hom

    for q in range(3):
        M = induced_chain_map(identity_hom(K31), q, 3)
        assert M == IntegerMatrix.from_entries(M.rows, M.cols, [(i, i, 1) for i in range(M.cols)])


def test_matrix_dump_round_trip():
    d = differential(K31, 1, 2)
    text = dump_matrix(d, "star3", 1, 2, True)
    assert text.startswith("# graph=star3 bigrade=(1,2) mode=reduced map=boundary shape=")
    header, back = load_matrix(text)
    assert back == d and header["mode"] == "reduced"
