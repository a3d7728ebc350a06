"""Blow-ups at a vertex and the associated short exact sequence.

``Bl_v(G)`` replaces ``v`` by one degree-1 vertex ``{v}x{e}`` per edge
``e`` at ``v``; edge ids are kept.  Reduced complexes fit into

    0 -> Sw̃(Bl_v G) -> Sw̃(G) -> H̃(v) ⊗ Sw̃(Bl_v G){1} -> 0

where the inclusion puts ``∅`` at ``v`` and the projection reads off the
coefficient of the half-edge difference at ``v``.  With the projection
sign ``(-1)**k`` (``k`` = number of half-edge differences before ``v`` in
vertex order), the differential on the cokernel is ``-(1 ⊗ ∂)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import comb

from .errors import ExactnessFailure, RegressionFailure, UnknownVertex
from .families import FIGraphFamily, injections, transition
from .graph import Graph, HalfEdge, build_graph, star_graph
from .homology import FieldHomology, field_betti, slice_homology
from .linalg import Field, IntegerMatrix, Vector, field_rank, integer_rank
from .modules import GradedModuleData, generator_degrees, truncated_module
from .swiatkowski import DIFF_KIND, EMPTY, PureTensor, differential, enumerate_basis, monomials, reduced_states


@dataclass(frozen=True)
class Blowup:
    original: Graph
    vertex: str
    result: Graph
    half_edge_vertex_map: dict

    def __hash__(self):
        return hash((self.original, self.vertex))


@dataclass(frozen=True)
class HalfEdgeDifferenceModule:
    vertex: str
    basis: tuple  # ((h_i, h_0), ...)

    @property
    def rank(self) -> int:
        return len(self.basis)


def blow_up(G: Graph, v: str) -> Blowup:
    if v not in G.vertex_index:
        raise UnknownVertex(v)
    new = {HalfEdge(v, e): f"{v}x{e}" for e in G.incident[v]}
    verts = [w for w in G.vertices if w != v] + list(new.values())
    edges = []
    for e, (a, b) in G.edges:
        a = new[HalfEdge(v, e)] if a == v else a
        b = new[HalfEdge(v, e)] if b == v else b
        edges.append((e, (a, b)))
    return Blowup(G, v, build_graph(verts, edges), new)


def half_edge_differences(G: Graph, v: str) -> HalfEdgeDifferenceModule:
    if v not in G.vertex_index:
        raise UnknownVertex(v)
    return HalfEdgeDifferenceModule(v, tuple((s.half, s.anchor) for s in reduced_states(G, v)))


def is_invariant_vertex(family: FIGraphFamily, v: str, n: int) -> bool:
    """``v`` is fixed by every permutation of the copies of ``G_n``."""
    return all(transition(family, f, n, n)(v) == v for f in injections(n, n))


# -- the short exact sequence ---------------------------------------------------

class _SES:
    """Bases and index bookkeeping for one blow-up."""

    def __init__(self, G: Graph, v: str):
        self.G, self.v = G, v
        self.bl = blow_up(G, v)
        self.B = self.bl.result
        self.hdiff = half_edge_differences(G, v)
        self.mu1 = self.hdiff.rank
        self.vpos = G.vertex_index[v]
        # vertex positions of G - v inside Bl_v(G)
        self.pos_in_bl = [self.B.vertex_index[w] for w in G.vertices if w != v]
        self.diff_index = {(s.half, s.anchor): i for i, s in enumerate(reduced_states(G, v))}
        if G.edge_ids != self.B.edge_ids:
            raise AssertionError("blow-up must keep the edge order")

    def to_bl(self, t: PureTensor) -> PureTensor:
        states = [EMPTY] * self.B.num_vertices
        rest = t.states[:self.vpos] + t.states[self.vpos + 1:]
        for p, s in zip(self.pos_in_bl, rest):
            states[p] = s
        return PureTensor(t.monomial, tuple(states))

    def from_bl(self, t: PureTensor) -> PureTensor:
        rest = [t.states[p] for p in self.pos_in_bl]
        return PureTensor(t.monomial, tuple(rest[:self.vpos]) + (EMPTY,) + tuple(rest[self.vpos:]))

    def cokernel_dim(self, q: int, n: int) -> int:
        if q < 1 or n < 1:
            return 0
        return self.mu1 * enumerate_basis(self.B, q - 1, n - 1).dim

    def inclusion(self, q: int, n: int) -> IntegerMatrix:
        src = enumerate_basis(self.B, q, n)
        tgt = enumerate_basis(self.G, q, n)
        return IntegerMatrix(tgt.dim, src.dim, [{tgt.index[self.from_bl(t)]: 1} for t in src.basis])

    def projection(self, q: int, n: int) -> IntegerMatrix:
        src = enumerate_basis(self.G, q, n)
        rows = self.cokernel_dim(q, n)
        if not rows:
            return IntegerMatrix(0, src.dim)
        tgt = enumerate_basis(self.B, q - 1, n - 1)
        cols = []
        for t in src.basis:
            s = t.states[self.vpos]
            if s.kind != DIFF_KIND:
                cols.append({})
                continue
            before = sum(1 for x in t.states[:self.vpos] if x.degree)
            sign = -1 if before % 2 else 1
            rest = PureTensor(t.monomial, t.states[:self.vpos] + (EMPTY,) + t.states[self.vpos + 1:])
            i = self.diff_index[(s.half, s.anchor)]
            cols.append({i * tgt.dim + tgt.index[self.to_bl(rest)]: sign})
        return IntegerMatrix(rows, src.dim, cols)

    def cokernel_differential(self, q: int, n: int) -> IntegerMatrix:
        """``-(1 ⊗ ∂)`` from the ``(q, n)`` to the ``(q-1, n)`` cokernel slice."""
        src_dim, tgt_dim = self.cokernel_dim(q, n), self.cokernel_dim(q - 1, n)
        if not src_dim or not tgt_dim:
            return IntegerMatrix(tgt_dim, src_dim, [{} for _ in range(src_dim)])
        d = differential(self.B, q - 1, n - 1)
        cols = []
        for i in range(self.mu1):
            for col in d.columns:
                cols.append({i * d.rows + r: -c for r, c in col.items()})
        return IntegerMatrix(tgt_dim, src_dim, cols)


def ses_matrices(G: Graph, v: str, q: int, n: int) -> tuple[IntegerMatrix, IntegerMatrix]:
    """``(inclusion, projection)`` at bigrade ``(q, n)``."""
    ses = _SES(G, v)
    return ses.inclusion(q, n), ses.projection(q, n)


def _homology_rank_of_map(M: IntegerMatrix, src: FieldHomology, tgt: FieldHomology) -> int:
    if not src.dim or not tgt.dim:
        return 0
    return field_rank([tgt.coordinates(M.apply(z)) for z in src.representatives], tgt.field)


def verify_les(G: Graph, v: str, q_max: int, n_max: int, field="Q", strict: bool = False) -> dict:
    """Check the SES degreewise and the long exact sequence by ranks.

    Returns a JSON-ready report with one entry per ``(q, n)`` and an
    overall ``passed`` flag.  With ``strict`` a failure raises
    :class:`ExactnessFailure`.
    """
    F = Field.parse(field)
    ses = _SES(G, v)
    B = ses.B
    entries = []
    les = []
    passed = True
    for n in range(n_max + 1):
        # the whole sequence at weight n lives in q <= n
        top = n + 1
        hom_bl = {q: slice_homology(B, q, n, True, F) for q in range(top + 1)}
        hom_g = {q: slice_homology(G, q, n, True, F) for q in range(top + 1)}
        hom_c = {}
        for q in range(top + 1):
            d_out = ses.cokernel_differential(q, n)
            d_in = ses.cokernel_differential(q + 1, n)
            hom_c[q] = FieldHomology(d_in.columns, d_out.columns, F)
        rank_i, rank_p = {}, {}
        for q in range(top + 1):
            rank_i[q] = _homology_rank_of_map(ses.inclusion(q, n), hom_bl[q], hom_g[q])
            rank_p[q] = _homology_rank_of_map(ses.projection(q, n), hom_g[q], hom_c[q])
        alt = sum((-1) ** q * (hom_bl[q].dim - hom_g[q].dim + hom_c[q].dim) for q in range(top + 1))
        les_ok = alt == 0
        for q in range(top + 1):
            delta_from_c = hom_c[q].dim - rank_p[q]
            delta_into_bl = hom_bl[q - 1].dim - rank_i[q - 1] if q >= 1 else 0
            les_ok &= hom_g[q].dim == rank_i[q] + rank_p[q]
            les_ok &= delta_from_c == delta_into_bl
        les.append({"n": n, "alternating_sum": alt, "passed": bool(les_ok)})
        passed &= les_ok
        for q in range(min(q_max, n) + 1):
            inc, proj = ses.inclusion(q, n), ses.projection(q, n)
            dims = {
                "sub": inc.cols,
                "middle": inc.rows,
                "quotient": proj.rows,
            }
            r_inc, r_proj = integer_rank(inc), integer_rank(proj)
            composite_zero = (proj @ inc).is_zero()
            injective = r_inc == dims["sub"]
            surjective = r_proj == dims["quotient"]
            exact_middle = r_inc + r_proj == dims["middle"]
            # chain-map compatibility with the differentials
            chain_ok = True
            if q >= 1:
                chain_ok &= differential(G, q, n) @ inc == ses.inclusion(q - 1, n) @ differential(B, q, n)
                chain_ok &= ses.projection(q - 1, n) @ differential(G, q, n) == ses.cokernel_differential(q, n) @ proj
            dim_identity = dims["middle"] == dims["sub"] + ses.cokernel_dim(q, n)
            ok = all((composite_zero, injective, surjective, exact_middle, chain_ok, dim_identity))
            passed &= ok
            entries.append({
                "q": q,
                "n": n,
                "dims": dims,
                "rank_inclusion": r_inc,
                "rank_projection": r_proj,
                "composite_zero": composite_zero,
                "exact": injective and surjective and exact_middle,
                "chain_maps": bool(chain_ok),
                "homology": {
                    "blowup": hom_bl[q].dim,
                    "graph": hom_g[q].dim,
                    "cokernel": hom_c[q].dim,
                },
                "rank_i_star": rank_i[q],
                "rank_pi_star": rank_p[q],
                "passed": bool(ok),
            })
    report = {
        "graph": {"vertices": len(G.vertices), "edges": G.num_edges},
        "vertex": v,
        "mu_minus_one": ses.mu1,
        "field": F.tag,
        "q_max": q_max,
        "n_max": n_max,
        "slices": entries,
        "long_exact_sequence": les,
        "passed": bool(passed),
    }
    if strict and not passed:
        bad = [(e["q"], e["n"]) for e in entries if not e["passed"]]
        raise ExactnessFailure(f"exactness fails at {bad or 'the long exact sequence'}")
    return report


# -- the star-graph example -----------------------------------------------------------

def _star_kernel(n: int, N: int, F: Field):
    """``K = ker(H̃(u) ⊗ A{1} -> 𝔪)`` for ``K_{n,1}``, in weights ``0..N``.

    Source basis at weight ``w``: ``(e_{i+1} - e_1) ⊗ m`` with ``m`` of
    degree ``w - 1``, ordered by ``i`` then monomial.
    """
    homs, src_index = [], []
    for w in range(N + 1):
        monos = monomials(n, w - 1)
        index = {(i, m): k for k, (i, m) in enumerate((i, m) for i in range(n - 1) for m in monos)}
        tgt = {m: k for k, m in enumerate(monomials(n, w))}
        cols = []
        for (i, m) in index:
            up_i = m[:i + 1] + (m[i + 1] + 1,) + m[i + 2:]
            up_1 = (m[0] + 1,) + m[1:]
            col: Vector = {}
            F.axpy(col, 1, {tgt[up_i]: 1})
            F.axpy(col, -1, {tgt[up_1]: 1})
            cols.append(col)
        homs.append(FieldHomology([], cols, F))
        src_index.append(index)
    return homs, src_index


def _diff_vector(i: int, j: int, coeff: int = 1) -> dict[int, int]:
    """``e_i - e_j`` (1-based) in the basis ``e_{k+1} - e_1``."""
    out: dict[int, int] = {}
    for idx, c in ((i, coeff), (j, -coeff)):
        if idx != 1:
            out[idx - 2] = out.get(idx - 2, 0) + c
    return {k: c for k, c in out.items() if c}


def star_kernel_element(n: int, triple=(1, 2, 3)) -> dict:
    """``(e_a-e_b) ⊗ x_c + (e_c-e_a) ⊗ x_b + (e_b-e_c) ⊗ x_a`` as ``{(i, mono): coeff}``."""
    a, b, c = triple
    out: dict = {}

    def x(k):
        return tuple(1 if t == k - 1 else 0 for t in range(n))

    for (i, j), var in (((a, b), c), ((c, a), b), ((b, c), a)):
        for k, coeff in _diff_vector(i, j).items():
            key = (k, x(var))
            out[key] = out.get(key, 0) + coeff
    return {k: v for k, v in out.items() if v}


def _kernel_module(n: int, N: int, F: Field):
    homs, src_index = _star_kernel(n, N, F)
    edges = [f"e{i}" for i in range(1, n + 1)]
    keys = [list(idx) for idx in src_index]
    actions = {}
    for w in range(N):
        for var, e in enumerate(edges):
            cols = []
            for z in homs[w].representatives:
                moved = {}
                for k, c in z.items():
                    i, m = keys[w][k]
                    m2 = m[:var] + (m[var] + 1,) + m[var + 1:]
                    moved[src_index[w + 1][(i, m2)]] = c
                cols.append(homs[w + 1].coordinates(moved))
            actions[(e, w)] = cols
    module = GradedModuleData(F, edges, N, [h.dim for h in homs], actions)
    return module, homs, src_index


def star_example_regression(ns=(3, 4, 5), N: int = 4, field="Q", strict: bool = True) -> dict:
    """Reproduce the worked example for the star graphs ``K_{n,1}``.

    Checks, for each ``n``: the three-term element lies in the kernel of
    ``H̃(u) ⊗ A{1} -> 𝔪``; its images under injections ``[3] -> [n]`` span
    the kernel in weight 2 (so the kernel is generated in FI-degree 3);
    the kernel is generated as an ``A``-module in weight 2 alone; the kernel
    matches ``H_1(K_{n,1})`` weight by weight; and ``H_1`` is generated in
    weight 2.
    """
    F = Field.parse(field)
    results = []
    ok_all = True
    for n in ns:
        module, homs, src_index = _kernel_module(n, N, F)
        elem = star_kernel_element(n)
        elem_vec = {src_index[2][key]: c for key, c in elem.items()}
        try:
            homs[2].coordinates(elem_vec)
            in_kernel = True
        except ValueError:
            in_kernel = False
        orbit = []
        for f in injections(3, n):
            img = star_kernel_element(n, (f[1], f[2], f[3]))
            orbit.append(homs[2].coordinates({src_index[2][k]: c for k, c in img.items()}))
        orbit_spans = field_rank(orbit, F) == homs[2].dim
        kernel_gens = generator_degrees(module)
        G = star_graph(n)
        H1 = truncated_module(G, 1, N, F)
        h1_dims = [field_betti(G, 1, w, True, F) for w in range(N + 1)]
        dims_match = list(module.dims) == h1_dims
        h1_gens = generator_degrees(H1)
        checks = {
            "element_in_kernel": in_kernel and bool(elem_vec),
            "fi_generated_by_triples": orbit_spans,
            "kernel_generated_in_weight_2": set(kernel_gens) <= {2},
            "kernel_matches_H1": dims_match,
            "H1_generated_in_weight_2": set(h1_gens) <= {2},
        }
        ok = all(checks.values())
        ok_all &= ok
        results.append({
            "n": n,
            "kernel_dims": list(module.dims),
            "H1_dims": h1_dims,
            "kernel_generator_degrees": {str(k): v for k, v in kernel_gens.items()},
            "H1_generator_degrees": {str(k): v for k, v in h1_gens.items()},
            "expected_weight_2_dim": comb(n - 1, 2),
            "checks": checks,
            "passed": ok,
        })
    report = {"field": F.tag, "truncation": N, "results": results, "passed": ok_all}
    if strict and not ok_all:
        bad = [r["n"] for r in results if not r["passed"]]
        raise RegressionFailure(f"star example fails for n in {bad}")
    return report


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)
