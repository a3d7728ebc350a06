"""The Świątkowski complex of a graph and its reduced subcomplex.

A basis element (:class:`PureTensor`) is an edge monomial, stored as an
exponent vector aligned with ``G.edge_ids``, together with one
:class:`VertexState` per vertex, aligned with ``G.vertices``.  Its
bigrade is ``(q, n)``: ``q`` counts the half-edge factors and ``n`` is the
particle number (monomial degree + vertex symbols + ``q``).

Conventions fixed here (everything downstream depends on them):

* reduced basis at a vertex: ``h_i - h_0`` where ``h_0`` is the half-edge
  with the smallest edge id;
* the differential is a derivation over the tensor factors in vertex
  order, so the factor at position ``p`` picks up ``(-1)**k`` with ``k``
  the number of half-edge factors before ``p``;
* basis order is lexicographic in (monomial, states): monomials compare
  by exponent vector with larger exponents of earlier edges first (so
  ``x_e1`` precedes ``x_e2``), and occupied states precede empty ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, combinations_with_replacement, product
from typing import NamedTuple

from .errors import IsolatedVertexInReducedMode, SliceMismatch, UnknownEdge
from .graph import Graph, GraphHom, HalfEdge, id_key
from .linalg import IntegerMatrix, add_vectors

EMPTY_KIND, VERTEX_KIND, HALF_KIND, DIFF_KIND = 0, 1, 2, 3


class VertexState(NamedTuple):
    """State of one tensor factor.

    ``kind`` is one of the ``*_KIND`` constants.  ``half`` is the half-edge
    of a ``Half`` state or the minuend ``h_i`` of a ``HalfDiff``;
    ``anchor`` is the subtrahend ``h_j`` of a ``HalfDiff``.
    """

    kind: int
    half: HalfEdge | None = None
    anchor: HalfEdge | None = None

    @property
    def degree(self) -> int:
        return int(self.kind >= HALF_KIND)

    @property
    def weight(self) -> int:
        return int(self.kind != EMPTY_KIND)

    def sort_key(self):
        if self.kind == EMPTY_KIND:
            return (9,)
        if self.half is None:
            return (self.kind,)
        return (self.kind, id_key(self.half.edge), id_key(self.anchor.edge) if self.anchor else ())

    def __str__(self) -> str:
        if self.kind == EMPTY_KIND:
            return "∅"
        if self.kind == VERTEX_KIND:
            return "v"
        if self.kind == HALF_KIND:
            return f"h({self.half.vertex},{self.half.edge})"
        return f"h({self.half.vertex};{self.half.edge}-{self.anchor.edge})"


EMPTY = VertexState(EMPTY_KIND)
VERTEX = VertexState(VERTEX_KIND)


def Half(h: HalfEdge) -> VertexState:
    return VertexState(HALF_KIND, h)


def HalfDiff(i: HalfEdge, j: HalfEdge) -> VertexState:
    if i.vertex != j.vertex or i == j:
        raise ValueError("HalfDiff needs two distinct half-edges at one vertex")
    return VertexState(DIFF_KIND, i, j)


class PureTensor(NamedTuple):
    monomial: tuple[int, ...]
    states: tuple[VertexState, ...]

    @property
    def q(self) -> int:
        return sum(s.degree for s in self.states)

    @property
    def n(self) -> int:
        return sum(self.monomial) + sum(s.weight for s in self.states)

    def sort_key(self):
        return tuple(-k for k in self.monomial), tuple(s.sort_key() for s in self.states)


def format_tensor(G: Graph, t: PureTensor) -> str:
    mono = "·".join(
        f"x_{e}" + (f"^{k}" if k > 1 else "") for e, k in zip(G.edge_ids, t.monomial) if k
    ) or "1"
    factors = " ⊗ ".join(f"{v}:{s}" for v, s in zip(G.vertices, t.states) if s.kind != EMPTY_KIND)
    return f"{mono} | {factors or '∅'}"


@dataclass(frozen=True, eq=False)
class BigradeSlice:
    graph: Graph
    q: int
    n: int
    reduced: bool
    basis: tuple[PureTensor, ...]
    index: dict = field(repr=False)

    def __len__(self) -> int:
        return len(self.basis)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __repr__(self) -> str:
        mode = "reduced" if self.reduced else "full"
        return f"BigradeSlice(q={self.q}, n={self.n}, {mode}, dim={self.dim})"


def monomials(num_vars: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent vectors of the given total degree, ``x_1^d`` first."""
    if degree < 0:
        return []
    if num_vars == 0:
        return [()] if degree == 0 else []
    out = []
    for combo in combinations_with_replacement(range(num_vars), degree):
        exps = [0] * num_vars
        for i in combo:
            exps[i] += 1
        out.append(tuple(exps))
    out.sort(reverse=True)
    return out


def canonical_anchor(G: Graph, v: str) -> HalfEdge:
    return HalfEdge(v, G.incident[v][0])


def reduced_states(G: Graph, v: str) -> list[VertexState]:
    """The canonical basis ``h_{i,0}`` of the degree-1 part of ``S̃(v)``."""
    inc = G.incident[v]
    if len(inc) < 2:
        return []
    anchor = HalfEdge(v, inc[0])
    return [HalfDiff(HalfEdge(v, e), anchor) for e in inc[1:]]


def check_reduced_ok(G: Graph) -> None:
    isolated = [v for v in G.vertices if not G.incident[v]]
    if isolated:
        raise IsolatedVertexInReducedMode(
            f"reduced complex needs a graph without isolated vertices; isolated: {isolated}"
        )


@lru_cache(maxsize=4096)
def enumerate_basis(G: Graph, q: int, n: int, reduced: bool = True) -> BigradeSlice:
    """Basis of the ``(q, n)`` slice, deterministically ordered."""
    if q < 0 or n < 0:
        raise ValueError("bigrade must be nonnegative")
    if reduced:
        check_reduced_ok(G)
    nv, ne = G.num_vertices, G.num_edges
    basis = []
    if reduced:
        options = [reduced_states(G, v) for v in G.vertices]
        active = [i for i, opts in enumerate(options) if opts]
        monos = monomials(ne, n - q)
        if monos:
            for chosen in combinations(active, q):
                for picks in product(*(options[i] for i in chosen)):
                    states = [EMPTY] * nv
                    for i, s in zip(chosen, picks):
                        states[i] = s
                    st = tuple(states)
                    basis.extend(PureTensor(m, st) for m in monos)
    else:
        halves = [[Half(HalfEdge(v, e)) for e in G.incident[v]] for v in G.vertices]
        active = [i for i, opts in enumerate(halves) if opts]
        for chosen in combinations(active, q):
            rest = [i for i in range(nv) if i not in chosen]
            for k in range(0, n - q + 1):
                monos = monomials(ne, n - q - k)
                if not monos:
                    continue
                for gens in combinations(rest, k):
                    for picks in product(*(halves[i] for i in chosen)):
                        states = [EMPTY] * nv
                        for i, s in zip(chosen, picks):
                            states[i] = s
                        for i in gens:
                            states[i] = VERTEX
                        st = tuple(states)
                        basis.extend(PureTensor(m, st) for m in monos)
    basis.sort(key=PureTensor.sort_key)
    basis = tuple(basis)
    return BigradeSlice(G, q, n, reduced, basis, {t: i for i, t in enumerate(basis)})


def _bump(mono: tuple[int, ...], i: int) -> tuple[int, ...]:
    return mono[:i] + (mono[i] + 1,) + mono[i + 1:]


def boundary_of(G: Graph, t: PureTensor) -> dict[PureTensor, int]:
    """``∂t`` as a linear combination of pure tensors."""
    out: dict[PureTensor, int] = {}
    eidx = G.edge_index
    k = 0
    for pos, s in enumerate(t.states):
        if not s.degree:
            continue
        sign = -1 if k % 2 else 1
        k += 1
        emptied = t.states[:pos] + (EMPTY,) + t.states[pos + 1:]
        if s.kind == HALF_KIND:
            terms = [
                (PureTensor(_bump(t.monomial, eidx[s.half.edge]), emptied), sign),
                (PureTensor(t.monomial, t.states[:pos] + (VERTEX,) + t.states[pos + 1:]), -sign),
            ]
        else:
            terms = [
                (PureTensor(_bump(t.monomial, eidx[s.half.edge]), emptied), sign),
                (PureTensor(_bump(t.monomial, eidx[s.anchor.edge]), emptied), -sign),
            ]
        for key, c in terms:
            v = out.get(key, 0) + c
            if v:
                out[key] = v
            else:
                del out[key]
    return out


def _check_pair(a: BigradeSlice, b: BigradeSlice) -> None:
    if a.graph != b.graph or a.reduced != b.reduced or a.n != b.n or a.q != b.q + 1:
        raise SliceMismatch(f"no differential from {a!r} to {b!r}")


@lru_cache(maxsize=4096)
def _boundary_cached(G: Graph, q: int, n: int, reduced: bool) -> IntegerMatrix:
    src = enumerate_basis(G, q, n, reduced)
    if q == 0:
        return IntegerMatrix(0, src.dim)
    tgt = enumerate_basis(G, q - 1, n, reduced)
    cols = []
    for t in src.basis:
        cols.append({tgt.index[u]: c for u, c in boundary_of(G, t).items()})
    return IntegerMatrix(tgt.dim, src.dim, cols)


def boundary_matrix(slice_q: BigradeSlice, slice_qminus1: BigradeSlice | None = None) -> IntegerMatrix:
    """Matrix of ``∂ : (q, n) -> (q-1, n)`` in the slice bases.

    For ``q == 0`` the target is the zero module and the matrix has no
    rows; ``slice_qminus1`` may then be omitted.
    """
    if slice_q.q == 0:
        return IntegerMatrix(0, slice_q.dim)
    if slice_qminus1 is None:
        slice_qminus1 = enumerate_basis(slice_q.graph, slice_q.q - 1, slice_q.n, slice_q.reduced)
    _check_pair(slice_q, slice_qminus1)
    return _boundary_cached(slice_q.graph, slice_q.q, slice_q.n, slice_q.reduced)


def differential(G: Graph, q: int, n: int, reduced: bool = True) -> IntegerMatrix:
    """Shortcut for the boundary matrix out of the ``(q, n)`` slice."""
    if reduced:
        check_reduced_ok(G)
    return _boundary_cached(G, q, n, reduced)


def edge_action_matrix(sl: BigradeSlice, e: str) -> IntegerMatrix:
    """Multiplication by ``x_e`` from ``(q, n)`` to ``(q, n + 1)``."""
    G = sl.graph
    if e not in G.edge_index:
        raise UnknownEdge(e)
    i = G.edge_index[e]
    tgt = enumerate_basis(G, sl.q, sl.n + 1, sl.reduced)
    cols = [{tgt.index[PureTensor(_bump(t.monomial, i), t.states)]: 1} for t in sl.basis]
    return IntegerMatrix(tgt.dim, sl.dim, cols)


def _expand_diff(s: VertexState) -> list[tuple[VertexState, int]]:
    return [(Half(s.half), 1), (Half(s.anchor), -1)]


def inclusion_matrix(reduced_slice: BigradeSlice, full_slice: BigradeSlice) -> IntegerMatrix:
    """Coordinates of the reduced basis in the full basis (``h_{i,j} = h_i - h_j``)."""
    r, f = reduced_slice, full_slice
    if not r.reduced or f.reduced or r.graph != f.graph or (r.q, r.n) != (f.q, f.n):
        raise SliceMismatch(f"cannot include {r!r} into {f!r}")
    cols = []
    for t in r.basis:
        positions = [p for p, s in enumerate(t.states) if s.degree]
        col: dict[int, int] = {}
        for choice in product(*(_expand_diff(t.states[p]) for p in positions)):
            states = list(t.states)
            coeff = 1
            for p, (s, c) in zip(positions, choice):
                states[p] = s
                coeff *= c
            idx = f.index[PureTensor(t.monomial, tuple(states))]
            col = add_vectors(col, {idx: coeff})
        cols.append(col)
    return IntegerMatrix(f.dim, r.dim, cols)


def _permutation_sign(seq: list[int]) -> int:
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def _map_state(hom: GraphHom, s: VertexState) -> list[tuple[VertexState, int]]:
    if s.kind == VERTEX_KIND:
        return [(VERTEX, 1)]
    if s.kind == HALF_KIND:
        return [(Half(hom.half_edge(s.half)), 1)]
    # h_i - h_j  ->  h'_a - h'_b, rewritten in the target's anchored basis
    a, b = hom.half_edge(s.half), hom.half_edge(s.anchor)
    anchor = canonical_anchor(hom.target, a.vertex)
    out = []
    if a != anchor:
        out.append((HalfDiff(a, anchor), 1))
    if b != anchor:
        out.append((HalfDiff(b, anchor), -1))
    return out


def induced_chain_map(hom: GraphHom, q: int, n: int, reduced: bool = True) -> IntegerMatrix:
    """Matrix of ``Sw(φ)`` on the ``(q, n)`` slices for an injective hom ``φ``.

    Monomials are pushed forward along the edge map and states along the
    vertex map; moving the degree-1 factors into the target's vertex order
    contributes the sign of the reordering permutation.
    """
    if not hom.injective:
        raise ValueError("induced maps on Świątkowski complexes need an injective homomorphism")
    S, T = hom.source, hom.target
    src = enumerate_basis(S, q, n, reduced)
    tgt = enumerate_basis(T, q, n, reduced)
    emap = [T.edge_index[hom.edge_map[e]] for e in S.edge_ids]
    vmap = [T.vertex_index[hom.vertex_map[v]] for v in S.vertices]
    cols = []
    for t in src.basis:
        mono = [0] * T.num_edges
        for i, k in enumerate(t.monomial):
            mono[emap[i]] += k
        mono = tuple(mono)
        occupied = [(vmap[p], s) for p, s in enumerate(t.states) if s.kind != EMPTY_KIND]
        sign = _permutation_sign([tp for tp, s in occupied if s.degree])
        col: dict[int, int] = {}
        for choice in product(*(_map_state(hom, s) for _, s in occupied)):
            states = [EMPTY] * T.num_vertices
            coeff = sign
            for (tp, _), (s2, c) in zip(occupied, choice):
                states[tp] = s2
                coeff *= c
            idx = tgt.index[PureTensor(mono, tuple(states))]
            col = add_vectors(col, {idx: coeff})
        cols.append(col)
    return IntegerMatrix(tgt.dim, src.dim, cols)


def dump_matrix(M: IntegerMatrix, graph_name: str, q: int, n: int, reduced: bool, kind: str = "boundary") -> str:
    """Coordinate-list text: a ``#`` header, then one ``row col value`` per line."""
    mode = "reduced" if reduced else "full"
    lines = [f"# graph={graph_name} bigrade=({q},{n}) mode={mode} map={kind} shape={M.rows}x{M.cols}"]
    lines += [f"{r} {c} {v}" for r, c, v in M.entries()]
    return "\n".join(lines) + "\n"


def load_matrix(text: str) -> tuple[dict, IntegerMatrix]:
    """Inverse of :func:`dump_matrix`."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = {}
    for token in lines[0].lstrip("#").split():
        key, _, value = token.partition("=")
        header[key] = value
    rows, cols = (int(x) for x in header["shape"].split("x"))
    entries = [tuple(int(x) for x in ln.split()) for ln in lines[1:]]
    return header, IntegerMatrix.from_entries(rows, cols, entries)
