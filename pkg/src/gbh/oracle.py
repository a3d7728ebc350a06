"""Brute-force oracle: the discretized cube-complex model.

For a sufficiently subdivided graph the unordered discretized
configuration space (cells = sets of pairwise disjoint closed cells of the
graph) is a deformation retract of ``UF_n(G)``.  Its cellular chain
complex is built here from scratch, sharing nothing with the Świątkowski
construction except the Smith normal form used to read off homology.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .errors import BudgetExceeded, InsufficientSubdivision
from .graph import Graph, essential_vertices, girth, id_key, subdivide
from .homology import AbelianGroup, homology_at
from .linalg import IntegerMatrix

DEFAULT_BUDGET = 2_000_000


@dataclass(frozen=True)
class DiscreteCell:
    """A set of pairwise disjoint closed cells: some edges and some vertices."""

    edges: tuple[str, ...]
    vertices: tuple[str, ...]

    @property
    def dimension(self) -> int:
        return len(self.edges)

    @property
    def particles(self) -> int:
        return len(self.edges) + len(self.vertices)


@dataclass
class DiscretizedComplex:
    graph: Graph
    n: int
    cells: list[list[DiscreteCell]]  # by dimension
    boundaries: list[IntegerMatrix]  # boundaries[k]: C_k -> C_{k-1}

    def boundary(self, k: int) -> IntegerMatrix:
        if k <= 0:
            return IntegerMatrix(0, len(self.cells[0]) if self.cells else 0)
        if k >= len(self.cells):
            return IntegerMatrix(len(self.cells[k - 1]) if k - 1 < len(self.cells) else 0, 0)
        return self.boundaries[k]

    def homology(self, q: int) -> AbelianGroup:
        return homology_at(self.boundary(q + 1), self.boundary(q))


def topological_edges(G: Graph) -> list[tuple[str, str, int]]:
    """Maximal paths through degree-2 vertices: ``(start, end, length)``.

    Components that are plain cycles have no essential vertex; they show
    up through :func:`girth` instead and are skipped here.
    """
    ess = essential_vertices(G)
    out = []
    seen_edges: set[str] = set()
    for v in sorted(ess, key=id_key):
        for e in G.incident[v]:
            if e in seen_edges:
                continue
            length, prev, cur, edge = 0, v, None, e
            while True:
                seen_edges.add(edge)
                length += 1
                cur = G.other_end(edge, prev)
                if cur in ess:
                    break
                nxt = [f for f in G.incident[cur] if f != edge]
                prev, edge = cur, nxt[0]
            out.append((v, cur, length))
    return out


def is_sufficiently_subdivided(G: Graph, n: int) -> bool:
    """Paths between distinct essential vertices have >= n-1 edges and every
    cycle has >= n+1 edges."""
    if n <= 1:
        return True
    for a, b, length in topological_edges(G):
        if a != b and length < n - 1:
            return False
    return girth(G) >= n + 1


def _cells(G: Graph, n: int, budget: int) -> list[list[DiscreteCell]]:
    ends = G.endpoints
    by_dim: list[list[DiscreteCell]] = []
    total = 0
    for k in range(0, n + 1):
        layer = []
        for es in combinations(G.edge_ids, k):
            used: set[str] = set()
            ok = True
            for e in es:
                a, b = ends[e]
                if a in used or b in used:
                    ok = False
                    break
                used.update((a, b))
            if not ok:
                continue
            free = [v for v in G.vertices if v not in used]
            for vs in combinations(free, n - k):
                layer.append(DiscreteCell(es, vs))
                total += 1
                if total > budget:
                    raise BudgetExceeded(f"more than {budget} cells for n={n} on {G!r}")
        if not layer:
            break
        by_dim.append(layer)
    return by_dim


def discretized_complex(G: Graph, n: int, budget: int = DEFAULT_BUDGET) -> DiscretizedComplex:
    """Cellular chain complex of the discretized model.

    Edges are oriented from the smaller to the larger endpoint; a cube is
    oriented by its edges in sorted order, and the face obtained by moving
    the ``i``-th edge to its head (tail) enters the boundary with sign
    ``(-1)**i`` (``-(-1)**i``).
    """
    if not is_sufficiently_subdivided(G, n):
        raise InsufficientSubdivision(f"{G!r} is too coarse for {n} particles; subdivide first")
    cells = _cells(G, n, budget)
    vkey = G.vertex_index
    index = [{c: i for i, c in enumerate(layer)} for layer in cells]
    boundaries = [IntegerMatrix(0, len(cells[0]))]
    for k in range(1, len(cells)):
        cols = []
        for cell in cells[k]:
            col: dict[int, int] = {}
            for i, e in enumerate(cell.edges):
                tail, head = sorted(G.endpoints[e], key=vkey.__getitem__)
                rest = cell.edges[:i] + cell.edges[i + 1:]
                sign = -1 if i % 2 else 1
                for w, s in ((head, sign), (tail, -sign)):
                    verts = tuple(sorted(cell.vertices + (w,), key=vkey.__getitem__))
                    col[index[k - 1][DiscreteCell(rest, verts)]] = s
            cols.append(col)
        boundaries.append(IntegerMatrix(len(cells[k - 1]), len(cells[k]), cols))
    return DiscretizedComplex(G, n, cells, boundaries)


def oracle_homology(G: Graph, n: int, q: int, budget: int = DEFAULT_BUDGET, k: int | None = None) -> AbelianGroup:
    """``H_q(UF_n(G))`` from the discretized model of ``G`` subdivided ``k`` times.

    ``k`` defaults to ``n + 1``, which is always fine enough.
    """
    if q < 0:
        return AbelianGroup()
    if n == 0:
        return AbelianGroup(1) if q == 0 else AbelianGroup()
    return _subdivided_complex(G, n, budget, k if k is not None else n + 1).homology(q)


@lru_cache(maxsize=64)
def _subdivided_complex(G: Graph, n: int, budget: int, k: int) -> DiscretizedComplex:
    fine, _ = subdivide(G, k)
    return discretized_complex(fine, n, budget)


def verify_oracle(G: Graph, q_max: int, n_max: int, budget: int = DEFAULT_BUDGET) -> dict:
    """Compare Świątkowski homology with the discretized model, slice by slice."""
    from .homology import configuration_homology

    rows = []
    for n in range(n_max + 1):
        for q in range(q_max + 1):
            sw = configuration_homology(G, q, n)
            orc = oracle_homology(G, n, q, budget)
            rows.append({"q": q, "n": n, "swiatkowski": str(sw), "oracle": str(orc), "passed": sw == orc})
    return {"rows": rows, "passed": all(r["passed"] for r in rows)}
