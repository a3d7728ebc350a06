"""Finite simple graphs with half-edge bookkeeping.

A :class:`Graph` is a 1-dimensional simplicial complex: no loops, no
parallel edges.  Vertex and edge ids are strings; every ordering in the
package (bases, matrices, exterior powers) derives from :func:`id_key`,
so results are reproducible across runs.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple

from .errors import (
    DuplicateId,
    InputError,
    InvalidK,
    LoopEdge,
    NotAdjacencyPreserving,
    ParallelEdge,
    UnknownEdge,
    UnknownEndpoint,
    UnknownVertex,
)

_DIGITS = re.compile(r"(\d+)")


def id_key(name: str) -> tuple:
    """Natural sort key: ``copy2`` sorts before ``copy10``."""
    parts = _DIGITS.split(name)
    return tuple((0, int(p), p) if p.isdigit() else (1, 0, p) for p in parts)


class HalfEdge(NamedTuple):
    vertex: str
    edge: str


@dataclass(frozen=True)
class Graph:
    """Immutable validated graph.  Build with :func:`build_graph`."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, tuple[str, str]], ...]

    @cached_property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e for e, _ in self.edges)

    @cached_property
    def endpoints(self) -> dict[str, tuple[str, str]]:
        return dict(self.edges)

    @cached_property
    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def edge_index(self) -> dict[str, int]:
        return {e: i for i, e in enumerate(self.edge_ids)}

    @cached_property
    def incident(self) -> dict[str, tuple[str, ...]]:
        inc: dict[str, list[str]] = {v: [] for v in self.vertices}
        for e, (a, b) in self.edges:
            inc[a].append(e)
            inc[b].append(e)
        return {v: tuple(sorted(es, key=id_key)) for v, es in inc.items()}

    @cached_property
    def edge_by_ends(self) -> dict[frozenset, str]:
        return {frozenset(ends): e for e, ends in self.edges}

    def degree(self, v: str) -> int:
        try:
            return len(self.incident[v])
        except KeyError:
            raise UnknownVertex(v) from None

    def other_end(self, e: str, v: str) -> str:
        a, b = self.endpoints[e]
        return b if v == a else a

    def neighbors(self, v: str) -> list[str]:
        return [self.other_end(e, v) for e in self.incident[v]]

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def __repr__(self) -> str:
        return f"Graph(|V|={self.num_vertices}, |E|={self.num_edges})"

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"id": e, "ends": list(ends)} for e, ends in self.edges],
        }


def build_graph(vertex_ids: Iterable[str], edge_list: Iterable) -> Graph:
    """Validate and build a graph.

    ``edge_list`` holds ``(edge_id, (u, v))`` pairs; the endpoint pair may
    be any 2-element iterable.
    """
    verts = [str(v) for v in vertex_ids]
    seen: set[str] = set()
    for v in verts:
        if v in seen:
            raise DuplicateId(f"vertex id {v!r} declared twice")
        seen.add(v)
    edges = []
    eids: set[str] = set()
    pairs: dict[frozenset, str] = {}
    for eid, ends in edge_list:
        eid = str(eid)
        ends = [str(x) for x in ends]
        if len(ends) != 2:
            raise InputError(f"edge {eid!r} must have exactly two endpoints")
        if eid in eids or eid in seen:
            raise DuplicateId(f"edge id {eid!r} already in use")
        u, v = ends
        for x in (u, v):
            if x not in seen:
                raise UnknownEndpoint(f"edge {eid!r} endpoint {x!r} is not a vertex")
        if u == v:
            raise LoopEdge(f"edge {eid!r} is a loop at {u!r}")
        key = frozenset((u, v))
        if key in pairs:
            raise ParallelEdge(f"edges {pairs[key]!r} and {eid!r} join {u!r} and {v!r}")
        pairs[key] = eid
        eids.add(eid)
        u, v = sorted((u, v), key=id_key)
        edges.append((eid, (u, v)))
    return Graph(
        vertices=tuple(sorted(verts, key=id_key)),
        edges=tuple(sorted(edges, key=lambda item: id_key(item[0]))),
    )


def half_edges_at(G: Graph, v: str) -> list[HalfEdge]:
    if v not in G.vertex_index:
        raise UnknownVertex(v)
    return [HalfEdge(v, e) for e in G.incident[v]]


def essential_vertices(G: Graph) -> set[str]:
    return {v for v in G.vertices if G.degree(v) != 2}


def subdivide(G: Graph, k: int) -> tuple[Graph, dict[str, list[str]]]:
    """Replace every edge by a path of ``k`` edges.

    Interior vertices are named ``{edge}.{i}`` and the new edges
    ``{edge}/{i}``, numbered from the smaller endpoint.  The returned map
    sends each old edge to its path of new edges.
    """
    if not isinstance(k, int) or k < 1:
        raise InvalidK(f"subdivision parameter must be >= 1, got {k!r}")
    if k == 1:
        return G, {e: [e] for e in G.edge_ids}
    verts = list(G.vertices)
    edges = []
    provenance = {}
    for e, (a, b) in G.edges:
        chain = [a] + [f"{e}.{i}" for i in range(1, k)] + [b]
        verts.extend(chain[1:-1])
        names = [f"{e}/{i}" for i in range(1, k + 1)]
        edges.extend(zip(names, zip(chain[:-1], chain[1:])))
        provenance[e] = names
    return build_graph(verts, edges), provenance


@dataclass(frozen=True)
class GraphHom:
    """Adjacency-preserving vertex map between two graphs."""

    source: Graph
    target: Graph
    vertex_map: Mapping[str, str] = field(hash=False)
    injective: bool = False

    def __call__(self, v: str) -> str:
        return self.vertex_map[v]

    @cached_property
    def edge_map(self) -> dict[str, str]:
        ends = self.target.edge_by_ends
        vm = self.vertex_map
        return {e: ends[frozenset((vm[a], vm[b]))] for e, (a, b) in self.source.edges}

    def half_edge(self, h: HalfEdge) -> HalfEdge:
        return HalfEdge(self.vertex_map[h.vertex], self.edge_map[h.edge])

    def compose(self, after: "GraphHom") -> "GraphHom":
        """Return ``after ∘ self``."""
        if after.source != self.target:
            raise InputError("homomorphisms are not composable")
        vm = {v: after.vertex_map[w] for v, w in self.vertex_map.items()}
        return compose_or_check_hom(vm, self.source, after.target)


def compose_or_check_hom(vertex_map: Mapping[str, str], G: Graph, H: Graph) -> GraphHom:
    """Validate ``vertex_map`` as a homomorphism ``G -> H``.

    Adjacent vertices must map to adjacent (hence distinct) vertices,
    otherwise :class:`NotAdjacencyPreserving` is raised.  The injectivity
    flag is computed.
    """
    vm = {str(k): str(v) for k, v in vertex_map.items()}
    missing = [v for v in G.vertices if v not in vm]
    if missing:
        raise UnknownVertex(f"map undefined on {missing}")
    for v, w in vm.items():
        if v not in G.vertex_index:
            raise UnknownVertex(f"{v!r} is not a vertex of the source")
        if w not in H.vertex_index:
            raise UnknownVertex(f"{w!r} is not a vertex of the target")
    for e, (a, b) in G.edges:
        fa, fb = vm[a], vm[b]
        if frozenset((fa, fb)) not in H.edge_by_ends:
            raise NotAdjacencyPreserving(
                f"edge {e!r}={a}-{b} maps to non-adjacent {fa!r}, {fb!r}"
            )
    injective = len(set(vm.values())) == len(vm)
    return GraphHom(G, H, dict(sorted(vm.items(), key=lambda kv: id_key(kv[0]))), injective)


def identity_hom(G: Graph) -> GraphHom:
    return GraphHom(G, G, {v: v for v in G.vertices}, True)


def relabel_edges(G: Graph, mapping: Mapping[str, str]) -> Graph:
    """Rename edges; used to probe independence of edge-order choices."""
    for e in mapping:
        if e not in G.endpoints:
            raise UnknownEdge(e)
    return build_graph(G.vertices, [(mapping.get(e, e), ends) for e, ends in G.edges])


# -- named graphs ---------------------------------------------------------

def segment() -> Graph:
    return build_graph(["a", "b"], [("e1", ("a", "b"))])


def path_graph(m: int) -> Graph:
    """Path with ``m`` edges."""
    vs = [f"p{i}" for i in range(m + 1)]
    return build_graph(vs, [(f"e{i + 1}", (vs[i], vs[i + 1])) for i in range(m)])


def cycle_graph(m: int) -> Graph:
    vs = [f"c{i}" for i in range(m)]
    return build_graph(vs, [(f"e{i + 1}", (vs[i], vs[(i + 1) % m])) for i in range(m)])


def star_graph(k: int) -> Graph:
    """``K_{k,1}`` with center ``u``."""
    leaves = [f"l{i}" for i in range(1, k + 1)]
    return build_graph(["u", *leaves], [(f"e{i}", ("u", l)) for i, l in enumerate(leaves, 1)])


def complete_bipartite(n: int, m: int) -> Graph:
    left = [f"a{i}" for i in range(1, n + 1)]
    right = [f"b{j}" for j in range(1, m + 1)]
    edges = [(f"e{i}_{j}", (a, b)) for i, a in enumerate(left, 1) for j, b in enumerate(right, 1)]
    return build_graph(left + right, edges)


def theta_graph(arm_length: int = 2) -> Graph:
    """Two vertices joined by three internally disjoint paths."""
    verts = ["s", "t"]
    edges = []
    for arm in range(1, 4):
        chain = ["s"] + [f"t{arm}.{i}" for i in range(1, arm_length)] + ["t"]
        verts.extend(chain[1:-1])
        edges.extend((f"e{arm}.{i}", pair) for i, pair in enumerate(zip(chain, chain[1:]), 1))
    return build_graph(verts, edges)


def disjoint_edges(k: int) -> Graph:
    verts, edges = [], []
    for i in range(1, k + 1):
        verts += [f"s{i}", f"t{i}"]
        edges.append((f"e{i}", (f"s{i}", f"t{i}")))
    return build_graph(verts, edges)


def is_connected(G: Graph) -> bool:
    if not G.vertices:
        return True
    seen = {G.vertices[0]}
    stack = [G.vertices[0]]
    while stack:
        v = stack.pop()
        for w in G.neighbors(v):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(G.vertices)


def girth(G: Graph) -> float:
    """Length of a shortest cycle (``inf`` for forests)."""
    best = float("inf")
    for root in G.vertices:
        dist = {root: 0}
        parent = {root: None}
        queue = [root]
        for v in queue:
            for w in G.neighbors(v):
                if w not in dist:
                    dist[w] = dist[v] + 1
                    parent[w] = v
                    queue.append(w)
                elif parent[v] != w:
                    best = min(best, dist[v] + dist[w] + 1)
    return best


def handshake_holds(G: Graph) -> bool:
    return sum(G.degree(v) for v in G.vertices) == 2 * G.num_edges


# -- JSON -----------------------------------------------------------------

def graph_from_dict(data: Mapping) -> Graph:
    """Parse the ``{"vertices": [...], "edges": [{"id", "ends"}]}`` format."""
    if not isinstance(data, Mapping):
        raise InputError("graph: expected a JSON object")
    if "vertices" not in data or not isinstance(data["vertices"], list):
        raise InputError("graph: field 'vertices' must be a list")
    if "edges" not in data or not isinstance(data["edges"], list):
        raise InputError("graph: field 'edges' must be a list")
    edges = []
    for i, item in enumerate(data["edges"]):
        if not isinstance(item, Mapping) or "id" not in item or "ends" not in item:
            raise InputError(f"graph: edges[{i}] needs fields 'id' and 'ends'")
        ends = item["ends"]
        if not isinstance(ends, list) or len(ends) != 2:
            raise InputError(f"graph: edges[{i}].ends must list two vertex ids")
        edges.append((item["id"], ends))
    try:
        return build_graph(data["vertices"], edges)
    except InputError as exc:
        raise type(exc)(f"graph: {exc}") from None


def load_graph(path) -> Graph:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    return graph_from_dict(data)


def dump_graph(G: Graph, path=None) -> str:
    text = json.dumps(G.to_dict(), indent=2)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text
