"""Edge-linear FI-graph families ``G ⊔_H^n G'`` and stabilization scans.

A family is given by gluing data: a base graph ``G``, a copy graph ``G'``
and an overlap graph ``H`` with injective homomorphisms into both.  The
``n``-th member glues ``n`` copies of ``G'`` to ``G`` along ``H``.  Copy
``i`` (1-based) contributes vertices ``copy{i}:{v}`` and edges
``copy{i}:{e}`` for every vertex/edge of ``G'`` outside the image of ``H``.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import permutations
from typing import Mapping, Sequence

from .errors import InputError, NBelowTail, NotEdgeLinear, NotInjective, WindowTooSmall
from .graph import Graph, GraphHom, build_graph, compose_or_check_hom, graph_from_dict
from .linalg import Field
from .modules import koszul_betti, truncated_module


@dataclass(frozen=True, eq=False)
class FIGraphFamily:
    base: Graph
    copy: Graph
    overlap: Graph
    embed_base: GraphHom
    embed_copy: GraphHom
    n_min: int = 0
    name: str = "family"

    def __post_init__(self):
        for hom, label in ((self.embed_base, "embed_base"), (self.embed_copy, "embed_copy")):
            if not hom.injective:
                raise NotInjective(f"{label} must be injective")
        if self.n_min < 0:
            raise InputError("n_min must be nonnegative")

    @cached_property
    def _glue(self) -> dict[str, str]:
        """Copy vertex in the image of the overlap -> base vertex."""
        return {self.embed_copy(h): self.embed_base(h) for h in self.overlap.vertices}

    @cached_property
    def _shared_edges(self) -> set[str]:
        """Edges of the copy that are images of overlap edges (glued, not copied)."""
        return {self.embed_copy.edge_map[e] for e in self.overlap.edge_ids}

    def copy_vertex(self, i: int, v: str) -> str:
        return self._glue.get(v) or f"copy{i}:{v}"

    def __call__(self, n: int) -> Graph:
        return evaluate(self, n)


def evaluate(family: FIGraphFamily, n: int) -> Graph:
    if n < family.n_min:
        raise NBelowTail(f"n={n} is below the tail start {family.n_min}")
    return _evaluate(family, n)


def _evaluate(family: FIGraphFamily, n: int) -> Graph:
    cache = family.__dict__.setdefault("_members", {})
    if n in cache:
        return cache[n]
    verts = list(family.base.vertices)
    edges = list(family.base.edges)
    glue = family._glue
    shared = family._shared_edges
    for i in range(1, n + 1):
        verts += [f"copy{i}:{v}" for v in family.copy.vertices if v not in glue]
        for e, (a, b) in family.copy.edges:
            if e in shared:
                continue
            edges.append((f"copy{i}:{e}", (family.copy_vertex(i, a), family.copy_vertex(i, b))))
    G = build_graph(verts, edges)
    cache[n] = G
    return G


def transition(family: FIGraphFamily, f: Mapping[int, int], n: int, r: int) -> GraphHom:
    """``G(f) : G_n -> G_r`` for an injection ``f : [n] -> [r]`` (1-based)."""
    f = dict(f)
    if sorted(f) != list(range(1, n + 1)):
        raise NotInjective(f"f must be defined exactly on 1..{n}")
    if len(set(f.values())) != n or any(not 1 <= x <= r for x in f.values()):
        raise NotInjective(f"f is not an injection [{n}] -> [{r}]")
    src, tgt = evaluate(family, n), evaluate(family, r)
    vm = {v: v for v in family.base.vertices}
    for i in range(1, n + 1):
        for v in family.copy.vertices:
            if v not in family._glue:
                vm[f"copy{i}:{v}"] = f"copy{f[i]}:{v}"
    return compose_or_check_hom(vm, src, tgt)


def injections(n: int, r: int) -> list[dict[int, int]]:
    return [dict(zip(range(1, n + 1), img)) for img in permutations(range(1, r + 1), n)]


def compose_injections(f: Mapping[int, int], g: Mapping[int, int]) -> dict[int, int]:
    """``g ∘ f``."""
    return {i: g[f[i]] for i in f}


@dataclass(frozen=True)
class LinearPolynomial:
    a: int
    b: int

    def __call__(self, n: int) -> int:
        return self.a * n + self.b


def edge_count_check(family: FIGraphFamily, window: Sequence[int]) -> LinearPolynomial:
    """Fit ``|E(G_n)| = a n + b`` through the first two points, verify the rest."""
    window = list(window)
    if len(window) < 3:
        raise WindowTooSmall("edge-linearity check needs at least three values of n")
    counts = [(n, evaluate(family, n).num_edges) for n in window]
    (n0, c0), (n1, c1) = counts[0], counts[1]
    slope = Fraction(c1 - c0, n1 - n0)
    if slope.denominator != 1:
        raise NotEdgeLinear(f"non-integral slope {slope}")
    poly = LinearPolynomial(int(slope), c0 - int(slope) * n0)
    for n, c in counts[2:]:
        if poly(n) != c:
            raise NotEdgeLinear(f"|E(G_{n})| = {c} but the linear fit predicts {poly(n)}")
    return poly


# -- scans ------------------------------------------------------------------

def _betti_for_n(args) -> int:
    family, n, q, p, j, field, reduced = args
    G = evaluate(family, n)
    M = truncated_module(G, q, j, field, reduced)
    if p > M.num_vars:
        return 0
    return koszul_betti(M, p, j)


def _map(fn, items, jobs: int):
    if jobs and jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def betti_sequence(family: FIGraphFamily, q: int, p: int, j: int, n_range: Sequence[int],
                   field="Q", reduced: bool = True, jobs: int = 1) -> list[int]:
    """``[β_{p,j}(H_q(G_n; k)) for n in n_range]``."""
    F = Field.parse(field)
    ns = list(n_range)
    for n in ns:
        if n < family.n_min:
            raise NBelowTail(f"n={n} is below the tail start {family.n_min}")
    return _map(_betti_for_n, [(family, n, q, p, j, F, reduced) for n in ns], jobs)


def _support_for_n(args) -> tuple[list[int], list[int]]:
    family, n, q, p, j_max, field, reduced = args
    M = truncated_module(evaluate(family, n), q, j_max, field, reduced)
    values = [koszul_betti(M, p, j) if p <= M.num_vars else 0 for j in range(j_max + 1)]
    return values


@dataclass
class StabilizationReport:
    target: dict
    window: list[int]
    values: list = field(default_factory=list)
    status: str = "NotStabilizedInWindow"
    coefficients: list[Fraction] | None = None  # constant term first
    stable_from: int | None = None
    holdout: list[int] = field(default_factory=list)
    supports: dict[int, list[int]] | None = None

    @property
    def fitted(self) -> bool:
        return self.status in ("Fitted", "Constant")

    @property
    def degree(self) -> int | None:
        if self.coefficients is None:
            return None
        return max((i for i, c in enumerate(self.coefficients) if c), default=-1)

    def polynomial(self, n) -> Fraction:
        return sum(c * n ** i for i, c in enumerate(self.coefficients))

    def describe_polynomial(self) -> str:
        if self.coefficients is None:
            return "-"
        terms = []
        for i, c in reversed(list(enumerate(self.coefficients))):
            if c:
                mono = "" if i == 0 else ("n" if i == 1 else f"n^{i}")
                terms.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(terms) if terms else "0"

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "window": self.window,
            "values": self.values,
            "status": self.status,
            "coefficients": None if self.coefficients is None else [str(c) for c in self.coefficients],
            "polynomial": self.describe_polynomial(),
            "stable_from": self.stable_from,
            "holdout": self.holdout,
            "supports": None if self.supports is None else {str(k): v for k, v in self.supports.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "StabilizationReport":
        coeffs = d.get("coefficients")
        sup = d.get("supports")
        return cls(
            target=d["target"],
            window=list(d["window"]),
            values=list(d["values"]),
            status=d["status"],
            coefficients=None if coeffs is None else [Fraction(c) for c in coeffs],
            stable_from=d.get("stable_from"),
            holdout=list(d.get("holdout", [])),
            supports=None if sup is None else {int(k): list(v) for k, v in sup.items()},
        )


def _interpolate(xs: Sequence[int], ys: Sequence) -> list[Fraction]:
    """Coefficients (constant first) of the interpolating polynomial, exactly."""
    k = len(xs)
    coeffs = [Fraction(0)] * k
    for i in range(k):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for m in range(k):
            if m == i:
                continue
            basis = [Fraction(0)] + basis  # multiply by n
            for t in range(len(basis) - 1):
                basis[t] -= xs[m] * basis[t + 1]
            denom *= xs[i] - xs[m]
        for t in range(len(basis)):
            coeffs[t] += Fraction(ys[i]) * basis[t] / denom
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def detect_polynomial(seq: Sequence, n_range: Sequence[int], max_degree: int,
                      min_holdout: int = 2) -> StabilizationReport:
    """Fit a polynomial of degree ``<= max_degree`` to the trailing values.

    The interpolant through the last ``max_degree + 1`` points is checked
    backwards against earlier points; a fit is claimed when at least
    ``min_holdout`` earlier points agree.  A disagreement before that is
    reported as ``NotStabilizedInWindow`` (a status: polynomiality is only
    expected for large ``n``).
    """
    seq, ns = list(seq), list(n_range)
    if len(seq) != len(ns):
        raise ValueError("sequence and n_range differ in length")
    need = max_degree + 1
    if len(seq) < need + 1:
        raise WindowTooSmall(f"{len(seq)} values cannot test a degree-{max_degree} fit")
    coeffs = _interpolate(ns[-need:], seq[-need:])

    def value(n):
        return sum(c * n ** i for i, c in enumerate(coeffs))

    start = len(seq) - need
    while start > 0 and value(ns[start - 1]) == seq[start - 1]:
        start -= 1
    holdout = ns[start:len(seq) - need]
    report = StabilizationReport(
        target={"max_degree": max_degree},
        window=ns,
        values=seq,
        holdout=holdout,
    )
    if len(holdout) >= min_holdout:
        report.status = "Constant" if len(coeffs) == 1 else "Fitted"
        report.coefficients = coeffs
        report.stable_from = ns[start]
    elif start == 0:
        raise WindowTooSmall(
            f"the fit agrees on all {len(seq)} values but only {len(holdout)} are held out; "
            f"need {min_holdout}"
        )
    return report


def support_stabilization(family: FIGraphFamily, q: int, p: int, n_range: Sequence[int], j_max: int,
                          field="Q", reduced: bool = True, jobs: int = 1,
                          min_trailing: int = 3) -> StabilizationReport:
    """Supports ``{j <= j_max : β_{p,j}(H_q(G_n)) != 0}`` across the window.

    ``status`` is ``Constant`` when the support is the same for every ``n``
    in the window; otherwise ``stable_from`` records where a trailing run of
    at least ``min_trailing`` identical supports begins (``None`` if there
    is none) and the status is ``NotStabilizedInWindow``.
    """
    F = Field.parse(field)
    ns = list(n_range)
    for n in ns:
        if n < family.n_min:
            raise NBelowTail(f"n={n} is below the tail start {family.n_min}")
    tables = _map(_support_for_n, [(family, n, q, p, j_max, F, reduced) for n in ns], jobs)
    supports = {n: [j for j, b in enumerate(vals) if b] for n, vals in zip(ns, tables)}
    report = StabilizationReport(
        target={"q": q, "p": p, "j_max": j_max, "field": F.tag},
        window=ns,
        values=[dict((j, b) for j, b in enumerate(vals) if b) for vals in tables],
        supports=supports,
    )
    seqs = [tuple(supports[n]) for n in ns]
    start = len(seqs) - 1
    while start > 0 and seqs[start - 1] == seqs[-1]:
        start -= 1
    if start == 0:
        report.status = "Constant"
        report.stable_from = ns[0]
    elif len(seqs) - start >= min_trailing:
        report.stable_from = ns[start]
    return report


# -- named families -------------------------------------------------------------

def _hom(src: Graph, tgt: Graph, vm: Mapping[str, str]) -> GraphHom:
    return compose_or_check_hom(vm, src, tgt)


def star_family(n_min: int = 1) -> FIGraphFamily:
    """``G_n = K_{n,1}``: one edge glued ``n`` times at its endpoint ``c``."""
    base = build_graph(["u"], [])
    copy = build_graph(["c", "l"], [("e", ("c", "l"))])
    overlap = build_graph(["h"], [])
    return FIGraphFamily(base, copy, overlap, _hom(overlap, base, {"h": "u"}),
                         _hom(overlap, copy, {"h": "c"}), n_min, "star")


def bipartite_family(m: int, n_min: int = 1) -> FIGraphFamily:
    """``G_n = K_{n,m}``: a star with ``m`` leaves glued along its leaves."""
    base_vs = [f"b{j}" for j in range(1, m + 1)]
    base = build_graph(base_vs, [])
    copy = build_graph(["c", *[f"y{j}" for j in range(1, m + 1)]],
                       [(f"f{j}", ("c", f"y{j}")) for j in range(1, m + 1)])
    overlap = build_graph([f"h{j}" for j in range(1, m + 1)], [])
    return FIGraphFamily(
        base, copy, overlap,
        _hom(overlap, base, {f"h{j}": f"b{j}" for j in range(1, m + 1)}),
        _hom(overlap, copy, {f"h{j}": f"y{j}" for j in range(1, m + 1)}),
        n_min, f"K_{{n,{m}}}",
    )


def wedge_family(base: Graph, base_vertex: str, copy: Graph, copy_vertex: str,
                 n_min: int = 0, name: str = "wedge") -> FIGraphFamily:
    """``G ∨^n G'``: copies of ``G'`` wedged at one vertex."""
    overlap = build_graph(["h"], [])
    return FIGraphFamily(base, copy, overlap, _hom(overlap, base, {"h": base_vertex}),
                         _hom(overlap, copy, {"h": copy_vertex}), n_min, name)


# -- JSON -----------------------------------------------------------------------

def family_from_dict(data: Mapping) -> FIGraphFamily:
    try:
        base = graph_from_dict(data["base"])
        copy = graph_from_dict(data["copy"])
        overlap = graph_from_dict(data["overlap"])
        eb = compose_or_check_hom(data["embed_base"], overlap, base)
        ec = compose_or_check_hom(data["embed_copy"], overlap, copy)
    except KeyError as exc:
        raise InputError(f"family: missing field {exc.args[0]!r}") from None
    return FIGraphFamily(base, copy, overlap, eb, ec, int(data.get("n_min", 0)), data.get("name", "family"))


def family_to_dict(family: FIGraphFamily) -> dict:
    return {
        "name": family.name,
        "base": family.base.to_dict(),
        "copy": family.copy.to_dict(),
        "overlap": family.overlap.to_dict(),
        "embed_base": dict(family.embed_base.vertex_map),
        "embed_copy": dict(family.embed_copy.vertex_map),
        "n_min": family.n_min,
    }


def load_family(path) -> FIGraphFamily:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    return family_from_dict(data)


@dataclass
class FamilyScan:
    q: int
    p: int
    window: list[int]
    values: dict[int, list[int]]  # j -> [β_{p,j}(H_q(G_n)) for n in window]
    polynomials: dict[int, StabilizationReport]
    support: StabilizationReport

    def rows(self) -> list[tuple[int, int, int, int, int]]:
        return [(n, self.q, self.p, j, vals[k])
                for k, n in enumerate(self.window) for j, vals in sorted(self.values.items())]

    def to_csv(self) -> str:
        lines = ["n,q,p,j,beta"] + [",".join(map(str, r)) for r in self.rows()]
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "p": self.p,
            "window": self.window,
            "polynomials": {str(j): r.to_dict() for j, r in sorted(self.polynomials.items())},
            "support": self.support.to_dict(),
        }


def scan_family(family: FIGraphFamily, q: int, p: int, n_range: Sequence[int], j_max: int,
                field="Q", max_degree: int = 2, reduced: bool = True, jobs: int = 1) -> FamilyScan:
    """Betti numbers ``β_{p,j}``, ``j <= j_max``, across the window, with fits."""
    F = Field.parse(field)
    ns = list(n_range)
    if len(ns) < max_degree + 3:
        raise WindowTooSmall(f"a window of {len(ns)} values cannot test a degree-{max_degree} fit")
    support = support_stabilization(family, q, p, ns, j_max, F, reduced, jobs)
    values = {j: [support.values[k].get(j, 0) for k in range(len(ns))] for j in range(j_max + 1)}
    polys = {}
    for j, seq in values.items():
        rep = detect_polynomial(seq, ns, max_degree)
        rep.target = {"q": q, "p": p, "j": j, "field": F.tag, "max_degree": max_degree}
        polys[j] = rep
    return FamilyScan(q, p, ns, values, polys, support)
