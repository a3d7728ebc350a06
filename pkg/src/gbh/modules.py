"""Graded module structure on total homology and its graded Betti numbers.

``H_q(G) = ⊕_n H_q(UF_n(G); k)`` is a graded module over ``k[x_e]``;
:func:`truncated_module` extracts degrees ``0..N`` of it with the edge
actions, and :func:`koszul_betti` computes ``β_{p,j} = dim Tor_p(M, k)_j``
as the middle homology of the Koszul complex
``Λ^{p+1}V ⊗ M_{j-p-1} -> Λ^p V ⊗ M_{j-p} -> Λ^{p-1}V ⊗ M_{j-p+1}``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from math import comb
from typing import Mapping, Sequence

from .errors import IndexOutOfRange, TruncationTooSmall
from .graph import Graph
from .homology import slice_homology
from .linalg import Field, Vector, field_rank
from .swiatkowski import edge_action_matrix, enumerate_basis, monomials


class GradedModuleData:
    """Degrees ``0..N`` of a graded module over ``k[x_e : e in edge_ids]``.

    ``actions[(e, j)]`` is the matrix of ``x_e : M_j -> M_{j+1}`` as a list
    of ``dims[j]`` sparse columns.
    """

    def __init__(self, field: Field, edge_ids: Sequence[str], N: int, dims: Sequence[int],
                 actions: Mapping[tuple[str, int], list[Vector]]):
        if len(dims) != N + 1:
            raise ValueError(f"need N+1 = {N + 1} dimensions, got {len(dims)}")
        self.field = field
        self.edge_ids = tuple(edge_ids)
        self.N = N
        self.dims = tuple(dims)
        self.actions = dict(actions)
        for e in self.edge_ids:
            for j in range(N):
                cols = self.actions.get((e, j))
                if cols is None:
                    if dims[j] and dims[j + 1]:
                        raise ValueError(f"missing action of {e} in degree {j}")
                    self.actions[(e, j)] = [{} for _ in range(dims[j])]
                elif len(cols) != dims[j] or any(r >= dims[j + 1] for c in cols for r in c):
                    raise ValueError(f"action of {e} in degree {j} has the wrong shape")
        self._rank_cache: dict = {}

    def __repr__(self) -> str:
        return f"GradedModuleData({self.field}, vars={len(self.edge_ids)}, dims={self.dims})"

    @property
    def num_vars(self) -> int:
        return len(self.edge_ids)

    def act(self, e: str, j: int, vec: Vector) -> Vector:
        out: Vector = {}
        cols = self.actions[(e, j)]
        for k, a in vec.items():
            self.field.axpy(out, a, cols[k])
        return out

    def commutes(self) -> bool:
        """Check ``x_f x_e = x_e x_f`` on every basis vector of every degree."""
        for j in range(self.N - 1):
            for e, f in combinations(self.edge_ids, 2):
                for k in range(self.dims[j]):
                    v = {k: 1}
                    if self.act(f, j + 1, self.act(e, j, v)) != self.act(e, j + 1, self.act(f, j, v)):
                        return False
        return True

    def hilbert_function(self) -> tuple[int, ...]:
        return self.dims

    def reorder(self, edge_ids: Sequence[str]) -> "GradedModuleData":
        """Same module with the variables listed in a different order."""
        if sorted(edge_ids) != sorted(self.edge_ids):
            raise ValueError("reorder needs a permutation of the variables")
        return GradedModuleData(self.field, edge_ids, self.N, self.dims, self.actions)


def truncated_module(G: Graph, q: int, N: int, field="Q", reduced: bool = True) -> GradedModuleData:
    """Degrees ``0..N`` of ``H_q(G; k)`` with the induced edge actions."""
    if N < 0:
        raise TruncationTooSmall("truncation must be nonnegative")
    F = Field.parse(field)
    homs = [slice_homology(G, q, j, reduced, F) for j in range(N + 1)]
    actions = {}
    for j in range(N):
        if not homs[j].dim:
            continue
        sl = enumerate_basis(G, q, j, reduced)
        for e in G.edge_ids:
            bump = [next(iter(col)) for col in edge_action_matrix(sl, e).columns]
            cols = []
            for z in homs[j].representatives:
                cols.append(homs[j + 1].coordinates({bump[i]: v for i, v in z.items()}))
            actions[(e, j)] = cols
    return GradedModuleData(F, G.edge_ids, N, [h.dim for h in homs], actions)


def polynomial_module(variables: Sequence[str], N: int, field="Q", shift: int = 0) -> GradedModuleData:
    """The free module ``k[x_1..x_m](-shift)``, truncated at ``N``."""
    F = Field.parse(field)
    m = len(variables)
    bases = [monomials(m, j - shift) for j in range(N + 1)]
    index = [{mono: i for i, mono in enumerate(b)} for b in bases]
    actions = {}
    for j in range(N):
        for vi, x in enumerate(variables):
            cols = []
            for mono in bases[j]:
                up = mono[:vi] + (mono[vi] + 1,) + mono[vi + 1:]
                cols.append({index[j + 1][up]: 1})
            actions[(x, j)] = cols
    return GradedModuleData(F, variables, N, [len(b) for b in bases], actions)


def generator_degrees(M: GradedModuleData, up_to: int | None = None) -> dict[int, int]:
    """``{j: β_{0,j}}`` for the degrees with minimal generators.

    ``β_{0,j}`` is the dimension of ``M_j`` modulo the images of
    ``x_e : M_{j-1} -> M_j``.
    """
    top = M.N if up_to is None else up_to
    if top > M.N:
        raise TruncationTooSmall(f"asked for degree {top} but the module is truncated at {M.N}")
    out = {}
    for j in range(top + 1):
        if not M.dims[j]:
            continue
        if j == 0:
            b = M.dims[0]
        else:
            cols = [c for e in M.edge_ids for c in M.actions[(e, j - 1)]]
            b = M.dims[j] - field_rank(cols, M.field)
        if b:
            out[j] = b
    return out


def _subsets(m: int, p: int) -> list[tuple[int, ...]]:
    return list(combinations(range(m), p)) if 0 <= p <= m else []


def koszul_columns(M: GradedModuleData, p: int, j: int) -> tuple[int, list[Vector]]:
    """Columns of ``d_p : Λ^p V ⊗ M_{j-p} -> Λ^{p-1} V ⊗ M_{j-p+1}``.

    ``e_S ⊗ m  ↦  Σ_k (-1)^k e_{S - s_k} ⊗ x_{s_k} m`` with ``S`` sorted.
    Returns ``(number of rows, columns)``.
    """
    m = M.num_vars
    src_deg, tgt_deg = j - p, j - p + 1
    if p <= 0 or p > m or src_deg < 0 or tgt_deg > M.N:
        rows = comb(m, p - 1) * M.dims[tgt_deg] if 0 <= tgt_deg <= M.N and 1 <= p <= m + 1 else 0
        cols = comb(m, p) * M.dims[src_deg] if 0 <= src_deg <= M.N and 0 <= p <= m else 0
        return rows, [{} for _ in range(cols)]
    tgt_sets = {S: i for i, S in enumerate(_subsets(m, p - 1))}
    dim_src, dim_tgt = M.dims[src_deg], M.dims[tgt_deg]
    F = M.field
    cols = []
    for S in _subsets(m, p):
        for b in range(dim_src):
            col: Vector = {}
            for k, s in enumerate(S):
                image = M.actions[(M.edge_ids[s], src_deg)][b]
                if not image:
                    continue
                offset = tgt_sets[S[:k] + S[k + 1:]] * dim_tgt
                sign = -1 if k % 2 else 1
                F.axpy(col, sign, {offset + r: v for r, v in image.items()})
            cols.append(col)
    return comb(m, p - 1) * dim_tgt, cols


def _koszul_rank(M: GradedModuleData, p: int, j: int) -> int:
    key = (p, j)
    if key not in M._rank_cache:
        _, cols = koszul_columns(M, p, j)
        M._rank_cache[key] = field_rank(cols, M.field) if cols else 0
    return M._rank_cache[key]


def koszul_betti(M: GradedModuleData, p: int, j: int) -> int:
    """``β_{p,j}(M) = dim_k Tor_p(M, k)_j``."""
    m = M.num_vars
    if p < 0 or p > m:
        raise IndexOutOfRange(f"homological degree {p} outside 0..{m}")
    if j > M.N:
        raise TruncationTooSmall(f"β_{{{p},{j}}} needs the module up to degree {j}; truncated at {M.N}")
    if j - p < 0:
        return 0
    dim = comb(m, p) * M.dims[j - p]
    if not dim:
        return 0
    return dim - _koszul_rank(M, p, j) - _koszul_rank(M, p + 1, j)


def koszul_squares_to_zero(M: GradedModuleData, p: int, j: int) -> bool:
    """``d_{p} ∘ d_{p+1} = 0`` on ``Λ^{p+1} V ⊗ M_{j-p-1}``."""
    _, upper = koszul_columns(M, p + 1, j)
    _, lower = koszul_columns(M, p, j)
    if not upper or not lower:
        return True
    F = M.field
    for col in upper:
        out: Vector = {}
        for k, a in col.items():
            F.axpy(out, a, lower[k])
        if out:
            return False
    return True


@dataclass
class BettiTable:
    entries: dict[tuple[int, int], int]
    p_max: int
    j_max: int
    field: str = "Q"
    meta: dict = dc_field(default_factory=dict)

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self.entries.get(key, 0)

    def support(self, p: int) -> set[int]:
        return {j for (pp, j), b in self.entries.items() if pp == p and b}

    def nonzero(self) -> list[tuple[int, int, int]]:
        return sorted((p, j, b) for (p, j), b in self.entries.items() if b)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p", "j", "beta"])
        w.writerows(self.nonzero())
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, p_max: int | None = None, j_max: int | None = None, field: str = "Q") -> "BettiTable":
        rows = list(csv.DictReader(io.StringIO(text)))
        entries = {(int(r["p"]), int(r["j"])): int(r["beta"]) for r in rows}
        pm = p_max if p_max is not None else max((p for p, _ in entries), default=0)
        jm = j_max if j_max is not None else max((j for _, j in entries), default=0)
        return cls(entries, pm, jm, field)

    def to_dict(self) -> dict:
        return {
            "field": self.field,
            "p_max": self.p_max,
            "j_max": self.j_max,
            "entries": [{"p": p, "j": j, "beta": b} for p, j, b in self.nonzero()],
        }

    def format(self) -> str:
        """Macaulay2-style grid: rows ``j - p``, columns ``p``."""
        if not self.entries:
            return "(zero table)"
        lines = ["      " + " ".join(f"{p:>5}" for p in range(self.p_max + 1))]
        for r in range(self.j_max + 1):
            cells = []
            for p in range(self.p_max + 1):
                b = self[(p, p + r)]
                cells.append(f"{b if b else '.':>5}")
            lines.append(f"{r:>4}: " + " ".join(cells))
        return "\n".join(lines)


def betti_table(M: GradedModuleData, p_max: int, j_max: int) -> BettiTable:
    if j_max > M.N:
        raise TruncationTooSmall(f"j_max={j_max} exceeds the truncation N={M.N}")
    entries = {}
    for p in range(0, min(p_max, M.num_vars) + 1):
        for j in range(p, j_max + 1):
            b = koszul_betti(M, p, j)
            if b:
                entries[(p, j)] = b
    return BettiTable(entries, p_max, j_max, M.field.tag)


def homology_betti_table(G: Graph, q: int, p_max: int, j_max: int, field="Q", N: int | None = None,
                         reduced: bool = True) -> BettiTable:
    """Betti table of ``H_q(G; k)``, truncating at ``N`` (default ``j_max``)."""
    M = truncated_module(G, q, j_max if N is None else N, field, reduced)
    return betti_table(M, p_max, j_max)
