"""Homology of configuration spaces from the Świątkowski complex.

Integral homology goes through Smith normal form; field homology through
echelon bases.  :class:`FieldHomology` additionally keeps cycle
representatives so that chain maps can be pushed down to homology.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .errors import DimensionMismatch, NotAComplex
from .graph import Graph
from .linalg import Echelon, Field, IntegerMatrix, Q, Vector, field_rank, invariant_factors, kernel_basis
from .swiatkowski import differential, enumerate_basis, inclusion_matrix


@dataclass(frozen=True, order=True)
class AbelianGroup:
    """``Z^free_rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k`` with ``d_1 | d_2 | ... | d_k``."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        t = tuple(int(d) for d in self.torsion)
        if any(d < 2 for d in t):
            raise ValueError(f"torsion coefficients must be >= 2, got {t}")
        if any(b % a for a, b in zip(t, t[1:])):
            raise ValueError(f"torsion {t} is not a divisibility chain")
        object.__setattr__(self, "torsion", t)

    @classmethod
    def from_factors(cls, free_rank: int, factors: Sequence[int]) -> "AbelianGroup":
        """Normalize arbitrary cyclic orders into the divisibility chain."""
        from .linalg import smith_normal_form

        fs = [abs(int(d)) for d in factors if abs(int(d)) != 1]
        free_rank += sum(1 for d in fs if d == 0)
        fs = [d for d in fs if d]
        if not fs:
            return cls(free_rank, ())
        S, _, _ = smith_normal_form([[d if i == j else 0 for j in range(len(fs))] for i, d in enumerate(fs)])
        chain = [int(S[i, i]) for i in range(len(fs)) if S[i, i] > 1]
        return cls(free_rank, tuple(chain))

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append(f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def homology_at(d_in: IntegerMatrix, d_out: IntegerMatrix) -> AbelianGroup:
    """``ker(d_out) / im(d_in)`` for ``C' --d_in--> C --d_out--> C''``.

    ``ker(d_out)`` is a direct summand of ``C`` (the quotient embeds in a
    free group), so the torsion of the homology is the torsion of
    ``coker(d_in)``, read off the invariant factors of ``d_in``.
    """
    if d_in.rows != d_out.cols:
        raise DimensionMismatch(f"d_in is {d_in.shape} but d_out is {d_out.shape}")
    if d_in.cols and d_out.rows and not (d_out @ d_in).is_zero():
        raise NotAComplex("d_out @ d_in is not zero")
    f_in = invariant_factors(d_in) if d_in.cols and d_in.rows else []
    r_out = len(invariant_factors(d_out)) if d_out.cols and d_out.rows else 0
    free = d_in.rows - r_out - len(f_in)
    return AbelianGroup(free, tuple(d for d in f_in if d > 1))


@lru_cache(maxsize=2048)
def configuration_homology(G: Graph, q: int, n: int, reduced: bool = True) -> AbelianGroup:
    """``H_q(UF_n(G); Z)``."""
    if q < 0 or n < 0:
        return AbelianGroup()
    return homology_at(differential(G, q + 1, n, reduced), differential(G, q, n, reduced))


def field_betti(G: Graph, q: int, n: int, reduced: bool = True, field="Q") -> int:
    """``dim_k H_q(UF_n(G); k)`` by rank computations over ``k``."""
    F = Field.parse(field)
    dim = enumerate_basis(G, q, n, reduced).dim
    if not dim:
        return 0
    r_out = field_rank(differential(G, q, n, reduced).columns, F) if q > 0 else 0
    r_in = field_rank(differential(G, q + 1, n, reduced).columns, F)
    return dim - r_out - r_in


def euler_characteristic(G: Graph, n: int, reduced: bool = True) -> int:
    """Alternating sum of slice dimensions at particle number ``n``."""
    total, q = 0, 0
    while q <= n:
        total += (-1) ** q * enumerate_basis(G, q, n, reduced).dim
        q += 1
    return total


class FieldHomology:
    """Homology ``ker(d_out)/im(d_in)`` over a field, with coordinates.

    ``representatives`` are cycles (sparse vectors in the middle term)
    whose classes form a basis.  :meth:`coordinates` expresses any cycle
    in that basis.  The echelon form is built with a fixed pivot order,
    so the basis is deterministic.
    """

    def __init__(self, d_in_columns: Sequence[Vector], d_out_columns: Sequence[Vector], field: Field = Q):
        self.field = field
        self._ech = Echelon(field)
        for col in d_in_columns:
            self._ech.insert(field.vector(col))
        self.boundary_rank = len(self._ech)
        self.representatives: list[Vector] = []
        for z in kernel_basis(d_out_columns, field):
            k = len(self.representatives)
            if self._ech.insert(z, {k: 1}) is None:
                self.representatives.append(z)

    @property
    def dim(self) -> int:
        return len(self.representatives)

    def coordinates(self, cycle: Vector) -> Vector:
        coords = self._ech.coordinates(self.field.vector(cycle))
        if coords is None:
            raise ValueError("vector is not a cycle of this complex")
        return coords

    def is_boundary(self, cycle: Vector) -> bool:
        return not self.coordinates(cycle)


@lru_cache(maxsize=1024)
def slice_homology(G: Graph, q: int, n: int, reduced: bool = True, field: Field = Q) -> FieldHomology:
    if q < 0:
        return FieldHomology([], [], field)
    d_out = differential(G, q, n, reduced)
    d_in = differential(G, q + 1, n, reduced)
    return FieldHomology(d_in.columns, d_out.columns, field)


def verify_quasi_isomorphism(G: Graph, q_max: int, n_max: int, field="Q") -> dict:
    """Compare ``H_q`` of the full and reduced complexes, and check that the
    inclusion of the reduced complex induces an isomorphism over ``field``."""
    F = Field.parse(field)
    rows = []
    for n in range(n_max + 1):
        for q in range(q_max + 1):
            full = configuration_homology(G, q, n, reduced=False)
            red = configuration_homology(G, q, n, reduced=True)
            h_red = slice_homology(G, q, n, True, F)
            h_full = slice_homology(G, q, n, False, F)
            inc = inclusion_matrix(enumerate_basis(G, q, n, True), enumerate_basis(G, q, n, False))
            images = [h_full.coordinates(inc.apply(z)) for z in h_red.representatives]
            iso = h_red.dim == h_full.dim and field_rank(images, F) == h_red.dim
            rows.append({
                "q": q, "n": n, "full": str(full), "reduced": str(red),
                "induced_iso": iso, "passed": full == red and iso,
            })
    return {"rows": rows, "passed": all(r["passed"] for r in rows)}
