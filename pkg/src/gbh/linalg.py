"""Exact linear algebra over the integers, the rationals and prime fields.

Matrices are stored sparsely as a list of columns, each a ``{row: value}``
dict, because every matrix in this package is the matrix of a map given
by the images of basis vectors.  Integers are Python ints throughout, so
nothing overflows.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import BadField, DimensionMismatch

Vector = dict  # sparse vector {index: nonzero value}


class IntegerMatrix:
    """Sparse integer matrix, ``rows x cols``, stored column-wise."""

    __slots__ = ("rows", "cols", "columns")

    def __init__(self, rows: int, cols: int, columns: Sequence[Vector] | None = None):
        self.rows = rows
        self.cols = cols
        if columns is None:
            columns = [{} for _ in range(cols)]
        if len(columns) != cols:
            raise DimensionMismatch(f"expected {cols} columns, got {len(columns)}")
        for col in columns:
            for r in col:
                if not 0 <= r < rows:
                    raise DimensionMismatch(f"row index {r} out of range for {rows} rows")
        self.columns = [{r: v for r, v in col.items() if v} for col in columns]

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Iterable[tuple[int, int, int]]):
        columns = [{} for _ in range(cols)]
        for r, c, v in entries:
            if not (0 <= r < rows and 0 <= c < cols):
                raise DimensionMismatch(f"entry ({r}, {c}) outside {rows}x{cols}")
            if r in columns[c]:
                raise ValueError(f"duplicate coordinate ({r}, {c})")
            columns[c][r] = int(v)
        return cls(rows, cols, columns)

    @classmethod
    def from_dense(cls, data) -> "IntegerMatrix":
        arr = [[int(x) for x in row] for row in data]
        rows = len(arr)
        cols = len(arr[0]) if rows else 0
        columns = [{r: arr[r][c] for r in range(rows) if arr[r][c]} for c in range(cols)]
        return cls(rows, cols, columns)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls(rows, cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def entries(self) -> list[tuple[int, int, int]]:
        """Coordinate list sorted by (row, col)."""
        return sorted((r, c, v) for c, col in enumerate(self.columns) for r, v in col.items())

    def nnz(self) -> int:
        return sum(len(col) for col in self.columns)

    def is_zero(self) -> bool:
        return all(not col for col in self.columns)

    def to_numpy(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=object)
        for c, col in enumerate(self.columns):
            for r, v in col.items():
                out[r, c] = v
        return out

    def to_lists(self) -> list[list[int]]:
        return self.to_numpy().tolist()

    def transpose(self) -> "IntegerMatrix":
        cols = [{} for _ in range(self.rows)]
        for c, col in enumerate(self.columns):
            for r, v in col.items():
                cols[r][c] = v
        return IntegerMatrix(self.cols, self.rows, cols)

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        return IntegerMatrix(self.rows, other.cols, [self.apply(col) for col in other.columns])

    def apply(self, vec: Vector) -> Vector:
        out: Vector = {}
        for k, a in vec.items():
            for r, v in self.columns[k].items():
                s = out.get(r, 0) + a * v
                if s:
                    out[r] = s
                else:
                    out.pop(r, None)
        return out

    def __add__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        return IntegerMatrix(self.rows, self.cols, [add_vectors(a, b) for a, b in zip(self.columns, other.columns)])

    def __neg__(self) -> "IntegerMatrix":
        return IntegerMatrix(self.rows, self.cols, [{r: -v for r, v in col.items()} for col in self.columns])

    def __sub__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntegerMatrix):
            return NotImplemented
        return self.shape == other.shape and self.columns == other.columns

    def __repr__(self) -> str:
        return f"IntegerMatrix({self.rows}x{self.cols}, nnz={self.nnz()})"


def add_vectors(a: Vector, b: Vector, scale=1) -> Vector:
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, 0) + scale * v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


# -- Smith normal form ------------------------------------------------------

class SmithForm(NamedTuple):
    S: np.ndarray
    U: np.ndarray
    V: np.ndarray
    U_inv: np.ndarray
    V_inv: np.ndarray


def smith_normal_form(M) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(S, U, V)`` with ``U @ M @ V == S``.

    ``U`` and ``V`` are unimodular and ``S`` is diagonal with
    ``S[0,0] | S[1,1] | ...`` and nonnegative entries.  Pivots are chosen
    with smallest nonzero absolute value; entries are Python integers
    (``dtype=object`` arrays).
    """
    return tuple(smith_form(M)[:3])


def smith_form(M, inverses: bool = False) -> SmithForm:
    """Smith form with transforms; with ``inverses`` also ``U^-1`` and ``V^-1``.

    The inverses are accumulated from the inverse elementary operations,
    so ``U @ U_inv == I`` certifies unimodularity without a determinant.
    Machine integers are used while every entry stays below ``2**30``;
    otherwise the computation restarts with Python integers.
    """
    dense = M.to_numpy() if isinstance(M, IntegerMatrix) else np.asarray(M, dtype=object)
    if dense.ndim != 2:
        dense = dense.reshape(len(dense), -1)
    try:
        if dense.size and max(abs(int(x)) for x in dense.flat) < _LIMIT:
            return _smith_form_int64(dense.astype(np.int64), inverses)
    except _Overflow:
        pass
    return _smith_form_exact(M, inverses)


_LIMIT = 2**30


class _Overflow(Exception):
    pass


def _smith_form_int64(A: np.ndarray, inverses: bool) -> SmithForm:
    m, n = A.shape
    U, V = np.identity(m, dtype=np.int64), np.identity(n, dtype=np.int64)
    Ui = np.identity(m, dtype=np.int64) if inverses else None
    Vi = np.identity(n, dtype=np.int64) if inverses else None

    def guard(*arrays):
        for a in arrays:
            if a is not None and a.size and np.abs(a).max() >= _LIMIT:
                raise _Overflow

    def swap(t, i, j):
        if i != t:
            A[[t, i]] = A[[i, t]]
            U[[t, i]] = U[[i, t]]
            if inverses:
                Ui[:, [t, i]] = Ui[:, [i, t]]
        if j != t:
            A[:, [t, j]] = A[:, [j, t]]
            V[:, [t, j]] = V[:, [j, t]]
            if inverses:
                Vi[[t, j]] = Vi[[j, t]]

    def clear(t):
        """Reduce row and column ``t`` modulo the pivot; True if nothing is left."""
        p = A[t, t]
        idx = np.nonzero(A[t + 1:, t])[0] + t + 1
        if idx.size:
            q = A[idx, t] // p
            A[idx] -= np.outer(q, A[t])
            U[idx] -= np.outer(q, U[t])
            if inverses:
                Ui[:, t] += Ui[:, idx] @ q
        jdx = np.nonzero(A[t, t + 1:])[0] + t + 1
        if jdx.size:
            q = A[t, jdx] // p
            for M_ in (A, V):
                rs = np.nonzero(M_[:, t])[0]
                M_[np.ix_(rs, jdx)] -= np.outer(M_[rs, t], q)
            if inverses:
                Vi[t] += q @ Vi[jdx]
        guard(A[idx], A[:, jdx], U[idx], V[:, jdx],
              Ui[:, t] if inverses else None, Vi[t] if inverses else None)
        return not A[t + 1:, t].any() and not A[t, t + 1:].any()

    t, live = 0, m
    while t < min(m, n):
        found = None
        best = None
        r = t
        while r < live:
            row = A[r, t:]
            nz = np.nonzero(row)[0]
            if not nz.size:
                live -= 1
                swap(live, r, live)  # park zero rows at the bottom
                continue
            mags = np.abs(row[nz])
            k = mags.argmin()
            if best is None or mags[k] < best[0]:
                best = (mags[k], r - t, nz[k])
            if mags[k] == 1:
                found = best
                break
            r += 1
        if best is None:
            break
        _, i, j = found or best
        swap(t, t + i, t + j)
        while True:
            if not clear(t):
                col = np.abs(A[t:, t])
                row = np.abs(A[t, t:])
                ci = np.where(col > 0, col, np.iinfo(np.int64).max).argmin()
                rj = np.where(row > 0, row, np.iinfo(np.int64).max).argmin()
                if col[ci] <= row[rj]:
                    swap(t, t + ci, t)
                else:
                    swap(t, t, t + rj)
                continue
            p = A[t, t]
            if abs(p) == 1:
                break
            bad = np.argwhere(A[t + 1:, t + 1:] % p)
            if not len(bad):
                break
            r = bad[0][0] + t + 1  # row t += row r
            A[t] += A[r]
            U[t] += U[r]
            if inverses:
                Ui[:, r] -= Ui[:, t]
        if A[t, t] < 0:
            A[t] = -A[t]
            U[t] = -U[t]
            if inverses:
                Ui[:, t] = -Ui[:, t]
        t += 1

    def obj(a):
        return None if a is None else a.astype(object)

    return SmithForm(obj(A), obj(U), obj(V), obj(Ui), obj(Vi))


def _smith_form_exact(M, inverses: bool) -> SmithForm:
    if isinstance(M, IntegerMatrix):
        A = M.to_lists()
        m, n = M.shape
    else:
        A = [[int(x) for x in row] for row in np.asarray(M, dtype=object).tolist()]
        m = len(A)
        n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    Ui = [[int(i == j) for j in range(m)] for i in range(m)] if inverses else None
    Vi = [[int(i == j) for j in range(n)] for i in range(n)] if inverses else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        if inverses:
            for row in Ui:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        if inverses:
            Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(src, dst, k):  # row dst += k * row src
        if k:
            A[dst] = [a + k * b for a, b in zip(A[dst], A[src])]
            U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]
            if inverses:
                for row in Ui:
                    row[src] -= k * row[dst]

    def add_col(src, dst, k):  # col dst += k * col src
        if k:
            for row in A:
                row[dst] += k * row[src]
            for row in V:
                row[dst] += k * row[src]
            if inverses:
                Vi[src] = [a - k * b for a, b in zip(Vi[src], Vi[dst])]

    t = 0
    while t < min(m, n):
        nonzero = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nonzero:
            break
        _, pi, pj = min(nonzero)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    add_row(t, i, -q)
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    add_col(t, j, -q)
                    if A[t][j]:
                        dirty = True
            if dirty:
                cand = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
                _, pi, pj = min(cand)
                swap_rows(t, pi)
                swap_cols(t, pj)
                continue
            # divisibility: the pivot must divide the remaining block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
            if inverses:
                for row in Ui:
                    row[t] = -row[t]
        t += 1

    def arr(rows, r, c):
        return np.array(rows, dtype=object).reshape(r, c)

    return SmithForm(arr(A, m, n), arr(U, m, m), arr(V, n, n),
                     arr(Ui, m, m) if inverses else None, arr(Vi, n, n) if inverses else None)


def exact_product(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """``A @ B`` exactly, as an object array.

    Uses floating point when every partial sum is below ``2**53`` (so BLAS
    is exact), machine integers below ``2**62``, Python integers otherwise.
    """
    if A.shape[1] != B.shape[0]:
        raise DimensionMismatch(f"cannot multiply {A.shape} by {B.shape}")
    if not (A.size and B.size):
        return np.zeros((A.shape[0], B.shape[1]), dtype=object)
    try:
        A64, B64 = A.astype(np.int64), B.astype(np.int64)
    except OverflowError:
        return A.astype(object).dot(B.astype(object))
    bound = int(np.abs(A64).max()) * int(np.abs(B64).max()) * A.shape[1]
    if bound < 2**53:
        return np.rint(A64.astype(float) @ B64.astype(float)).astype(np.int64).astype(object)
    if bound < 2**62:
        return (A64 @ B64).astype(object)
    return A.astype(object).dot(B.astype(object))


def is_inverse_pair(A: np.ndarray, B: np.ndarray) -> bool:
    """``A @ B == I`` for square integer matrices, hence ``|det A| == 1``."""
    n = A.shape[0]
    return A.shape == B.shape == (n, n) and (exact_product(A, B) == np.identity(n, dtype=object)).all()


def _dense_invariant_factors(A: list[list[int]]) -> list[int]:
    if not A or not A[0]:
        return []
    S, _, _ = smith_normal_form(A)
    return [int(S[i, i]) for i in range(min(S.shape)) if S[i, i]]


def invariant_factors(M: IntegerMatrix) -> list[int]:
    """Nonzero diagonal of the Smith form, in divisibility order.

    Unit pivots are eliminated sparsely first (they contribute factor 1
    and never disturb the divisibility chain); the remaining block, which
    is small for the complexes met here, goes through the dense routine.
    """
    rows: dict[int, Vector] = {}
    for c, col in enumerate(M.columns):
        for r, v in col.items():
            rows.setdefault(r, {})[c] = v
    colrows: dict[int, set] = {}
    for r, row in rows.items():
        for c in row:
            colrows.setdefault(c, set()).add(r)
    units = 0
    progress = True
    while progress:
        progress = False
        for r in sorted(rows):
            row = rows.get(r)
            if row is None:
                continue
            pc = next((c for c in sorted(row, key=lambda c: len(colrows[c])) if row[c] in (1, -1)), None)
            if pc is None:
                continue
            pv = row[pc]
            del rows[r]
            for c in row:
                colrows[c].discard(r)
            for r2 in list(colrows[pc]):
                row2 = rows[r2]
                k = -row2[pc] * pv  # pv is its own inverse
                for c, v in row.items():
                    s = row2.get(c, 0) + k * v
                    if s:
                        if c not in row2:
                            colrows[c].add(r2)
                        row2[c] = s
                    else:
                        if c in row2:
                            del row2[c]
                            colrows[c].discard(r2)
                if not row2:
                    del rows[r2]
            units += 1
            progress = True
    live_rows = sorted(r for r, row in rows.items() if row)
    live_cols = sorted({c for r in live_rows for c in rows[r]})
    if not live_rows:
        return [1] * units
    cidx = {c: i for i, c in enumerate(live_cols)}
    dense = [[0] * len(live_cols) for _ in live_rows]
    for i, r in enumerate(live_rows):
        for c, v in rows[r].items():
            dense[i][cidx[c]] = v
    return [1] * units + _dense_invariant_factors(dense)


def integer_rank(M: IntegerMatrix) -> int:
    return len(invariant_factors(M))


def is_unimodular(U: np.ndarray) -> bool:
    return abs(int_det(U)) == 1


def int_det(A) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    M = [[int(x) for x in row] for row in np.asarray(A, dtype=object).tolist()]
    n = len(M)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


# -- fields -------------------------------------------------------------------

@dataclass(frozen=True)
class Field:
    """The rationals (``p == 0``) or the prime field ``F_p``."""

    p: int = 0

    def __post_init__(self):
        if self.p and not _is_prime(self.p):
            raise BadField(f"{self.p} is not prime")
        if self.p < 0:
            raise BadField(f"bad characteristic {self.p}")

    @classmethod
    def parse(cls, tag) -> "Field":
        if isinstance(tag, Field):
            return tag
        text = str(tag).strip().lower()
        if text in ("q", "qq", "rationals", "0"):
            return cls(0)
        for prefix in ("f_", "fp", "f", "gf"):
            if text.startswith(prefix) and text[len(prefix):].isdigit():
                return cls(int(text[len(prefix):]))
        if text.isdigit():
            return cls(int(text))
        raise BadField(f"unknown field {tag!r} (use q, f2, f3, ...)")

    @property
    def tag(self) -> str:
        return f"F{self.p}" if self.p else "Q"

    def __str__(self) -> str:
        return self.tag

    def element(self, x):
        return x % self.p if self.p else x

    def inverse(self, x):
        if self.p:
            return pow(x, -1, self.p)
        if x in (1, -1):
            return x
        return Fraction(1) / x

    def vector(self, vec: Vector) -> Vector:
        if not self.p:
            return {k: v for k, v in vec.items() if v}
        out = {}
        for k, v in vec.items():
            v %= self.p
            if v:
                out[k] = v
        return out

    def axpy(self, target: Vector, a, x: Vector) -> None:
        """``target += a * x`` in place."""
        p = self.p
        for k, v in x.items():
            s = target.get(k, 0) + a * v
            if p:
                s %= p
            if s:
                target[k] = s
            else:
                target.pop(k, None)

    def scale(self, a, x: Vector) -> Vector:
        if self.p:
            return {k: (a * v) % self.p for k, v in x.items()}
        return {k: a * v for k, v in x.items()}


Q = Field(0)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Echelon:
    """Incrementally built echelon basis of a subspace, with tags.

    Each stored row is monic at its pivot (its smallest index) and carries
    a sparse *tag* vector; reducing a vector accumulates the tags of the
    rows subtracted.  With tags set to "which input produced this row"
    this yields kernels; with tags set to homology coordinates it yields
    quotient coordinates.
    """

    def __init__(self, field: Field):
        self.field = field
        self.rows: dict[int, tuple[Vector, Vector]] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Vector, tag: Vector | None = None):
        """Reduce ``vec`` by leading terms.

        The pair ``(vec, tag)`` is transformed as a unit: each step
        subtracts ``c * (row, row_tag)``.  Returns ``(remainder, tag)``.
        """
        F = self.field
        vec = dict(vec)
        tag = dict(tag) if tag else {}
        rows = self.rows
        while vec:
            lead = min(vec)
            row = rows.get(lead)
            if row is None:
                break
            c = vec[lead]
            F.axpy(vec, -c, row[0])
            if row[1]:
                F.axpy(tag, -c, row[1])
        return vec, tag

    def insert(self, vec: Vector, tag: Vector | None = None):
        """Reduce and insert; returns the leftover ``(0, tag)`` or ``None``.

        If ``vec`` lies in the span, the reduced tag is returned (it is the
        input tag minus the tags of the combination that produced ``vec``).
        Otherwise the remainder is added as a new row and ``None`` returned.
        """
        rem, tag = self.reduce(vec, tag)
        if not rem:
            return tag
        F = self.field
        lead = min(rem)
        inv = F.inverse(rem[lead])
        self.rows[lead] = (F.scale(inv, rem), F.scale(inv, tag))
        return None

    def coordinates(self, vec: Vector) -> Vector | None:
        """Tag-combination expressing ``vec``; ``None`` if not in the span."""
        rem, tag = self.reduce(vec)
        if rem:
            return None
        return self.field.scale(-1, tag)

    def contains(self, vec: Vector) -> bool:
        rem, _ = self.reduce(vec)
        return not rem


def field_rank(columns: Iterable[Vector], field: Field) -> int:
    ech = Echelon(field)
    for col in columns:
        ech.insert(field.vector(col))
    return len(ech)


def kernel_basis(columns: Sequence[Vector], field: Field) -> list[Vector]:
    """Basis of the null space of the matrix whose columns are given."""
    ech = Echelon(field)
    out = []
    for j, col in enumerate(columns):
        left = ech.insert(field.vector(col), {j: 1})
        if left is not None:
            out.append(left)
    return out
