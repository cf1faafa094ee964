"""Exact integer linear algebra.

Matrices act on the right of row vectors (``v -> v @ A``) everywhere in this
package, so kernels are left kernels and lattices are spanned by rows.
All arithmetic uses Python integers; nothing is ever reduced modulo anything
or converted to floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Optional, Sequence

Vector = tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    data: tuple[Vector, ...]

    def __post_init__(self):
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ValueError(f"entry count does not match a {self.rows}x{self.cols} shape")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], cols: Optional[int] = None) -> "IntMatrix":
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            if not data:
                raise ValueError("column count required for a matrix with no rows")
            cols = len(data[0])
        return cls(len(data), cols, data)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def diagonal(cls, entries: Sequence[int], rows: Optional[int] = None, cols: Optional[int] = None) -> "IntMatrix":
        rows = len(entries) if rows is None else rows
        cols = len(entries) if cols is None else cols
        data = [[0] * cols for _ in range(rows)]
        for i, d in enumerate(entries):
            data[i][i] = d
        return cls.from_rows(data, cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.data]

    def row(self, i: int) -> Vector:
        return self.data[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.data)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.data)) if self.rows else ((),) * self.cols)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.transpose().data
        return IntMatrix(self.rows, other.cols, tuple(
            tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.data))

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError(f"cannot add {self.shape} and {other.shape}")
        return IntMatrix(self.rows, self.cols, tuple(
            tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + other.scale(-1)

    def __neg__(self) -> "IntMatrix":
        return self.scale(-1)

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(tuple(k * a for a in r) for r in self.data))

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.data for a in r)

    def is_diagonal(self) -> bool:
        return all(a == 0 for i, r in enumerate(self.data) for j, a in enumerate(r) if i != j)

    def diagonal_entries(self) -> Vector:
        return tuple(self.data[i][i] for i in range(min(self.rows, self.cols)))


def vecmat(v: Sequence[int], A: IntMatrix) -> Vector:
    """Row vector times matrix."""
    if len(v) != A.rows:
        raise ValueError(f"vector of length {len(v)} does not fit a {A.rows}-row matrix")
    return tuple(sum(v[i] * A.data[i][j] for i in range(A.rows)) for j in range(A.cols))


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    if len(u) != len(v):
        raise ValueError("vector lengths differ")
    return sum(a * b for a, b in zip(u, v))


def hstack(blocks: Sequence[IntMatrix], rows: Optional[int] = None) -> IntMatrix:
    if not blocks:
        if rows is None:
            raise ValueError("row count required to stack no blocks")
        return IntMatrix.zeros(rows, 0)
    rows = blocks[0].rows
    if any(b.rows != rows for b in blocks):
        raise ValueError("blocks have different row counts")
    cols = sum(b.cols for b in blocks)
    return IntMatrix(rows, cols, tuple(sum((b.data[i] for b in blocks), ()) for i in range(rows)))


def vstack(blocks: Sequence[IntMatrix], cols: Optional[int] = None) -> IntMatrix:
    if not blocks:
        if cols is None:
            raise ValueError("column count required to stack no blocks")
        return IntMatrix.zeros(0, cols)
    cols = blocks[0].cols
    if any(b.cols != cols for b in blocks):
        raise ValueError("blocks have different column counts")
    return IntMatrix(sum(b.rows for b in blocks), cols, sum((b.data for b in blocks), ()))


def determinant(A: IntMatrix) -> int:
    """Fraction-free Bareiss elimination."""
    if A.rows != A.cols:
        raise ValueError("determinant of a non-square matrix")
    n = A.rows
    M = A.tolist()
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1] if n else 1


# ---------------------------------------------------------------------------
# Normal forms

def _echelon(rows: list[list[int]], ncols: int, track: bool):
    """Row-style Hermite form in place.

    Returns ``(H, U, rank)`` with ``U @ A == H``, the first ``rank`` rows of
    ``H`` in Hermite normal form and the rest zero.  ``U`` is ``None`` unless
    ``track`` is set.
    """
    H = rows
    k = len(H)
    U = [[int(i == j) for j in range(k)] for i in range(k)] if track else None
    r = 0
    for c in range(ncols):
        if r == k:
            break
        while True:
            nz = [i for i in range(r, k) if H[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: (abs(H[i][c]), i))
            if p != r:
                H[p], H[r] = H[r], H[p]
                if track:
                    U[p], U[r] = U[r], U[p]
            clean = True
            piv = H[r][c]
            for i in range(r + 1, k):
                if H[i][c]:
                    q = H[i][c] // piv
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    if track:
                        U[i] = [a - q * b for a, b in zip(U[i], U[r])]
                    if H[i][c]:
                        clean = False
            if clean:
                break
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-a for a in H[r]]
            if track:
                U[r] = [-a for a in U[r]]
        piv = H[r][c]
        for i in range(r):
            q = H[i][c] // piv
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                if track:
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
        r += 1
    return H, U, r


def hermite_normal_form(A: IntMatrix) -> IntMatrix:
    """Nonzero rows of the row-style Hermite normal form of ``A``."""
    H, _, r = _echelon(A.tolist(), A.cols, False)
    return IntMatrix(r, A.cols, tuple(tuple(h) for h in H[:r]))


@dataclass(frozen=True)
class SmithDecomposition:
    U: IntMatrix
    V: IntMatrix
    D: IntMatrix

    @property
    def invariants(self) -> Vector:
        """Nonzero diagonal entries of ``D``."""
        return tuple(d for d in self.D.diagonal_entries() if d)

    @property
    def rank(self) -> int:
        return len(self.invariants)


def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    """Unimodular ``U``, ``V`` with ``U @ A @ V == D`` in Smith form."""
    m, n = A.shape
    D = A.tolist()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_op(i, t, q):  # row_i -= q * row_t
        D[i] = [a - q * b for a, b in zip(D[i], D[t])]
        U[i] = [a - q * b for a, b in zip(U[i], U[t])]

    def col_op(j, t, q):  # col_j -= q * col_t
        for M in (D, V):
            for r in M:
                r[j] -= q * r[t]

    def swap_rows(i, t):
        D[i], D[t] = D[t], D[i]
        U[i], U[t] = U[t], U[i]

    def swap_cols(j, t):
        for M in (D, V):
            for r in M:
                r[j], r[t] = r[t], r[j]

    for t in range(min(m, n)):
        while True:
            cands = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
            if not cands:
                break
            _, i, j = min(cands)
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            piv = D[t][t]
            for i in range(t + 1, m):
                if D[i][t]:
                    row_op(i, t, D[i][t] // piv)
            for j in range(t + 1, n):
                if D[t][j]:
                    col_op(j, t, D[t][j] // piv)
            if any(D[i][t] for i in range(t + 1, m)) or any(D[t][j] for j in range(t + 1, n)):
                continue
            bad = next((i for i in range(t + 1, m)
                        if any(D[i][j] % piv for j in range(t + 1, n))), None)
            if bad is None:
                break
            row_op(t, bad, -1)
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
    return SmithDecomposition(IntMatrix.from_rows(U, m), IntMatrix.from_rows(V, n),
                              IntMatrix.from_rows(D, n))


def inverse_unimodular(A: IntMatrix) -> IntMatrix:
    """Exact inverse of a matrix with determinant +-1."""
    if A.rows != A.cols:
        raise ValueError("inverse of a non-square matrix")
    snf = smith_normal_form(A)
    if snf.D != IntMatrix.identity(A.rows):
        raise ValueError("matrix is not unimodular")
    return snf.V @ snf.U


# ---------------------------------------------------------------------------
# Lattices

@dataclass(frozen=True)
class Lattice:
    """Subgroup of Z^d, stored by its Hermite basis (so ``==`` is lattice equality)."""

    ambient_dim: int
    basis: IntMatrix

    @classmethod
    def span(cls, vectors: Iterable[Sequence[int]], ambient_dim: int) -> "Lattice":
        rows = [list(v) for v in vectors]
        if any(len(v) != ambient_dim for v in rows):
            raise ValueError(f"vectors must have length {ambient_dim}")
        H, _, r = _echelon(rows, ambient_dim, False)
        return cls(ambient_dim, IntMatrix(r, ambient_dim, tuple(tuple(h) for h in H[:r])))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Lattice":
        return cls(ambient_dim, IntMatrix.zeros(0, ambient_dim))

    @classmethod
    def full(cls, ambient_dim: int) -> "Lattice":
        return cls(ambient_dim, IntMatrix.identity(ambient_dim))

    @property
    def rank(self) -> int:
        return self.basis.rows

    @property
    def vectors(self) -> tuple[Vector, ...]:
        return self.basis.data

    def reduce(self, v: Sequence[int]) -> Vector:
        """Canonical representative of ``v`` modulo the lattice."""
        if len(v) != self.ambient_dim:
            raise ValueError(f"vector of length {len(v)} in Z^{self.ambient_dim}")
        w = list(v)
        for b in self.basis.data:
            c = next(j for j, x in enumerate(b) if x)
            q = w[c] // b[c]
            if q:
                w = [x - q * y for x, y in zip(w, b)]
        return tuple(w)

    def __contains__(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(v in self for v in other.vectors)

    def __add__(self, other: "Lattice") -> "Lattice":
        return Lattice.span(self.vectors + other.vectors, self.ambient_dim)

    def image(self, A: IntMatrix) -> "Lattice":
        return Lattice.span([vecmat(v, A) for v in self.vectors], A.cols)


def left_kernel(A: IntMatrix) -> Lattice:
    """All integer rows ``x`` with ``x @ A == 0``."""
    H, U, r = _echelon(A.tolist(), A.cols, True)
    return Lattice.span(U[r:], A.rows)


def solve_linear(A: IntMatrix, b: Sequence[int]) -> tuple[Optional[Vector], Lattice]:
    """Solve ``x @ A == b`` over the integers.

    Returns ``(x, kernel)`` where ``x`` is reduced modulo ``kernel`` (the left
    kernel of ``A``), or ``(None, kernel)`` when no integer solution exists.
    """
    if len(b) != A.cols:
        raise ValueError(f"right-hand side has length {len(b)}, expected {A.cols}")
    kernel = left_kernel(A)
    snf = smith_normal_form(A)
    c = vecmat(b, snf.V)
    d = snf.D.diagonal_entries()
    y = [0] * A.rows
    for i in range(A.cols):
        di = d[i] if i < len(d) else 0
        if di == 0:
            if c[i] != 0:
                return None, kernel
        elif c[i] % di:
            return None, kernel
        else:
            y[i] = c[i] // di
    return kernel.reduce(vecmat(y, snf.U)), kernel


def saturation(L: Lattice) -> Lattice:
    """Smallest direct summand of the ambient Z^d containing ``L``."""
    if L.rank == 0:
        return L
    snf = smith_normal_form(L.basis)
    Vinv = inverse_unimodular(snf.V)
    return Lattice.span(Vinv.data[:snf.rank], L.ambient_dim)


def complement(L: Lattice) -> Lattice:
    """A direct complement of a saturated lattice, read off its Smith completion."""
    d = L.ambient_dim
    if L.rank == 0:
        return Lattice.full(d)
    snf = smith_normal_form(L.basis)
    if any(x != 1 for x in snf.invariants):
        raise ValueError("complement requires a saturated lattice (a direct summand)")
    Vinv = inverse_unimodular(snf.V)
    return Lattice.span(Vinv.data[snf.rank:], d)


def lattice_index(M: Lattice) -> Optional[int]:
    """``[Z^d : M]``, or ``None`` when the index is infinite."""
    if M.rank < M.ambient_dim:
        return None
    out = 1
    for x in smith_normal_form(M.basis).invariants:
        out *= x
    return out


def infinite_direction(M: Lattice) -> Optional[Vector]:
    """A primitive vector none of whose nonzero multiples lies in ``M``."""
    if M.rank == M.ambient_dim:
        return None
    if M.rank == 0:
        return tuple(int(i == 0) for i in range(M.ambient_dim))
    snf = smith_normal_form(M.basis)
    return inverse_unimodular(snf.V).data[snf.rank]


class QuotientMap:
    """Z^d / M as a product of cyclic groups, for a full-rank lattice ``M``.

    Calling the map on a vector returns its coset label, a tuple with one
    residue per nontrivial cyclic factor.
    """

    def __init__(self, M: Lattice):
        if lattice_index(M) is None:
            raise ValueError("quotient by a lattice of infinite index")
        self.lattice = M
        snf = smith_normal_form(M.basis)
        keep = [i for i, x in enumerate(snf.invariants) if x != 1]
        self.orders: tuple[int, ...] = tuple(snf.invariants[i] for i in keep)
        self._cols = tuple(snf.V.column(i) for i in keep)

    @property
    def size(self) -> int:
        out = 1
        for x in self.orders:
            out *= x
        return out

    def __call__(self, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(dot(v, c) % o for c, o in zip(self._cols, self.orders))


def quotient_structure(M: Lattice) -> QuotientMap:
    return QuotientMap(M)


def content(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _bezout(v: Sequence[int]) -> tuple[int, list[int]]:
    g, h = 0, [0] * len(v)
    for i, x in enumerate(v):
        g2, s, t = _ext_gcd(g, x)
        h = [s * y for y in h]
        h[i] = t
        g = g2
    return g, h


def vector_gcd_bezout(v: Sequence[int], extra: Optional[int] = None,
                      nonzero_extra: bool = False) -> tuple[int, Vector, Optional[int]]:
    """gcd of ``v`` (and ``extra``) with a certificate ``(g, h, rho)``.

    ``v . h + extra * rho == g``; ``rho`` is ``None`` when no ``extra`` is given.
    With ``nonzero_extra`` the certificate is shifted so that ``rho != 0``,
    which is always possible unless ``extra == 0``.
    """
    if not any(v) and not extra:
        raise ValueError("gcd of an all-zero input")
    gv, h = _bezout(v)
    if extra is None:
        return gv, tuple(h), None
    g, s, rho = _ext_gcd(gv, extra)
    h = [s * x for x in h]
    if nonzero_extra and rho == 0 and extra != 0:
        # v.h == g here; trade extra/g copies of a gv-certificate for gv/g units of rho
        _, hv = _bezout(v)
        k = extra // g
        h = [x - k * y for x, y in zip(h, hv)]
        rho = gv // g
    return g, tuple(h), rho
