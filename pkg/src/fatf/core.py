"""Elements, endomorphisms and subgroup bases of G = Z^m x F_n.

An element ``t^a u`` is a pair (vector ``a`` in Z^m, reduced word ``u``).
Endomorphisms come in two types:

* type I, ``t^a u -> t^(aQ + uP) (u phi)``;
* type II, ``t^a u -> t^(aQ + uP) z^(a.ell + u.h)`` with ``z`` not a proper power
  and ``ell != 0``;

where ``uP`` means the abelianization of ``u`` times ``P``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

from .freewords import Word, is_primitive_root, primitive_root
from .intlin import IntMatrix, Lattice, Vector, dot, left_kernel, vecmat
from .stallings import CoreGraph, FreeBasis, build


def _vadd(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def _vscale(k: int, v: Sequence[int]) -> Vector:
    return tuple(k * a for a in v)


@dataclass(frozen=True)
class FatfElement:
    vec: Vector
    word: Word

    def __post_init__(self):
        object.__setattr__(self, "vec", tuple(int(x) for x in self.vec))

    @classmethod
    def identity(cls, m: int, n: int) -> "FatfElement":
        return cls((0,) * m, Word.identity(n))

    @classmethod
    def of(cls, vec: Sequence[int], letters: Sequence[int], n: int) -> "FatfElement":
        return cls(tuple(vec), Word(tuple(letters), n))

    @property
    def ambient(self) -> tuple[int, int]:
        return len(self.vec), self.word.n

    def _check(self, other: "FatfElement"):
        if self.ambient != other.ambient:
            raise ValueError(f"ambient mismatch: {self.ambient} vs {other.ambient}")

    def __mul__(self, other: "FatfElement") -> "FatfElement":
        self._check(other)
        return FatfElement(_vadd(self.vec, other.vec), self.word * other.word)

    def inverse(self) -> "FatfElement":
        return FatfElement(_vscale(-1, self.vec), self.word.inverse())

    def __pow__(self, k: int) -> "FatfElement":
        return FatfElement(_vscale(k, self.vec), self.word ** k)

    def is_identity(self) -> bool:
        return not any(self.vec) and not self.word

    def __str__(self):
        return f"t^{list(self.vec)} [{self.word}]"


def multiply(x: FatfElement, y: FatfElement) -> FatfElement:
    return x * y


def invert(x: FatfElement) -> FatfElement:
    return x.inverse()


# ---------------------------------------------------------------------------
# Endomorphisms

def _check_square(Q: IntMatrix, m: int):
    if Q.shape != (m, m):
        raise ValueError(f"Q must be {m}x{m}, got {Q.rows}x{Q.cols}")


def _check_p(P: IntMatrix, n: int, m: int):
    if P.shape != (n, m):
        raise ValueError(f"P must be {n}x{m}, got {P.rows}x{P.cols}")


@dataclass(frozen=True)
class TypeIEndo:
    phi: tuple[Word, ...]
    Q: IntMatrix
    P: IntMatrix

    def __post_init__(self):
        object.__setattr__(self, "phi", tuple(self.phi))
        n = len(self.phi)
        if any(w.n != n for w in self.phi):
            raise ValueError("letter images must live in the same free group")
        _check_square(self.Q, self.Q.rows)
        _check_p(self.P, n, self.Q.rows)

    @classmethod
    def identity(cls, m: int, n: int) -> "TypeIEndo":
        return cls(tuple(Word.generator(i, n) for i in range(1, n + 1)),
                   IntMatrix.identity(m), IntMatrix.zeros(n, m))

    @classmethod
    def lift(cls, phi: Sequence[Word], Q: IntMatrix, P: IntMatrix) -> "TypeIEndo":
        return cls(tuple(phi), Q, P)

    @property
    def ambient(self) -> tuple[int, int]:
        return self.Q.rows, len(self.phi)

    def free_image(self, u: Word) -> Word:
        return u.substitute(self.phi)

    def __call__(self, x: FatfElement) -> FatfElement:
        return apply(self, x)


@dataclass(frozen=True)
class TypeIIEndo:
    z: Word
    ell: Vector
    h: Vector
    Q: IntMatrix
    P: IntMatrix

    def __post_init__(self):
        object.__setattr__(self, "ell", tuple(int(x) for x in self.ell))
        object.__setattr__(self, "h", tuple(int(x) for x in self.h))
        m, n = self.Q.rows, self.z.n
        if not is_primitive_root(self.z):
            raise ValueError("stable letter must be nontrivial and not a proper power")
        if not any(self.ell):
            raise ValueError("ell must be a nonzero vector")
        if len(self.ell) != m:
            raise ValueError(f"ell must have length {m}")
        if len(self.h) != n:
            raise ValueError(f"h must have length {n}")
        _check_square(self.Q, m)
        _check_p(self.P, n, m)

    @property
    def ambient(self) -> tuple[int, int]:
        return self.Q.rows, self.z.n

    def __call__(self, x: FatfElement) -> FatfElement:
        return apply(self, x)


Endomorphism = Union[TypeIEndo, TypeIIEndo]


def apply(e: Endomorphism, x: FatfElement) -> FatfElement:
    if e.ambient != x.ambient:
        raise ValueError(f"ambient mismatch: endomorphism on {e.ambient}, element in {x.ambient}")
    u = x.word.abelianize()
    vec = _vadd(vecmat(x.vec, e.Q), vecmat(u, e.P))
    if isinstance(e, TypeIEndo):
        return FatfElement(vec, x.word.substitute(e.phi))
    return FatfElement(vec, e.z ** (dot(x.vec, e.ell) + dot(u, e.h)))


def _free_matrix(e: Endomorphism) -> IntMatrix:
    """n x n matrix of the abelianized free part."""
    if isinstance(e, TypeIEndo):
        return IntMatrix.from_rows([w.abelianize() for w in e.phi], e.ambient[1])
    zr = e.z.abelianize()
    return IntMatrix.from_rows([_vscale(hi, zr) for hi in e.h], e.ambient[1])


def _col(v: Sequence[int]) -> IntMatrix:
    return IntMatrix.from_rows([[x] for x in v], 1)


def _outer(col: Sequence[int], row: Sequence[int]) -> IntMatrix:
    return IntMatrix.from_rows([[a * b for b in row] for a in col], len(row))


def _type2_or_degenerate(z: Word, ell: Vector, h: Vector, Q: IntMatrix, P: IntMatrix) -> Endomorphism:
    if any(ell):
        return TypeIIEndo(z, ell, h, Q, P)
    return TypeIEndo(tuple(z ** k for k in h), Q, P)


def compose(e1: Endomorphism, e2: Endomorphism) -> Endomorphism:
    """``e1`` followed by ``e2`` (arguments act on the left: ``x -> (x e1) e2``)."""
    if e1.ambient != e2.ambient:
        raise ValueError(f"ambient mismatch: {e1.ambient} vs {e2.ambient}")
    m, n = e1.ambient
    if isinstance(e1, TypeIEndo):
        Q = e1.Q @ e2.Q
        A1 = _free_matrix(e1)
        P = e1.P @ e2.Q + A1 @ e2.P
        if isinstance(e2, TypeIEndo):
            return TypeIEndo(tuple(w.substitute(e2.phi) for w in e1.phi), Q, P)
        ell = tuple(vecmat(e2.ell, e1.Q.transpose()))
        h = tuple(_vadd(vecmat(e2.ell, e1.P.transpose()), vecmat(e2.h, A1.transpose())))
        return _type2_or_degenerate(e2.z, ell, h, Q, P)
    # e1 of type II: the word part of the middle image is z1^k, k = a.ell1 + u.h1
    z1r = e1.z.abelianize()
    if isinstance(e2, TypeIEndo):
        img = e1.z.substitute(e2.phi)
        shift = vecmat(z1r, e2.P)
        Q = e1.Q @ e2.Q + _outer(e1.ell, shift)
        P = e1.P @ e2.Q + _outer(e1.h, shift)
        if not img:
            return TypeIEndo(tuple(Word.identity(n) for _ in range(n)), Q, P)
        root, s = primitive_root(img)
        return TypeIIEndo(root, _vscale(s, e1.ell), _vscale(s, e1.h), Q, P)
    shift = vecmat(z1r, e2.P)
    Q = e1.Q @ e2.Q + _outer(e1.ell, shift)
    P = e1.P @ e2.Q + _outer(e1.h, shift)
    c = dot(z1r, e2.h)
    ell = _vadd(vecmat(e2.ell, e1.Q.transpose()), _vscale(c, e1.ell))
    h = _vadd(vecmat(e2.ell, e1.P.transpose()), _vscale(c, e1.h))
    return _type2_or_degenerate(e2.z, ell, h, Q, P)


# ---------------------------------------------------------------------------
# Subgroups

@dataclass(frozen=True)
class SubgroupBasis:
    """Basis ``{t^(a_i) u_i ; t^(b_j)}`` of a subgroup of Z^m x F_n.

    The ``u_i`` form a free basis of the projection to F_n, the ``b_j`` an
    abelian basis of the intersection with Z^m (``lattice``).  The ``a_i`` are
    only defined modulo the lattice and are stored reduced.
    """

    m: int
    n: int
    decorated: tuple[tuple[Vector, Word], ...]
    lattice: Lattice
    projection: FreeBasis = field(compare=False, repr=False)

    @property
    def projection_graph(self) -> CoreGraph:
        return self.projection.graph

    @property
    def rank(self) -> int:
        """Rank of the free part."""
        return len(self.decorated)

    def elements(self) -> list[FatfElement]:
        out = [FatfElement(a, u) for a, u in self.decorated]
        out += [FatfElement(b, Word.identity(self.n)) for b in self.lattice.vectors]
        return out

    def __contains__(self, x: FatfElement) -> bool:
        return member(self, x)

    def __str__(self):
        parts = [f"t^{list(a)} [{u}]" for a, u in self.decorated]
        parts += [f"t^{list(b)}" for b in self.lattice.vectors]
        return "<" + ", ".join(parts) + ">"


def subgroup_basis(generators: Sequence[FatfElement], m: int, n: int) -> SubgroupBasis:
    """Basis of the subgroup generated by ``generators``.

    The free part comes from the folded graph of the projected words.  Writing
    each generator's word in that free basis gives an abelian map ``mu`` from
    Z^k (one coordinate per generator) to Z^r; the purely abelian part of the
    subgroup is the image of ``ker mu`` under the generators' vectors, and each
    free basis element is decorated by the vector of any one expression of it
    in the generators.
    """
    for g in generators:
        if g.ambient != (m, n):
            raise ValueError(f"generator in {g.ambient}, expected {(m, n)}")
    k = len(generators)
    graph, fb = build([g.word for g in generators], n)
    A = IntMatrix.from_rows([g.vec for g in generators], m)
    mu = IntMatrix.from_rows([graph.read(g.word)[0].abelianize() for g in generators], fb.rank)
    lattice = left_kernel(mu).image(A) if k else Lattice.zero(m)
    decorated = tuple(
        (lattice.reduce(vecmat(p.abelianize(), A)), u)
        for u, p in zip(fb.words, fb.provenance))
    return SubgroupBasis(m, n, decorated, lattice, fb)


def _ambient_of(S: SubgroupBasis) -> tuple[int, int]:
    return S.m, S.n


def member(S: SubgroupBasis, x: FatfElement) -> bool:
    if x.ambient != _ambient_of(S):
        raise ValueError(f"element in {x.ambient}, subgroup in {_ambient_of(S)}")
    expr = S.projection.express(x.word)
    if expr is None:
        return False
    v = list(x.vec)
    for y in expr.letters:
        a = S.decorated[abs(y) - 1][0]
        sgn = 1 if y > 0 else -1
        v = [p - sgn * q for p, q in zip(v, a)]
    return tuple(v) in S.lattice


def subgroup_equal(S1: SubgroupBasis, S2: SubgroupBasis) -> bool:
    if _ambient_of(S1) != _ambient_of(S2):
        return False
    return (S1.lattice == S2.lattice
            and all(member(S2, g) for g in S1.elements())
            and all(member(S1, g) for g in S2.elements()))


def is_abelian(S: SubgroupBasis) -> bool:
    return len(S.decorated) <= 1


def fixes(e: Endomorphism, S: SubgroupBasis) -> bool:
    """True when every element of ``S`` is fixed by ``e``."""
    if e.ambient != _ambient_of(S):
        raise ValueError(f"endomorphism on {e.ambient}, subgroup in {_ambient_of(S)}")
    return all(apply(e, g) == g for g in S.elements())


def trivial_subgroup(m: int, n: int) -> SubgroupBasis:
    return subgroup_basis([], m, n)


def standard_generators(m: int, n: int) -> list[FatfElement]:
    out = [FatfElement(tuple(int(i == j) for j in range(m)), Word.identity(n)) for i in range(m)]
    out += [FatfElement((0,) * m, Word.generator(i, n)) for i in range(1, n + 1)]
    return out


def whole_group(m: int, n: int) -> SubgroupBasis:
    return subgroup_basis(standard_generators(m, n), m, n)
