"""Endo-fixed closures in Z^m x F_n.

Abelian subgroups get a closed-form closure together with a single
endomorphism whose fixed subgroup is exactly that closure.  Non-abelian
subgroups reduce to a type-I family: the admissible ``(Q, P)`` pairs come from
an integer kernel computation, and the free layer (the endo-closure of the
projection in F_n) is supplied by an :class:`OracleSet`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd
from typing import Iterator, Optional, Sequence

from .core import (Endomorphism, FatfElement, SubgroupBasis, TypeIEndo, TypeIIEndo, fixes,
                   is_abelian, member, subgroup_basis, subgroup_equal)
from .fix import TypeIFamily, fix_conjugation, fix_type_I, fix_type_I_family, fix_type_II, trivial_free
from .freewords import Word, is_primitive_root, primitive_root, reduced_words
from .intlin import (IntMatrix, Lattice, Vector, complement, content, inverse_unimodular, left_kernel,
                     saturation, vecmat, vector_gcd_bezout, vstack)
from .stallings import FreeBasis, build, full_group, intersect

TRUST_NOTE = ("free-group fixed subgroups supplied by the oracle are assumed complete; "
              "only that their listed generators are fixed has been checked")


class OracleError(ValueError):
    """An oracle claim failed validation; ``index`` names the offending endomorphism."""

    def __init__(self, index: int, reason: str):
        super().__init__(f"oracle endomorphism {index}: {reason}")
        self.index = index
        self.reason = reason


@dataclass(frozen=True)
class OracleSet:
    """Free-group endomorphisms ``phi_1..phi_k`` with free bases of their fixed subgroups.

    ``phi_0 = Id`` is implicit.  Intersecting the fixed subgroups should give
    the endo-closure of the projection in F_n; that completeness is trusted.
    """

    endos: tuple[tuple[Word, ...], ...]
    fix_bases: tuple[tuple[Word, ...], ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "endos", tuple(tuple(e) for e in self.endos))
        object.__setattr__(self, "fix_bases", tuple(tuple(b) for b in self.fix_bases))
        if len(self.endos) != len(self.fix_bases):
            raise ValueError("one fixed-subgroup basis is needed per endomorphism")
        for i, images in enumerate(self.endos):
            if len(images) != self.n or any(w.n != self.n for w in images):
                raise OracleError(i, f"needs {self.n} letter images in F_{self.n}")
            if any(w.n != self.n for w in self.fix_bases[i]):
                raise OracleError(i, f"fixed-subgroup basis must live in F_{self.n}")

    @classmethod
    def identity_only(cls, n: int) -> "OracleSet":
        return cls((), (), n)

    def validate(self, S: SubgroupBasis):
        for i, images in enumerate(self.endos):
            for _, u in S.decorated:
                if u.substitute(images) != u:
                    raise OracleError(i, f"does not fix projection basis word [{u}]")
            for w in self.fix_bases[i]:
                if w.substitute(images) != w:
                    raise OracleError(i, f"claimed fixed word [{w}] is not fixed")

    def free_part(self) -> FreeBasis:
        bases = [full_group(self.n)] + [build(list(b), self.n)[1] for b in self.fix_bases]
        return intersect(bases)


@dataclass(frozen=True)
class AbelianCaseData:
    case_tag: str  # pure_abelian | i | ii | iii
    Btilde: Lattice
    C: Lattice
    z: Optional[Word] = None
    r: int = 0
    a: Optional[Vector] = None
    b: Optional[Vector] = None
    c: Optional[Vector] = None
    alpha: int = 0
    alpha1: int = 0
    alpha2: int = 0
    r_prime: int = 0
    c_prime: Optional[Vector] = None


@dataclass(frozen=True)
class ClosureResult:
    closure: Optional[SubgroupBasis]
    witnesses: tuple[Endomorphism, ...]
    qp_pairs: tuple[tuple[IntMatrix, IntMatrix], ...] = ()
    case: Optional[AbelianCaseData] = None
    oracle_size: int = 0
    non_fg_witness: Optional[tuple[int, ...]] = None
    trust: Optional[str] = field(default=None)

    @property
    def finitely_generated(self) -> bool:
        return self.closure is not None

    @property
    def verdict(self) -> str:
        return "finitely_generated" if self.finitely_generated else "not_finitely_generated"

    @property
    def q(self) -> int:
        return len(self.qp_pairs)


# ---------------------------------------------------------------------------
# Abelian case

def _involution(fixed: Lattice, negated: Lattice) -> IntMatrix:
    """Q fixing ``fixed`` and negating ``negated``; the two must form a basis of Z^m."""
    basis = vstack([fixed.basis, negated.basis], fixed.ambient_dim)
    D = IntMatrix.diagonal([1] * fixed.rank + [-1] * negated.rank)
    return inverse_unimodular(basis) @ D @ basis


def _conjugation(z: Word) -> tuple[Word, ...]:
    n = z.n
    return tuple(Word.generator(i, n).conjugate(z) for i in range(1, n + 1))


def _inversion(n: int) -> tuple[Word, ...]:
    return tuple(Word.generator(-i, n) for i in range(1, n + 1))


def _split(a: Vector, Bt: Lattice, C: Lattice) -> tuple[Vector, Vector]:
    basis = vstack([Bt.basis, C.basis], Bt.ambient_dim)
    coords = vecmat(a, inverse_unimodular(basis))
    s = Bt.rank
    b = vecmat(coords[:s], Bt.basis) if s else (0,) * len(a)
    c = vecmat(coords[s:], C.basis) if C.rank else (0,) * len(a)
    return tuple(b), tuple(c)


def abelian_closure(S: SubgroupBasis, choose_complement=complement) -> ClosureResult:
    """Endo-closure of an abelian subgroup, with a witness whose Fix is the closure.

    ``choose_complement`` picks the complement of a saturated lattice; the
    closure does not depend on it.
    """
    if not is_abelian(S):
        raise ValueError("abelian_closure needs an abelian subgroup (cyclic projection)")
    m, n = S.m, S.n
    Bt = saturation(S.lattice)
    C = choose_complement(Bt)
    zero_P = IntMatrix.zeros(n, m)

    if not S.decorated:
        Q = _involution(Bt, C)
        witness = TypeIEndo(_inversion(n), Q, zero_P)
        closure = subgroup_basis([FatfElement(b, Word.identity(n)) for b in Bt.vectors], m, n)
        return ClosureResult(closure, (witness,), case=AbelianCaseData("pure_abelian", Bt, C))

    a, u = S.decorated[0]
    z, r = primitive_root(u)
    b, c = _split(a, Bt, C)
    tB = [FatfElement(v, Word.identity(n)) for v in Bt.vectors]
    if not any(c):
        Q = _involution(Bt, C)
        witness = TypeIEndo(_conjugation(z), Q, zero_P)
        closure = subgroup_basis([FatfElement((0,) * m, z)] + tB, m, n)
        data = AbelianCaseData("i", Bt, C, z, r, a, b, c)
        return ClosureResult(closure, (witness,), case=data)

    alpha = content(c)
    c1 = tuple(x // alpha for x in c)
    alpha1 = gcd(alpha, r)
    alpha2, r1 = alpha // alpha1, r // alpha1
    zr = z.abelianize()
    g, h, rho = vector_gcd_bezout(zr, alpha2, nonzero_extra=True)
    extended = Lattice.span(Bt.vectors + (c1,), m)
    rest = choose_complement(extended)
    Q = _involution(extended, rest)
    if g == 1:
        # ell vanishes on Btilde and the rest of the completion, and c'.ell = r' rho
        completion = vstack([Bt.basis, IntMatrix.from_rows([c1], m), rest.basis], m)
        target = [0] * Bt.rank + [r1 * rho] + [0] * rest.rank
        ell = tuple(vecmat(target, inverse_unimodular(completion).transpose()))
        witness: Endomorphism = TypeIIEndo(z, ell, h, Q, zero_P)
        closure = subgroup_basis([FatfElement(tuple(alpha2 * x for x in c1), z ** r1)] + tB, m, n)
        tag = "ii"
    else:
        witness = TypeIEndo(_conjugation(z), Q, zero_P)
        closure = subgroup_basis([FatfElement((0,) * m, z), FatfElement(c1, Word.identity(n))] + tB, m, n)
        tag = "iii"
    data = AbelianCaseData(tag, Bt, C, z, r, a, b, c, alpha, alpha1, alpha2, r1, c1)
    return ClosureResult(closure, (witness,), case=data)


def witness_fixed_subgroup(result: ClosureResult) -> SubgroupBasis:
    """Fix of the abelian-case witness, recomputed by the fixed-subgroup engine.

    The free parts of the type-I witnesses are known: conjugation by ``z``
    fixes ``<z>`` and inverting every letter fixes only the identity.
    """
    if result.case is None or len(result.witnesses) != 1:
        raise ValueError("not an abelian-case closure")
    (e,) = result.witnesses
    if isinstance(e, TypeIIEndo):
        return fix_type_II(e)
    n = e.ambient[1]
    K = trivial_free(n) if result.case.case_tag == "pure_abelian" else fix_conjugation(result.case.z)
    return fix_type_I(e, K).basis


# ---------------------------------------------------------------------------
# Non-abelian case

def qp_pairs(S: SubgroupBasis) -> tuple[tuple[IntMatrix, IntMatrix], ...]:
    """Kernel basis of ``a_i X + u_i Y = 0, b_j X = 0`` returned as ``(X + I, Y)``.

    Unknowns are flattened as the ``m*m`` entries of ``X`` followed by the
    ``n*m`` entries of ``Y``, row-major.
    """
    m, n = S.m, S.n
    nx = m * m
    eqs: list[list[int]] = []

    def equation(a: Sequence[int], u: Sequence[int], col: int) -> list[int]:
        coeff = [0] * (nx + n * m)
        for p in range(m):
            coeff[p * m + col] = a[p]
        for p in range(n):
            coeff[nx + p * m + col] = u[p]
        return coeff

    for a, w in S.decorated:
        ur = w.abelianize()
        for col in range(m):
            eqs.append(equation(a, ur, col))
    for bvec in S.lattice.vectors:
        for col in range(m):
            eqs.append(equation(bvec, (0,) * n, col))
    E = IntMatrix.from_rows([[e[i] for e in eqs] for i in range(nx + n * m)], len(eqs))
    kernel = left_kernel(E)
    I = IntMatrix.identity(m)
    out = []
    for v in kernel.vectors:
        X = IntMatrix.from_rows([v[p * m:(p + 1) * m] for p in range(m)], m)
        Y = IntMatrix.from_rows([v[nx + p * m:nx + (p + 1) * m] for p in range(n)], m)
        out.append((X + I, Y))
    ident = TypeIEndo.identity(m, n).phi
    for Q, P in out:
        if not fixes(TypeIEndo(ident, Q, P), S):
            raise AssertionError("kernel pair does not stabilize the subgroup")
    return tuple(out)


def nonabelian_closure(S: SubgroupBasis, oracle: OracleSet) -> ClosureResult:
    if is_abelian(S):
        raise ValueError("nonabelian_closure needs a non-abelian subgroup")
    if oracle.n != S.n:
        raise ValueError(f"oracle acts on F_{oracle.n}, subgroup lives in F_{S.n}")
    oracle.validate(S)
    m, n = S.m, S.n
    K = oracle.free_part()
    pairs = qp_pairs(S)
    res = fix_type_I_family(TypeIFamily(pairs, K, m))
    phis = [TypeIEndo.identity(m, n).phi] + list(oracle.endos)
    witnesses = tuple(TypeIEndo(phi, Q, P) for phi in phis for Q, P in pairs)
    for e in witnesses:
        if not fixes(e, S):
            raise AssertionError("witness endomorphism does not fix the subgroup")
    return ClosureResult(res.basis, witnesses, pairs, oracle_size=len(oracle.endos),
                         non_fg_witness=res.witness, trust=TRUST_NOTE)


def endo_closure(generators: Sequence[FatfElement], m: int, n: int,
                 oracle: Optional[OracleSet] = None) -> ClosureResult:
    S = subgroup_basis(generators, m, n)
    return closure_of_basis(S, oracle)


def closure_of_basis(S: SubgroupBasis, oracle: Optional[OracleSet] = None) -> ClosureResult:
    if is_abelian(S):
        return abelian_closure(S)
    if oracle is None:
        raise ValueError("a free-group oracle is required for non-abelian subgroups")
    return nonabelian_closure(S, oracle)


@dataclass(frozen=True)
class EndoFixedVerdict:
    endo_fixed: bool
    closure: ClosureResult
    certificate: Optional[FatfElement] = None

    @property
    def witnesses(self) -> tuple[Endomorphism, ...]:
        return self.closure.witnesses


def is_endo_fixed(generators: Sequence[FatfElement], m: int, n: int,
                  oracle: Optional[OracleSet] = None) -> EndoFixedVerdict:
    """Decide ``e-Cl(H) == H``; otherwise exhibit a closure element outside ``H``."""
    S = subgroup_basis(generators, m, n)
    res = closure_of_basis(S, oracle)
    if res.closure is None:
        # a non-f.g. closure strictly contains the f.g. subgroup H
        return EndoFixedVerdict(False, res)
    if subgroup_equal(res.closure, S):
        return EndoFixedVerdict(True, res)
    outside = next(g for g in res.closure.elements() if not member(S, g))
    return EndoFixedVerdict(False, res, outside)


# ---------------------------------------------------------------------------
# Brute-force stabilizers (testing oracle)

def _matrices(rows: int, cols: int, bound: int) -> Iterator[IntMatrix]:
    rng = range(-bound, bound + 1)
    for entries in itertools.product(rng, repeat=rows * cols):
        yield IntMatrix(rows, cols, tuple(tuple(entries[i * cols:(i + 1) * cols]) for i in range(rows)))


def _vectors(length: int, bound: int) -> Iterator[Vector]:
    return itertools.product(range(-bound, bound + 1), repeat=length)


def iter_stabilizers(S: SubgroupBasis, word_bound: int, matrix_bound: int) -> Iterator[Endomorphism]:
    """Lazily enumerate bounded endomorphisms fixing ``S``, in a fixed order.

    Cost grows like ``(2n+1)^(nL) (2B+1)^(m^2+nm)``.  The free-part images and
    the matrix data are screened separately (each condition only involves one
    of them) and every combination is confirmed with :func:`fixes`.
    """
    m, n = S.m, S.n
    elems = S.elements()
    words = list(reduced_words(n, word_bound))

    qp_ok = []
    for Q in _matrices(m, m, matrix_bound):
        for P in _matrices(n, m, matrix_bound):
            probe = TypeIEndo(TypeIEndo.identity(m, n).phi, Q, P)
            if all(apply_vec(probe, g) == g.vec for g in elems):
                qp_ok.append((Q, P))

    for phi in itertools.product(words, repeat=n):
        if any(g.word.substitute(phi) != g.word for g in elems):
            continue
        for Q, P in qp_ok:
            e = TypeIEndo(phi, Q, P)
            if fixes(e, S):
                yield e

    stable = [z for z in words if z and is_primitive_root(z)]
    for z in stable:
        for ell in _vectors(m, matrix_bound):
            if not any(ell):
                continue
            for h in _vectors(n, matrix_bound):
                if any(g.word != z ** (_dot(g.vec, ell) + _dot(g.word.abelianize(), h)) for g in elems):
                    continue
                for Q, P in qp_ok:
                    e = TypeIIEndo(z, ell, h, Q, P)
                    if fixes(e, S):
                        yield e


def enumerate_stabilizers(S: SubgroupBasis, word_bound: int, matrix_bound: int) -> list[Endomorphism]:
    return list(iter_stabilizers(S, word_bound, matrix_bound))


def apply_vec(e: Endomorphism, x: FatfElement) -> Vector:
    return tuple(a + b for a, b in zip(vecmat(x.vec, e.Q), vecmat(x.word.abelianize(), e.P)))


def _dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))
