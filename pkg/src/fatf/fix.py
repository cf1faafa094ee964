"""Fixed subgroups of type-II endomorphisms and of type-I families."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .core import FatfElement, SubgroupBasis, TypeIEndo, TypeIIEndo, subgroup_basis
from .freewords import Word
from .intlin import IntMatrix, Lattice, hstack, left_kernel, solve_linear, vecmat
from .stallings import FreeBasis, abelian_preimage, build, centralizer_basis, intersect


@dataclass(frozen=True)
class FixResult:
    finitely_generated: bool
    basis: Optional[SubgroupBasis] = None
    witness: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        if (self.basis is None) == (self.witness is None):
            raise ValueError("exactly one of basis and witness must be given")

    @property
    def verdict(self) -> str:
        return "finitely_generated" if self.finitely_generated else "not_finitely_generated"


@dataclass(frozen=True)
class TypeIFamily:
    """Pairs ``(Q_j, P_j)`` over a common free part ``K`` (given by a free basis)."""

    pairs: tuple[tuple[IntMatrix, IntMatrix], ...]
    free_part: FreeBasis
    m: int

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(self.pairs))
        n = self.free_part.n
        for Q, P in self.pairs:
            if Q.shape != (self.m, self.m) or P.shape != (n, self.m):
                raise ValueError(f"pair shapes {Q.shape}, {P.shape} do not fit m={self.m}, n={n}")

    @property
    def n(self) -> int:
        return self.free_part.n


def fix_type_II(e: TypeIIEndo) -> SubgroupBasis:
    """Fixed subgroup of a type-II endomorphism (always abelian, always f.g.).

    A fixed point lies in the image, so it is ``t^a z^k`` with
    ``a = aQ + k zP`` and ``k = a.ell + k z.h``; the solutions form a lattice
    in Z^(m+1).
    """
    m, n = e.ambient
    zr = e.z.abelianize()
    I = IntMatrix.identity(m)
    zP = vecmat(zr, e.P)
    zh = sum(a * b for a, b in zip(zr, e.h))
    rows = [list(qi) + [li] for qi, li in zip((e.Q - I).data, e.ell)]
    rows.append(list(zP) + [zh - 1])
    sol = left_kernel(IntMatrix.from_rows(rows, m + 1))
    gens = [FatfElement(v[:m], e.z ** v[m]) for v in sol.vectors]
    return subgroup_basis(gens, m, n)


def fix_type_I_family(f: TypeIFamily) -> FixResult:
    """Common fixed points of ``Psi_(phi_i, Q_j, P_j)`` for all ``i, j``.

    Only the free part ``K`` (the common fixed subgroup of the ``phi_i``)
    enters: the answer is ``{t^a u : u in K, a (I - Q_j) = uP_j for all j}``.
    It is finitely generated exactly when the admissible ``u`` form a
    finitely generated subgroup of ``K``.
    """
    m, n = f.m, f.n
    K = f.free_part
    I = IntMatrix.identity(m)
    Astar = hstack([I - Q for Q, _ in f.pairs], rows=m)
    Pcat = hstack([P for _, P in f.pairs], rows=n)
    T = IntMatrix.from_rows([vecmat(w.abelianize(), Pcat) for w in K.words], Astar.cols)
    target = Lattice.span(Astar.data, Astar.cols)
    pre = abelian_preimage(K, T, target)
    if not pre.finitely_generated:
        return FixResult(False, witness=pre.witness)
    abelian = left_kernel(Astar)
    gens = []
    for u in pre.basis.words:
        a, _ = solve_linear(Astar, vecmat(u.abelianize(), Pcat))
        if a is None:
            raise AssertionError(f"no abelian decoration for admissible word {u}")
        gens.append(FatfElement(a, u))
    gens += [FatfElement(b, Word.identity(n)) for b in abelian.vectors]
    return FixResult(True, basis=subgroup_basis(gens, m, n))


def fix_type_I(e: TypeIEndo, fix_phi: FreeBasis) -> FixResult:
    """Fixed subgroup of a single type-I endomorphism, given a free basis of Fix(phi)."""
    return fix_type_I_family(TypeIFamily(((e.Q, e.P),), fix_phi, e.ambient[0]))


def common_free_part(bases: Sequence[FreeBasis]) -> FreeBasis:
    """Free basis of the intersection of the given subgroups of F_n."""
    return intersect(list(bases))


def fix_conjugation(z: Word) -> FreeBasis:
    """Fix of ``x -> z^-1 x z``."""
    return centralizer_basis(z)


def trivial_free(n: int) -> FreeBasis:
    return build([], n)[1]
