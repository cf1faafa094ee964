import itertools
import random

import pytest

from fatf.core import FatfElement, TypeIEndo, TypeIIEndo, apply, member, subgroup_basis, subgroup_equal
from fatf.fix import FixResult, TypeIFamily, common_free_part, fix_type_I_family, fix_type_II
from fatf.freewords import Word, reduced_words
from fatf.intlin import IntMatrix, Lattice
from fatf.stallings import build, full_group


def W(*letters, n=2):
    return Word(tuple(letters), n)


def E(vec, *letters, n=2):
    return FatfElement(tuple(vec), Word(tuple(letters), n))


def M(rows, cols=None):
    return IntMatrix.from_rows(rows, cols)


def type2(z, ell, h, Q, P):
    return TypeIIEndo(z, tuple(ell), tuple(h), M(Q), M(P, len(ell)))


def ball(m, n, wlen, vbound):
    for w in reduced_words(n, wlen):
        for v in itertools.product(range(-vbound, vbound + 1), repeat=m):
            yield FatfElement(v, w)


def test_fix_result_exclusive():
    with pytest.raises(ValueError):
        FixResult(True)


def test_fix_type_II_examples():
    e = type2(W(1), [1], [0, 0], [[1]], [[0], [0]])
    assert subgroup_equal(fix_type_II(e), subgroup_basis([E([1], 1)], 1, 2))
    e = type2(W(1), [1], [0, 0], [[2]], [[0], [0]])
    F = fix_type_II(e)
    assert F.decorated == () and F.lattice.rank == 0
    e = type2(W(1), [1, 0], [0, 0], [[1, 0], [0, 1]], [[0, 0], [0, 0]])
    expected = subgroup_basis([E([1, 0], 1), E([0, 1])], 2, 2)
    assert subgroup_equal(fix_type_II(e), expected)


@pytest.mark.parametrize("seed", range(12))
def test_fix_type_II_ball(seed):
    rng = random.Random(seed)
    m, n = 1, 2
    z = rng.choice([W(1), W(2), W(1, 2), W(1, -2)])
    ell = (rng.choice([-2, -1, 1, 2]),)
    h = (rng.randint(-1, 1), rng.randint(-1, 1))
    e = TypeIIEndo(z, ell, h, M([[rng.randint(-2, 2)]]), M([[rng.randint(-1, 1)], [rng.randint(-1, 1)]]))
    F = fix_type_II(e)
    for g in F.elements():
        assert apply(e, g) == g
    for x in ball(m, n, 4, 3):
        if apply(e, x) == x:
            assert member(F, x)


def single_pair_family(Q, K=None):
    K = K or full_group(2)
    return TypeIFamily(((M([[Q]]), M([[1], [0]])),), K, 1)


def test_family_not_fg():
    res = fix_type_I_family(single_pair_family(1))
    assert res.verdict == "not_finitely_generated"
    assert res.witness is not None and res.basis is None


def test_family_fg():
    res = fix_type_I_family(single_pair_family(-1))
    assert res.finitely_generated
    expect = subgroup_basis([E([1], 1, 1), E([0], 2), E([0], 1, 2, -1)], 1, 2)
    assert subgroup_equal(res.basis, expect)
    assert res.basis.lattice.rank == 0


def test_family_rank_one():
    K = build([W(1)], 2)[1]
    for Q in (-2, 0, 1, 3):
        assert fix_type_I_family(single_pair_family(Q, K)).finitely_generated


def test_family_no_pairs():
    res = fix_type_I_family(TypeIFamily((), full_group(2), 2))
    assert res.finitely_generated
    assert res.basis.lattice == Lattice.full(2)
    assert len(res.basis.decorated) == 2


def random_family(rng, m):
    n = 2
    pairs = tuple((M([[rng.randint(-2, 2) for _ in range(m)] for _ in range(m)]),
                   M([[rng.randint(-1, 1) for _ in range(m)] for _ in range(n)], m))
                  for _ in range(rng.randint(1, 2)))
    gens = [Word(tuple(rng.choice([1, -1, 2, -2]) for _ in range(rng.randint(1, 3))), n) for _ in range(2)]
    return TypeIFamily(pairs, build(gens, n)[1], m)


@pytest.mark.parametrize("seed", range(25))
def test_family_properties(seed):
    rng = random.Random(seed)
    m = rng.randint(1, 2)
    f = random_family(rng, m)
    res = fix_type_I_family(f)
    ident = TypeIEndo.identity(m, 2).phi
    endos = [TypeIEndo(ident, Q, P) for Q, P in f.pairs]
    # duplicating a pair is idempotent
    dup = fix_type_I_family(TypeIFamily(f.pairs + f.pairs[:1], f.free_part, m))
    assert dup.verdict == res.verdict
    # verdict invariant under a change of K-basis
    K = f.free_part
    if K.rank >= 2:
        w = K.words
        rebased = build([w[0] * w[1], w[1]] + list(w[2:]), 2)[1]
        assert fix_type_I_family(TypeIFamily(f.pairs, rebased, m)).verdict == res.verdict
    if not res.finitely_generated:
        return
    assert subgroup_equal(dup.basis, res.basis)
    for g in res.basis.elements():
        assert g.word in K
        for e in endos:
            assert apply(e, g) == g
    for x in ball(m, 2, 4, 2):
        if x.word in K and all(apply(e, x) == x for e in endos):
            assert member(res.basis, x)


def test_common_free_part():
    A = build([W(1, 1), W(2)], 2)[1]
    B = build([W(1, 1, 1)], 2)[1]
    assert common_free_part([A]).words == A.words
    assert common_free_part([A, B]).words == (Word((1,) * 6, 2),)
    assert common_free_part([A, full_group(2)]).words == A.words
