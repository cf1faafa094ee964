import itertools
import random

import pytest
from hypothesis import given, strategies as st

from fatf.core import (FatfElement, TypeIEndo, TypeIIEndo, apply, compose, fixes, invert, is_abelian, member,
                       multiply, standard_generators, subgroup_basis, subgroup_equal, whole_group)
from fatf.freewords import Word
from fatf.intlin import IntMatrix, Lattice

from strategies import elements


def E(vec, *letters, n=2):
    return FatfElement(tuple(vec), Word(tuple(letters), n))


def negating_endo():
    return TypeIEndo(TypeIEndo.identity(1, 2).phi, IntMatrix.from_rows([[-1]]), IntMatrix.from_rows([[1], [0]]))


H_SQUARE = [E([1], 1, 1), E([0], 2)]


def test_multiply_examples():
    assert multiply(E([1], 1), E([2], -1)) == E([3])
    x = E([4, -2], 1, 2, -1, n=2)
    assert (x * invert(x)).is_identity()
    assert E([1, 0], 1) * E([0, 1], 2) == E([1, 1], 1, 2)
    with pytest.raises(ValueError):
        E([1], 1) * E([1, 0], 1)


@given(elements(2, 2), elements(2, 2), elements(2, 2))
def test_group_law(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert (x * y).inverse() == y.inverse() * x.inverse()
    assert (x * x.inverse()).is_identity()


@given(st.integers(0, 10**6), elements(2, 2), elements(2, 2))
def test_apply_homomorphism_property(seed, x, y):
    e = random_endo(random.Random(seed), 2, 2)
    assert apply(e, x * y) == apply(e, x) * apply(e, y)


def test_apply_examples():
    e = negating_endo()
    assert apply(e, E([1], 1, 1)) == E([1], 1, 1)
    assert apply(e, E([0], 2)) == E([0], 2)
    e2 = TypeIIEndo(Word((1,), 2), (1,), (0, 0), IntMatrix.identity(1), IntMatrix.zeros(2, 1))
    assert apply(e2, E([3], 2)) == E([3], 1, 1, 1)


def test_type_ii_validation():
    Z = IntMatrix.zeros(2, 1)
    with pytest.raises(ValueError):
        TypeIIEndo(Word((1, 1), 2), (1,), (0, 0), IntMatrix.identity(1), Z)
    with pytest.raises(ValueError):
        TypeIIEndo(Word((1,), 2), (0,), (0, 0), IntMatrix.identity(1), Z)
    with pytest.raises(ValueError):
        TypeIIEndo(Word((), 2), (1,), (0, 0), IntMatrix.identity(1), Z)


def random_endo(rng, m, n, kind=None):
    mat = lambda r, c: IntMatrix.from_rows([[rng.randint(-2, 2) for _ in range(c)] for _ in range(r)], c)
    rword = lambda: Word(tuple(rng.choice([i for i in range(-n, n + 1) if i]) for _ in range(rng.randint(0, 3))), n)
    kind = kind or rng.choice("I II".split())
    if kind == "I":
        return TypeIEndo(tuple(rword() for _ in range(n)), mat(m, m), mat(n, m))
    while True:
        z = rword()
        from fatf.freewords import is_primitive_root
        if z and is_primitive_root(z):
            break
    ell = tuple(rng.randint(-2, 2) for _ in range(m))
    if not any(ell):
        ell = (1,) + ell[1:]
    return TypeIIEndo(z, ell, tuple(rng.randint(-2, 2) for _ in range(n)), mat(m, m), mat(n, m))


@pytest.mark.parametrize("seed", range(30))
def test_apply_homomorphism_and_compose(seed):
    rng = random.Random(seed)
    m, n = rng.randint(1, 2), 2
    e1, e2 = random_endo(rng, m, n), random_endo(rng, m, n)
    rel = lambda: FatfElement(tuple(rng.randint(-3, 3) for _ in range(m)),
                              Word(tuple(rng.choice([1, -1, 2, -2]) for _ in range(rng.randint(0, 5))), n))
    c = compose(e1, e2)
    for _ in range(5):
        x, y = rel(), rel()
        assert apply(e1, x * y) == apply(e1, x) * apply(e1, y)
        # compose(e1, e2) means "first e1, then e2"
        assert apply(c, x) == apply(e2, apply(e1, x))


def test_fixes_examples():
    S = subgroup_basis(H_SQUARE, 1, 2)
    assert fixes(TypeIEndo.identity(1, 2), S)
    assert fixes(negating_endo(), S)
    assert not fixes(negating_endo(), subgroup_basis([E([1], 1)], 1, 2))


def test_subgroup_basis_examples():
    S = subgroup_basis(H_SQUARE, 1, 2)
    assert set(S.decorated) == {((1,), Word((1, 1), 2)), ((0,), Word((2,), 2))}
    assert S.lattice.rank == 0
    S = subgroup_basis([E([2]), E([3])], 1, 2)
    assert S.lattice == Lattice.full(1) and S.decorated == ()
    S = subgroup_basis([E([1], 1), E([2], 1, 1)], 1, 2)
    assert S.decorated == (((1,), Word((1,), 2)),) and S.lattice.rank == 0


def test_subgroup_basis_hidden_lattice():
    # the relation between the two generator words leaves (t z1) z1^-1 = t in H
    S = subgroup_basis([E([1], 1), E([0], 1)], 1, 2)
    assert S.lattice == Lattice.full(1)
    assert S.decorated == (((0,), Word((1,), 2)),)


def test_member_examples():
    S = subgroup_basis(H_SQUARE, 1, 2)
    for g in S.elements():
        assert member(S, g)
    assert not member(S, E([1], 1))
    assert not member(S, E([0], 1, 1))


def test_equal_and_abelian():
    S = subgroup_basis(H_SQUARE, 1, 2)
    assert subgroup_equal(S, S)
    assert subgroup_equal(S, subgroup_basis([E([1], 1, 1) * E([0], 2), E([0], 2)], 1, 2))
    assert is_abelian(subgroup_basis([E([1], 1, 1)], 1, 2))
    assert not is_abelian(S)


def products(gens, length):
    alphabet = list(gens) + [g.inverse() for g in gens]
    out = set()
    for k in range(1, length + 1):
        for combo in itertools.product(alphabet, repeat=k):
            x = combo[0]
            for y in combo[1:]:
                x = x * y
            out.add(x)
    return out


@pytest.mark.parametrize("seed", range(12))
def test_subgroup_basis_contract(seed):
    rng = random.Random(seed)
    m, n = rng.randint(1, 2), 2
    gens = [FatfElement(tuple(rng.randint(-2, 2) for _ in range(m)),
                        Word(tuple(rng.choice([1, -1, 2, -2]) for _ in range(rng.randint(0, 3))), n))
            for _ in range(rng.randint(1, 3))]
    S = subgroup_basis(gens, m, n)
    prods = products(gens, 3 if len(gens) > 2 else 4)
    for g in list(gens) + list(prods):
        assert member(S, g)
    abel = [x.vec for x in prods if not x.word]
    for v in abel:
        assert v in S.lattice
    # each lattice generator is exhibited by a purely abelian product, when available at this depth
    found = Lattice.span(abel, m) if abel else Lattice.zero(m)
    assert S.lattice.contains_lattice(found)
    # canonical decorations
    for a, _ in S.decorated:
        assert S.lattice.reduce(a) == tuple(a)
    # is_abelian agrees with commutation of basis elements
    els = S.elements()
    commute = all(x * y == y * x for x in els for y in els)
    assert commute == is_abelian(S)


def test_whole_group():
    G = whole_group(2, 2)
    assert all(member(G, g) for g in standard_generators(2, 2))
    assert member(G, E([5, -3], 1, 2, -1))
