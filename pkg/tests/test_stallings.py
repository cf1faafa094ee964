import random

import pytest
from hypothesis import given, strategies as st

from fatf.freewords import Word, reduced_words
from fatf.intlin import IntMatrix, Lattice, lattice_index, quotient_structure
from fatf.stallings import (abelian_preimage, build, centralizer_basis, coset_automaton, full_group, intersect,
                            membership, pullback)

from strategies import words


def W(*letters, n=2):
    return Word(tuple(letters), n)


def products(gens, n, length):
    """Every product of at most ``length`` generators or inverses."""
    alphabet = list(gens) + [g.inverse() for g in gens]
    out = {Word.identity(n)}
    frontier = {Word.identity(n)}
    for _ in range(length):
        frontier = {w * g for w in frontier for g in alphabet}
        out |= frontier
    return out


def test_build_examples():
    G, B = build([W(1, 1), W(2)], 2)
    assert G.rank == 2 and set(B.words) == {W(1, 1), W(2)}
    G, B = build([], 2)
    assert G.rank == 0 and B.words == ()
    G, B = build([W(1), W(1, 2)], 2)
    assert G.rank == 2 and set(B.words) == {W(1), W(2)}
    assert G == full_group(2).graph


def test_core_invariants():
    G, _ = build([W(1, 2, -1), W(2, 2), W(-1, 2, 1, 1)], 2)
    assert G.rank == len(G.edges) - G.num_vertices + 1
    degree = [0] * G.num_vertices
    seen = set()
    for s, a, t in G.edges:
        degree[s] += 1
        degree[t] += 1
        assert (s, a) not in seen and (t, -a) not in seen
        seen |= {(s, a), (t, -a)}
    assert all(d >= 2 for d in degree[1:])


def test_membership_examples():
    G, B = build([W(1, 1), W(2)], 2)
    expr = membership(G, W(1, 1))
    assert expr is not None and expr.substitute(B.words) == W(1, 1)
    assert len(expr) == 1
    assert membership(G, W(1)) is None
    assert membership(G, Word.identity(2)) == Word.identity(G.rank)


@pytest.mark.parametrize("seed", range(8))
def test_membership_ball(seed):
    rng = random.Random(seed)
    n = 2
    gens = [Word(tuple(rng.choice([1, -1, 2, -2]) for _ in range(rng.randint(1, 4))), n) for _ in range(2)]
    G, B = build(gens, n)
    members = products(gens, n, 3)
    for w in members:
        expr = membership(G, w)
        assert expr is not None
        assert expr.substitute(B.words) == w
        # provenance: the generator expression rewrites back as well
        _, gen_expr = G.read(w)
        assert gen_expr.substitute(gens) == w
    for w in reduced_words(n, 5):
        if w not in members and membership(G, w) is not None:
            assert membership(G, w).substitute(B.words) == w


@given(st.lists(words(2, 4), min_size=1, max_size=3), st.lists(st.integers(0, 2), max_size=5),
       st.lists(st.booleans(), min_size=5, max_size=5))
def test_membership_of_random_products(gens, picks, signs):
    G, B = build(gens, 2)
    w = Word.identity(2)
    for i, inv in zip(picks, signs):
        g = gens[i % len(gens)]
        w = w * (g.inverse() if inv else g)
    expr = membership(G, w)
    assert expr is not None and expr.substitute(B.words, target=2) == w
    assert G.rank == len(B.words)


def test_membership_rejects_against_coset_automaton():
    # H = preimage of 2Z x Z: members are exactly words with even z1 exponent
    G, _ = build([W(2), W(1, 1), W(1, 2, -1)], 2)
    for w in reduced_words(2, 6):
        assert (membership(G, w) is not None) == (w.abelianize()[0] % 2 == 0)


def test_pullback_examples():
    G1, _ = build([W(1, 1), W(2)], 2)
    G2, _ = build([W(1, 1, 1)], 2)
    I = intersect([build([W(1, 1), W(2)], 2)[1], build([W(1, 1, 1)], 2)[1]])
    assert I.words == (Word((1,) * 6, 2),)
    assert pullback(G1, G1) == G1
    assert pullback(G1, full_group(2).graph) == G1


@pytest.mark.parametrize("seed", range(6))
def test_pullback_ball(seed):
    rng = random.Random(100 + seed)
    rnd = lambda: Word(tuple(rng.choice([1, -1, 2, -2]) for _ in range(rng.randint(1, 3))), 2)
    G1, _ = build([rnd(), rnd()], 2)
    G2, _ = build([rnd(), rnd()], 2)
    P = pullback(G1, G2)
    for w in reduced_words(2, 6):
        assert (w in P) == (w in G1 and w in G2)


def test_centralizer_examples():
    assert centralizer_basis(W(1)).words == (W(1),)
    assert centralizer_basis(W(1, 1)).words == (W(1),)
    assert centralizer_basis(W(1, 2)).words == (W(1, 2),)
    with pytest.raises(ValueError):
        centralizer_basis(Word.identity(2))


# Abelianization preimages ----------------------------------------------------

def test_preimage_index_two():
    F2 = full_group(2)
    pre = abelian_preimage(F2, IntMatrix.identity(2), Lattice.span([(2, 0), (0, 1)], 2))
    assert pre.finitely_generated and pre.index == 2
    assert pre.basis.words == (W(2), W(1, 1), W(1, 2, -1))


def test_preimage_not_fg():
    F2 = full_group(2)
    pre = abelian_preimage(F2, IntMatrix.identity(2), Lattice.span([(0, 1)], 2))
    assert not pre.finitely_generated
    w = pre.witness
    assert w is not None and w not in Lattice.span([(0, 1)], 2)


def test_preimage_rank_one():
    B = build([W(1)], 2)[1]
    for k in (0, 1, 3):
        pre = abelian_preimage(B, IntMatrix.identity(1), Lattice.span([(k,)], 1))
        assert pre.finitely_generated
        assert pre.basis.words == (() if k == 0 else (W(*([1] * k)),))


def nielsen_schreier_case(rng):
    r = rng.randint(1, 3)
    while True:
        rows = [[rng.randint(-3, 3) for _ in range(r)] for _ in range(r)]
        M = Lattice.span(rows, r)
        d = lattice_index(M)
        if d is not None and d <= 24:
            return r, M, d


@pytest.mark.parametrize("seed", range(15))
def test_coset_automaton_rank(seed):
    r, M, d = nielsen_schreier_case(random.Random(seed))
    G = coset_automaton(M)
    assert G.num_vertices == d
    assert G.rank == 1 + d * (r - 1)
    q = quotient_structure(M)
    for w in reduced_words(r, 4 if r < 3 else 3):
        assert (w in G) == (q(w.abelianize()) == q((0,) * r))


@pytest.mark.parametrize("seed", range(10))
def test_preimage_condition(seed):
    rng = random.Random(seed)
    n = 2
    B = build([Word(tuple(rng.choice([1, -1, 2, -2]) for _ in range(rng.randint(1, 3))), n)
               for _ in range(2)], n)[1]
    r = B.rank
    T = IntMatrix.from_rows([[rng.randint(-2, 2) for _ in range(2)] for _ in range(r)], 2)
    L = Lattice.span([[rng.randint(-3, 3) for _ in range(2)] for _ in range(2)], 2)
    pre = abelian_preimage(B, T, L)
    from fatf.intlin import vecmat
    condition = lambda u: tuple(vecmat(B.express(u).abelianize(), T)) in L
    if not pre.finitely_generated:
        return
    for u in pre.basis.words:
        assert u in B and condition(u)
    for u in reduced_words(n, 5):
        if u in B and condition(u):
            assert u in pre.basis
    if pre.index is not None and r >= 1:
        assert pre.basis.rank == 1 + pre.index * (r - 1)
