"""Shared hypothesis strategies."""

from hypothesis import strategies as st

from fatf.core import FatfElement
from fatf.freewords import Word
from fatf.intlin import IntMatrix


def matrices(max_rows=4, max_cols=4, bound=20):
    return st.tuples(st.integers(1, max_rows), st.integers(1, max_cols)).flatmap(
        lambda rc: st.lists(st.lists(st.integers(-bound, bound), min_size=rc[1], max_size=rc[1]),
                            min_size=rc[0], max_size=rc[0]).map(
            lambda rows: IntMatrix.from_rows(rows, rc[1])))


def words(n, max_len=6, min_len=0):
    letters = st.sampled_from([i for i in range(-n, n + 1) if i])
    return st.lists(letters, min_size=min_len, max_size=max_len).map(lambda ls: Word(tuple(ls), n))


def nontrivial_words(n, max_len=6):
    return words(n, max_len, 1).filter(bool)


def elements(m, n, vbound=3, max_len=4):
    return st.tuples(st.lists(st.integers(-vbound, vbound), min_size=m, max_size=m),
                     words(n, max_len)).map(lambda t: FatfElement(tuple(t[0]), t[1]))
