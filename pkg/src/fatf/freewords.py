"""Reduced words in the free group F_n.

Letters are nonzero integers ``i`` with ``|i| <= n``; ``-i`` is the inverse
of ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence


def _reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@dataclass(frozen=True)
class Word:
    letters: tuple[int, ...]
    n: int

    def __post_init__(self):
        letters = tuple(int(x) for x in self.letters)
        for x in letters:
            if x == 0 or abs(x) > self.n:
                raise ValueError(f"letter {x} outside the alphabet of size {self.n}")
        object.__setattr__(self, "letters", _reduce(letters))

    @classmethod
    def identity(cls, n: int) -> "Word":
        return cls((), n)

    @classmethod
    def generator(cls, i: int, n: int) -> "Word":
        return cls((i,), n)

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def _check(self, other: "Word"):
        if self.n != other.n:
            raise ValueError(f"alphabet mismatch: F_{self.n} vs F_{other.n}")

    def __mul__(self, other: "Word") -> "Word":
        self._check(other)
        return Word(self.letters + other.letters, self.n)

    def inverse(self) -> "Word":
        return Word(tuple(-x for x in reversed(self.letters)), self.n)

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return Word(base.letters * abs(k), self.n)

    def conjugate(self, g: "Word") -> "Word":
        """``g^-1 * self * g``."""
        return g.inverse() * self * g

    def abelianize(self) -> tuple[int, ...]:
        v = [0] * self.n
        for x in self.letters:
            v[abs(x) - 1] += 1 if x > 0 else -1
        return tuple(v)

    def substitute(self, images: Sequence["Word"], target: Optional[int] = None) -> "Word":
        """Image under the homomorphism sending letter ``i`` to ``images[i-1]``.

        ``target`` is the alphabet size of the result; it is only needed when
        ``images`` is empty.
        """
        if len(images) != self.n:
            raise ValueError(f"need {self.n} images, got {len(images)}")
        if target is None:
            target = images[0].n if images else 0
        out: list[int] = []
        for x in self.letters:
            img = images[abs(x) - 1].letters
            out.extend(img if x > 0 else (-y for y in reversed(img)))
        return Word(tuple(out), target)

    def cyclic_reduction(self) -> tuple["Word", "Word"]:
        """Split ``self = p * c * p^-1`` with ``c`` cyclically reduced."""
        w = self.letters
        i, j = 0, len(w) - 1
        while i < j and w[i] == -w[j]:
            i += 1
            j -= 1
        return Word(w[:i], self.n), Word(w[i:j + 1], self.n)

    def __str__(self) -> str:
        return format_word(self)


def multiply(a: Word, b: Word) -> Word:
    return a * b


def invert(a: Word) -> Word:
    return a.inverse()


def abelianize(u: Word) -> tuple[int, ...]:
    return u.abelianize()


class RootDecomposition(NamedTuple):
    root: Word
    exponent: int


def _smallest_period(s: Sequence[int]) -> int:
    # border array; s is a proper power iff its smallest period divides len(s)
    fail = [0] * len(s)
    k = 0
    for i in range(1, len(s)):
        while k and s[i] != s[k]:
            k = fail[k - 1]
        if s[i] == s[k]:
            k += 1
        fail[i] = k
    p = len(s) - fail[-1]
    return p if len(s) % p == 0 else len(s)


def primitive_root(w: Word) -> RootDecomposition:
    """Write ``w = root ** exponent`` with ``root`` not a proper power."""
    if not w:
        raise ValueError("the identity has no primitive root")
    p, c = w.cyclic_reduction()
    period = _smallest_period(c.letters)
    root = p * Word(c.letters[:period], w.n) * p.inverse()
    return RootDecomposition(root, len(c) // period)


def is_primitive_root(z: Word) -> bool:
    """True when ``z != 1`` is not a proper power."""
    return bool(z) and primitive_root(z).exponent == 1


def parse_word(text: str, n: int) -> Word:
    """Parse the whitespace-separated text form, e.g. ``"1 -2 1"``."""
    return Word(tuple(int(tok) for tok in text.split()), n)


def format_word(w: Word) -> str:
    return " ".join(str(x) for x in w.letters)


def reduced_words(n: int, max_length: int):
    """All reduced words of length at most ``max_length``, shortlex order."""
    letters = [s * i for i in range(1, n + 1) for s in (1, -1)]
    layer = [()]
    yield Word((), n)
    for _ in range(max_length):
        nxt = []
        for w in layer:
            for x in letters:
                if not w or w[-1] != -x:
                    nxt.append(w + (x,))
        for w in nxt:
            yield Word(w, n)
        layer = nxt
