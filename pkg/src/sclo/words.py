"""
Freely reduced words in a finitely generated free group.

A word is a tuple of nonzero ints: generator ``k`` of an alphabet is the
letter ``k`` and its inverse is ``-k`` (generators are numbered from 1 in
declaration order).  All functions here are pure and work on tuples, so
words can be hashed, compared and shared freely.

>>> A = Alphabet(["a", "b", "c"])
>>> A.format(concat(A.parse("a b"), A.parse("b^-1 c")))
'a c'
"""

from __future__ import annotations

import re
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

Word = tuple  # tuple[int, ...]

EMPTY: Word = ()

_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


class WordError(ValueError):
    pass


class Alphabet:
    """Ordered list of generator names; letter ``i + 1`` is ``names[i]``."""

    def __init__(self, names: Iterable[str]):
        self.names = tuple(names)
        for name in self.names:
            if not _TOKEN.match(name) or "^" in name:
                raise WordError(f"invalid generator name {name!r}")
        if len(set(self.names)) != len(self.names):
            raise WordError(f"duplicate generator names in {self.names}")
        self._index = {name: i + 1 for i, name in enumerate(self.names)}

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name) -> bool:
        return name in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"Alphabet({list(self.names)})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise WordError(f"letter {name!r} not in alphabet {self.names}") from None

    def letter(self, name: str) -> Word:
        return (self.index(name),)

    def name(self, letter: int) -> str:
        return self.names[abs(letter) - 1]

    def signed_letters(self) -> list[int]:
        """Letters in canonical order a, a^-1, b, b^-1, ..."""
        out = []
        for k in range(1, len(self.names) + 1):
            out += [k, -k]
        return out

    def parse(self, text: str) -> Word:
        """Parse ``a1 b2^-1 a1`` (or ``1`` for the empty word) and reduce."""
        text = text.strip()
        if text in ("", "1"):
            return EMPTY
        raw = []
        for tok in text.split():
            m = _TOKEN.match(tok)
            if not m:
                raise WordError(f"malformed token {tok!r}")
            k = self.index(m.group(1))
            e = int(m.group(2)) if m.group(2) is not None else 1
            raw += [k if e > 0 else -k] * abs(e)
        return reduce(raw)

    def format(self, w: Sequence[int], powers: bool = False) -> str:
        """Inverse of :meth:`parse`.  With ``powers`` runs collapse to ``x^k``."""
        if not w:
            return "1"
        if not powers:
            return " ".join(self.names[x - 1] if x > 0 else self.names[-x - 1] + "^-1" for x in w)
        toks = []
        i = 0
        while i < len(w):
            j = i
            while j < len(w) and w[j] == w[i]:
                j += 1
            e = (j - i) * (1 if w[i] > 0 else -1)
            toks.append(self.name(w[i]) if e == 1 else f"{self.name(w[i])}^{e}")
            i = j
        return " ".join(toks)


def reduce(raw: Iterable[int]) -> Word:
    stack: list[int] = []
    for x in raw:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def is_reduced(w: Sequence[int]) -> bool:
    return all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def invert(g: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(g))


def concat(g: Sequence[int], h: Sequence[int]) -> Word:
    """Reduced product of two reduced words."""
    k = 0
    m = min(len(g), len(h))
    while k < m and g[-1 - k] == -h[k]:
        k += 1
    return tuple(g[: len(g) - k]) + tuple(h[k:])


def multiply(*words: Sequence[int]) -> Word:
    out: Word = EMPTY
    for w in words:
        out = concat(out, w)
    return out


def power(g: Sequence[int], n: int) -> Word:
    base = tuple(g) if n >= 0 else invert(g)
    out: Word = EMPTY
    for _ in range(abs(n)):
        out = concat(out, base)
    return out


def conjugate(g: Sequence[int], h: Sequence[int]) -> Word:
    """g h g^-1"""
    return concat(concat(g, h), invert(g))


def lcp(g: Sequence[int], h: Sequence[int]) -> int:
    k = 0
    m = min(len(g), len(h))
    while k < m and g[k] == h[k]:
        k += 1
    return k


def gromov_product_doubled(g: Sequence[int], h: Sequence[int]) -> int:
    """2 (g, h) = |g| + |h| - |g^-1 h|, kept doubled so it stays integral."""
    return len(g) + len(h) - len(concat(invert(g), h))


def gromov_product(g: Sequence[int], h: Sequence[int]) -> int:
    d = gromov_product_doubled(g, h)
    # reduced words in a free group always give an even value (= common prefix length)
    assert d % 2 == 0
    return d // 2


def cyclic_reduce(g: Sequence[int]) -> tuple[Word, Word]:
    """Return ``(u, core)`` with ``g = u core u^-1`` and ``core`` cyclically reduced."""
    g = tuple(g)
    i, j = 0, len(g) - 1
    while i < j and g[i] == -g[j]:
        i += 1
        j -= 1
    return g[:i], g[i : j + 1]


def is_cyclically_reduced(w: Sequence[int]) -> bool:
    return is_reduced(w) and (len(w) < 2 or w[0] != -w[-1])


def rotations(w: Sequence[int]) -> list[Word]:
    w = tuple(w)
    return [w[i:] + w[:i] for i in range(len(w))] if w else []


def cyclic_conjugates(w: Sequence[int]) -> list[Word]:
    """All rotations of ``w`` and of ``w^-1``, deduplicated, in first-seen order."""
    if not is_cyclically_reduced(w):
        raise WordError("cyclic_conjugates needs a cyclically reduced word")
    seen: dict[Word, None] = {}
    for r in rotations(w) + rotations(invert(w)):
        seen.setdefault(r, None)
    return list(seen)


def count_pattern(g: Sequence[int], pattern: tuple[int, int]) -> int:
    x, y = pattern
    return sum(1 for i in range(len(g) - 1) if g[i] == x and g[i + 1] == y)


def apply_letter_map(sigma: Mapping[int, int], g: Sequence[int]) -> Word:
    """Substitute generators letterwise; ``sigma`` maps generator numbers (positive)."""
    try:
        return tuple(sigma[x] if x > 0 else -sigma[-x] for x in g)
    except KeyError as err:
        raise WordError(f"letter {err.args[0]} not in the domain of the letter map") from None


def substitute(g: Sequence[int], images: Mapping[int, Sequence[int]]) -> Word:
    """Homomorphism given on generators by arbitrary words (result reduced)."""
    out: list[int] = []
    for x in g:
        img = images[abs(x)]
        out.extend(img if x > 0 else invert(img))
    return reduce(out)


def exponent_sum(g: Sequence[int], letter: int) -> int:
    return sum(1 if x == letter else -1 if x == -letter else 0 for x in g)


def ball_size(rank: int, radius: int) -> int:
    if radius == 0 or rank == 0:
        return 1
    return 1 + sum(2 * rank * (2 * rank - 1) ** (j - 1) for j in range(1, radius + 1))


def enumerate_ball(alphabet: Alphabet | int, radius: int) -> Iterator[Word]:
    """Every reduced word of length <= radius once, in length-lex order."""
    if radius < 0:
        raise WordError("radius must be nonnegative")
    rank = alphabet if isinstance(alphabet, int) else len(alphabet)
    letters = []
    for k in range(1, rank + 1):
        letters += [k, -k]
    yield EMPTY
    layer: list[Word] = [EMPTY]
    for _ in range(radius):
        nxt = []
        for w in layer:
            for x in letters:
                if not w or w[-1] != -x:
                    nxt.append(w + (x,))
        yield from nxt
        layer = nxt


def all_sequences(rank: int, length: int) -> Iterator[Word]:
    """Unreduced raw sequences, for exhaustive tests of :func:`reduce`."""
    letters = [s * k for k in range(1, rank + 1) for s in (1, -1)]
    return product(letters, repeat=length)
