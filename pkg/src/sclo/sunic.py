"""
Explicit left-orders on a free group given by a permutation word t.

For reduced ``g`` the weight ``tau_t(g)`` is twice the number of
"positive-then-negative" adjacent pairs ``y x^-1`` minus twice the number of
"negative-then-positive" pairs ``y^-1 x``, counted only when ``x`` precedes
``y`` in ``t``.  Then ``g <= h`` iff ``tau(g^-1 h) + omega(g^-1 h) >= 0``
where ``omega`` is the sign of the last exponent.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from .words import Alphabet, Word, WordError, conjugate


class Sign(enum.IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1


@dataclass(frozen=True)
class OrderSpec:
    alphabet: Alphabet
    t: tuple  # generator numbers, each exactly once
    _table: list = field(init=False, repr=False, compare=False, hash=False)
    _rank: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        k = len(self.alphabet)
        if sorted(self.t) != list(range(1, k + 1)):
            raise WordError("order word must use every letter of the alphabet exactly once")
        rank = {x: i for i, x in enumerate(self.t)}
        # table[u][v] is the tau contribution of the adjacent pair (u, v);
        # signed letters index a list of length 2k+1 directly (negatives wrap)
        table = [[0] * (2 * k + 1) for _ in range(2 * k + 1)]
        for u in range(1, k + 1):
            for v in range(1, k + 1):
                if rank[u] > rank[v]:
                    table[u][-v] = 2
                    table[-u][v] = -2
        object.__setattr__(self, "_table", table)
        object.__setattr__(self, "_rank", rank)

    @classmethod
    def from_names(cls, alphabet: Alphabet, names: Sequence[str] | str) -> "OrderSpec":
        if isinstance(names, str):
            names = names.split()
        return cls(alphabet, tuple(alphabet.index(n) for n in names))

    def rank(self, letter: int) -> int:
        return self._rank[abs(letter)]

    def less(self, x: int, y: int) -> bool:
        """Compare generators (signs ignored) by position in t."""
        return self._rank[abs(x)] < self._rank[abs(y)]

    def names(self) -> list[str]:
        return [self.alphabet.name(x) for x in self.t]


def tau(spec: OrderSpec, g: Sequence[int]) -> int:
    table = spec._table
    try:
        return sum(table[u][v] for u, v in zip(g, g[1:]))
    except IndexError:
        raise WordError("letter outside the order's alphabet") from None


def tau_pair(spec: OrderSpec, u: int, v: int) -> int:
    return spec._table[u][v]


def omega(g: Sequence[int]) -> int:
    if not g:
        return 0
    return 1 if g[-1] > 0 else -1


def sign(spec: OrderSpec, g: Sequence[int]) -> Sign:
    """Sign of ``g`` relative to the identity; tau + omega is odd unless g = 1."""
    if not g:
        return Sign.ZERO
    return Sign.POSITIVE if tau(spec, g) + omega(g) > 0 else Sign.NEGATIVE


def leq(spec: OrderSpec, g: Sequence[int], h: Sequence[int]) -> bool:
    # g^-1 h without building it twice: drop the common prefix first
    k = 0
    m = min(len(g), len(h))
    while k < m and g[k] == h[k]:
        k += 1
    d = tuple(-x for x in reversed(g[k:])) + tuple(h[k:])
    if not d:
        return True
    table = spec._table
    t = sum([table[u][v] for u, v in zip(d, d[1:])])
    return t + (1 if d[-1] > 0 else -1) >= 0


def less(spec: OrderSpec, g: Sequence[int], h: Sequence[int]) -> bool:
    return tuple(g) != tuple(h) and leq(spec, g, h)


@dataclass(frozen=True)
class ConjugatedOrder:
    base: OrderSpec
    conjugator: Word = ()


def sign_conj(order: ConjugatedOrder, h: Sequence[int]) -> Sign:
    """Sign of h under the conjugate order: 1 <=^g h iff 1 <= g h g^-1."""
    return sign(order.base, conjugate(order.conjugator, h))
