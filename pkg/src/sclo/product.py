"""
The left-order on a free product G1 * G2 of two left-ordered groups.

An element is a tuple of syllables ``(factor, element)`` with factor in {1, 2}.
``tau_bar`` counts positive syllables minus negative syllables plus index
jumps (a G1 syllable followed by a G2 syllable) minus index drops.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

from .cancellation import Dehn
from .presentation import Presentation
from .sunic import OrderSpec, Sign, sign
from .words import Word, concat, invert


class Factor:
    """Minimal interface a factor group has to provide."""

    def multiply(self, g, h):
        raise NotImplementedError

    def invert(self, g):
        raise NotImplementedError

    def is_identity(self, g) -> bool:
        raise NotImplementedError

    def sign(self, g) -> Sign:
        raise NotImplementedError


class FreeFactor(Factor):
    """A free group with a Šunić order; elements are reduced words."""

    def __init__(self, spec: OrderSpec):
        self.spec = spec

    def multiply(self, g, h):
        return concat(g, h)

    def invert(self, g):
        return invert(g)

    def is_identity(self, g) -> bool:
        return not g

    def sign(self, g) -> Sign:
        return sign(self.spec, g)


class OracleLimited(Exception):
    """The sign of an element lies outside the domain of the configured oracle."""


class PresentedFactor(Factor):
    """A C'(1/6) group with a stand-in order.

    Elements are words.  Reduced words shorter than a quarter of the shortest
    relator are distinct in the group (a nontrivial relation would need more
    than half a relator), so on them the Šunić sign of the word is a
    well-defined function of the element.  Longer elements raise
    :class:`OracleLimited` unless Dehn reduction brings them into range.
    """

    def __init__(self, pres: Presentation, spec: OrderSpec):
        self.pres = pres
        self.spec = spec
        self.dehn = Dehn(pres)
        self.limit = min((len(r) for r in pres.relators), default=10**9) / 4

    def canonical(self, g) -> Word:
        if len(g) < self.limit:
            return tuple(g)
        g = self.dehn.reduce(g)
        if len(g) < self.limit:
            return g
        raise OracleLimited(f"element of length {len(g)} beyond the oracle's range")

    def multiply(self, g, h):
        return concat(g, h)

    def invert(self, g):
        return invert(g)

    def is_identity(self, g) -> bool:
        return not self.canonical(g)

    def sign(self, g) -> Sign:
        return sign(self.spec, self.canonical(g))


@dataclass(frozen=True)
class Syllable:
    factor: int
    element: Any


ProductElement = tuple  # of Syllable


def product_normal_form(factors: Sequence[Factor], raw: Sequence[Syllable]) -> ProductElement:
    out: list[Syllable] = []
    for s in raw:
        fac = factors[s.factor - 1]
        if fac.is_identity(s.element):
            continue
        if out and out[-1].factor == s.factor:
            merged = fac.multiply(out[-1].element, s.element)
            out.pop()
            if not fac.is_identity(merged):
                out.append(Syllable(s.factor, merged))
            # a dropped syllable may let its neighbours merge
            while len(out) >= 2 and out[-1].factor == out[-2].factor:
                b = out.pop()
                a = out.pop()
                f2 = factors[a.factor - 1]
                m = f2.multiply(a.element, b.element)
                if not f2.is_identity(m):
                    out.append(Syllable(a.factor, m))
        else:
            out.append(s)
    return tuple(out)


def product_invert(factors: Sequence[Factor], g: ProductElement) -> ProductElement:
    return tuple(Syllable(s.factor, factors[s.factor - 1].invert(s.element)) for s in reversed(g))


def product_multiply(factors: Sequence[Factor], g: ProductElement, h: ProductElement) -> ProductElement:
    return product_normal_form(factors, tuple(g) + tuple(h))


def tau_bar(factors: Sequence[Factor], g: ProductElement) -> int:
    total = 0
    for j, s in enumerate(g):
        total += int(factors[s.factor - 1].sign(s.element))
        if j < len(g) - 1:
            total += 1 if s.factor == 1 else -1
    return total


def sign_bar(factors: Sequence[Factor], g: ProductElement) -> Sign:
    if not g:
        return Sign.ZERO
    # tau_bar is odd for every nonidentity element
    return Sign.POSITIVE if tau_bar(factors, g) > 0 else Sign.NEGATIVE


def leq_bar(factors: Sequence[Factor], g: ProductElement, h: ProductElement) -> bool:
    return tau_bar(factors, product_multiply(factors, product_invert(factors, g), h)) >= 0


def split_syllables(word: Sequence[int], second: set) -> ProductElement:
    """Cut a word over a combined alphabet into syllables; letters whose
    generator number is in ``second`` belong to factor 2."""
    out = []
    cur: list[int] = []
    cur_f = 0
    for x in word:
        f = 2 if abs(x) in second else 1
        if f != cur_f and cur:
            out.append(Syllable(cur_f, tuple(cur)))
            cur = []
        cur_f = f
        cur.append(x)
    if cur:
        out.append(Syllable(cur_f, tuple(cur)))
    return tuple(out)
