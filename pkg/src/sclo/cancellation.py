"""
Pieces, the C'(1/6) condition, p-reducedness, Dehn's algorithm and a
simple non-left-orderability obstruction.

Pieces are computed over *positions*: every rotation of every relator and of
its inverse is a separate entry, so a proper power (or a duplicated relator)
overlaps itself along its whole length and fails the condition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .presentation import Presentation
from .words import (
    Word,
    WordError,
    concat,
    cyclic_reduce,
    invert,
    is_cyclically_reduced,
    lcp,
    reduce,
)


@dataclass(frozen=True)
class Position:
    relator: int  # index into the family
    inverted: bool
    offset: int
    word: Word


@dataclass(frozen=True)
class Witness:
    """Why a family fails C'(1/6)."""

    kind: str  # "length" or "piece"
    relator: int
    other: int | None = None
    piece: Word = ()
    detail: str = ""


@dataclass
class PieceTable:
    words: list
    positions: list = field(default_factory=list)
    max_lcp: list = field(default_factory=list)  # per position, longest piece starting there
    _where: dict = field(default_factory=dict)  # (relator, inverted, offset) -> position index

    def max_piece_at(self, relator: int, offset: int = 0, inverted: bool = False) -> int:
        return self.max_lcp[self._where[(relator, inverted, offset)]]

    def max_prefix_piece(self, relator: int, inverted: bool = False) -> int:
        """Longest piece that is a prefix of the relator (or of its inverse)."""
        return self.max_piece_at(relator, 0, inverted)

    def max_suffix_piece(self, relator: int, inverted: bool = False) -> int:
        """Longest piece that is a suffix of the relator (or of its inverse)."""
        w = self.words[relator]
        best = 0
        for ell in range(1, len(w) + 1):
            if self.max_piece_at(relator, len(w) - ell, inverted) >= ell:
                best = ell
        return best

    def index_of(self, w: Sequence[int]) -> int:
        try:
            return self.words.index(tuple(w))
        except ValueError:
            raise WordError("word is not in the table's family") from None


def _positions(words: Sequence[Word]) -> list[Position]:
    out = []
    for i, w in enumerate(words):
        if not is_cyclically_reduced(w) or not w:
            raise WordError(f"relator {i} is not a nonempty cyclically reduced word")
        for inverted, base in ((False, w), (True, invert(w))):
            for k in range(len(base)):
                out.append(Position(i, inverted, k, base[k:] + base[:k]))
    return out


def build_piece_table(relators: Sequence[Sequence[int]]) -> PieceTable:
    words = [tuple(r) for r in relators]
    pos = _positions(words)
    order = sorted(range(len(pos)), key=lambda j: pos[j].word)
    # in sorted order the longest common prefix with anything else is
    # attained at a neighbour
    best = [0] * len(pos)
    for a, b in zip(order, order[1:]):
        m = lcp(pos[a].word, pos[b].word)
        if m > best[a]:
            best[a] = m
        if m > best[b]:
            best[b] = m
    table = PieceTable(words, pos, best)
    table._where = {(p.relator, p.inverted, p.offset): j for j, p in enumerate(pos)}
    table._order = order
    return table


@dataclass
class C16Result:
    ok: bool
    witness: Witness | None = None
    max_piece: int = 0
    min_length: int = 0
    positions: int = 0

    def __bool__(self) -> bool:
        return self.ok


def check_c16(relators: Sequence[Sequence[int]], table: PieceTable | None = None) -> C16Result:
    words = [tuple(r) for r in relators]
    if not words:
        return C16Result(True)
    for i, w in enumerate(words):
        if len(w) <= 6:
            return C16Result(False, Witness("length", i, detail=f"length {len(w)} <= 6"),
                             min_length=min(map(len, words)))
    if table is None:
        table = build_piece_table(words)
    pos, order = table.positions, table._order
    shortest = min(map(len, words))
    result = C16Result(True, max_piece=max(table.max_lcp), min_length=shortest, positions=len(pos))
    # scan forward from each entry while the running common prefix could
    # still violate the bound for the shortest relator
    adj = [lcp(pos[a].word, pos[b].word) for a, b in zip(order, order[1:])]
    for s in range(len(order)):
        run = None
        for t in range(s + 1, len(order)):
            run = adj[t - 1] if run is None else min(run, adj[t - 1])
            if 6 * run < shortest:
                break
            p, q = pos[order[s]], pos[order[t]]
            if 6 * run >= min(len(p.word), len(q.word)):
                first, second = sorted((p, q), key=lambda z: (z.relator, z.inverted, z.offset))
                result.ok = False
                result.witness = Witness(
                    "piece", first.relator, second.relator, p.word[:run],
                    detail=(f"positions {first.relator}{'~' if first.inverted else ''}@{first.offset} and "
                            f"{second.relator}{'~' if second.inverted else ''}@{second.offset} "
                            f"share a prefix of length {run}"),
                )
                return result
    return result


def is_p_reduced(g: Sequence[int], w: Sequence[int], table: PieceTable) -> bool:
    i = table.index_of(w)
    return lcp(invert(g), table.words[i]) <= table.max_prefix_piece(i)


class C16Error(ValueError):
    pass


class Dehn:
    """Dehn's algorithm for a presentation that satisfies C'(1/6)."""

    def __init__(self, pres: Presentation, verify: bool = True):
        if verify:
            res = check_c16(pres.relators)
            if not res:
                raise C16Error(f"presentation fails C'(1/6): {res.witness.detail}")
        self.pres = pres
        conj = []
        for r in pres.relators:
            for base in (r, invert(r)):
                conj += [base[k:] + base[:k] for k in range(len(base))]
        self.key = min((len(r) // 2 + 1 for r in pres.relators), default=1)
        self.index: dict[Word, list[Word]] = {}
        for c in conj:
            self.index.setdefault(c[: self.key], []).append(c)

    def _find(self, g: Word):
        k = self.key
        for i in range(len(g) - k + 1):
            cands = self.index.get(g[i : i + k])
            if not cands:
                continue
            best = None
            for c in cands:
                m = lcp(g[i:], c)
                if 2 * m > len(c) and (best is None or m > best[0]):
                    best = (m, c)
            if best is not None:
                return i, best[0], best[1]
        return None

    def reduce(self, g: Sequence[int]) -> Word:
        g = reduce(g)
        while True:
            hit = self._find(g)
            if hit is None:
                return g
            i, m, c = hit
            # c = u s with u = g[i:i+m]; u = s^-1 in the group
            g = reduce(g[:i] + invert(c[m:]) + g[i + m :])


def dehn_reduce(pres: Presentation, g: Sequence[int]) -> Word:
    return Dehn(pres).reduce(g)


def _two_letter_signs(r: Word):
    """Map generator -> set of exponent signs, or None if more than two letters."""
    signs: dict[int, set] = {}
    for x in r:
        signs.setdefault(abs(x), set()).add(1 if x > 0 else -1)
    return signs if len(signs) == 2 else None


def detect_order_obstruction(pres: Presentation):
    """Find relators r1, r2 on letters {x, y} with r1 positive (up to
    inversion) and r2 positive in x, negative in y (or vice versa).

    Then x, y cannot share a sign and also must share one, so the subgroup
    they generate is not left-orderable.  Returns ``(r1, r2)`` or None.
    """
    sig = []
    for r in pres.relators:
        s = _two_letter_signs(r)
        if s is not None and all(len(v) == 1 for v in s.values()):
            sig.append((r, frozenset(s), {k: next(iter(v)) for k, v in s.items()}))
    for (r1, l1, s1), (r2, l2, s2) in combinations(sig, 2):
        if l1 != l2:
            continue
        x, y = sorted(l1)
        same1 = s1[x] == s1[y]
        same2 = s2[x] == s2[y]
        if same1 != same2:
            return (r1, r2) if same1 else (r2, r1)
    return None


def check_free_basis(words: Sequence[Sequence[int]], depth: int = 3):
    """Check that formal products of length <= depth inject into the free group.

    Returns None on success or a pair of distinct formal products (as tuples of
    signed generator indices, 1-based) with the same reduced value.
    """
    gens = [tuple(w) for w in words]
    seen: dict[Word, tuple] = {(): ()}
    layer = [((), ())]
    for _ in range(depth):
        nxt = []
        for formal, value in layer:
            for j in range(1, len(gens) + 1):
                for s in (j, -j):
                    if formal and formal[-1] == -s:
                        continue
                    img = gens[j - 1] if s > 0 else invert(gens[j - 1])
                    f2 = formal + (s,)
                    v2 = concat(value, img)
                    if v2 in seen:
                        return seen[v2], f2
                    seen[v2] = f2
                    nxt.append((f2, v2))
        layer = nxt
    return None


def cyclic_core(g: Sequence[int]) -> Word:
    return cyclic_reduce(reduce(g))[1]
