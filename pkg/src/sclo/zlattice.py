"""Exponent-sum matrices and Smith normal form over the integers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .presentation import Presentation


@dataclass(frozen=True)
class InvariantFactors:
    factors: tuple  # nonzero diagonal entries d1 | d2 | ...
    free_rank: int

    @property
    def torsion(self) -> tuple:
        return tuple(d for d in self.factors if d != 1)

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion


def exponent_matrix(pres: Presentation) -> list[list[int]]:
    k = len(pres.alphabet)
    rows = []
    for r in pres.relators:
        row = [0] * k
        for x in r:
            row[abs(x) - 1] += 1 if x > 0 else -1
        rows.append(row)
    return rows


def smith_normal_form(m: Sequence[Sequence[int]], cols: int | None = None) -> InvariantFactors:
    """Invariant factors of Z^cols / rowspace(m).

    Pivot = entry of smallest nonzero absolute value, ties broken by lowest
    row then lowest column.
    """
    a = [list(map(int, row)) for row in m]
    ncols = cols if cols is not None else (len(a[0]) if a else 0)
    if any(len(row) != ncols for row in a):
        raise ValueError("matrix is not rectangular")
    diag = []
    rows = list(range(len(a)))
    cs = list(range(ncols))
    while rows and cs:
        best = None
        for i in rows:
            for j in cs:
                v = a[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, p, q = best
        done = True
        for i in rows:
            if i != p and a[i][q]:
                f = a[i][q] // a[p][q]
                for j in cs:
                    a[i][j] -= f * a[p][j]
                if a[i][q]:
                    done = False
        for j in cs:
            if j != q and a[p][j]:
                f = a[p][j] // a[p][q]
                for i in rows:
                    a[i][j] -= f * a[i][q]
                if a[p][j]:
                    done = False
        if not done:
            continue
        d = abs(a[p][q])
        # keep the divisibility chain: if d fails to divide the rest, fold a row in
        bad = next(((i, j) for i in rows for j in cs if i != p and j != q and a[i][j] % d), None)
        if bad is not None:
            i = bad[0]
            for j in cs:
                a[p][j] += a[i][j]
            continue
        diag.append(d)
        rows.remove(p)
        cs.remove(q)
    diag.sort()
    return InvariantFactors(tuple(diag), ncols - len(diag))


def abelianization(pres: Presentation) -> InvariantFactors:
    return smith_normal_form(exponent_matrix(pres), cols=len(pres.alphabet))


def is_perfect(pres: Presentation) -> bool:
    return abelianization(pres).is_trivial()


def same_lattice(m1, m2, cols: int) -> bool:
    """Row lattices of m1 and m2 in Z^cols coincide."""
    s1 = smith_normal_form(m1, cols)
    s2 = smith_normal_form(m2, cols)
    s12 = smith_normal_form(list(m1) + list(m2), cols)
    return s1 == s2 == s12
