"""
Independent reference implementations used as test oracles.

These are written straight from the definitions and do not import the
package's internals, so a shared bug cannot make both sides agree.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd

import numpy as np


def free_reduce(word):
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def tau_by_count(t, word):
    """2 * sum over x <_t y of (#(y x^-1) - #(y^-1 x)); t lists generators in order."""
    rank = {g: i for i, g in enumerate(t)}
    total = 0
    for u, v in zip(word, word[1:]):
        # y x^-1 with x < y
        if u > 0 and v < 0 and rank[-v] < rank[u]:
            total += 2
        # y^-1 x with x < y
        if u < 0 and v > 0 and rank[v] < rank[-u]:
            total -= 2
    return total


def leq_by_definition(t, g, h):
    d = free_reduce(tuple(-x for x in reversed(g)) + tuple(h))
    om = 0 if not d else (1 if d[-1] > 0 else -1)
    return tau_by_count(t, d) + om >= 0


def c16_by_pairs(relators):
    """C'(1/6) by comparing every pair of distinct positions (numpy).

    Positions are all rotations of every relator and of its inverse.
    Returns True when every relator is longer than 6 and every common
    prefix of two distinct positions is shorter than a sixth of both.
    """
    rels = [tuple(r) for r in relators]
    if any(len(r) <= 6 for r in rels):
        return False
    words = []
    for r in rels:
        for base in (r, tuple(-x for x in reversed(r))):
            for k in range(len(base)):
                words.append(base[k:] + base[:k])
    lens = np.array([len(w) for w in words])
    depth = int(lens.max()) // 6 + 1
    M = np.zeros((len(words), depth), dtype=np.int64)
    for i, w in enumerate(words):
        row = (w * (depth // len(w) + 1))[:depth]
        M[i] = row
        # pad past the word's end with values no other word can share
        if len(w) < depth:
            M[i, len(w):] = 10**6 + i
    for i in range(len(words)):
        eq = M[i + 1:] == M[i]
        common = np.cumprod(eq, axis=1).sum(axis=1)
        bound = np.minimum(lens[i + 1:], lens[i])
        if np.any(6 * common >= bound):
            return False
    return True


def _det(m):
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            for k in range(c, n):
                a[r][k] -= f * a[c][k]
    return int(det)


def invariant_factors_by_minors(m):
    """(nonzero invariant factors, free rank) of Z^cols / rowspace(m) via
    determinantal divisors: d_k = gcd of all k x k minors."""
    rows, cols = len(m), len(m[0])
    divisors = [1]
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                g = gcd(g, _det([[m[r][c] for c in cs] for r in rs]))
        if g == 0:
            break
        divisors.append(g)
    factors = tuple(divisors[k] // divisors[k - 1] for k in range(1, len(divisors)))
    return factors, cols - len(factors)
