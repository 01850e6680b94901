import random

import pytest

from oracles import free_reduce
from sclo.words import (
    Alphabet,
    WordError,
    ball_size,
    concat,
    conjugate,
    cyclic_conjugates,
    cyclic_reduce,
    enumerate_ball,
    gromov_product,
    invert,
    lcp,
    reduce,
)

A = Alphabet(["a", "b"])


def test_parse_and_format_round_trip():
    w = A.parse("a b^-2 a^3")
    assert w == (1, -2, -2, 1, 1, 1)
    assert A.format(w) == "a b^-1 b^-1 a a a"
    assert A.format(w, powers=True) == "a b^-2 a^3"
    assert A.parse(A.format(w, powers=True)) == w


def test_parse_identity_and_reduction():
    assert A.parse("1") == ()
    assert A.parse("a a^-1 b") == (2,)


def test_parse_rejects_unknown_letter():
    with pytest.raises(WordError):
        A.parse("a z")


def test_duplicate_names_rejected():
    with pytest.raises(WordError):
        Alphabet(["a", "a"])


def test_concat_matches_naive_reduction():
    rng = random.Random(0)
    for _ in range(500):
        g = reduce(rng.choice([1, -1, 2, -2]) for _ in range(rng.randint(0, 10)))
        h = reduce(rng.choice([1, -1, 2, -2]) for _ in range(rng.randint(0, 10)))
        assert concat(g, h) == free_reduce(g + h)
        assert concat(g, invert(g)) == ()


def test_conjugate_and_lcp():
    g, h = (2,), (1,)
    assert conjugate(g, h) == (2, 1, -2)
    assert lcp((1, 2, 1), (1, 2, -1)) == 2
    assert gromov_product((1, 2), (1, -2)) == 1


def test_cyclic_reduce_and_conjugates():
    conj, core = cyclic_reduce((2, 1, 1, -2))
    assert core == (1, 1) and conj == (2,)
    # rotations of the word and of its inverse
    assert len(cyclic_conjugates((1, 2, -1, -2))) == 8


def test_ball_size():
    assert ball_size(2, 4) == 161
    assert ball_size(2, 5) == 485
    assert len(list(enumerate_ball(A, 4))) == 161
