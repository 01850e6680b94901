"""Acceptance criteria 1-10.  Each test prints one PASS/FAIL line."""

from __future__ import annotations

import itertools
import random
import time

import numpy as np

from oracles import c16_by_pairs, invariant_factors_by_minors, leq_by_definition, tau_by_count
from sclo.cancellation import Dehn, check_c16
from sclo.compat import PerfectContext, RipsContext, verify_perfect, verify_rips
from sclo.constructions import gen_bowditch, gen_perfect, gen_perfect_family, gen_rips, gen_rips_nli
from sclo.presentation import Presentation, parse_presentation
from sclo.product import FreeFactor, Syllable, leq_bar, product_normal_form, tau_bar
from sclo.sunic import OrderSpec, leq, tau
from sclo.words import Alphabet, concat, enumerate_ball, invert, reduce
from sclo.zlattice import exponent_matrix, is_perfect, same_lattice, smith_normal_form

A2 = Alphabet(["a", "b"])


def _random_reduced(rng, k, length):
    out = []
    while len(out) < length:
        x = rng.choice([s * j for j in range(1, k + 1) for s in (1, -1)])
        if out and out[-1] == -x:
            continue
        out.append(x)
    return tuple(out)


# ---------------------------------------------------------------- 1


def test_criterion_1_sunic_axioms(record):
    start = time.perf_counter()
    bad = 0
    for names in ("a b", "b a"):
        spec = OrderSpec.from_names(A2, names)
        t = spec.t
        ball = list(enumerate_ball(A2, 5))
        n = len(ball)
        L = np.zeros((n, n), dtype=bool)
        for i, g in enumerate(ball):
            for j, h in enumerate(ball):
                L[i, j] = leq(spec, g, h)
        # oracle spot check of the relation itself
        rng = random.Random(1)
        for _ in range(2000):
            i, j = rng.randrange(n), rng.randrange(n)
            bad += L[i, j] != leq_by_definition(t, ball[i], ball[j])
        bad += int(np.sum(~(L | L.T)))  # totality
        off = ~np.eye(n, dtype=bool)
        bad += int(np.sum(L & L.T & off))  # antisymmetry
        Li = L.astype(np.int32)
        bad += int(np.sum(((Li @ Li) > 0) & ~L))  # transitivity
        # left-invariance: multipliers from radius 3, pairs from radius 4
        idx = [i for i, g in enumerate(ball) if len(g) <= 4]
        small = [ball[i] for i in idx]
        base = [[bool(L[i, j]) for j in idx] for i in idx]
        for f in enumerate_ball(A2, 3):
            fs = [concat(f, g) for g in small]
            for gi, fg in enumerate(fs):
                row = [leq(spec, fg, fh) for fh in fs]
                if row != base[gi]:
                    bad += sum(a != b for a, b in zip(row, base[gi]))
    dt = time.perf_counter() - start
    ok = bad == 0 and dt < 10
    record(1, ok, f"violations={bad} ball(5)={n} words, time={dt:.1f}s (limit 10s)")
    assert ok


# ---------------------------------------------------------------- 2


def test_criterion_2_tau_identities(record):
    start = time.perf_counter()
    A3 = Alphabet(["a", "b", "c"])
    bad = checked = 0
    signs = (1, -1)
    for perm in itertools.permutations((1, 2, 3)):
        spec = OrderSpec(A3, perm)
        lt = spec.less

        def T(*w):
            return tau(spec, w)

        for x, y, z in itertools.product((1, 2, 3), repeat=3):
            for e in signs:
                pairs = [((x * e, y * e), (x * e, z * e, y * e))]
                if (lt(x, y) and lt(z, y)) or (lt(y, x) and lt(y, z)):
                    pairs.append(((x * e, -y * e), (x * e, z * e, -y * e)))
                if (lt(x, z) and lt(x, y)) or (lt(z, x) and lt(y, x)):
                    pairs.append(((x * e, -y * e), (x * e, -z * e, -y * e)))
                for u, v in pairs:
                    if reduce(u) == u and reduce(v) == v:
                        checked += 1
                        bad += T(*u) != T(*v)
            for e1, e2, e3 in itertools.product(signs, repeat=3):
                w = (x * e1, z * e2, y * e3)
                variants = [(x * e1, x * e1, z * e2, y * e3), (x * e1, z * e2, z * e2, y * e3),
                            (x * e1, z * e2, y * e3, y * e3)]
                if reduce(w) != w:
                    continue
                for v in variants:
                    checked += 1
                    bad += T(*w) != T(*v)
    spec = OrderSpec.from_names(A3, "b c a")
    rng = random.Random(2)
    for _ in range(10_000):
        w1 = _random_reduced(rng, 3, rng.randint(1, 12))
        w2 = _random_reduced(rng, 3, rng.randint(1, 12))
        if w1[-1] == -w2[0]:
            continue
        t1, s2 = w1[-1], w2[0]
        whole = tau(spec, w1 + w2)
        vals = (tau(spec, w1) + tau(spec, w2) + tau(spec, (t1, s2)),
                tau(spec, w1 + (s2,)) + tau(spec, w2), tau(spec, w1) + tau(spec, (t1,) + w2))
        checked += 1
        bad += any(v != whole for v in vals) or whole != tau_by_count(spec.t, w1 + w2)
    dt = time.perf_counter() - start
    ok = bad == 0 and dt < 5
    record(2, ok, f"checked={checked} violations={bad} time={dt:.1f}s (limit 5s)")
    assert ok


# ---------------------------------------------------------------- 3


def test_criterion_3_free_product_order(record):
    start = time.perf_counter()
    f1 = FreeFactor(OrderSpec.from_names(A2, "a b"))
    f2 = FreeFactor(OrderSpec.from_names(A2, "b a"))
    factors = (f1, f2)
    ball3 = [g for g in enumerate_ball(A2, 3) if g]
    elems = [()]
    for k in (1, 2, 3):
        for start_f in (1, 2):
            fs = [start_f if j % 2 == 0 else 3 - start_f for j in range(k)]
            for combo in itertools.product(ball3, repeat=k):
                elems.append(tuple(Syllable(f, e) for f, e in zip(fs, combo)))
    bad = 0
    # positive cone partitions the nonidentity elements (totality + antisymmetry)
    for g in elems:
        if not g:
            continue
        inv = tuple(Syllable(s.factor, invert(s.element)) for s in reversed(g))
        t1, t2 = tau_bar(factors, g), tau_bar(factors, inv)
        bad += (t1 >= 0) == (t2 >= 0) or t1 % 2 == 0
    rng = random.Random(3)
    for _ in range(20_000):
        g, h, k = (rng.choice(elems) for _ in range(3))
        if leq_bar(factors, g, h) and leq_bar(factors, h, k):
            bad += not leq_bar(factors, g, k)
        f = rng.choice(elems)
        fg = product_normal_form(factors, f + g)
        fh = product_normal_form(factors, f + h)
        bad += leq_bar(factors, g, h) != leq_bar(factors, fg, fh)
    # extension property on factor balls of radius 5
    ball5 = list(enumerate_ball(A2, 5))
    for fi, fac in enumerate(factors, 1):
        for g in ball5[::3]:
            for h in ball5:
                lhs = leq_bar(factors, (Syllable(fi, g),) if g else (), (Syllable(fi, h),) if h else ())
                bad += lhs != leq(fac.spec, g, h)
    dt = time.perf_counter() - start
    ok = bad == 0 and dt < 60
    record(3, ok, f"elements={len(elems)} violations={bad} time={dt:.1f}s (limit 60s)")
    assert ok


# ---------------------------------------------------------------- 4


def _random_family(rng):
    kind = rng.random()
    k = rng.choice([2, 3])
    count = rng.randint(1, 4)
    if kind < 0.15:
        # a proper power or a duplicated relator
        r = _random_reduced(rng, k, rng.randint(3, 12))
        while r[0] == -r[-1]:
            r = _random_reduced(rng, k, rng.randint(3, 12))
        return [r * rng.randint(2, 8)] if rng.random() < 0.5 else [r * 4, r * 4]
    lo, hi = (5, 30) if kind < 0.5 else (40, 250)
    fam = []
    while len(fam) < count:
        r = _random_reduced(rng, k, rng.randint(lo, hi))
        if r[0] != -r[-1]:
            fam.append(r)
    return fam


def test_criterion_4_c16_checker(record):
    start = time.perf_counter()
    rng = random.Random(4)
    bad = passes = 0
    for _ in range(50):
        fam = _random_family(rng)
        assert sum(map(len, fam)) <= 2000
        got = bool(check_c16(fam))
        want = c16_by_pairs(fam)
        bad += got != want
        passes += want
    bow_ok = bool(check_c16(gen_bowditch([21, 22, 23]).presentation.relators))
    dt = time.perf_counter() - start
    ok = bad == 0 and bow_ok and dt < 60 and 0 < passes < 50
    record(4, ok, f"mismatches={bad}/50 (oracle passes={passes}), bowditch {{21,22,23}} "
                  f"{'pass' if bow_ok else 'fail'}, time={dt:.1f}s (limit 60s)")
    assert ok


# ---------------------------------------------------------------- 5


def test_criterion_5_dehn(record):
    start = time.perf_counter()
    pres = gen_perfect(0).presentation
    rng = random.Random(5)
    rels = pres.relators
    bad = 0
    d = Dehn(pres)
    for _ in range(200):
        word = ()
        for _ in range(rng.randint(1, 4)):
            r = rng.choice(rels)
            r = r if rng.random() < 0.5 else invert(r)
            k = rng.randrange(len(r))
            r = r[k:] + r[:k]
            c = _random_reduced(rng, 4, rng.randint(0, 12))
            word = concat(word, concat(concat(c, r), invert(c)))
        bad += d.reduce(word) != ()
    tested = 0
    while tested < 200:
        w = _random_reduced(rng, 4, rng.randint(1, 10))
        out = d.reduce(w)
        # words this short cannot contain more than half of a relator
        tested += 1
        bad += out == () or out != w
    dt = time.perf_counter() - start
    ok = bad == 0 and dt < 30
    record(5, ok, f"failures={bad}/400 time={dt:.1f}s (limit 30s)")
    assert ok


# ---------------------------------------------------------------- 6


def test_criterion_6_perfectness_and_snf(record):
    start = time.perf_counter()
    seeds_ok = all(is_perfect(gen_perfect(s).presentation) for s in (0, 1, 2))
    fam_ok = is_perfect(gen_perfect_family(0, [21, 22]).presentation)
    rng = random.Random(6)
    bad = 0
    for j in range(1000):
        if j % 10 == 0:
            # low rank: rows built from two random rows
            u = [rng.randint(-4, 4) for _ in range(5)]
            v = [rng.randint(-4, 4) for _ in range(5)]
            m = [[rng.randint(-2, 2) * a + rng.randint(-2, 2) * b for a, b in zip(u, v)] for _ in range(5)]
        else:
            m = [[rng.randint(-6, 6) for _ in range(5)] for _ in range(5)]
        got = smith_normal_form(m, 5)
        factors, free = invariant_factors_by_minors(m)
        bad += got.factors != factors or got.free_rank != free
    dt = time.perf_counter() - start
    ok = seeds_ok and fam_ok and bad == 0 and dt < 30
    record(6, ok, f"perfect(3 seeds)={seeds_ok} perfect_family={fam_ok} snf mismatches={bad}/1000 "
                  f"time={dt:.1f}s (limit 30s)")
    assert ok


# ---------------------------------------------------------------- 7


def _q_cases():
    free = lambda n: Presentation(Alphabet([f"x{i}" for i in range(1, n + 1)]), [])
    yield free(1)
    yield free(2)
    yield free(3)
    yield parse_presentation("generators: x1 x2\nrelator: x1 x2 x1^-1 x2^-1\n")


def test_criterion_7_rips_counts(record):
    start = time.perf_counter()
    bad = []
    for q in _q_cases():
        n = len(q.alphabet)
        c = gen_rips(q, seed=0)
        gens = len(c.G.alphabet)  # F plus the stable letter
        if gens != 2 * n + 10:
            bad.append(f"n={n}: {gens} generators")
        if len(c.n_generators) != n + 10:
            bad.append(f"n={n}: N list {len(c.n_generators)}")
        if c.pre_q_count() != 2 * n * n + 20 * n:
            bad.append(f"n={n}: {c.pre_q_count()} pre-Q pairs")
        if not check_c16(c.G.relators):
            bad.append(f"n={n}: G fails C'(1/6)")
        # project relator exponent vectors onto the x letters
        L = c.letters
        rows = exponent_matrix(c.G)
        proj = [[row[x - 1] for x in L.xs] for row in rows]
        qrows = exponent_matrix(q) or [[0] * n]
        if not same_lattice(proj, qrows, n):
            bad.append(f"n={n}: projection lattice differs from Q's")
        if smith_normal_form(proj, n) != smith_normal_form(qrows, n):
            bad.append(f"n={n}: abelianisation of Q not recovered")
    dt = time.perf_counter() - start
    ok = not bad and dt < 60
    record(7, ok, f"generators=2n+10, N=n+10, pre-Q pairs=2n^2+20n for n in 1,2,3 "
                  f"(free Q and Z^2) problems={bad or 'none'} time={dt:.1f}s (limit 60s)")
    assert ok


# ---------------------------------------------------------------- 8


def test_criterion_8_perfect_compat(record):
    start = time.perf_counter()
    ctx = PerfectContext.from_construction(gen_perfect(0))
    rep = verify_perfect(ctx, samples=10_000, h_depth=2, seed=8)
    cases = {k.split(":")[1] for k in rep.cases}
    all_cases = all(f"{d}:case{k}" in rep.cases for d in ("forward", "inverse") for k in (1, 2, 3, 4))
    mutant = verify_perfect(ctx, samples=200, h_depth=2, seed=9, mutate=(1, 2))
    dt = time.perf_counter() - start
    ok = rep.ok and all_cases and mutant.failures >= 1 and dt < 600
    record(8, ok, f"pairs={rep.tested_pairs} conjugators={rep.tested_g} failures={rep.failures} "
                  f"cases={sorted(cases)} mutant failures={mutant.failures} time={dt:.1f}s (limit 600s)")
    assert ok


# ---------------------------------------------------------------- 9


def test_criterion_9_rips_compat(record):
    start = time.perf_counter()
    c = gen_rips(Presentation(Alphabet(["x1"]), []), seed=0)
    ctx = RipsContext(c)
    tau_ok = all(tau(ctx.specs[1], p.h) == tau(ctx.specs[2], p.k) for p in c.all_pairs)
    rep = verify_rips(ctx, samples=10_000, h_depth=1, seed=10)
    need_cases = [f"{d}:case{k}" for d in ("forward", "inverse") for k in (1, 2, 3, 4, 5)]
    need_branches = [f"{d}:{b}" for d in ("forward", "inverse")
                     for b in ("t<c", "<<", "<=", "<>", "=<", "=>", "><", ">=", ">>")]
    missing = [k for k in need_cases if not rep.cases.get(k)]
    missing += [k for k in need_branches if not rep.branches.get(k)]
    dt = time.perf_counter() - start
    ok = rep.ok and tau_ok and not missing and dt < 900
    record(9, ok, f"pairs={rep.tested_pairs} conjugators={rep.tested_g} failures={rep.failures} "
                  f"tau(h)=tau'(k) for all pairs: {tau_ok} uncovered={missing or 'none'} "
                  f"time={dt:.1f}s (limit 900s)")
    assert ok


# --------------------------------------------------------------- 10


def test_criterion_10_nli_variant(record):
    start = time.perf_counter()
    c = gen_rips_nli(Presentation(Alphabet(["x1"]), []), seed=0)
    n = 1
    well_formed = (len(c.G.alphabet) == 2 * n + 14 and bool(check_c16(c.G.relators))
                   and c.P is not None and bool(check_c16(c.P.relators)))
    perfect = is_perfect(c.P)
    rep = verify_rips(RipsContext(c), samples=400, h_depth=1, seed=11)
    dt = time.perf_counter() - start
    ok = well_formed and perfect and rep.failures == 0 and not rep.diagnostics and dt < 600
    record(10, ok, f"well-formed={well_formed} P perfect={perfect} pairs={rep.tested_pairs} "
                   f"failures={rep.failures} oracle-limited={rep.oracle_limited} time={dt:.1f}s (limit 600s)")
    assert ok
