"""
Conjugator witnesses g -> f and an empirical check of compatibility:
for every tested conjugator g and every h in a ball of H,

    sign(g h g^-1) under the domain order == sign(f phi(h) f^-1) under the codomain order.

Two settings are covered.  The amalgam P = G1 *_H G2 (a single pair of
orders ab / cd) and the HNN extension of the Rips construction, where the
base order is either of o1, o2 and the codomain order is the other one.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .cancellation import PieceTable, build_piece_table
from .constructions import (
    G1,
    G2,
    AmalgamPair,
    PerfectConstruction,
    RipsConstruction,
)
from .product import OracleLimited, PresentedFactor
from .sunic import OrderSpec
from .words import Alphabet, Word, concat, conjugate, invert, lcp


class WitnessError(RuntimeError):
    """No case of the witness construction matched (an implementation defect)."""


@dataclass
class ConjugateWitness:
    g: Word
    f: Word
    case: str
    trace: tuple = ()  # indices of the generators peeled off, in order
    branch: str | None = None
    overlap: bool = False  # more than one case or generator matched


# ------------------------------------------------------------ fast signs


def _prefix_tau(table, w: Sequence[int]) -> list[int]:
    """P[k] = tau(w[:k])."""
    out = [0] * (len(w) + 1)
    acc = 0
    for k in range(1, len(w)):
        acc += table[w[k - 1]][w[k]]
        out[k + 1] = acc
    return out


class Prepared:
    """A word with prefix sums of tau for it and for its inverse."""

    __slots__ = ("w", "P", "Q")

    def __init__(self, spec: OrderSpec, w: Sequence[int]):
        self.w = tuple(w)
        self.P = _prefix_tau(spec._table, self.w)
        # tau is not odd under inversion, so the inverse needs its own sums
        self.Q = _prefix_tau(spec._table, invert(self.w))


def conj_sign(spec: OrderSpec, g: Prepared, h: Prepared) -> tuple[int, int]:
    """(sign, omega) of g h g^-1 for reduced g and h, via prefix sums."""
    gw, hw = g.w, h.w
    lg, lh = len(gw), len(hw)
    c1 = 0
    m = min(lg, lh)
    while c1 < m and gw[lg - 1 - c1] == -hw[c1]:
        c1 += 1
    c2 = 0
    while c2 < m and gw[lg - 1 - c2] == hw[lh - 1 - c2]:
        c2 += 1
    if c1 + c2 >= lh:
        word = conjugate(gw, hw)
        if not word:
            return 0, 0
        P = _prefix_tau(spec._table, word)
        om = 1 if word[-1] > 0 else -1
        return (1 if P[-1] + om > 0 else -1), om
    table = spec._table
    a_len = lg - c1
    r_len = lg - c2
    total = h.P[lh - c2] - h.P[c1 + 1]
    if a_len:
        total += g.P[a_len] + table[gw[a_len - 1]][hw[c1]]
    if r_len:
        # R = (g[:r_len])^-1 is the suffix of g^-1 starting at lg - r_len
        total += table[hw[lh - 1 - c2]][-gw[r_len - 1]] + g.Q[lg] - g.Q[lg - r_len + 1]
        om = 1 if -gw[0] > 0 else -1
    else:
        om = 1 if hw[lh - 1 - c2] > 0 else -1
    total += om
    return (1 if total > 0 else -1), om


# ------------------------------------------------------------ perfect case


@dataclass
class PerfectContext:
    pairs: list  # AmalgamPair, including inverse records
    spec1: OrderSpec
    spec2: OrderSpec
    meta: dict = field(default_factory=dict)

    @classmethod
    def from_construction(cls, c: PerfectConstruction) -> "PerfectContext":
        return cls(list(c.pairs), OrderSpec.from_names(G1, "a b"), OrderSpec.from_names(G2, "c d"), dict(c.meta))

    def __post_init__(self):
        gens = [p for p in self.pairs if p.index <= 4 or (p.index > 8 and p.index % 2 == 0)]
        self._base = gens
        self._tables = {}
        for direction in ("forward", "inverse"):
            words = [p.h if direction == "forward" else p.k for p in gens]
            self._tables[direction] = build_piece_table(words)

    def domain_pairs(self, direction: str) -> list[AmalgamPair]:
        if direction == "forward":
            return self.pairs
        return [AmalgamPair(p.index, p.w, p.y, p.m, p.v, p.x, p.n) for p in self.pairs]

    def _slot(self, p: AmalgamPair):
        """(relator index, inverted) of p's word in the piece table."""
        for j, b in enumerate(self._base):
            if b.index == p.index:
                return j, False
        # inverse records: h_{4+i} = h_i^-1, beta records h_{2i+1} = h_{2i}^-1
        orig = p.index - 4 if p.index <= 8 else p.index - 1
        for j, b in enumerate(self._base):
            if b.index == orig:
                return j, True
        raise KeyError(p.index)

    def pieces(self, p: AmalgamPair, direction: str) -> tuple[int, int]:
        """(longest prefix piece, longest suffix piece) of p's domain word."""
        t = self._tables[direction]
        j, inv = self._slot(p)
        return t.max_prefix_piece(j, inv), t.max_suffix_piece(j, inv)

    def order_pair(self, direction: str):
        return (self.spec1, self.spec2) if direction == "forward" else (self.spec2, self.spec1)

    def images(self, direction: str) -> dict:
        return {p.index: (p.h, p.k) if direction == "forward" else (p.k, p.h) for p in self.pairs}

    def inverse_of(self, index: int) -> int:
        if index <= 8:
            return index + 4 if index <= 4 else index - 4
        return index + 1 if index % 2 == 0 else index - 1


def _peel(g: Word, recs, pieces, trace: list) -> Word:
    """Remove trailing inverse generators while (g^-1, h_i) >= |h_i| - |p_i|."""
    while True:
        ginv = invert(g)
        for r in recs:
            word = r[0]
            if lcp(ginv, word) >= len(word) - pieces(r)[1]:
                g2 = concat(g, word)
                assert len(g2) < len(g)
                g = g2
                trace.append(r)
                break
        else:
            return g


def construct_f_perfect(ctx: PerfectContext, g: Sequence[int], direction: str = "forward") -> ConjugateWitness:
    g = tuple(g)
    dom = ctx.domain_pairs(direction)
    recs = [(p.h, p) for p in dom]
    pieces = {}
    for p in dom:
        pieces[p.index] = ctx.pieces(p, direction)
    trace: list = []
    g0 = _peel(g, recs, lambda r: pieces[r[1].index], trace)
    tail: Word = ()
    for r in trace:
        tail = concat(invert(r[1].k), tail)
    ginv = invert(g0)
    hits = [(p, lcp(ginv, p.h)) for p in dom]
    hits = [(p, L) for p, L in hits if L > pieces[p.index][0]]
    hit = hits[0] if hits else None
    overlap = len(hits) > 1
    if hit is None:
        f0, case = g0, "p-reduced"
    else:
        p, L = hit
        w = p.w
        cut = len(g0) - L
        if not p.x:
            f0, case = g0, "balanced"
        elif L <= len(w):
            f0, case = g0, "case1"
        elif L == len(w) + 1:
            # for n = 2 this is also the case-3 condition; case 2 is listed first
            overlap = overlap or p.n == 2
            f0, case = g0[:cut] + (-p.y,) + invert(w), "case2"
        elif L == len(w) + p.n - 1:
            f0, case = g0[:cut] + (-p.y,) * (p.m - 1) + invert(w), "case3"
        elif L >= len(w) + p.n:
            keep = len(g0) - len(w) - p.n
            f0, case = g0[:keep] + (-p.y,) * p.m + invert(w), "case4"
        else:
            raise WitnessError(f"no case for overlap {L} with generator {p.index}")
    f = concat(f0, tail)
    return ConjugateWitness(g, f, case, tuple(r[1].index for r in trace), overlap=overlap)


# --------------------------------------------------------------- rips case


@dataclass(frozen=True)
class DomainRec:
    index: int
    kind: str
    word: Word  # generator of the domain subgroup
    image: Word
    w: Word
    v: Word
    x: int  # domain conjugating letter (signed)
    mid: int  # domain middle letter (signed)
    kmid: int  # image middle letter (signed)
    lead: bool
    family: int


class RipsContext:
    def __init__(self, c: RipsConstruction):
        self.c = c
        L = self.L = c.letters
        f_alpha = Alphabet(L.f_names)
        self.f_alphabet = f_alpha
        self.specs = {1: OrderSpec.from_names(f_alpha, L.o1), 2: OrderSpec.from_names(f_alpha, L.o2)}
        self.recs = {"forward": [], "inverse": []}
        for p in c.all_pairs:
            self.recs["forward"].append(DomainRec(p.index, p.kind, p.h, p.k, p.w, p.v, p.x, p.mid,
                                                  p.kmid, p.lead, p.family))
            xk = p.x if p.kind == "tail" or not p.x else L.phi((p.x,))[0]
            self.recs["inverse"].append(DomainRec(p.index, p.kind, p.k, p.h, L.to_b(p.w), L.to_b(p.v),
                                                  xk, p.kmid, p.mid, p.lead, p.family))
        self.tables: dict[str, PieceTable] = {}
        self.pieces: dict[tuple, tuple] = {}
        for d in ("forward", "inverse"):
            gens = [r for r in self.recs[d] if r.index % 2 == 0]
            t = self.tables[d] = build_piece_table([r.word for r in gens])
            for j, r in enumerate(gens):
                self.pieces[(d, r.index)] = (t.max_prefix_piece(j), t.max_suffix_piece(j))
                self.pieces[(d, r.index - 1)] = (t.max_prefix_piece(j, True), t.max_suffix_piece(j, True))
        self.p_letters = set(L.ps)
        self.P = c.P
        if c.P is not None:
            pa = Alphabet(["e1", "e2", "e3", "e4"])
            self.p_factor = PresentedFactor(c.P, OrderSpec.from_names(pa, "e1 e2 e3 e4"))
            self.p_shift = L.ps[0] - 1

    def phi(self, g):
        return self.L.phi(g)

    def inverse_of(self, index: int) -> int:
        return index - 1 if index % 2 == 0 else index + 1


FORWARD_TABLE = {  # (t vs x_i, t vs y) -> s
    ("<", "<"): "c", ("<", "="): "d2", ("<", ">"): "d3",
    ("=", "<"): "d1", ("=", ">"): "t'",
    (">", "<"): "d1", (">", "="): "e", (">", ">"): "e",
}
INVERSE_TABLE = {  # (t vs y_i, t vs d2) -> s
    ("<", "<"): "c", ("<", "="): "c", ("<", ">"): "d3",
    ("=", "<"): "d2", ("=", ">"): "t'",
    (">", "<"): "d2", (">", "="): "e", (">", ">"): "e",
}
S_BRANCHES = ["t<c"] + [f"{a}{b}" for a, b in FORWARD_TABLE]


def _cmp(spec: OrderSpec, u: int, v: int) -> str:
    if abs(u) == abs(v):
        return "="
    return "<" if spec.less(u, v) else ">"


def _select_s(ctx: RipsContext, spec: OrderSpec, t: int, xg: int, yg: int, direction: str):
    """Letter s (generator) for the trailing letter t of g0, and the branch tag."""
    L = ctx.L
    if abs(t) in L.A:
        return L.phi_map[abs(t)], "t<c"
    key = (_cmp(spec, t, xg), _cmp(spec, t, yg))
    table = FORWARD_TABLE if direction == "forward" else INVERSE_TABLE
    name = table.get(key)
    if name is None:
        raise WitnessError(f"no s-branch for comparison {key}")
    s = L.phi_map[abs(t)] if name == "t'" else {"c": L.c, "d1": L.d1, "d2": L.d2, "d3": L.d3, "e": L.e}[name]
    return s, key[0] + key[1]


def _lemma_p_reduced(ctx: RipsContext, spec: OrderSpec, g: Word):
    """Witness for g that is p-reduced with every generator."""
    L = ctx.L
    phi = ctx.phi
    if not g:
        return (), "p-reduced:empty"
    t = g[-1]
    T = abs(t)
    if T in L.A or T == L.c or T == L.e:
        return phi(g), "p-reduced:1"
    if T in L.X:
        g0 = g[:-1]
        if not g0:
            return (t,), "p-reduced:2"
        u = g0[-1]
        U = abs(u)
        d = 1 if u > 0 else -1
        if U in L.A:
            return phi(g0) + (t,), "p-reduced:4"
        if U == T:
            return phi(g0) + (t,), "p-reduced:2"
        s = L.c if spec.less(U, T) else L.e
        return phi(g0) + (d * s, t), "p-reduced:2"
    if T in L.Y or T in L.D:
        d = 1 if t > 0 else -1
        s = L.c if spec.less(T, L.xs[0]) else L.e
        return phi(g) + (d * s,), "p-reduced:3"
    raise WitnessError(f"letter {t} outside the base free group")


def construct_f_rips(ctx: RipsContext, g: Sequence[int], direction: str = "forward", base: int = 1) -> ConjugateWitness:
    """Witness f for conjugator g.  ``base`` selects the domain order (1 or 2)."""
    g = tuple(g)
    spec = ctx.specs[base]
    recs = ctx.recs[direction]
    pieces = ctx.pieces
    trace: list = []
    g0 = _peel(g, [(r.word, r) for r in recs], lambda r: pieces[(direction, r[1].index)], trace)
    tail: Word = ()
    for r in trace:
        tail = concat(invert(r[1].image), tail)
    ginv = invert(g0)
    hits = [(r, lcp(ginv, r.word)) for r in recs]
    hits = [(r, L_) for r, L_ in hits if L_ > pieces[(direction, r.index)][0]]
    hit = hits[0] if hits else None
    branch = None
    phi = ctx.phi
    if hit is None:
        f0, case = _lemma_p_reduced(ctx, spec, g0)
    else:
        r, L_ = hit
        nw = len(r.w)
        cut = len(g0) - L_
        if r.kind == "tail" and not r.lead:
            f0, case = phi(g0), "case1"
        elif r.kind == "conj" and L_ in (nw + 1, nw + 2):
            pre = g0[:cut]
            xg, yg = abs(r.x), abs(r.mid)
            if pre:
                s, branch = _select_s(ctx, spec, pre[-1], xg, yg, direction)
                gam = 1 if pre[-1] > 0 else -1
                f_pre = phi(pre) + (gam * s,)
            else:
                f_pre, branch = (), "empty"
            if L_ == nw + 1:
                f0, case = f_pre + phi(g0[cut:]), "case2"
            else:
                f0, case = f_pre + (-r.kmid,) + phi(g0[cut + 1:]), "case3"
        elif r.kind == "conj" and L_ >= nw + 3:
            xk = phi((r.x,))[0]
            keep = len(g0) - nw - 3
            f0, case = phi(g0[:keep]) + (xk, -r.kmid, -xk) + phi(invert(r.w)), "case4"
        else:
            f0, case = phi(g0), "case5"
    f = concat(f0, tail)
    return ConjugateWitness(g, f, case, tuple(r[1].index for r in trace), branch, len(hits) > 1)


# ---------------------------------------------------------------- harness


@dataclass
class CompatReport:
    tested_g: int = 0
    tested_pairs: int = 0
    failures: int = 0
    omega_mismatches: int = 0
    oracle_limited: int = 0
    witnesses: list = field(default_factory=list)  # first few failures
    cases: Counter = field(default_factory=Counter)
    branches: Counter = field(default_factory=Counter)
    overlaps: int = 0
    diagnostics: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failures == 0 and not self.diagnostics

    def merge(self, other: "CompatReport"):
        for name in ("tested_g", "tested_pairs", "failures", "omega_mismatches", "oracle_limited", "overlaps"):
            setattr(self, name, getattr(self, name) + getattr(other, name))
        self.witnesses += other.witnesses[: max(0, 20 - len(self.witnesses))]
        self.cases.update(other.cases)
        self.branches.update(other.branches)
        self.diagnostics += other.diagnostics

    def to_doc(self) -> dict:
        return {
            "verdict": "pass" if self.ok else "fail",
            "tested_conjugators": self.tested_g,
            "tested_pairs": self.tested_pairs,
            "failures": self.failures,
            "omega_mismatches": self.omega_mismatches,
            "oracle_limited": self.oracle_limited,
            "case_counts": dict(sorted(self.cases.items())),
            "branch_counts": dict(sorted(self.branches.items())),
            "overlaps": self.overlaps,
            "failure_witnesses": self.witnesses,
            "diagnostics": self.diagnostics[:20],
        }


def h_ball(gens: dict, inverse_of, depth: int) -> list[tuple[Word, Word, tuple]]:
    """Reduced products of at most ``depth`` generators: (h, phi(h), indices).

    ``gens`` maps generator index (inverses included) to (h, k)."""
    out = []
    layer = [((), (), ())]
    keys = sorted(gens)
    for _ in range(depth):
        nxt = []
        for h, k, idx in layer:
            for j in keys:
                if idx and inverse_of(idx[-1]) == j:
                    continue
                hj, kj = gens[j]
                item = (concat(h, hj), concat(k, kj), idx + (j,))
                nxt.append(item)
        out += nxt
        layer = nxt
    return out


def mutate_images(gens: dict, a: int, b: int, inverse_of) -> dict:
    """Swap the images of two generators (and of their inverses)."""
    out = dict(gens)
    out[a] = (gens[a][0], gens[b][1])
    out[b] = (gens[b][0], gens[a][1])
    ia, ib = inverse_of(a), inverse_of(b)
    out[ia] = (gens[ia][0], gens[ib][1])
    out[ib] = (gens[ib][0], gens[ia][1])
    return out


def _check_one(report, wit, dom_spec, cod_spec, ball_dom, ball_cod, ball):
    gp = Prepared(dom_spec, wit.g)
    fp = Prepared(cod_spec, wit.f)
    bad = 0
    for (h, k, idx), hp, kp in zip(ball, ball_dom, ball_cod):
        s1, o1 = conj_sign(dom_spec, gp, hp)
        s2, o2 = conj_sign(cod_spec, fp, kp)
        report.tested_pairs += 1
        if o1 != o2:
            report.omega_mismatches += 1
        if s1 != s2:
            report.failures += 1
            bad += 1
            if len(report.witnesses) < 20:
                report.witnesses.append({"g": list(wit.g), "f": list(wit.f), "h": list(idx),
                                         "case": wit.case, "branch": wit.branch,
                                         "signs": [s1, s2]})
    return bad


def random_reduced(rng: random.Random, rank_letters: Sequence[int], length: int) -> Word:
    out: list[int] = []
    while len(out) < length:
        x = rng.choice(rank_letters)
        if out and out[-1] == -x:
            continue
        out.append(x)
    return tuple(out)


def _with_overlap(rng, letters, word: Word, L: int, pre_len: int) -> Word | None:
    """A reduced g with lcp(g^-1, word) exactly L: random prefix then the
    inverse of word[:L]."""
    tail = invert(word[:L])
    for _ in range(50):
        pre = random_reduced(rng, letters, pre_len)
        if pre and tail and pre[-1] == -tail[0]:
            continue
        if pre and L < len(word) and pre[-1] == -word[L]:
            continue
        g = pre + tail
        if lcp(invert(g), word) == L:
            return g
    return None


def _with_last(rng, letters, t: int, pre_len: int, tail: Word) -> Word | None:
    for _ in range(50):
        pre = random_reduced(rng, letters, pre_len)
        if pre and pre[-1] == -t:
            continue
        if tail and tail[0] == -t:
            return None
        return pre + (t,) + tail
    return None


# ----- perfect driver


def perfect_instances(ctx: PerfectContext, direction: str, rng: random.Random, per_case: int = 6):
    letters = [1, -1, 2, -2]
    out = []
    dom = ctx.domain_pairs(direction)
    for p in dom:
        if not p.x:
            continue
        pp, ps = ctx.pieces(p, direction)
        h = p.h
        nw = len(p.w)
        ranges = {
            "case1": range(pp + 1, nw + 1),
            "case2": range(nw + 1, nw + 2),
            "case3": range(nw + p.n - 1, nw + p.n) if p.n > 2 else range(0),
            "case4": range(nw + p.n, len(h) - ps),
        }
        for rg in ranges.values():
            if len(rg) == 0:
                continue
            for _ in range(per_case):
                L = rng.choice(list(rg))
                g = _with_overlap(rng, letters, h, L, rng.randint(0, 8))
                if g is not None:
                    out.append(g)
    # multi-step peeling: g = g0 h_i^-1 h_j^-1 ...
    gens = [p for p in dom if p.x]
    for _ in range(4 * per_case):
        g = random_reduced(rng, letters, rng.randint(0, 8))
        for _ in range(rng.randint(1, 3)):
            p = rng.choice(gens)
            g = concat(g, invert(p.h))
        out.append(g)
    return out


def verify_perfect(ctx: PerfectContext, samples: int = 1000, h_depth: int = 2, seed: int = 0,
                   directions: Iterable[str] = ("forward", "inverse"), structured: bool = True,
                   mutate: tuple | None = None, max_len: int | None = None) -> CompatReport:
    report = CompatReport()
    rng = random.Random(seed)
    for direction in directions:
        dom_spec, cod_spec = ctx.order_pair(direction)
        gens = ctx.images(direction)
        if mutate is not None:
            gens = mutate_images(gens, mutate[0], mutate[1], ctx.inverse_of)
        ball = h_ball(gens, ctx.inverse_of, h_depth)
        bd = [Prepared(dom_spec, h) for h, _, _ in ball]
        bc = [Prepared(cod_spec, k) for _, k, _ in ball]
        longest = max(len(p.h) for p in ctx.pairs) + 3 if max_len is None else max_len
        gs = perfect_instances(ctx, direction, rng) if structured else []
        gs += [random_reduced(rng, [1, -1, 2, -2], rng.randint(0, longest)) for _ in range(samples)]
        for g in gs:
            try:
                wit = construct_f_perfect(ctx, g, direction)
            except WitnessError as err:
                report.diagnostics.append(f"{direction}: {err}")
                continue
            report.tested_g += 1
            report.overlaps += wit.overlap
            report.cases[f"{direction}:{wit.case}"] += 1
            if len(wit.trace) > 1:
                report.cases[f"{direction}:multi-peel"] += 1
            _check_one(report, wit, dom_spec, cod_spec, bd, bc, ball)
    return report


# ----- rips driver


def rips_instances(ctx: RipsContext, direction: str, rng: random.Random, per_case: int = 3):
    letters = [s * k for k in range(1, len(ctx.f_alphabet) + 1) for s in (1, -1)]
    out = []
    recs = ctx.recs[direction]
    for r in recs:
        pp, ps = ctx.pieces[(direction, r.index)]
        h = r.word
        nw = len(r.w)
        if r.kind == "conj":
            ranges = [range(pp + 1, nw + 1), range(nw + 1, nw + 2), range(nw + 2, nw + 3),
                      range(nw + 3, len(h) - ps)]
        else:
            ranges = [range(pp + 1, len(h) - ps)]
        for rg in ranges:
            if len(rg) == 0:
                continue
            for _ in range(per_case):
                g = _with_overlap(rng, letters, h, rng.choice(list(rg)), rng.randint(0, 6))
                if g is not None:
                    out.append(g)
        if r.kind == "conj":
            # every trailing letter t of g0 for the s-dispatch
            for L_ in (nw + 1, nw + 2):
                tail = invert(h[:L_])
                for t in letters:
                    g = _with_last(rng, letters, t, rng.randint(0, 4), tail)
                    if g is not None and lcp(invert(g), h) == L_:
                        out.append(g)
    # p-reduced words ending in each pair of letters
    for t in letters:
        for u in letters:
            if u != -t:
                out.append(_with_last(rng, letters, u, rng.randint(0, 4), (t,)) or (t,))
        out.append((t,))
    gens = list(recs)
    for _ in range(6 * per_case):
        g = random_reduced(rng, letters, rng.randint(0, 6))
        for _ in range(rng.randint(1, 3)):
            g = concat(g, invert(rng.choice(gens).word))
        out.append(g)
    return [g for g in out if g is not None]


def verify_rips(ctx: RipsContext, samples: int = 1000, h_depth: int = 1, seed: int = 0,
                directions: Iterable[str] = ("forward", "inverse"), bases: Iterable[int] = (1, 2),
                structured: bool = True, mutate: tuple | None = None) -> CompatReport:
    if ctx.P is not None:
        return verify_rips_nli(ctx, samples, h_depth, seed, directions, bases, structured)
    report = CompatReport()
    rng = random.Random(seed)
    letters = [s * k for k in range(1, len(ctx.f_alphabet) + 1) for s in (1, -1)]
    longest = max(len(r.word) for r in ctx.recs["forward"]) + 3
    for direction in directions:
        gens = {r.index: (r.word, r.image) for r in ctx.recs[direction]}
        if mutate is not None:
            gens = mutate_images(gens, mutate[0], mutate[1], ctx.inverse_of)
        ball = h_ball(gens, ctx.inverse_of, h_depth)
        gs = rips_instances(ctx, direction, rng) if structured else []
        gs += [random_reduced(rng, letters, rng.randint(0, longest)) for _ in range(samples)]
        for base in bases:
            dom_spec, cod_spec = ctx.specs[base], ctx.specs[3 - base]
            bd = [Prepared(dom_spec, h) for h, _, _ in ball]
            bc = [Prepared(cod_spec, k) for _, k, _ in ball]
            for g in gs:
                try:
                    wit = construct_f_rips(ctx, g, direction, base)
                except WitnessError as err:
                    report.diagnostics.append(f"{direction}/{base}: {err}")
                    continue
                report.tested_g += 1
                report.overlaps += wit.overlap
                report.cases[f"{direction}:{wit.case}"] += 1
                if wit.branch:
                    report.branches[f"{direction}:{wit.branch}"] += 1
                if len(wit.trace) > 1:
                    report.cases[f"{direction}:multi-peel"] += 1
                _check_one(report, wit, dom_spec, cod_spec, bd, bc, ball)
    return report


# ----- the variant over F * P


def _sign_bar(ctx: RipsContext, spec: OrderSpec, word: Word) -> tuple[int, int]:
    """Sign of a word over F and P's letters in the free product order, and
    the sign of its last syllable's last letter."""
    from .sunic import sign as fsign

    if not word:
        return 0, 0
    ps = ctx.p_letters
    total = 0
    syll: list[int] = []
    cur = None
    parts = []
    for x in word:
        f = 2 if abs(x) in ps else 1
        if f != cur and syll:
            parts.append((cur, tuple(syll)))
            syll = []
        cur = f
        syll.append(x)
    parts.append((cur, tuple(syll)))
    shift = ctx.p_shift
    for j, (f, s) in enumerate(parts):
        if f == 1:
            total += int(fsign(spec, s))
        else:
            local = tuple(x - shift if x > 0 else x + shift for x in s)
            total += int(ctx.p_factor.sign(local))
        if j < len(parts) - 1:
            total += 1 if f == 1 else -1
    return (1 if total > 0 else -1), (1 if word[-1] > 0 else -1)


def construct_f_nli(ctx: RipsContext, g: Sequence[int], direction: str, base: int) -> ConjugateWitness:
    """Split g = g1 g2 with g2 the trailing F-syllable; only g2 needs a witness."""
    g = tuple(g)
    cut = len(g)
    while cut > 0 and abs(g[cut - 1]) not in ctx.p_letters:
        cut -= 1
    g1, g2 = g[:cut], g[cut:]
    if not g2:
        return ConjugateWitness(g, ctx.phi(g), "p-syllable")
    w = construct_f_rips(ctx, g2, direction, base)
    return ConjugateWitness(g, ctx.phi(g1) + w.f, w.case, w.trace, w.branch, w.overlap)


def verify_rips_nli(ctx: RipsContext, samples: int = 500, h_depth: int = 1, seed: int = 0,
                    directions: Iterable[str] = ("forward", "inverse"), bases: Iterable[int] = (1, 2),
                    structured: bool = True) -> CompatReport:
    report = CompatReport()
    rng = random.Random(seed)
    f_letters = [s * k for k in range(1, len(ctx.f_alphabet) + 1) for s in (1, -1)]
    p_letters = [s * k for k in sorted(ctx.p_letters) for s in (1, -1)]
    longest = max(len(r.word) for r in ctx.recs["forward"]) + 3
    for direction in directions:
        gens = {r.index: (r.word, r.image) for r in ctx.recs[direction]}
        ball = h_ball(gens, ctx.inverse_of, h_depth)
        gs = []
        if structured:
            for g2 in rips_instances(ctx, direction, rng, per_case=1):
                p = random_reduced(rng, p_letters, rng.randint(0, 5))
                gs.append(concat(random_reduced(rng, f_letters, rng.randint(0, 4)) + p if p else (), g2))
        for _ in range(samples):
            parts: list[int] = []
            for j in range(rng.randint(1, 4)):
                pool = f_letters if j % 2 == 0 else p_letters
                size = rng.randint(1, longest // 2) if pool is f_letters else rng.randint(1, 8)
                parts = list(concat(tuple(parts), random_reduced(rng, pool, size)))
            if rng.random() < 0.5:
                parts = parts[::-1]
                parts = list(concat((), tuple(parts)))
            gs.append(tuple(parts))
        for base in bases:
            dom_spec, cod_spec = ctx.specs[base], ctx.specs[3 - base]
            for g in gs:
                try:
                    wit = construct_f_nli(ctx, g, direction, base)
                except WitnessError as err:
                    report.diagnostics.append(f"{direction}/{base}: {err}")
                    continue
                report.tested_g += 1
                report.overlaps += wit.overlap
                report.cases[f"{direction}:{wit.case}"] += 1
                if wit.branch:
                    report.branches[f"{direction}:{wit.branch}"] += 1
                for h, k, idx in ball:
                    try:
                        s1, o1 = _sign_bar(ctx, dom_spec, conjugate(wit.g, h))
                        s2, o2 = _sign_bar(ctx, cod_spec, conjugate(wit.f, k))
                    except OracleLimited:
                        report.oracle_limited += 1
                        continue
                    report.tested_pairs += 1
                    if o1 != o2:
                        report.omega_mismatches += 1
                    if s1 != s2:
                        report.failures += 1
                        if len(report.witnesses) < 20:
                            report.witnesses.append({"g": list(wit.g), "f": list(wit.f), "h": list(idx),
                                                     "case": wit.case, "branch": wit.branch,
                                                     "signs": [s1, s2]})
    return report
