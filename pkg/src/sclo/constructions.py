"""
Generators for the presentations studied here: the Bowditch family, the
perfect amalgams P and P_I, the Rips-type HNN extension and its variant over
F * P, and the Cantor-type free factor extension.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .cancellation import check_c16
from .presentation import Presentation
from .words import Alphabet, Word, apply_letter_map, invert, is_cyclically_reduced, reduce


class ConstructionError(ValueError):
    pass


# ---------------------------------------------------------------- padding


@dataclass
class Slot:
    """One padding word: alternating blocks x^{+-1} y^{+-k} over two letters."""

    x: int
    y: int
    length: int
    x_sum: int | None = None
    y_sum: int | None = None
    first_not: frozenset = frozenset()
    last_not: frozenset = frozenset()


@dataclass
class PaddingSpec:
    seed: int
    slots: list
    # assemble(words) -> list of families; a family is a list of (word, owners)
    assemble: Callable
    max_exp: int = 3
    retries: int = 64


def _fix_sum(rng, exps, target, lo_step):
    """Adjust nonzero exponents so they sum to target; False if stuck."""
    diff = target - sum(exps)
    for _ in range(2000):
        if diff == 0:
            return True
        j = rng.randrange(len(exps))
        step = 1 if diff > 0 else -1
        new = exps[j] + step
        if new == 0 or abs(new) > lo_step:
            continue
        exps[j] = new
        diff -= step
    return diff == 0


def _block_word(rng: random.Random, slot: Slot, length: int, max_exp: int) -> Word:
    for _ in range(10000):
        start_x = rng.random() < 0.5
        xs, ys, seq = [], [], []
        n, cur_x = 0, start_x
        while n < length:
            if cur_x:
                e = rng.choice((1, -1))
                xs.append(len(seq))
            else:
                e = rng.randint(1, max_exp) * rng.choice((1, -1))
                ys.append(len(seq))
            seq.append(e)
            n += abs(e)
            cur_x = not cur_x
        if slot.x_sum is not None:
            m = len(xs)
            if m < abs(slot.x_sum) or (m - slot.x_sum) % 2:
                continue
            signs = [1] * ((m + slot.x_sum) // 2) + [-1] * ((m - slot.x_sum) // 2)
            rng.shuffle(signs)
            for j, s in zip(xs, signs):
                seq[j] = s
        if slot.y_sum is not None:
            ye = [seq[j] for j in ys]
            if not ye or not _fix_sum(rng, ye, slot.y_sum, max_exp + 1):
                continue
            for j, e in zip(ys, ye):
                seq[j] = e
        word = []
        cur_x = start_x
        for e in seq:
            letter = slot.x if cur_x else slot.y
            word += [letter if e > 0 else -letter] * abs(e)
            cur_x = not cur_x
        w = tuple(word)
        if w[0] in slot.first_not or w[-1] in slot.last_not:
            continue
        return w
    raise ConstructionError("could not satisfy the padding constraints")


def gen_padding(spec: PaddingSpec) -> list[Word]:
    """Seeded search for padding words; the assembled families pass C'(1/6)."""
    rng = random.Random(spec.seed)
    base = [s.length for s in spec.slots]
    scale = 1.0
    while scale <= 4.0:
        lengths = [max(7, int(b * scale)) for b in base]
        words = [_block_word(rng, s, n, spec.max_exp) for s, n in zip(spec.slots, lengths)]
        for _ in range(spec.retries):
            bad = _first_defect(spec.assemble(words))
            if bad is None:
                return words
            j = bad[rng.randrange(len(bad))]
            words[j] = _block_word(rng, spec.slots[j], lengths[j], spec.max_exp)
        scale *= 1.25
    raise ConstructionError("padding search budget exhausted")


def _first_defect(families):
    """Owners of the first relator that breaks a family, or None."""
    for fam in families:
        for word, owners in fam:
            if not is_cyclically_reduced(word):
                return list(owners)
        res = check_c16([w for w, _ in fam])
        if not res:
            wit = res.witness
            owners = list(fam[wit.relator][1])
            if wit.other is not None:
                owners += list(fam[wit.other][1])
            return owners or [0]
    return None


# --------------------------------------------------------------- bowditch


def beta(i: int, x: int, y: int) -> Word:
    out: list[int] = []
    for k in range(1, 21):
        out += [x] * i + [y] * k
    return tuple(out)


@dataclass
class SubgroupMap:
    h: list
    k: list

    def __post_init__(self):
        if len(self.h) != len(self.k):
            raise ConstructionError("subgroup map lists differ in length")


@dataclass
class Construction:
    presentation: Presentation
    smap: SubgroupMap
    meta: dict = field(default_factory=dict)


def _check_indices(indices):
    for i in indices:
        if i <= 20:
            raise ConstructionError(f"index {i} must exceed 20")


def gen_bowditch(indices: Sequence[int]) -> Construction:
    indices = sorted(set(indices))
    _check_indices(indices)
    A = Alphabet(["a1", "a2", "b1", "b2"])
    hs = [beta(i, 1, 2) for i in indices]
    ks = [beta(i, 3, 4) for i in indices]
    rels = [h + invert(k) for h, k in zip(hs, ks)]
    meta = {"kind": "bowditch", "indices": indices}
    return Construction(Presentation(A, rels), SubgroupMap(hs, ks), meta)


def gen_cantor(base: Presentation) -> Presentation:
    names = list(base.alphabet.names)
    fresh = next(n for n in ["t"] + [f"t{j}" for j in range(1, 10**6)] if n not in names)
    return Presentation(Alphabet(names + [fresh]), list(base.relators))


# ---------------------------------------------------------------- perfect


@dataclass(frozen=True)
class AmalgamPair:
    """h = w x^n v in G1 and k = w' y^m v' in G2 (both over letters 1, 2)."""

    index: int
    w: Word
    x: int  # signed letter, 0 when there is no sandwiched power
    n: int
    v: Word
    y: int
    m: int

    @property
    def h(self) -> Word:
        return self.w + (self.x,) * self.n + self.v if self.x else reduce(self.w + self.v)

    @property
    def k(self) -> Word:
        return self.w + (self.y,) * self.m + self.v if self.y else reduce(self.w + self.v)

    def inverse(self, index: int) -> "AmalgamPair":
        return AmalgamPair(index, invert(self.v), -self.x, self.n, invert(self.w), -self.y, self.m)


G1 = Alphabet(["a", "b"])
G2 = Alphabet(["c", "d"])
P_ALPHABET = Alphabet(["a", "b", "c", "d"])

# (letter, n, m) for h_1..h_4: a^3/c^2, a^2/c^3, b^3/d^2, b^2/d^3
_PERFECT_TABLE = [(1, 3, 2), (1, 2, 3), (2, 3, 2), (2, 2, 3)]


def _to_p(word: Word, shift: int) -> Word:
    return tuple(x + shift if x > 0 else x - shift for x in word)


def perfect_relator(pair: AmalgamPair) -> Word:
    return pair.h + invert(_to_p(pair.k, 2))


@dataclass
class PerfectConstruction(Construction):
    pairs: list = field(default_factory=list)  # all AmalgamPair records incl. inverses


def _perfect_slots(length: int) -> list[Slot]:
    slots = []
    for idx, (letter, _, _) in enumerate(_PERFECT_TABLE):
        xs = -1 if letter == 1 else 0
        ys = -1 if letter == 2 else 0
        bad = frozenset({letter, -letter})
        # w_i must not end, v_i must not start, with the sandwiched letter
        slots.append(Slot(1, 2, length, xs, ys, last_not=bad))
        slots.append(Slot(1, 2, length, xs, ys, first_not=bad))
    return slots


def _perfect_pairs(words) -> list[AmalgamPair]:
    pairs = []
    for idx, (letter, n, m) in enumerate(_PERFECT_TABLE):
        pairs.append(AmalgamPair(idx + 1, words[2 * idx], letter, n, words[2 * idx + 1], letter, m))
    return pairs


def gen_perfect(seed: int = 0, length: int = 60) -> PerfectConstruction:
    def assemble(words):
        pairs = _perfect_pairs(words)
        owners = [(2 * j, 2 * j + 1) for j in range(4)]
        hs = list(zip([p.h for p in pairs], owners))
        ks = list(zip([p.k for p in pairs], owners))
        rels = list(zip([perfect_relator(p) for p in pairs], owners))
        return [rels, hs, ks]

    words = gen_padding(PaddingSpec(seed, _perfect_slots(length), assemble))
    base = _perfect_pairs(words)
    pairs = base + [p.inverse(p.index + 4) for p in base]
    pres = Presentation(P_ALPHABET, [perfect_relator(p) for p in base])
    smap = SubgroupMap([p.h for p in base], [p.k for p in base])
    meta = {"kind": "perfect", "seed": seed, "orders": ["a b", "c d"]}
    return PerfectConstruction(pres, smap, meta, pairs)


def gen_perfect_family(seed: int = 0, indices: Sequence[int] = (), length: int = 60) -> PerfectConstruction:
    indices = sorted(set(indices))
    _check_indices(indices)
    out = gen_perfect(seed, length)
    if not indices:
        return out
    base = [p for p in out.pairs if p.index <= 4]
    extra = []
    for i in indices:
        b = beta(i, 1, 2)
        half = len(b) // 2
        extra.append(AmalgamPair(2 * i, b[:half], 0, 1, b[half:], 0, 1))
    pairs = base + [p.inverse(p.index + 4) for p in base]
    for p in extra:
        pairs += [p, p.inverse(p.index + 1)]
    rels = [perfect_relator(p) for p in base + extra]
    pres = Presentation(P_ALPHABET, rels)
    res = check_c16(rels)
    if not res:
        raise ConstructionError(f"family fails C'(1/6): {res.witness.detail}")
    smap = SubgroupMap([p.h for p in base + extra], [p.k for p in base + extra])
    meta = dict(out.meta, kind="perfect_family", indices=indices)
    return PerfectConstruction(pres, smap, meta, pairs)


# ------------------------------------------------------------------- rips


@dataclass(frozen=True)
class RipsPair:
    """A generator h of H (or its inverse) and its image k.

    kind is "tail" (h = w x^eps, families with a trailing x letter),
    "conj" (h = w x^eps y^delta x^-eps v, k = w' y^eps d2^delta y^-eps v')
    or "phi" (k is the letter swap of h).  Inverse records keep the same
    shape: for "tail" the x letter then comes first (``lead`` is True).
    """

    index: int
    family: int
    kind: str
    h: Word
    k: Word
    w: Word = ()
    v: Word = ()
    x: int = 0  # x letter with sign, as it first appears in h
    mid: int = 0  # middle letter of h with sign
    kmid: int = 0  # middle letter of k with sign
    lead: bool = False

    def inverse(self, index: int) -> "RipsPair":
        return RipsPair(index, self.family, self.kind, invert(self.h), invert(self.k),
                        invert(self.v), invert(self.w), self.x if self.kind == "conj" else -self.x,
                        -self.mid, -self.kmid, not self.lead if self.kind == "tail" else False)


class RipsLetters:
    """Letter numbering for F (optionally with P's generators e1..e4) and q."""

    def __init__(self, n: int, with_p: bool = False):
        self.n = n
        names = ["a1", "a2", "b1", "b2", "c"] + [f"x{i}" for i in range(1, n + 1)]
        names += ["d1", "d2", "d3"] + [f"y{i}" for i in range(1, n + 1)] + ["e"]
        self.f_names = list(names)
        if with_p:
            names += ["e1", "e2", "e3", "e4"]
        self.base_names = list(names)
        self.alphabet = Alphabet(names)  # the base group's letters
        self.g_alphabet = Alphabet(names + ["q"])
        ix = self.alphabet.index
        self.a1, self.a2, self.b1, self.b2, self.c = (ix(s) for s in ("a1", "a2", "b1", "b2", "c"))
        self.d1, self.d2, self.d3, self.e = (ix(s) for s in ("d1", "d2", "d3", "e"))
        self.xs = [ix(f"x{i}") for i in range(1, n + 1)]
        self.ys = [ix(f"y{i}") for i in range(1, n + 1)]
        self.ps = [ix(f"e{j}") for j in range(1, 5)] if with_p else []
        self.q = self.g_alphabet.index("q")
        self.A = {self.a1, self.a2, self.b1, self.b2}
        self.X = set(self.xs)
        self.Y = set(self.ys)
        self.D = {self.d1, self.d2, self.d3}
        self.z = [self.a1, self.a2, self.b1, self.b2, self.c, self.d1, self.d2, self.d3, self.e] + self.ps
        swap = {self.a1: self.b1, self.a2: self.b2, self.b1: self.a1, self.b2: self.a2}
        for x, y in zip(self.xs, self.ys):
            swap[x], swap[y] = y, x
        self.phi_map = {k: swap.get(k, k) for k in range(1, len(self.alphabet) + 1)}
        self.o1 = (["a1", "a2", "b1", "b2", "c"] + [f"x{i}" for i in range(1, n + 1)]
                   + ["d1", "d2", "d3"] + [f"y{i}" for i in range(1, n + 1)] + ["e"])
        self.o2 = (["b1", "b2", "a1", "a2", "c"] + [f"y{i}" for i in range(1, n + 1)]
                   + ["d1", "d2", "d3"] + [f"x{i}" for i in range(1, n + 1)] + ["e"])
        self.n_names = ["q", "a1", "a2", "b1", "b2", "c", "d1", "d2", "d3"] + \
            [f"y{i}" for i in range(1, n + 1)] + ["e"] + ([f"e{j}" for j in range(1, 5)] if with_p else [])

    def phi(self, g: Sequence[int]) -> Word:
        return apply_letter_map(self.phi_map, g)

    def to_b(self, w: Word) -> Word:
        """w(a1, a2) -> w(b1, b2)"""
        return apply_letter_map({self.a1: self.b1, self.a2: self.b2}, w)


@dataclass
class RipsConstruction:
    G: Presentation
    letters: RipsLetters
    pairs: list  # generating RipsPair records (even indices)
    all_pairs: list  # including inverse records
    smap: SubgroupMap
    q_pres: Presentation
    name_map: dict  # Q generator name -> x_i name
    P: Presentation | None = None
    meta: dict = field(default_factory=dict)

    @property
    def f_generators(self) -> list:
        return list(self.letters.f_names)

    @property
    def n_generators(self) -> list:
        return list(self.letters.n_names)

    def pre_q_count(self) -> int:
        return sum(1 for p in self.pairs if p.family != 11)


def _rips_layout(L: RipsLetters, q_rels: list):
    """Family skeleton: (family, kind, x, mid, kmid, q relator) per pair, in index order."""
    n = L.n
    out = []
    for i in range(n):
        out.append((5, "tail", L.xs[i], 0, 0, None))
    for i in range(n):
        out.append((6, "tail", -L.xs[i], 0, 0, None))
    for fam, eps in ((7, 1), (8, -1)):
        for l in range(n):
            for i in range(n):
                out.append((fam, "conj", eps * L.xs[i], L.ys[l], L.d2, None))
    for fam, eps in ((9, 1), (10, -1)):
        for l in range(len(L.z)):
            for i in range(n):
                z = L.z[l]
                out.append((fam, "phi", eps * L.xs[i], z, L.phi_map[z], None))
    for r in q_rels:
        out.append((11, "phi", 0, 0, 0, r))
    return out


def _rips_pair(L: RipsLetters, index: int, sk, w: Word, v: Word) -> RipsPair:
    fam, kind, x, mid, kmid, r = sk
    if kind == "tail":
        return RipsPair(index, fam, kind, w + (x,), L.to_b(w) + (x,), w, (), x)
    if fam == 11:
        h = w + r + v
        return RipsPair(index, fam, kind, h, L.phi(h), w, v)
    h = w + (x, mid, -x) + v
    if kind == "conj":
        xk = L.phi_map[abs(x)] * (1 if x > 0 else -1)
        k = L.to_b(w) + (xk, kmid, -xk) + L.to_b(v)
    else:
        k = L.phi(h)
    return RipsPair(index, fam, kind, h, k, w, v, x, mid, kmid)


def _rename_q(q: Presentation, L: RipsLetters):
    reserved = set(L.g_alphabet.names)
    # x_i keep their own name; other clashes are rejected
    for j, name in enumerate(q.alphabet.names):
        if name in reserved and name != f"x{j + 1}":
            raise ConstructionError(f"generator name {name!r} of Q clashes with a reserved letter")
    name_map = {name: f"x{j + 1}" for j, name in enumerate(q.alphabet.names)}
    rels = [tuple(L.xs[abs(s) - 1] * (1 if s > 0 else -1) for s in r) for r in q.relators]
    return rels, name_map


def _build_rips(q: Presentation, seed: int, length: int, P: Presentation | None) -> RipsConstruction:
    n = len(q.alphabet)
    if n == 0:
        raise ConstructionError("Q needs at least one generator")
    L = RipsLetters(n, with_p=P is not None)
    q_rels, name_map = _rename_q(q, L)
    layout = _rips_layout(L, q_rels)
    slots, owner = [], []
    for sk in layout:
        if sk[1] == "tail":
            owner.append((len(slots),))
            slots.append(Slot(L.a1, L.a2, 2 * length))
        else:
            owner.append((len(slots), len(slots) + 1))
            slots.append(Slot(L.a1, L.a2, length))
            slots.append(Slot(L.a1, L.a2, length))

    def pairs_from(words):
        out = []
        for j, (sk, own) in enumerate(zip(layout, owner)):
            w = words[own[0]]
            v = words[own[1]] if len(own) > 1 else ()
            out.append(_rips_pair(L, 2 * (j + 1), sk, w, v))
        return out

    def assemble(words):
        ps = pairs_from(words)
        fam = [(p.h, own) for p, own in zip(ps, owner)] + [(p.k, own) for p, own in zip(ps, owner)]
        return [fam]

    words = gen_padding(PaddingSpec(seed, slots, assemble))
    pairs = pairs_from(words)
    all_pairs = []
    for p in pairs:
        all_pairs += [p.inverse(p.index - 1), p]
    q_letter = L.q
    rels = []
    if P is not None:
        shift = L.ps[0] - 1
        rels += [_to_p(r, shift) for r in P.relators]
    rels += [p.h + (q_letter,) + invert(p.k) + (-q_letter,) for p in pairs]
    G = Presentation(L.g_alphabet, rels)
    smap = SubgroupMap([p.h for p in pairs], [p.k for p in pairs])
    meta = {"kind": "rips_nli" if P is not None else "rips", "seed": seed, "n": n,
            "orders": [" ".join(L.o1), " ".join(L.o2)]}
    return RipsConstruction(G, L, pairs, all_pairs, smap, q, name_map, P, meta)


def gen_rips(q: Presentation, seed: int = 0, length: int = 72) -> RipsConstruction:
    return _build_rips(q, seed, length, None)


def gen_rips_nli(q: Presentation, seed: int = 0, length: int = 72) -> RipsConstruction:
    P = gen_perfect(seed).presentation
    P = Presentation(Alphabet(["e1", "e2", "e3", "e4"]), P.relators)
    return _build_rips(q, seed, length, P)
