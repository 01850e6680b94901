"""Command-line entry point: ``sclo <command> ...``.

Exit status is 0 on success or a passing verdict, 1 on a failing verdict and
2 on usage or input errors.  ``--format doc`` selects a JSON report carrying
the tool version and a digest of the input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from typing import Sequence

from . import __version__
from .cancellation import C16Error, check_c16, dehn_reduce, detect_order_obstruction
from .compat import PerfectContext, RipsContext, verify_perfect, verify_rips
from .constructions import (
    ConstructionError,
    gen_bowditch,
    gen_cantor,
    gen_perfect,
    gen_perfect_family,
    gen_rips,
    gen_rips_nli,
)
from .presentation import Presentation, PresentationError, parse_presentation
from .sunic import ConjugatedOrder, OrderSpec, sign_conj
from .words import Alphabet, WordError, concat, invert
from .zlattice import abelianization

META_PREFIX = "# meta:"


class InputError(Exception):
    pass


def _read(args) -> str:
    if getattr(args, "stdin", False) or args.input in (None, "-"):
        if args.input is None and not getattr(args, "stdin", False):
            raise InputError("no input given (use --input FILE or --stdin)")
        return sys.stdin.read()
    try:
        with open(args.input, encoding="utf-8") as fh:
            return fh.read()
    except OSError as err:
        raise InputError(f"cannot read {args.input}: {err.strerror}") from None


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _emit(args, doc: dict, text_lines: Sequence[str]):
    if args.format == "doc":
        out = {"tool": "sclo", "version": __version__, "command": args.command}
        out.update(doc)
        print(json.dumps(out, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _input_parser(p, stdin=True):
    p.add_argument("--input", help="presentation file ('-' for standard input)")
    if stdin:
        p.add_argument("--stdin", action="store_true", help="read the presentation from standard input")


# ---------------------------------------------------------------- commands


def cmd_check_c16(args) -> int:
    text = _read(args)
    pres = parse_presentation(text)
    res = check_c16(pres.relators)
    doc = {"input_sha256": _digest(text), "verdict": "pass" if res else "fail",
           "relators": len(pres.relators), "min_length": res.min_length, "max_piece": res.max_piece}
    lines = [f"verdict: {'pass' if res else 'fail'}", f"relators: {len(pres.relators)}"]
    if res.witness is not None:
        w = res.witness
        doc["witness"] = {"kind": w.kind, "relator": w.relator, "other": w.other,
                          "piece": pres.alphabet.format(w.piece), "detail": w.detail}
        lines.append(f"witness: {w.kind}: {w.detail}")
        if w.piece:
            lines.append(f"piece: {pres.alphabet.format(w.piece)}")
    else:
        lines.append(f"longest piece: {res.max_piece}, shortest relator: {res.min_length}")
    _emit(args, doc, lines)
    return 0 if res else 1


def cmd_obstruct(args) -> int:
    text = _read(args)
    pres = parse_presentation(text)
    hit = detect_order_obstruction(pres)
    doc = {"input_sha256": _digest(text), "obstruction": hit is not None}
    if hit is None:
        lines = ["obstruction: none found"]
    else:
        r1, r2 = (pres.alphabet.format(r) for r in hit)
        doc["relators"] = [r1, r2]
        lines = ["obstruction: found (not left-orderable)", f"relator: {r1}", f"relator: {r2}"]
    _emit(args, doc, lines)
    # finding the obstruction is the expected outcome of the command
    return 0


def cmd_order_cmp(args) -> int:
    names = args.spec.split()
    alphabet = Alphabet(names)
    spec = OrderSpec.from_names(alphabet, names)
    g = alphabet.parse(args.lhs)
    h = alphabet.parse(args.rhs)
    conj = alphabet.parse(args.conj) if args.conj else ()
    # g <=^f h  iff  1 <=^f g^-1 h  iff  1 <= f g^-1 h f^-1
    d = concat(invert(g), h)
    s = sign_conj(ConjugatedOrder(spec, conj), d)
    ok = int(s) >= 0
    rel = "lhs <= rhs" if ok else "lhs > rhs"
    doc = {"verdict": rel, "leq": ok, "sign_of_difference": int(s), "spec": names}
    _emit(args, doc, [f"verdict: {rel}"])
    return 0


def cmd_dehn(args) -> int:
    text = _read(args)
    pres = parse_presentation(text)
    g = pres.alphabet.parse(args.word)
    r = dehn_reduce(pres, g)
    out = pres.alphabet.format(r)
    doc = {"input_sha256": _digest(text), "word": args.word, "reduced": out, "trivial": not r}
    _emit(args, doc, [f"reduced: {out}", f"trivial: {'yes' if not r else 'no'}"])
    return 0


def cmd_abelianize(args) -> int:
    text = _read(args)
    pres = parse_presentation(text)
    inv = abelianization(pres)
    tors = list(inv.torsion)
    doc = {"input_sha256": _digest(text), "torsion": tors, "free_rank": inv.free_rank,
           "perfect": inv.is_trivial()}
    lines = [f"factors: {' '.join(f'Z/{d}' for d in tors) if tors else 'none'}",
             f"free rank: {inv.free_rank}"]
    _emit(args, doc, lines)
    return 0


def _csv_ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise InputError(f"expected a list of integers, got {text!r}") from None


def _q_presentation(args) -> Presentation:
    if args.q is not None:
        return parse_presentation(_read_path(args.q))
    return Presentation(Alphabet([f"x{i}" for i in range(1, args.free + 1)]), [])


def _read_path(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as err:
        raise InputError(f"cannot read {path}: {err.strerror}") from None


def build_from_meta(meta: dict):
    """Regenerate a construction from the metadata that ``gen`` writes."""
    kind = meta.get("kind")
    if kind == "perfect":
        return gen_perfect(meta["seed"], meta.get("length", 60))
    if kind == "perfect_family":
        return gen_perfect_family(meta["seed"], meta["indices"], meta.get("length", 60))
    if kind in ("rips", "rips_nli"):
        q = Presentation.from_doc(meta["q"])
        fn = gen_rips_nli if kind == "rips_nli" else gen_rips
        return fn(q, meta["seed"], meta.get("length", 72))
    raise InputError(f"context kind {kind!r} has no compatibility check")


def cmd_gen(args) -> int:
    which = args.which
    if which == "bowditch":
        c = gen_bowditch(_csv_ints(args.indices))
        pres, meta = c.presentation, dict(c.meta)
    elif which == "perfect":
        if args.family:
            c = gen_perfect_family(args.seed, _csv_ints(args.family), args.length or 60)
        else:
            c = gen_perfect(args.seed, args.length or 60)
        pres, meta = c.presentation, dict(c.meta, length=args.length or 60)
    elif which == "rips":
        q = _q_presentation(args)
        length = args.length or 72
        c = (gen_rips_nli if args.nli else gen_rips)(q, args.seed, length)
        pres = c.G
        meta = dict(c.meta, length=length, q=q.to_doc(), f_generators=c.f_generators,
                    n_generators=c.n_generators, pairs=len(c.pairs))
    else:
        base = parse_presentation(_read_path(args.input)) if args.input else None
        if base is None:
            raise InputError("gen cantor needs --input")
        pres, meta = gen_cantor(base), {"kind": "cantor"}
    if args.format == "doc":
        _emit(args, {"presentation": pres.to_doc(), "meta": meta}, [])
    else:
        sys.stdout.write(pres.to_text(powers=True))
        print(f"{META_PREFIX} {json.dumps(meta, sort_keys=True)}")
    return 0


def _load_ctx(text: str):
    stripped = text.lstrip()
    if stripped.startswith("{"):
        doc = json.loads(stripped)
        meta = doc.get("meta")
        given = Presentation.from_doc(doc["presentation"]) if "presentation" in doc else None
    else:
        meta = None
        for line in text.splitlines():
            if line.startswith(META_PREFIX):
                meta = json.loads(line[len(META_PREFIX):])
        given = parse_presentation(text)
    if meta is None:
        raise InputError("context carries no metadata (produce it with 'sclo gen')")
    c = build_from_meta(meta)
    pres = getattr(c, "G", None) or c.presentation
    if given is not None and (given.alphabet.names != pres.alphabet.names or given.relators != pres.relators):
        raise InputError("presentation does not match the one regenerated from its metadata")
    return c, meta


def cmd_compat_verify(args) -> int:
    text = _read_path(args.ctx)
    c, meta = _load_ctx(text)
    directions = ("forward", "inverse") if args.direction == "both" else (args.direction,)
    if meta["kind"].startswith("perfect"):
        ctx = PerfectContext.from_construction(c)
        rep = verify_perfect(ctx, args.samples, args.h_depth, args.seed, directions, max_len=args.radius)
    else:
        ctx = RipsContext(c)
        rep = verify_rips(ctx, args.samples, args.h_depth, args.seed, directions)
    doc = dict(rep.to_doc(), input_sha256=_digest(text), seed=args.seed, h_depth=args.h_depth)
    lines = [f"verdict: {'pass' if rep.ok else 'fail'}",
             f"conjugators: {rep.tested_g}", f"pairs: {rep.tested_pairs}",
             f"failures: {rep.failures}", f"oracle-limited: {rep.oracle_limited}"]
    lines += [f"case {k}: {v}" for k, v in sorted(rep.cases.items())]
    _emit(args, doc, lines)
    return 0 if rep.ok else 1


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=["text", "doc"], default="text")
    fmt.add_argument("--threads", type=int, default=1, help="worker cap (output does not depend on it)")

    p = argparse.ArgumentParser(prog="sclo", description="Small cancellation presentations and left-orders.")
    p.add_argument("--version", action="version", version=f"sclo {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check-c16", parents=[fmt], help="check the C'(1/6) condition")
    _input_parser(c)
    c.set_defaults(func=cmd_check_c16)

    c = sub.add_parser("obstruct", parents=[fmt], help="look for the two-relator ordering obstruction")
    _input_parser(c)
    c.set_defaults(func=cmd_obstruct)

    c = sub.add_parser("order", help="compare words under a Šunić order")
    osub = c.add_subparsers(dest="order_command", required=True)
    oc = osub.add_parser("cmp", parents=[fmt])
    oc.add_argument("--spec", required=True, help="order word, e.g. 'a b'")
    oc.add_argument("--lhs", required=True)
    oc.add_argument("--rhs", required=True)
    oc.add_argument("--conj", help="conjugator g: compare under the conjugate order")
    oc.set_defaults(func=cmd_order_cmp, command="order cmp")

    c = sub.add_parser("dehn", parents=[fmt], help="reduce a word with Dehn's algorithm")
    _input_parser(c)
    c.add_argument("--word", required=True)
    c.set_defaults(func=cmd_dehn)

    c = sub.add_parser("abelianize", parents=[fmt], help="invariant factors of the abelianisation")
    _input_parser(c)
    c.set_defaults(func=cmd_abelianize)

    c = sub.add_parser("gen", parents=[fmt], help="generate a presentation")
    c.add_argument("which", choices=["bowditch", "perfect", "rips", "cantor"])
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--length", type=int, help="padding block length")
    c.add_argument("--indices", default="21,22,23", help="bowditch indices (each > 20)")
    c.add_argument("--family", help="extra beta indices for the perfect family")
    c.add_argument("--nli", action="store_true", help="rips: the variant over F * P")
    c.add_argument("--free", type=int, default=1, help="rips: Q free of this rank (when --q is absent)")
    c.add_argument("--q", help="rips: presentation file of Q")
    c.add_argument("--input", help="cantor: base presentation")
    c.set_defaults(func=cmd_gen)

    c = sub.add_parser("compat", help="compatibility checks")
    csub = c.add_subparsers(dest="compat_command", required=True)
    cv = csub.add_parser("verify", parents=[fmt])
    cv.add_argument("--ctx", required=True, help="output of 'sclo gen perfect|rips' ('-' for stdin)")
    cv.add_argument("--samples", type=int, default=1000)
    cv.add_argument("--radius", type=int, help="maximum length of sampled conjugators")
    cv.add_argument("--h-depth", type=int, default=1)
    cv.add_argument("--direction", choices=["forward", "inverse", "both"], default="both")
    cv.add_argument("--seed", type=int, default=0)
    cv.set_defaults(func=cmd_compat_verify, command="compat verify")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "h_depth", 1) < 1:
        parser.error("--h-depth must be at least 1")
    try:
        return args.func(args)
    except (InputError, PresentationError, WordError, ConstructionError, C16Error) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as err:
        print(f"error: malformed document: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
