"""Command-line front end.

Symbol indices in every file and message are 1-based.  Codewords are
written one per line as space-separated integers with ``?`` marking an
erasure; messages use the same layout without ``?``.

Exit codes: 0 ok, 1 operation failed, 2 usage error, 3 result is not
exhaustive.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import analysis
from .designs import (
    MembershipMatrix,
    ResolvableDesign,
    ZigzagSpec,
    build_affine_design,
    build_kirkman15,
    build_zigzag_membership,
    check_assumption1,
    design_to_membership,
)
from .errors import GroupUnavailableError, UnrecoverableError
from .fixtures import example1_code
from .gf import FieldSpec, gf2
from .lrc import (
    LrcCode,
    construction1,
    construction2,
    decode_generic,
    decode_thm3,
    decode_thm4,
    repair_symbol,
    verify_availability,
)
from .mds import certify_mds, gabidulin, systematic_rs

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PARTIAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class OperationError(Exception):
    pass


# -- io helpers -------------------------------------------------------------

def _read_text(path: str | None) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    return Path(path).read_text()


def _read_json(path: str) -> dict:
    try:
        return json.loads(_read_text(path))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read JSON from {path}: {exc}") from exc


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _info(msg: str) -> None:
    print(msg, file=sys.stderr)


def parse_words(text: str, allow_erasures: bool) -> list[list[int | None]]:
    out = []
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        row: list[int | None] = []
        for tok in line.split():
            if tok == "?":
                if not allow_erasures:
                    raise UsageError(f"line {ln}: erasure marker not allowed here")
                row.append(None)
            else:
                try:
                    row.append(int(tok))
                except ValueError as exc:
                    raise UsageError(f"line {ln}: bad token {tok!r}") from exc
        out.append(row)
    return out


def format_word(word) -> str:
    return " ".join("?" if v is None else str(int(v)) for v in word)


def parse_index_list(s: str) -> list[int]:
    try:
        vals = [int(x) for x in s.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise UsageError(f"bad index list {s!r}") from exc
    return vals


def parse_range(s: str) -> list[int]:
    """``"2..4"`` -> [2, 3, 4]; ``"2,3,5"`` -> [2, 3, 5]."""
    if ".." in s:
        a, b = s.split("..", 1)
        try:
            return list(range(int(a), int(b) + 1))
        except ValueError as exc:
            raise UsageError(f"bad range {s!r}") from exc
    return parse_index_list(s)


def load_field(arg: str | None) -> FieldSpec | None:
    """A field from a JSON file or an inline ``p^m`` / ``q`` string."""
    if arg is None:
        return None
    path = Path(arg)
    try:
        if path.exists():
            return FieldSpec.from_json(json.loads(path.read_text()))
        if "^" in arg:
            p, m = arg.split("^", 1)
            return FieldSpec(int(p), int(m))
        q = int(arg)
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise UsageError(f"bad field {arg!r}: {exc}") from exc
    for p in range(2, q + 1):
        if q % p == 0:
            m = round(math.log(q, p))
            if p**m != q:
                raise UsageError(f"{q} is not a prime power")
            return FieldSpec(p, m)
    raise UsageError(f"bad field {arg!r}")


def load_code(path: str) -> LrcCode:
    try:
        return LrcCode.from_json(_read_json(path))
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"{path} is not a code bundle: {exc}") from exc


# -- commands ----------------------------------------------------------------

def cmd_design(args) -> int:
    F = load_field(args.field)
    try:
        if args.kind == "kirkman15":
            obj: ResolvableDesign | MembershipMatrix = build_kirkman15()
        elif args.kind == "affine":
            if args.q is None:
                raise UsageError("design affine needs --q")
            obj = build_affine_design(args.q, F)
        else:
            if args.r is None or args.t is None:
                raise UsageError("design zigzag needs --r and --t")
            obj = build_zigzag_membership(ZigzagSpec(args.r, args.t))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    if isinstance(obj, ResolvableDesign):
        bad = obj.validate()
        _info(f"{args.kind}: k={obj.k} r={obj.r} blocks={obj.b} classes={obj.c} lambda={obj.lam}")
        if bad:
            raise OperationError("design invalid: " + "; ".join(bad[:5]))
        t = args.t if args.t is not None else obj.c
        if t > obj.c:
            raise UsageError(f"design has only {obj.c} parallel classes, t={t} requested")
        R = design_to_membership(obj, t)
        payload = R.to_json() if args.t is not None else obj.to_json()
    else:
        R = obj
        t = R.t
        _info(f"{args.kind}: k={R.k} r={R.r} columns={R.m} classes={R.t}")
        payload = R.to_json()
    _emit(args, json.dumps(payload))
    if args.check:
        rep = check_assumption1(R, R.k, R.r or max(len(b) for b in R.columns), t)
        _info(json.dumps(rep.to_json()) if args.format == "json" else
              f"layout check (t={t}): {'conformant' if rep.conformant else 'violated'}"
              + "".join(f"\n  {v}" for v in rep.violations))
        return EXIT_OK if rep.conformant else EXIT_FAIL
    return EXIT_OK


def _membership_from(args) -> MembershipMatrix:
    if not args.R:
        raise UsageError("construct needs --R")
    d = _read_json(args.R)
    try:
        return MembershipMatrix.from_json(d)
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"{args.R} is not a membership matrix: {exc}") from exc


def cmd_construct(args) -> int:
    if args.kind == "example1":
        code = example1_code()
    else:
        R = _membership_from(args)
        if args.k is not None and args.k != R.k:
            raise UsageError(f"R has k={R.k} != {args.k}")
        r = args.r if args.r is not None else R.r
        t = args.t if args.t is not None else R.t
        if r is None:
            raise UsageError("--r is required (membership file has no r)")
        if args.N is None:
            raise UsageError("--N is required")
        if t > R.t:
            raise UsageError(f"R has {R.t} classes, t={t} requested")
        if r < 1 or R.k % r:
            raise UsageError(f"r must divide k (r={r}, k={R.k})")
        F = load_field(args.field)
        try:
            if args.kind == "c1":
                length = args.N + t
                if F is None:
                    F = gf2(max(1, math.ceil(math.log2(length))))
                code = construction1(systematic_rs(F, length, R.k), R, r, t)
            else:
                M = args.N + t - 1
                if F is None:
                    F = gf2(M)
                code = construction2(gabidulin(F, 2, M, R.k), R, r, t)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    n, k, r, t = code.params
    b1 = analysis.bound_thm1(n, k, r, t)
    _info(f"(n,k,r,t)=({n},{k},{r},{t}) rate={Fraction(k, n)} field=GF({code.spec.order}) bound_thm1={b1}")
    _emit(args, json.dumps(code.to_json()))
    return EXIT_OK


def cmd_encode(args) -> int:
    code = load_code(args.code)
    msgs = parse_words(_read_text(args.input), allow_erasures=False)
    lines = []
    for m in msgs:
        if len(m) != code.k:
            raise UsageError(f"message has {len(m)} symbols, k={code.k}")
        if any(not 0 <= v < code.spec.order for v in m):
            raise UsageError(f"message symbols must lie in [0, {code.spec.order})")
        lines.append(format_word(code.generator.encode(m)))
    _emit(args, "\n".join(lines))
    return EXIT_OK


def _erasure_positions(args, n: int, rng) -> list[int]:
    pos = [i - 1 for i in parse_index_list(args.erase)] if args.erase else []
    if any(not 0 <= p < n for p in pos):
        raise UsageError(f"erasure positions must lie in 1..{n}")
    if args.random:
        pool = [i for i in range(n) if i not in pos]
        pos += sorted(rng.choice(pool, size=min(args.random, len(pool)), replace=False).tolist())
    return pos


def cmd_corrupt(args) -> int:
    words = parse_words(_read_text(args.input), allow_erasures=True)
    rng = np.random.default_rng(args.seed)
    out = []
    for w in words:
        w = list(w)
        for p in _erasure_positions(args, len(w), rng):
            w[p] = None
        out.append(format_word(w))
    _emit(args, "\n".join(out))
    return EXIT_OK


def cmd_decode(args) -> int:
    code = load_code(args.code)
    words = parse_words(_read_text(args.input), allow_erasures=True)
    rng = np.random.default_rng(args.seed)
    method = args.method
    if method == "auto":
        method = {"construction1": "thm3", "construction2": "thm4"}.get(code.kind, "generic")
    out = []
    for w in words:
        if len(w) != code.n:
            raise UsageError(f"codeword has {len(w)} symbols, n={code.n}")
        w = list(w)
        for p in _erasure_positions(args, code.n, rng):
            w[p] = None
        try:
            if method == "generic":
                msg, path, within = decode_generic(code, w), "generic", None
            else:
                res = (decode_thm3 if method == "thm3" else decode_thm4)(code, w)
                msg, path, within = res.message, res.path, res.within_guarantee
        except UnrecoverableError as exc:
            raise OperationError(f"unrecoverable: rank {exc.rank} < {exc.needed}") from exc
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        erased = sum(v is None for v in w)
        _info(f"decoded: method={method} path={path} erasures={erased}"
              + ("" if within is None else f" within_guarantee={str(within).lower()}"))
        out.append(format_word(msg))
    _emit(args, "\n".join(out))
    return EXIT_OK


def cmd_repair(args) -> int:
    code = load_code(args.code)
    words = parse_words(_read_text(args.input), allow_erasures=True)
    if len(words) != 1:
        raise UsageError("repair reads exactly one codeword")
    w = words[0]
    if len(w) != code.n:
        raise UsageError(f"codeword has {len(w)} symbols, n={code.n}")
    i, j = args.symbol - 1, args.group - 1
    if not 0 <= i < code.n:
        raise UsageError(f"--symbol must lie in 1..{code.n}")
    groups = code.groups.get(i, ())
    if not 0 <= j < len(groups):
        raise UsageError(f"symbol {args.symbol} has {len(groups)} repair groups")
    try:
        val = repair_symbol(code, w, i, j)
    except GroupUnavailableError as exc:
        raise OperationError(f"group unavailable: erased member(s) "
                             f"{[e + 1 for e in exc.erased]}") from exc
    group = [u + 1 for u in groups[j]]
    if args.format == "json":
        _emit(args, json.dumps({"symbol": args.symbol, "group": args.group, "members": group, "value": int(val)}))
    else:
        _emit(args, f"symbol {args.symbol} = {int(val)} (group {args.group}: {' '.join(map(str, group))})")
    return EXIT_OK


def cmd_verify(args) -> int:
    code = load_code(args.code)
    rep = verify_availability(code)
    d = rep.to_json()
    d["params"] = dict(zip("nkrt", code.params))
    ok = rep.ok
    if args.mds and code.ghat is not None:
        cert = certify_mds(code.ghat, samples=args.budget or 10**4, seed=args.seed or 0)
        d["mds"] = {"mds": cert.mds, "mode": cert.mode, "checked": cert.checked, "total": cert.total}
        ok = ok and cert.mds
    if args.format == "json":
        _emit(args, json.dumps(d))
    else:
        lines = [f"(n,k,r,t)=({code.n},{code.k},{code.r},{code.t})",
                 f"availability: t_achieved={rep.t_achieved} max_group={rep.max_r_used} "
                 f"all_symbol={str(rep.all_symbol).lower()} {'ok' if rep.ok else 'FAILED'}"]
        lines += [f"  {f}" for f in rep.failures]
        if "mds" in d:
            m = d["mds"]
            lines.append(f"mds: {str(m['mds']).lower()} ({m['mode']}, {m['checked']}/{m['total']})")
        _emit(args, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


def _load_codebook(path: str):
    d = _read_json(path)
    try:
        C = np.array(d["codewords"], dtype=np.int64)
        groups = {int(g["symbol"]) - 1: tuple(tuple(int(u) - 1 for u in grp) for grp in g["repair"])
                  for g in d["groups"]}
        return C, groups, int(d["r"]), int(d["t"]), int(d["q"])
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"{path} is not a codebook file: {exc}") from exc


def cmd_analyze(args) -> int:
    modes = [m for m in ("bounds", "dmin", "subcode", "asymptotics") if getattr(args, m)]
    if not modes:
        raise UsageError("choose at least one of --bounds, --dmin, --subcode, --asymptotics")
    code = load_code(args.code) if args.code else None
    r_sweep = args.r
    if args.r is not None and "asymptotics" not in modes:
        try:
            args.r = int(args.r)
        except ValueError as exc:
            raise UsageError(f"--r must be an integer, got {args.r!r}") from exc
    if ("dmin" in modes or "bounds" in modes) and code is None and not (
            "bounds" in modes and None not in (args.n, args.k, args.r, args.t)):
        raise UsageError("--bounds/--dmin need --code (or --n --k --r --t for bounds)")
    result: dict = {}
    status = EXIT_OK
    text: list[str] = []
    if "bounds" in modes:
        n, k, r, t = code.params if code else (args.n, args.k, args.r, args.t)
        b = {"n": n, "k": k, "r": r, "t": t,
             "lemma1_columns": analysis.bound_lemma1(k, r, t),
             "thm1": analysis.bound_thm1(n, k, r, t),
             "thm2": analysis.bound_thm2(n, k, r, t),
             "singleton": analysis.singleton(n, k)}
        result["bounds"] = b
        text.append(f"bounds (n,k,r,t)=({n},{k},{r},{t}): lemma1_columns={b['lemma1_columns']} "
                    f"thm1={b['thm1']} thm2={b['thm2']} singleton={b['singleton']}")
    if "dmin" in modes:
        rep = analysis.dmin_exact(code, mode=args.mode, budget=args.budget or analysis.DEFAULT_BUDGET,
                                  parallel=args.parallel, seed=args.seed or 0)
        result["dmin"] = rep.to_json()
        text.append(f"d_min={rep.d_min} method={rep.method} exhaustive={str(rep.exhaustive).lower()} "
                    f"checked={rep.checked} thm1={rep.bound_thm1} thm2={rep.bound_thm2} "
                    f"optimal_thm1={str(rep.optimal_thm1).lower()}")
        if rep.witness_codeword is not None:
            text.append("witness codeword: " + format_word(rep.witness_codeword))
        text += [f"note: {x}" for x in rep.notes]
        if not rep.exhaustive:
            _info("warning: distance sweep was not exhaustive (budget exceeded)")
            status = EXIT_PARTIAL
    if "subcode" in modes:
        if args.codebook:
            C, groups, r, t, q = _load_codebook(args.codebook)
        elif code is not None:
            if code.spec.order**code.k > 1 << 20:
                raise UsageError("code too large to enumerate; pass --codebook")
            C, groups = analysis.codebook_from_code(code), code.groups
            r, t, q = code.r, code.t, code.spec.order
        else:
            raise UsageError("--subcode needs --codebook or --code")
        try:
            tr = analysis.subcode_bound(C, groups, r, t, q)
        except ValueError as exc:
            raise OperationError(str(exc)) from exc
        result["subcode"] = tr.to_json()
        text.append(f"subcode: ell={tr.ell} ended={tr.ended} |C'|={tr.final_size} "
                    f"fixed={[i + 1 for i in sorted(tr.fixed)]} bound={tr.bound_value:g} "
                    f"min_iterations={tr.min_iterations}")
        for s in tr.steps:
            text.append(f"  step i={s.index + 1} union={[u + 1 for u in s.union]} a={s.a} "
                        f"pattern={s.pattern} |C|: {s.prev_size} -> {s.size}")
    if "asymptotics" in modes:
        if args.t is None:
            raise UsageError("--asymptotics needs --t")
        family = args.family
        spec_vals = args.values or (r_sweep if family == "zigzag" else args.q)
        vals = parse_range(spec_vals or ("2..4" if family == "zigzag" else "2,3,4,5,7"))
        try:
            rows = analysis.asymptotic_report(family, args.t, vals, Fraction(args.rate))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        if args.format == "csv":
            if len(modes) > 1:
                raise UsageError("--format csv only applies to --asymptotics alone")
            _emit(args, analysis.format_table(rows, "csv"))
            return status
        result["asymptotics"] = [{**{k: v for k, v in r.__dict__.items() if k not in ("rate", "ratio")},
                                  "rate": str(r.rate), "ratio": str(r.ratio)} for r in rows]
        text.append(analysis.format_table(rows, "text").rstrip())
    if args.format == "json":
        _emit(args, json.dumps(result))
    elif args.format == "csv":
        raise UsageError("--format csv only applies to --asymptotics")
    else:
        _emit(args, "\n".join(text))
    return status


# -- parser ------------------------------------------------------------------

def _positive(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{s!r} is not an integer")
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="field JSON file, or p^m / q")
    common.add_argument("-o", "--output", help="write the main output here instead of stdout")
    common.add_argument("--format", choices=["json", "text", "csv"], default="text")
    common.add_argument("--parallel", type=_positive, default=1, help="worker processes for sweeps")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--budget", type=_positive, default=None, help="max rank checks / samples")

    ap = argparse.ArgumentParser(prog="lrcavail",
                                 description="Locally repairable codes with availability.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", parents=[common], help="build a resolvable design / membership matrix")
    p.add_argument("kind", choices=["kirkman15", "affine", "zigzag"])
    p.add_argument("--q", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--t", type=int, help="keep the first t classes and emit the membership matrix")
    p.add_argument("--check", action="store_true")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("construct", parents=[common], help="build a code bundle")
    p.add_argument("kind", choices=["c1", "c2", "example1"])
    p.add_argument("--R", help="membership or design JSON")
    p.add_argument("--N", type=int)
    p.add_argument("--k", type=int, help="expected dimension (checked against R)")
    p.add_argument("--r", type=int)
    p.add_argument("--t", type=int)
    p.set_defaults(func=cmd_construct)

    for name, fn, hlp in [("encode", cmd_encode, "encode messages"),
                          ("decode", cmd_decode, "erasure-decode codewords")]:
        p = sub.add_parser(name, parents=[common], help=hlp)
        p.add_argument("--code", required=True)
        p.add_argument("--in", dest="input", default="-")
        if name == "decode":
            p.add_argument("--method", choices=["auto", "generic", "thm3", "thm4"], default="auto")
            p.add_argument("--erase", help="extra 1-based positions to erase, e.g. 2,5,7")
            p.add_argument("--random", type=int, default=0, help="erase this many random positions")
        p.set_defaults(func=fn)

    p = sub.add_parser("corrupt", parents=[common], help="mark positions as erased")
    p.add_argument("--in", dest="input", default="-")
    p.add_argument("--erase", help="1-based positions, e.g. 2,5,7")
    p.add_argument("--random", type=int, default=0)
    p.set_defaults(func=cmd_corrupt)

    p = sub.add_parser("repair", parents=[common], help="rebuild one symbol from a repair group")
    p.add_argument("--code", required=True)
    p.add_argument("--in", dest="input", default="-")
    p.add_argument("--symbol", type=int, required=True)
    p.add_argument("--group", type=int, default=1)
    p.set_defaults(func=cmd_repair)

    p = sub.add_parser("verify", parents=[common], help="check repair groups (and MDS-ness)")
    p.add_argument("--code", required=True)
    p.add_argument("--mds", action="store_true", help="also certify the underlying MDS code")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("analyze", parents=[common], help="bounds, exact distance, subcode trace, asymptotics")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--code")
    src.add_argument("--codebook", help="JSON {q, r, t, codewords, groups}")
    p.add_argument("--bounds", action="store_true")
    p.add_argument("--dmin", action="store_true")
    p.add_argument("--subcode", action="store_true")
    p.add_argument("--asymptotics", action="store_true")
    p.add_argument("--mode", choices=["auto", "weight-enum", "erasure-rank"], default="auto")
    p.add_argument("--family", choices=["zigzag", "affine"], default="zigzag")
    p.add_argument("--values", help="sweep, e.g. 2..4 or 2,3,5 (defaults to --r or --q)")
    p.add_argument("--rate", default="1/2")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--r", help="locality, or a sweep range with --asymptotics")
    p.add_argument("--q", help="prime-power sweep for --family affine")
    p.add_argument("--t", type=int)
    p.set_defaults(func=cmd_analyze)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        _info(f"error: {exc}")
        return EXIT_USAGE
    except OperationError as exc:
        _info(f"error: {exc}")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
