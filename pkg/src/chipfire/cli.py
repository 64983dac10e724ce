"""Command-line front end.

Subcommands: final, settlements, base, profile, verify, bench.  Text output
is deterministic for a fixed invocation; exact rationals print as "p/q" (or
"p" when the denominator is one) and no floating point ever reaches stdout
except the bench timing columns.

Output format is chosen per the --format flag, falling back to the
CHIPFIRE_FORMAT environment variable (compact, list, or json).  Compact digit
strings are only used when every digit fits one character; otherwise the
comma-separated list form is printed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from . import analysis
from .engine import GameParams, new_state, stabilize, stabilize_line
from .errors import ChipFiringError, InvalidParams, ParseError
from .predictor import final_counts, final_state, profile_for
from .settlements import (
    delta_strings,
    dormant_census,
    periodic_start,
    settlement,
    tetrahedral_periodic_start,
)
from .verify import SUITES
from .words import DigitWord, eval_base, string_to_word, to_base, word_to_string

RECORD_FIELDS = (
    "a", "b", "n", "state", "left", "right", "settlement_index",
    "left_value_boa", "right_value_boa", "f0", "f1", "total_firings",
)


def _fmt(args) -> str:
    fmt = getattr(args, "format", None) or os.environ.get("CHIPFIRE_FORMAT", "")
    fmt = fmt or "compact"
    if fmt not in ("compact", "list", "json"):
        raise InvalidParams(f"unknown format {fmt!r}")
    return fmt


def _state_text(word: DigitWord, fmt: str) -> str:
    return word_to_string(
        word,
        list_form=True if fmt == "list" else None,
        radix_mark="always",
    )


def _frac_text(x: Fraction) -> str:
    return str(x)


def _record(n: int, params: GameParams, *, oracle: bool, fmt: str) -> dict:
    a, b = params.a, params.b
    log = None
    if oracle:
        state, log = stabilize(new_state(n, params))
        word = analysis.state_word(state)
    else:
        word = final_state(n, params)
    left = DigitWord(word.integer_digits(), 0)
    right_digits = word.fraction_digits()
    right = DigitWord.fraction(right_digits)
    left_val = eval_base(left, params)
    right_val = eval_base(right, params)
    index = f0 = f1 = total = None
    if log is not None:
        f0 = log.fires.get(0, 0)
        f1 = log.fires.get(1, 0)
        total = log.total
        if params.is_structured():
            index = f0
    elif a != b:
        # Firing counts carry over from the gcd-reduced game, and the origin
        # count survives mirroring; the origout count does not.
        d = params.d
        ra, rb, rn = a // d, b // d, n // d
        if ra < rb:
            f0, f1 = final_counts(rn, GameParams(ra, rb))
            if params.is_structured():
                index = f0
        else:
            f0 = final_counts(rn, GameParams(rb, ra))[0]
    if total is None and a != b:
        total = analysis.firings_from_M(analysis.combine(left, right, params))
    return {
        "a": a,
        "b": b,
        "n": n,
        "state": _state_text(word, fmt),
        "left": word_to_string(left, list_form=True if fmt == "list" else None),
        "right": word_to_string(right, list_form=True if fmt == "list" else None),
        "settlement_index": index,
        "left_value_boa": _frac_text(left_val),
        "right_value_boa": _frac_text(right_val),
        "f0": f0,
        "f1": f1,
        "total_firings": total,
    }


def _emit_record(rec: dict, fmt: str, out) -> None:
    if fmt == "json":
        print(json.dumps({k: rec[k] for k in RECORD_FIELDS}), file=out)
    else:
        print(rec["state"], file=out)


def cmd_final(args, out) -> int:
    params = GameParams(args.a, args.b)
    fmt = _fmt(args)
    if args.range is not None:
        lo, hi = args.range
        if lo > hi or lo < 0:
            raise InvalidParams(f"bad range {lo}..{hi}")
        ns = range(lo, hi + 1)
    else:
        if args.n is None:
            raise InvalidParams("final needs N or --range")
        ns = [args.n]
    for n in ns:
        _emit_record(_record(n, params, oracle=args.oracle, fmt=fmt), fmt, out)
    return 0


def cmd_settlements(args, out) -> int:
    params = GameParams(args.a, args.b)
    params.require_structured()
    fmt = _fmt(args)
    for k in range(args.k + 1):
        w = settlement(k, params)
        if fmt == "json":
            print(
                json.dumps(
                    {
                        "a": params.a,
                        "b": params.b,
                        "k": k,
                        "word": word_to_string(w),
                        "value_boa": _frac_text(eval_base(w, params)),
                    }
                ),
                file=out,
            )
        else:
            print(word_to_string(w, list_form=True if fmt == "list" else None), file=out)
    return 0


def cmd_base(args, out) -> int:
    params = GameParams(args.a, args.b)
    fmt = _fmt(args)
    if args.eval is not None:
        w = string_to_word(args.eval)
        print(_frac_text(eval_base(w, params)), file=out)
        return 0
    if args.n is None:
        raise InvalidParams("base needs N or --eval WORD")
    w = to_base(args.n, params)
    if fmt == "json":
        print(
            json.dumps(
                {"a": params.a, "b": params.b, "n": args.n, "word": word_to_string(w)}
            ),
            file=out,
        )
    else:
        print(word_to_string(w, list_form=True if fmt == "list" else None), file=out)
    return 0


def cmd_profile(args, out) -> int:
    params = GameParams(args.a, args.b)
    params.require_structured()
    prof = profile_for(params)
    c = params.c
    a, b = params.a, params.b
    print(f"a={a} b={b} threshold={a + b}", file=out)
    print(f"c = {c}", file=out)
    print(f"B = {prof.B}", file=out)
    print(f"H = {prof.H} (verified over {prof.verified_window} increments)", file=out)
    print(f"anchor state = {_state_text(prof.anchor_state, 'compact')}", file=out)
    print(f"anchor settlement index = {prof.anchor_index}", file=out)
    k0 = periodic_start(params)
    k0_tet = tetrahedral_periodic_start(params)
    drift = "" if k0 == k0_tet else f" (tetrahedral formula gives {k0_tet})"
    print(f"settlements cycle from k = {k0}{drift}", file=out)
    count, last_dormant = dormant_census(params)
    print(f"dormant settlements = {count}, last at k = {last_dormant}", file=out)
    deltas = ", ".join(word_to_string(d).lstrip(".,") for d in delta_strings(params))
    print(f"delta strings: {deltas}", file=out)
    print(f"eventual origout digit = {c * (b - a)}", file=out)
    print(f"eventual right value at b/a = {a * c} (= a*c)", file=out)
    print(f"eventual left value at b/a = n - {a * c}", file=out)
    return 0


def _parse_grid(text: str) -> list[tuple[int, int]]:
    pairs = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(",")
        if len(parts) != 2:
            raise InvalidParams(f"bad pair {chunk!r} in params grid")
        pairs.append((int(parts[0]), int(parts[1])))
    if not pairs:
        raise InvalidParams("empty params grid")
    return pairs


def cmd_verify(args, out) -> int:
    pairs = _parse_grid(args.params_grid) if args.params_grid else None
    if args.a is not None and args.b is not None:
        pairs = [(args.a, args.b)]
    suite = args.suite
    per_suite_kwargs: dict[str, dict] = {name: {} for name in SUITES}
    if args.max_n is not None:
        for name in ("confluence", "invariants", "predictor", "one-b"):
            per_suite_kwargs[name]["max_n"] = args.max_n
    if pairs is not None:
        for name in ("confluence", "invariants", "settlements", "predictor"):
            per_suite_kwargs[name]["pairs"] = pairs
    if args.seed is not None:
        per_suite_kwargs["confluence"]["seeds"] = (
            args.seed, args.seed + 1, args.seed + 2,
        )
    if args.check_every is not None:
        per_suite_kwargs["confluence"]["check_every"] = args.check_every
    if args.workers is not None:
        per_suite_kwargs["confluence"]["workers"] = args.workers
    if suite == "all":
        reports = [SUITES[name](**per_suite_kwargs[name]) for name in SUITES]
    else:
        reports = [SUITES[suite](**per_suite_kwargs[suite])]
    ok = True
    for rep in reports:
        for line in rep.lines():
            print(line, file=out)
        ok = ok and rep.ok
    print("verify: PASS" if ok else "verify: FAIL", file=out)
    return 0 if ok else 1


def cmd_bench(args, out) -> int:
    params = GameParams(args.a, args.b)
    grid = [int(tok) for tok in args.grid.split(",") if tok.strip()]
    if not grid or any(n < 0 for n in grid):
        raise InvalidParams(f"bad bench grid {args.grid!r}")
    # Warm up outside the timed region: numpy import and, for structured
    # pairs, the one-off profile certification.
    stabilize_line(params.threshold, params)
    final_state(min(grid), params)
    print(f"a={params.a} b={params.b}", file=out)
    print(f"{'n':>10}  {'oracle_s':>10}  {'fast_s':>10}  match", file=out)
    worst_ratio = None
    for n in grid:
        t0 = time.perf_counter()
        state, _ = stabilize_line(n, params)
        t_oracle = time.perf_counter() - t0
        t0 = time.perf_counter()
        fast = final_state(n, params)
        t_fast = time.perf_counter() - t0
        match = fast == analysis.state_word(state)
        print(
            f"{n:>10}  {t_oracle:>10.4f}  {t_fast:>10.4f}  {'yes' if match else 'NO'}",
            file=out,
        )
        if not match:
            return 1
        ratio = t_oracle / t_fast if t_fast > 0 else float("inf")
        worst_ratio = ratio if worst_ratio is None else min(worst_ratio, ratio)
    print(f"fast path faster at every n: {'yes' if worst_ratio and worst_ratio > 1 else 'no'}", file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="chipfire",
        description="Exact chip-firing laboratory on the integer line",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_ab(p, required=True):
        p.add_argument("-a", type=int, required=required, help="chips sent left")
        p.add_argument("-b", type=int, required=required, help="chips sent right")

    p = sub.add_parser("final", help="final state of n chips at the origin")
    p.add_argument("n", type=int, nargs="?", help="chip count")
    add_ab(p)
    p.add_argument("--oracle", action="store_true", help="force simulation")
    p.add_argument("--range", type=int, nargs=2, metavar=("N0", "N1"))
    p.add_argument("--format", choices=("compact", "list", "json"))
    p.add_argument("--json", dest="format", action="store_const", const="json")
    p.set_defaults(fn=cmd_final)

    p = sub.add_parser("settlements", help="the settlement sequence xi_0..xi_k")
    add_ab(p)
    p.add_argument("-k", type=int, required=True, help="highest index to print")
    p.add_argument("--format", choices=("compact", "list", "json"))
    p.set_defaults(fn=cmd_settlements)

    p = sub.add_parser("base", help="base-b/a numerals and exact evaluation")
    p.add_argument("n", type=int, nargs="?", help="integer to represent")
    add_ab(p)
    p.add_argument("--eval", metavar="WORD", help="evaluate a digit word instead")
    p.add_argument("--format", choices=("compact", "list", "json"))
    p.set_defaults(fn=cmd_base)

    p = sub.add_parser("profile", help="structure profile of a coprime pair")
    add_ab(p)
    p.set_defaults(fn=cmd_profile)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("suite", choices=sorted(SUITES) + ["all"])
    p.add_argument("--max-n", type=int, dest="max_n")
    p.add_argument("--seed", type=int)
    p.add_argument("--params-grid", dest="params_grid", metavar="A,B;A,B")
    p.add_argument("--check-every", type=int, dest="check_every")
    p.add_argument("--workers", type=int)
    add_ab(p, required=False)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("bench", help="oracle vs fast path timing table")
    add_ab(p)
    p.add_argument("--grid", required=True, help="comma-separated n values")
    p.set_defaults(fn=cmd_bench)

    return ap


def main(argv: list[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args, out)
    except (InvalidParams, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ChipFiringError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
