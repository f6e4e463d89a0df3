"""Command-line front end.

Exit status: 0 for a confirmed result, 1 for a mismatch or an error, 2 when
a budget ran out before an answer.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from .bisim import (
    Bisimilar,
    CheckConfig,
    Mode,
    NotBisimilar,
    TermPair,
    check,
    verify_candidate,
)
from .corpus import CorpusError, ExpectedDistinguisher, Fixture, load_corpus, load_defs
from .ctxeq import SearchBounds, distinguish
from .reduction import ControlStuck, FuelExhausted, OpenStuck, Value, evaluate, is_normal, trace
from .syntax import ParseError, Term, alpha_equal, parse, show

EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE = 0, 1, 2


class _CliError(Exception):
    pass


def _read_term(src: str, defs: dict[str, Term]) -> Term:
    if src.startswith("@"):
        try:
            src = Path(src[1:]).read_text(encoding="utf-8")
        except OSError as e:
            raise _CliError(f"cannot read {src[1:]}: {e.strerror}") from None
    try:
        return parse(src, defs)
    except ParseError as e:
        raise _CliError(f"parse error at {e.line}:{e.column}: {e.message}") from None


def _positive(s: str) -> int:
    n = int(s)
    if n <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def _non_negative(s: str) -> int:
    n = int(s)
    if n < 0:
        raise argparse.ArgumentTypeError("must be a non-negative integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="shiftbisim",
        description="Evaluate and compare terms of the call-by-value lambda calculus with shift and reset.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    terms = argparse.ArgumentParser(add_help=False)
    terms.add_argument("--no-defs", action="store_true", help="do not expand i, omega, Omega, theta, delta")

    fuel = argparse.ArgumentParser(add_help=False)
    fuel.add_argument("--fuel", type=_non_negative, default=10_000, help="reduction step budget (default 10000)")

    checking = argparse.ArgumentParser(add_help=False)
    checking.add_argument("--mode", choices=[m.value for m in Mode], default="plain")
    checking.add_argument(
        "--up-to-context", action=argparse.BooleanOptionalAction, default=True, help="discharge obligations in the context closure"
    )
    checking.add_argument("--up-to-depth", type=_positive, default=6)
    checking.add_argument("--max-pairs", type=_positive, default=5000)
    checking.add_argument("--assume-divergence", action="store_true", help="treat fuel exhaustion as divergence")

    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--context-size", type=_positive, default=6)
    search.add_argument("--pool-size", type=_positive, default=5, help="number of probe values")
    search.add_argument("--search-fuel", type=_positive, default=1000, help="step budget per context stage")
    search.add_argument("--jobs", type=_positive, default=1)

    e = sub.add_parser("eval", parents=[terms, fuel], help="evaluate a term")
    e.add_argument("term")
    t = sub.add_parser("trace", parents=[terms, fuel], help="print every reduction step")
    t.add_argument("term")
    b = sub.add_parser("bisim", parents=[terms, checking], help="check normal-form bisimilarity")
    b.add_argument("left")
    b.add_argument("right")
    b.add_argument("--fuel", type=_positive, default=10_000)
    b.add_argument("--hint", action="append", default=[], metavar="L~R", help="extra candidate pair")
    d = sub.add_parser("distinguish", parents=[terms, search], help="search for a distinguishing context")
    d.add_argument("left")
    d.add_argument("right")
    c = sub.add_parser("corpus", parents=[search], help="run the shipped fixtures")
    c.add_argument("--filter", default="", help="only fixtures whose name contains this text")
    c.add_argument("--file", type=Path, help="use another fixture file")
    c.add_argument("--fuel", type=_positive, default=10_000)
    c.add_argument("--no-distinguish", action="store_true", help="skip the context search")
    return p


def _defs(args) -> dict[str, Term]:
    return {} if getattr(args, "no_defs", False) else load_defs()


def _print_json(doc) -> None:
    print(json.dumps(doc, indent=2, ensure_ascii=False))


def _cmd_eval(args) -> int:
    t = _read_term(args.term, _defs(args))
    o = evaluate(t, args.fuel)
    if isinstance(o, Value):
        print(f"value: {show(o.v)}")
    elif isinstance(o, ControlStuck):
        print(f"control stuck: {show(o.term)}")
    elif isinstance(o, OpenStuck):
        print(f"open stuck on {o.head}: {show(o.term)}")
    else:
        assert isinstance(o, FuelExhausted)
        print(f"fuel exhausted after {o.steps} steps: {show(o.last)}")
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _cmd_trace(args) -> int:
    seq = trace(_read_term(args.term, _defs(args)), args.fuel)
    for u in seq:
        print(show(u))
    return EXIT_OK if is_normal(seq[-1]) else EXIT_INCONCLUSIVE


def _config(args) -> CheckConfig:
    return CheckConfig(
        fuel=args.fuel,
        max_pairs=args.max_pairs,
        mode=Mode(args.mode),
        up_to_context=args.up_to_context,
        up_to_depth=args.up_to_depth,
        assume_divergence=args.assume_divergence,
    )


def _cmd_bisim(args) -> int:
    defs = _defs(args)
    left, right = _read_term(args.left, defs), _read_term(args.right, defs)
    hints = []
    for h in args.hint:
        a, sep, b = h.partition("~")
        if not sep:
            raise _CliError(f"hint {h!r} is not of the form 'left ~ right'")
        hints.append(TermPair(_read_term(a, defs), _read_term(b, defs)))
    v = check(left, right, _config(args), hints)
    _print_json(v.to_json())
    if isinstance(v, Bisimilar):
        return EXIT_OK
    return EXIT_FAIL if isinstance(v, NotBisimilar) else EXIT_INCONCLUSIVE


def _bounds(args) -> SearchBounds:
    return SearchBounds(context_size=args.context_size, value_pool_size=args.pool_size, fuel=args.search_fuel)


def _cmd_distinguish(args) -> int:
    defs = _defs(args)
    left, right = _read_term(args.left, defs), _read_term(args.right, defs)
    d = distinguish(left, right, _bounds(args), jobs=args.jobs)
    if d is None:
        print("none at bounds")
    else:
        _print_json(d.to_json())
    return EXIT_OK


def run_fixture(fx: Fixture, fuel: int, bounds: Optional[SearchBounds], jobs: int = 1) -> list[tuple[str, bool, str]]:
    """Check one fixture; returns (aspect, passed, detail) rows."""
    rows = []
    for mode, expected in ((Mode.PLAIN, fx.expected_plain), (Mode.REFINED, fx.expected_refined)):
        v = check(fx.left, fx.right, CheckConfig(fuel=fuel, mode=mode), fx.hints)
        rows.append((mode.value, expected.matches(v), v.verdict))
    if fx.trace:
        got = trace(fx.left, fuel)
        same = len(got) == len(fx.trace) and all(alpha_equal(a, b) for a, b in zip(got, fx.trace))
        rows.append(("trace", same, f"{len(got)} terms"))
    if fx.candidate:
        cfg = CheckConfig(fuel=fuel, mode=fx.candidate_mode, up_to_context=fx.candidate_up_to)
        rep = verify_candidate(fx.candidate, cfg, fx.style)
        detail = "all pairs pass" if rep.ok else rep.failures[0].reason
        rows.append((f"candidate/{fx.style.value}", rep.ok, detail))
    if bounds is not None:
        d = distinguish(fx.left, fx.right, bounds, jobs=jobs)
        found = ExpectedDistinguisher.FOUND if d is not None else ExpectedDistinguisher.NOT_FOUND
        rows.append(("distinguisher", found is fx.expected_distinguisher, found.value))
    return rows


def _cmd_corpus(args) -> int:
    try:
        fixtures = load_corpus(args.file)
    except (CorpusError, OSError) as e:
        raise _CliError(str(e)) from None
    fixtures = [f for f in fixtures if args.filter in f.name]
    bounds = None if args.no_distinguish else _bounds(args)
    failed = 0
    width = max((len(f.name) for f in fixtures), default=4)
    for fx in fixtures:
        start = time.perf_counter()
        rows = run_fixture(fx, args.fuel, bounds, args.jobs)
        ok = all(r[1] for r in rows)
        failed += not ok
        cells = "  ".join(f"{aspect}={'ok' if good else 'FAIL'}({detail})" for aspect, good, detail in rows)
        print(f"{'PASS' if ok else 'FAIL'}  {fx.name:<{width}}  {time.perf_counter() - start:6.2f}s  {cells}")
    print(f"{len(fixtures) - failed}/{len(fixtures)} fixtures pass")
    return EXIT_OK if failed == 0 else EXIT_FAIL


_COMMANDS = {
    "eval": _cmd_eval,
    "trace": _cmd_trace,
    "bisim": _cmd_bisim,
    "distinguish": _cmd_distinguish,
    "corpus": _cmd_corpus,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
