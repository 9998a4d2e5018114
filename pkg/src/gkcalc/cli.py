"""Command line entry point: ``gkcalc {validate,normalize,equiv,eval,check-trace}``.

Exit codes: 0 success, 1 a negative answer (invalid, Unknown, failed check),
2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import intmat
from .model import ModelFormatError, ModelShapeError, evaluate, load_model, soundness_check_trace, validate_model
from .normalform import LinkageError, normalize_sum, normalize_trace
from .presentation import PresentationError, parse_presentation, validate_presentation
from .rewrite import Budget, Equivalent, check_trace, decide_equiv, trace_from_json, trace_to_json
from .terms import TermSyntaxError, TermTypeError, parse_term

EXIT_OK, EXIT_NEGATIVE, EXIT_MALFORMED = 0, 1, 2


class InputError(Exception):
    """Malformed input; reported on stderr with exit code 2."""


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _load_presentation(path: str, require_valid: bool = True):
    try:
        p = parse_presentation(_read(path))
    except PresentationError as exc:
        raise InputError(f"{path}: {exc}") from None
    if require_valid:
        report = validate_presentation(p)
        if not report.ok:
            raise InputError(f"{path}: presentation is invalid\n{report}")
    return p


def _term(p, text: str, dom=None, cod=None, what="term"):
    try:
        return parse_term(p, text, dom, cod)
    except (TermSyntaxError, TermTypeError) as exc:
        raise InputError(f"{what} {text!r}: {exc}") from None
    except (KeyError, ValueError) as exc:
        raise InputError(f"{what} {text!r}: {exc}") from None


def _model(p, path):
    try:
        return load_model(p, path)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    except (ModelFormatError, ModelShapeError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _write(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _steps(n: int) -> str:
    return f"{n} step" if n == 1 else f"{n} steps"


# -- commands ---------------------------------------------------------------


def cmd_validate(args, out) -> int:
    p = _load_presentation(args.presentation, require_valid=False)
    report = validate_presentation(p)
    print(report, file=out)
    return EXIT_OK if report.ok else EXIT_NEGATIVE


def cmd_normalize(args, out) -> int:
    p = _load_presentation(args.presentation)
    s = _term(p, args.expr, args.dom, args.cod)
    try:
        ns = normalize_sum(p, s)
        trace = normalize_trace(p, s) if args.trace else None
    except LinkageError as exc:
        raise InputError(str(exc)) from None
    print(ns.text, file=out)
    if trace is not None:
        _write(args.trace, trace_to_json(trace))
    return EXIT_OK


def cmd_equiv(args, out) -> int:
    p = _load_presentation(args.presentation)
    left = _term(p, args.left, args.dom, args.cod, "left term")
    right = _term(p, args.right, left.dom, left.cod, "right term")
    if (left.dom, left.cod) != (right.dom, right.cod):
        raise InputError(f"terms have different types: {left.dom} -> {left.cod} and {right.dom} -> {right.cod}")
    budget = Budget(depth=args.depth, max_states=args.max_states, max_context=args.max_context, expansions=args.expansions)
    verdict = decide_equiv(p, left, right, budget)
    if isinstance(verdict, Equivalent):
        print(f"Equivalent ({_steps(len(verdict.trace))})", file=out)
        if args.trace:
            _write(args.trace, trace_to_json(verdict.trace))
        return EXIT_OK
    print(f"Unknown: {verdict.reason}", file=out)
    return EXIT_NEGATIVE


def cmd_eval(args, out) -> int:
    p = _load_presentation(args.presentation)
    m = _model(p, args.model)
    report = validate_model(p, m)
    if not report.ok:
        print(f"model is invalid\n{report}", file=out)
        return EXIT_NEGATIVE
    s = _term(p, args.expr, args.dom, args.cod)
    print(intmat.format_matrix(evaluate(p, m, s)), file=out)
    return EXIT_OK


def cmd_check_trace(args, out) -> int:
    p = _load_presentation(args.presentation)
    text = _read(args.trace)
    try:
        trace = trace_from_json(p, text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{args.trace}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{args.trace}: malformed trace ({exc})") from None
    result = check_trace(p, trace)
    if not result.ok:
        print(f"trace rejected at step {result.index}: {result.reason}", file=out)
        return EXIT_NEGATIVE
    print(f"trace ok ({_steps(len(trace))})", file=out)
    if args.model:
        m = _model(p, args.model)
        report = validate_model(p, m)
        if not report.ok:
            print(f"model is invalid\n{report}", file=out)
            return EXIT_NEGATIVE
        if not soundness_check_trace(p, m, trace):
            print("model check failed: states evaluate differently", file=out)
            return EXIT_NEGATIVE
        print("model check ok", file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gkcalc", description="Rewrite, normalize and evaluate terms over finite presentations.")
    sub = parser.add_subparsers(dest="command", required=True)

    def typed(sp):
        sp.add_argument("--dom", help="domain object, needed when a term has no summands")
        sp.add_argument("--cod", help="codomain object, needed when a term has no summands")

    sp = sub.add_parser("validate", help="check a presentation's invariants")
    sp.add_argument("presentation")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("normalize", help="print the normal form of a term")
    sp.add_argument("presentation")
    sp.add_argument("-e", "--expr", required=True)
    sp.add_argument("--trace", metavar="OUT", help="write a proof trace to OUT")
    typed(sp)
    sp.set_defaults(func=cmd_normalize)

    sp = sub.add_parser("equiv", help="search for a rewrite proof that two terms are equivalent")
    sp.add_argument("presentation")
    sp.add_argument("-l", "--left", required=True)
    sp.add_argument("-r", "--right", required=True)
    sp.add_argument("--depth", type=int, default=Budget.depth)
    sp.add_argument("--max-states", type=int, default=Budget.max_states)
    sp.add_argument("--max-context", type=int, default=Budget.max_context)
    sp.add_argument("--expansions", action="store_true", help="also try steps whose source pattern is absent")
    sp.add_argument("--trace", metavar="OUT", help="write the proof trace to OUT")
    typed(sp)
    sp.set_defaults(func=cmd_equiv)

    sp = sub.add_parser("eval", help="evaluate a term in a matrix model")
    sp.add_argument("presentation")
    sp.add_argument("--model", required=True)
    sp.add_argument("-e", "--expr", required=True)
    typed(sp)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("check-trace", help="re-check a proof trace, optionally against a model")
    sp.add_argument("presentation")
    sp.add_argument("--trace", required=True)
    sp.add_argument("--model")
    sp.set_defaults(func=cmd_check_trace)
    return parser


def run_cli(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_MALFORMED
    if getattr(args, "depth", 0) < 0 or getattr(args, "max_states", 1) < 1 or getattr(args, "max_context", 0) < 0:
        print("gkcalc: error: budget values must be nonnegative (max-states positive)", file=err)
        return EXIT_MALFORMED
    try:
        return args.func(args, out)
    except InputError as exc:
        print(f"gkcalc: error: {exc}", file=err)
        return EXIT_MALFORMED


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
