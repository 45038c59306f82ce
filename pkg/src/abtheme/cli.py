"""Command line: ``abtheme analyze|pushforward|annihilator|verify-suite <file>``.

Exit codes: 0 success, 1 mathematical failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Tuple

from .changevar import verify_parameter_transform
from .dsl import DslError, Environment, load
from .scalar import NotInvertible
from .series import SeriesError
from .theme import OrderInsufficient, ThemeError, ThemeReport, analyze, rank_of
from .ximodel import SpanError

MATH_ERRORS = (ThemeError, OrderInsufficient, SpanError, SeriesError, NotInvertible, ArithmeticError)


class MathFailure(Exception):
    pass


def _targets(env: Environment, kind: str) -> List[Tuple[str, Optional[str]]]:
    cmds = [(c.target, c.by) for c in env.doc.commands if c.kind == kind]
    if cmds:
        return cmds
    if kind == "pushforward":
        return [(t, c) for t in env.themes for c in env.covs]
    return [(t, None) for t in env.themes]


def _analysis(env: Environment, name: str, order: int, margin: int) -> ThemeReport:
    build = env.themes[name].build
    first = analyze(build(order))
    if margin:
        second = analyze(build(order + margin))
        if first.emitted() != second.emitted():
            raise OrderInsufficient(
                f"order insufficient for {name}: order {order} gives {first.emitted()}, "
                f"order {order + margin} gives {second.emitted()}")
    return first


def _pushforward(env: Environment, name: str, cov_name: str, order: int, margin: int):
    build = env.themes[name].build
    cov = env.cov(cov_name, order + 2 * margin + 16)

    def run(N):
        phi = build(N)
        hi = build(N + 4 * rank_of(phi))
        params = cov.symbols if cov.theta.r == 1 else ()
        return verify_parameter_transform(phi, cov.theta, theta_params=params, phi_hi=hi)

    rep = run(order)
    if margin:
        other = run(order + margin)
        if rep.pushed.emitted() != other.pushed.emitted():
            raise OrderInsufficient(
                f"order insufficient for {name} by {cov_name}: {rep.pushed.emitted()} != {other.pushed.emitted()}")
    return rep


def cmd_analyze(env: Environment, args) -> Tuple[list, bool]:
    out = []
    for name, _ in _targets(env, "analyze"):
        rep = _analysis(env, name, args.order, args.check_order_margin)
        out.append((name, rep.to_json(), rep.to_text()))
    return out, True


def cmd_annihilator(env: Environment, args) -> Tuple[list, bool]:
    out = []
    for name, _ in _targets(env, "annihilator"):
        rep = _analysis(env, name, args.order, args.check_order_margin)
        data = {"annihilator": rep.annihilator.to_text(), "rank": rep.rank,
                "effective_order": rep.effective_order}
        out.append((name, data, f"annihilator: {data['annihilator']}\neffective order: {rep.effective_order}"))
    return out, True


def cmd_pushforward(env: Environment, args) -> Tuple[list, bool]:
    out = []
    ok = True
    targets = _targets(env, "pushforward")
    if not targets:
        raise DslError("pushforward needs a generator or presentation and a change of variable")
    for name, cov_name in targets:
        rep = _pushforward(env, name, cov_name, args.order, args.check_order_margin)
        ok = ok and rep.ok
        out.append((f"{name} by {cov_name}", rep.to_json(), rep.to_text()))
    return out, ok


def cmd_verify_suite(args) -> int:
    from .suite import run_suite
    results = run_suite()
    if args.format == "json":
        print(json.dumps([{"criterion": r.number, "title": r.title, "passed": r.passed,
                           "detail": r.detail, "seconds": round(r.seconds, 3)} for r in results],
                         indent=2, ensure_ascii=False))
    else:
        for r in results:
            print(r.line())
        print(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
    return 0 if all(r.passed for r in results) else 1


def _emit(results: list, fmt: str):
    if fmt == "json":
        if len(results) == 1:
            data = results[0][1]
        else:
            data = [dict(name=n, **d) for n, d, _ in results]
        print(json.dumps(data, indent=2, ensure_ascii=False))
    else:
        for i, (name, _, text) in enumerate(results):
            if len(results) > 1:
                print(("" if i == 0 else "\n") + f"== {name}")
            print(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="abtheme", description="Exact analysis of themes and changes of variable.")
    p.add_argument("command", choices=["analyze", "pushforward", "annihilator", "verify-suite"])
    p.add_argument("file", nargs="?", help="input document (not needed for verify-suite)")
    p.add_argument("--order", type=int, default=24, help="truncation order N (default 24)")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--check-order-margin", type=int, default=6, metavar="M",
                   help="re-run at N+M and require identical output; 0 disables (default 6)")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.order < 4 or args.check_order_margin < 0:
        print("error: --order must be at least 4 and the margin nonnegative", file=sys.stderr)
        return 2
    if args.command == "verify-suite":
        return cmd_verify_suite(args)
    if args.file is None:
        print(f"error: {args.command} needs an input file", file=sys.stderr)
        return 2
    try:
        with open(args.file, encoding="utf-8") as fh:
            env = load(fh.read())
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except DslError as err:
        print(f"{args.file}: {err}", file=sys.stderr)
        return 2
    handler = {"analyze": cmd_analyze, "annihilator": cmd_annihilator, "pushforward": cmd_pushforward}[args.command]
    try:
        results, ok = handler(env, args)
    except DslError as err:
        print(f"{args.file}: {err}", file=sys.stderr)
        return 2
    except MATH_ERRORS as err:
        print(f"{args.file}: {type(err).__name__}: {err}", file=sys.stderr)
        return 1
    _emit(results, args.format)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
