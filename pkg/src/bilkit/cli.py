"""Command-line surface.

Exit codes: 0 success (check: true, bisim/separate: relation or formula
found), 1 negative outcome (check: false, bisim: no bi-asimulation,
separate: none needed), 2 usage error, 3 validation or format error,
4 verification-suite failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import suites
from .biasim import greatest_biasim, separating_formula
from .formula import ParseError, letters, parse, render
from .fol import emit, problem, translate
from .kripke import (
    ModelFormatError,
    PointedModel,
    load_model,
    model_to_json,
    random_model,
)
from .semantics import theory
from .unravel import UnravelBudgetError, bracket, node_id, unravel


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _read_model(path, mode="strict", need_point=False, override=None):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError("cannot read %s: %s" % (path, exc), 3)
    try:
        model, point = load_model(text, mode=mode)
    except ModelFormatError as exc:
        raise CliError("%s: %s" % (path, exc), 3)
    if override is not None:
        point = override
    if point is not None and point not in model._up:
        raise CliError("%s: point %r is not a world" % (path, point), 3)
    if need_point and point is None:
        raise CliError("%s: no point given (use the model file or a flag)" % path, 3)
    return model, point


def _parse_formula(text):
    try:
        return parse(text)
    except ParseError as exc:
        raise CliError("formula: %s" % exc, 3)


def cmd_check(args):
    model, _ = _read_model(args.model, mode=args.mode)
    f = _parse_formula(args.formula)
    missing = [p for p in letters(f) if p not in model.signature]
    if missing:
        raise CliError("letters %s not in the model signature" % ", ".join(missing), 3)
    from .semantics import satisfies

    value = satisfies(model, args.world, f) if args.world in model._up else None
    if value is None:
        raise CliError("unknown world %r" % args.world, 3)
    print("true" if value else "false")
    return 0 if value else 1


def cmd_bisim(args):
    m1, p1 = _read_model(args.left, need_point=True, override=args.from_world)
    m2, p2 = _read_model(args.right, need_point=True, override=args.to_world)
    if m1.signature != m2.signature:
        raise CliError("models must share a signature", 3)
    frm, to = PointedModel(m1, p1), PointedModel(m2, p2)
    if args.separate:
        f = separating_formula(frm, to, minimize=args.minimize)
        if f is None:
            print("none (a bi-asimulation exists)")
            return 1
        print(render(f))
        return 0
    relation = greatest_biasim(frm, to)
    if relation is None:
        print("null")
        return 1
    sys.stdout.write(relation.to_json())
    return 0


def cmd_separate(args):
    args.separate = True
    args.minimize = getattr(args, "minimize", False)
    return cmd_bisim(args)


def cmd_unravel(args):
    model, _ = _read_model(args.model)
    if args.world not in model._up:
        raise CliError("unknown world %r" % args.world, 3)
    try:
        un = unravel(model, args.world, args.maxlen, node_cap=args.cap)
    except (ValueError, UnravelBudgetError) as exc:
        raise CliError(str(exc), 3)
    sys.stdout.write(model_to_json(un.model, point=node_id(un.root_node())))
    return 0


def cmd_bracket(args):
    model, point = _read_model(args.model)
    try:
        bm = bracket(model)
    except ValueError as exc:
        raise CliError(str(exc), 3)
    sys.stdout.write(model_to_json(bm, point=point))
    return 0


def cmd_translate(args):
    f = _parse_formula(args.formula)
    goal = translate(f, args.var)
    sys.stdout.write(emit(problem(goal, letters(f)), args.format))
    return 0


def cmd_theory(args):
    model, _ = _read_model(args.model)
    if args.world not in model._up:
        raise CliError("unknown world %r" % args.world, 3)
    th = theory(PointedModel(model, args.world), model.signature, args.rank)
    print("positive:")
    for f in th.positive:
        print("  %s" % render(f))
    print("negative:")
    for f in th.negative:
        print("  %s" % render(f))
    return 0


def cmd_random(args):
    letters_arg = [s for s in args.letters.split(",") if s] if args.letters else []
    try:
        m = random_model(args.worlds, letters_arg, args.density, args.seed)
    except ValueError as exc:
        raise CliError(str(exc), 3)
    sys.stdout.write(model_to_json(m, point=m.worlds[0]))
    return 0


def cmd_verify(args):
    try:
        cases = suites.run_suite(args.suite, seed=args.seed)
    except ValueError as exc:
        raise CliError(str(exc), 2)
    failures = 0
    for case_id, ok, detail in cases:
        status = "PASS" if ok else "FAIL"
        if not ok:
            failures += 1
        print("CASE %s %s %s" % (case_id, status, detail))
    print(
        "TOTAL %d/%d %s" % (len(cases) - failures, len(cases), "FAIL" if failures else "PASS")
    )
    return 4 if failures else 0


def build_parser():
    top = argparse.ArgumentParser(
        prog="bilkit",
        description="Workbench for bi-intuitionistic propositional logic "
        "over finite Kripke models.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="evaluate a formula at a world")
    p.add_argument("model")
    p.add_argument("-w", "--world", required=True)
    p.add_argument("-f", "--formula", required=True)
    p.add_argument("--mode", choices=["strict", "close"], default="strict")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("bisim", help="greatest bi-asimulation between two pointed models")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--from-world")
    p.add_argument("--to-world")
    p.add_argument("--separate", action="store_true", help="print a distinguishing formula instead")
    p.add_argument("--minimize", action="store_true", help="greedily shrink the distinguishing formula")
    p.set_defaults(fn=cmd_bisim)

    p = sub.add_parser("separate", help="distinguishing formula between two pointed models")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--from-world")
    p.add_argument("--to-world")
    p.add_argument("--minimize", action="store_true")
    p.set_defaults(fn=cmd_separate)

    p = sub.add_parser("unravel", help="bounded bi-unravelling around a world")
    p.add_argument("model")
    p.add_argument("-w", "--world", required=True)
    p.add_argument("--maxlen", type=int, required=True)
    p.add_argument("--cap", type=int, default=4000, help="node budget")
    p.set_defaults(fn=cmd_unravel)

    p = sub.add_parser("bracket", help="expand a model with cone-pinning letters")
    p.add_argument("model")
    p.set_defaults(fn=cmd_bracket)

    p = sub.add_parser("translate", help="standard translation into first-order logic")
    p.add_argument("-f", "--formula", required=True)
    p.add_argument("--format", choices=["tptp", "smtlib2"], required=True)
    p.add_argument("--var", default="X")
    p.set_defaults(fn=cmd_translate)

    p = sub.add_parser("theory", help="rank-bounded theory of a pointed model")
    p.add_argument("model")
    p.add_argument("-w", "--world", required=True)
    p.add_argument("--rank", type=int, required=True)
    p.set_defaults(fn=cmd_theory)

    p = sub.add_parser("random", help="seeded random model")
    p.add_argument("-n", "--worlds", type=int, required=True)
    p.add_argument("--letters", default="p,q")
    p.add_argument("--density", type=float, default=0.4)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_random)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_verify)

    return top


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CliError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return exc.code
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
