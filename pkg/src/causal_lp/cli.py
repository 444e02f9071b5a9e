"""Command-line front end: ``causal-lp <command> FILE ...``.

Exit codes: 0 success (at least one model, query satisfied, model stable),
1 negative outcome, 2 usage, parse or solver error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import io as cio
from .algebra import render_value
from .lang import ParseError, classify, normalize, parse_formula, parse_program, print_program
from .semantics import eval_formula, is_model, is_stable_model, is_supported, two_valued
from .solver import SolverError, oracle_standard, solve, stratify

METHODS = ("auto", "stratified", "guess", "gamma")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _program(args):
    return parse_program(_read(args.file), default_label=args.default_label)


def _models(args, p):
    if getattr(args, "model", None):
        return [cio.load_model(_read(args.model))]
    kw = {"mode": args.reduct, "max_models": args.max_models}
    if args.mode != "gamma":
        kw["jobs"] = args.jobs
    return solve(p, args.mode, **kw).models


def cmd_solve(args, out) -> int:
    p = _program(args)
    kw = {"mode": args.reduct, "max_models": args.max_models}
    if args.mode != "gamma":
        kw["jobs"] = args.jobs
    report = solve(p, args.mode, **kw)
    if args.output == "json":
        json.dump(cio.report_to_json(report), out, indent=2, sort_keys=True)
        out.write("\n")
    elif args.output == "dot":
        for m in report.models:
            for atom in m:
                out.write(cio.value_to_dot(atom, m))
    else:
        out.write(f"method: {report.method} (complete: {str(report.complete).lower()})\n")
        out.write(f"models: {len(report.models)}\n")
        for i, m in enumerate(report.models, 1):
            out.write(f"Model {i}:\n")
            text = cio.model_to_text(m)
            if text:
                out.write("  " + text.replace("\n", "\n  ") + "\n")
    return 0 if report.models else 1


def cmd_query(args, out) -> int:
    p = _program(args)
    f = parse_formula(args.expr)
    models = _models(args, p)
    if not models:
        out.write("no stable model\n")
        return 1
    ok = True
    results = []
    for i, m in enumerate(models, 1):
        v = eval_formula(m, f)
        sat = bool(v.causes)
        ok &= sat
        results.append({"model": i, "value": render_value(v), "satisfied": sat})
    if args.output == "json":
        json.dump(results, out, indent=2)
        out.write("\n")
    else:
        for r in results:
            out.write(f"Model {r['model']}: {r['value']} ({str(r['satisfied']).lower()})\n")
    return 0 if ok else 1


def cmd_check(args, out) -> int:
    p = _program(args)
    m = cio.load_model(_read(args.model_file))
    verdict = {
        "stable": is_stable_model(p, m, args.reduct),
        "model": is_model(m, p),
        "supported": is_supported(p, m),
    }
    if args.output == "json":
        json.dump(verdict, out, sort_keys=True)
        out.write("\n")
    else:
        for k in ("stable", "model", "supported"):
            out.write(f"{k}: {str(verdict[k]).lower()}\n")
    return 0 if verdict["stable"] else 1


def cmd_strata(args, out) -> int:
    p = normalize(_program(args))
    info = stratify(p)
    if not info.stratified:
        out.write("unstratifiable: " + " -> ".join(info.witness) + "\n")
        return 1
    for i, layer in enumerate(info.strata()):
        out.write(f"{i}: {' '.join(layer)}\n")
    return 0


def cmd_normalize(args, out) -> int:
    out.write(print_program(normalize(_program(args)), args.default_label))
    return 0


def cmd_dot(args, out) -> int:
    p = _program(args)
    models = _models(args, p)
    for m in models:
        out.write(cio.value_to_dot(args.atom, m))
    return 0 if models else 1


def cmd_oracle(args, out) -> int:
    p = _program(args)
    models = oracle_standard(p, cap=args.cap)
    if args.output == "json":
        json.dump([sorted(m) for m in models], out)
        out.write("\n")
    else:
        for m in models:
            out.write("{" + ", ".join(sorted(m)) + "}\n")
    return 0 if models else 1


def cmd_project(args, out) -> int:
    p = _program(args)
    models = _models(args, p)
    atoms = sorted(p.atoms())
    projected = [two_valued(m, atoms) for m in models]
    if args.output == "json":
        json.dump(projected, out, sort_keys=True)
        out.write("\n")
    else:
        for d in projected:
            out.write("{" + ", ".join(a for a, v in d.items() if v) + "}\n")
    return 0 if models else 1


def cmd_classify(args, out) -> int:
    c = classify(_program(args))
    for k, v in vars(c).items():
        out.write(f"{k}: {str(v).lower()}\n")
    return 0


def _positive_int(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=METHODS, default="auto")
    common.add_argument("--reduct", choices=("uniform", "selective"), default="uniform")
    common.add_argument("--max-models", type=_positive_int, default=None)
    common.add_argument("--output", choices=("text", "json", "dot"), default="text")
    common.add_argument("--default-label", choices=("head", "one"), default="head")
    common.add_argument("--jobs", type=_positive_int, default=1)

    parser = argparse.ArgumentParser(prog="causal-lp", description="Causal logic program solver.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("file", help="program file, or - for stdin")
        sp.set_defaults(fn=fn)
        return sp

    add("solve", cmd_solve, "enumerate causal stable models")
    q = add("query", cmd_query, "evaluate a body formula in each stable model")
    q.add_argument("expr")
    q.add_argument("--model", help="JSON model file to use instead of solving")
    c = add("check", cmd_check, "check a JSON model: stable, model, supported")
    c.add_argument("model_file")
    add("strata", cmd_strata, "print strata or an unstratifiable cycle")
    add("normalize", cmd_normalize, "print the flat normal form")
    d = add("dot", cmd_dot, "DOT graph of the causes of an atom")
    d.add_argument("atom")
    d.add_argument("--model", help="JSON model file to use instead of solving")
    o = add("oracle", cmd_oracle, "classical stable models by exhaustion (regular programs)")
    o.add_argument("--cap", type=_positive_int, default=20)
    pr = add("project", cmd_project, "two-valued projection of the stable models")
    pr.add_argument("--model", help="JSON model file to use instead of solving")
    add("classify", cmd_classify, "print the syntactic class flags")
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    try:
        return args.fn(args, out)
    except (ParseError, SolverError, ValueError, OSError) as e:
        sys.stderr.write(f"causal-lp: error: {e}\n")
        return 2


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
