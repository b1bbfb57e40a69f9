"""Command-line front end.

Exit status: 0 success, 1 verification failure, 2 usage or parse error,
3 search cutoff reached.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import constructions as cons
from .core import all_points, parse_spec
from .experiment import KINDS, ExperimentConfig, run_experiment, to_csv, to_json
from .ldt import bisector_tree, dumps_tree, find_disagreement, knn_classify_counted, loads_tree, max_mono_rectangle
from .minimize import default_grid, exact_bnn, exact_knn_bnn, grid_nn_upper
from .ptf import RepresentationRejected, compile_ptf, margin_holds, term_count_report, verify_ptf
from .representation import (
    NNRepresentation,
    RepresentationError,
    classify_knn,
    classify_nn,
    verify_knn,
    verify_nn,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CUTOFF = 0, 1, 2, 3

CONSTRUCT_METHODS = ("symmetric", "threshold", "majority-bnn", "parity-bnn", "covering")
# arity-5 BNN search runs with this size cutoff unless --max-size is given
DEFAULT_ARITY5_CUTOFF = 6


class UsageError(Exception):
    pass


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _say(args, record: dict, line: str) -> None:
    if args.json:
        print(json.dumps(record))
    else:
        print(line)


def _parse_point(text: str) -> tuple:
    raw = text.replace(",", "").replace(" ", "")
    if not raw or any(c not in "01" for c in raw):
        raise UsageError(f"point must be a string of 0/1 digits, got {text!r}")
    return tuple(int(c) for c in raw)


def construct_representation(spec_text: str, method: str) -> NNRepresentation:
    spec = parse_spec(spec_text)
    if method == "symmetric":
        if spec.symmetric is None:
            raise UsageError(f"{spec_text} is not a symmetric function spec")
        return cons.build_symmetric(spec.symmetric)
    if method == "threshold":
        if spec.threshold is None:
            raise UsageError(f"{spec_text} is not a threshold spec (use th:... or maj:...)")
        return cons.build_threshold(spec.threshold)
    if method == "majority-bnn":
        if spec.family != "maj":
            raise UsageError("majority-bnn needs a maj:n spec")
        return cons.build_majority_bnn(spec.param)
    if method == "parity-bnn":
        if spec.family != "parity":
            raise UsageError("parity-bnn needs a parity:n spec")
        return cons.build_parity_bnn(spec.param)
    if method == "covering":
        return cons.build_covering(spec.function)
    raise UsageError(f"unknown construction method {method!r}")


# -- subcommands ---------------------------------------------------------------------

def cmd_construct(args) -> int:
    rep = construct_representation(args.function, args.method)
    f = parse_spec(args.function).function
    report = verify_nn(f, rep)
    _emit(rep.dumps() + "\n", args.out)
    status = "ok" if report.ok else "FAILED"
    record = {"size": rep.size, "ok": report.ok}
    line = f"size {rep.size} {status}"
    if args.out is None:
        print(line if not args.json else json.dumps(record), file=sys.stderr)
    else:
        _say(args, record, line)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_verify(args) -> int:
    f = parse_spec(args.function).function
    rep = NNRepresentation.loads(_read(args.rep))
    report = verify_nn(f, rep) if args.k is None else verify_knn(f, rep, args.k)
    if args.json:
        print(json.dumps(report.to_dict()))
    else:
        print("ok" if report.ok else "FAILED")
        for p, exp, obs in report.counterexamples:
            print(f"  counterexample {''.join(map(str, p))}: expected {exp}, got {obs}")
        for p in report.tie_points:
            print(f"  tie at {''.join(map(str, p))}")
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_classify(args) -> int:
    rep = NNRepresentation.loads(_read(args.rep))
    a = _parse_point(args.point)
    try:
        if args.counted:
            label, comparisons = knn_classify_counted(rep, a, args.k or 1)
        elif args.k is None:
            label, comparisons = classify_nn(rep, a), None
        else:
            label, comparisons = classify_knn(rep, a, args.k), None
    except RepresentationError as exc:
        _say(args, {"label": None, "error": type(exc).__name__, "detail": str(exc)},
             f"{type(exc).__name__}: {exc}")
        return EXIT_FAIL
    record = {"label": str(label)}
    line = str(label)
    if comparisons is not None:
        record["comparisons"] = comparisons
        line += f" ({comparisons} comparisons)"
    _say(args, record, line)
    return EXIT_OK


def cmd_minimize(args) -> int:
    spec = parse_spec(args.function)
    f = spec.function
    max_size = args.max_size
    if args.model == "bnn":
        if f.arity == 5 and max_size is None:
            max_size = DEFAULT_ARITY5_CUTOFF
        res = exact_bnn(f, max_size=max_size, time_limit=args.time_limit)
    elif args.model == "knn":
        k = args.k or 1
        res = exact_knn_bnn(f, k, max_size if max_size is not None else 1 << f.arity,
                            time_limit=args.time_limit)
    else:
        grid = default_grid(f.arity)
        if spec.threshold is not None:
            grid += cons.threshold_prototypes(spec.threshold)
        res = grid_nn_upper(f, grid, max_size=max_size, time_limit=args.time_limit)
    if res.witness is not None and args.out:
        _emit(res.witness.dumps() + "\n", args.out)
    summary = {"function": args.function, "model": args.model, **res.summary()}
    if args.json:
        print(json.dumps(summary))
    else:
        opt = "unknown" if res.optimum is None else res.optimum
        print(f"optimum {opt} (explored {res.explored}, exhausted up to size "
              f"{res.exhausted_up_to}, {res.elapsed:.3f}s)")
        if res.witness is not None and not args.out:
            print(res.witness.dumps())
    return EXIT_OK if res.known else EXIT_CUTOFF


def cmd_compile(args) -> int:
    f = parse_spec(args.function).function
    rep = NNRepresentation.loads(_read(args.rep))
    try:
        poly, params = compile_ptf(f, rep)
    except RepresentationRejected as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit(poly.dumps() + "\n", args.out)
    if args.params_out:
        _emit(params.dumps() + "\n", args.params_out)
    report = term_count_report(args.function, poly)
    ok = True
    record = {"params": params.to_dict(), **report}
    if args.verify:
        ok = verify_ptf(f, poly)
        record["verified"] = ok
        if args.margin:
            record["margin"] = all(margin_holds(f, poly, x) for x in all_points(f.arity))
            ok = ok and record["margin"]
    line = (f"{report['terms']} terms, B={params.B} M={params.M} A={params.A}"
            + ("" if report["bound"] is None else
               f", lower bound {report['bound']} {'met' if report['meets'] else 'NOT met'}")
            + ("" if not args.verify else f", sign check {'ok' if record['verified'] else 'FAILED'}"))
    stream = sys.stderr if args.out is None else sys.stdout
    print(json.dumps(record) if args.json else line, file=stream)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_ldt_check(args) -> int:
    f = parse_spec(args.function).function
    if args.from_rep:
        tree = bisector_tree(NNRepresentation.loads(_read(args.from_rep)))
        if args.out:
            _emit(dumps_tree(tree) + "\n", args.out)
    elif args.tree:
        tree = loads_tree(_read(args.tree))
    else:
        raise UsageError("give a tree file or --from-rep")
    bad = find_disagreement(tree, f)
    witness = None if bad is None else "".join(map(str, bad))
    _say(args, {"ok": bad is None, "witness": witness},
         "ok" if bad is None else f"FAILED at {witness}")
    return EXIT_OK if bad is None else EXIT_FAIL


def cmd_rect(args) -> int:
    area, rows, cols = max_mono_rectangle(args.n)
    _say(args, {"n": args.n, "area": area, "rows": list(rows), "cols": list(cols)},
         f"area {area}: rows {list(rows)} x cols {list(cols)}")
    return EXIT_OK


def cmd_experiment(args) -> int:
    cfg = ExperimentConfig(kind=args.kind, arity=args.arity, samples=args.samples,
                           seed=args.seed, max_size=args.max_size,
                           time_limit=args.time_limit)
    result = run_experiment(cfg)
    text = to_csv(result) if args.format == "csv" else to_json(result)
    _emit(text, args.out)
    if args.out:
        print(json.dumps(result["summary"]))
    return EXIT_OK


# -- parser ------------------------------------------------------------------------------

def _global_flags(parser, suppress: bool) -> None:
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--json", action="store_true", default=default(False),
                        help="machine-readable output")
    parser.add_argument("--seed", type=int, default=default(0))
    parser.add_argument("--max-size", type=int, default=default(None))
    parser.add_argument("--time-limit", type=float, default=default(None),
                        help="seconds before a search gives up")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nnrep",
                                description="Nearest-neighbor representations of Boolean functions")
    _global_flags(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        _global_flags(sp, suppress=True)
        sp.set_defaults(func=func)
        return sp

    sp = add("construct", cmd_construct, "build a representation")
    sp.add_argument("function")
    sp.add_argument("method", choices=CONSTRUCT_METHODS)
    sp.add_argument("-o", "--out")

    sp = add("verify", cmd_verify, "check a representation file")
    sp.add_argument("function")
    sp.add_argument("rep")
    sp.add_argument("--k", type=int)

    sp = add("classify", cmd_classify, "classify one point")
    sp.add_argument("rep")
    sp.add_argument("point", help="0/1 string, x_1 first, e.g. 110")
    sp.add_argument("--k", type=int)
    sp.add_argument("--counted", action="store_true",
                    help="use the selection routine and report comparisons")

    sp = add("minimize", cmd_minimize, "exact minimum-size search")
    sp.add_argument("function")
    sp.add_argument("--model", choices=("bnn", "knn", "grid"), default="bnn")
    sp.add_argument("--k", type=int)
    sp.add_argument("-o", "--out", help="witness representation file")

    sp = add("compile-ptf", cmd_compile, "compile to a {1,2} sign polynomial")
    sp.add_argument("function")
    sp.add_argument("rep")
    sp.add_argument("-o", "--out")
    sp.add_argument("--params-out")
    sp.add_argument("--verify", action="store_true")
    sp.add_argument("--margin", action="store_true",
                    help="with --verify, also check term domination at every point")

    sp = add("ldt-check", cmd_ldt_check, "check a linear decision tree")
    sp.add_argument("function")
    sp.add_argument("tree", nargs="?")
    sp.add_argument("--from-rep", help="use the bisector tree of a two-prototype representation")
    sp.add_argument("-o", "--out", help="write the tree built by --from-rep")

    sp = add("rect", cmd_rect, "largest monochromatic rectangle of IP_n")
    sp.add_argument("n", type=int)

    sp = add("experiment", cmd_experiment, "seeded experiment runner")
    sp.add_argument("--kind", choices=KINDS, required=True)
    sp.add_argument("--arity", type=int, required=True)
    sp.add_argument("--samples", type=int, required=True)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("-o", "--out")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError, KeyError, OSError) as exc:
        # SpecError, ArityTooLarge, RepresentationError and JSON errors are ValueErrors
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
