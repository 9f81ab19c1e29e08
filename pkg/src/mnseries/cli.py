"""Command-line front end.

Every subcommand prints one JSON document (sorted keys, two-space indent) to
stdout. Exit codes: 0 success, 1 a checked assertion failed, 2 usage or
parse error.
"""

import argparse
import ast
import json
import sys

from .errors import MNError, ParseError
from .expr import FreeGroupTarget, eval_expr, format_expr, variables
from .free_group import first_difference, format_monomial, format_word
from .parsing import parse_identity, parse_series, parse_weights, parse_word
from .series import (
    Series,
    approx_to_json,
    d,
    format_series,
    inverse_residual_guarantees,
    leading,
    mul,
    series_to_json,
    truncated_inverse,
)
from .subgroups import coset_label, in_N, make_maximal_subgroup
from .suites import SUITES, RunConfig, demo_theorem, nonnormality_witness, run_suite

CONFIG_KEYS = ("weights", "depth", "samples", "seed", "x", "desc", "n")


class UsageError(Exception):
    pass


def read_config(path: str) -> dict:
    """Read ``key = value`` lines; values are Python literals, ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in CONFIG_KEYS:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                out[key] = ast.literal_eval(value)
            except (ValueError, SyntaxError):
                raise UsageError(f"{path}:{lineno}: value for {key!r} is not a literal") from None
    if "weights" in out:
        out["weights"] = parse_weights(repr(out["weights"]))
    return out


def build_config(args) -> RunConfig:
    values = read_config(args.config) if args.config else {}
    if args.weights is not None:
        values["weights"] = parse_weights(args.weights)
    for key in ("depth", "samples", "seed", "x", "desc", "n"):
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    cfg = RunConfig(**values)
    parse_word(cfg.x)
    if cfg.depth < 0 or (cfg.samples is not None and cfg.samples < 0):
        raise UsageError("depth and samples must be nonnegative")
    return cfg


# -- subcommands --------------------------------------------------------------


def cmd_compare(args, cfg):
    a, b = parse_word(args.a), parse_word(args.b)
    cmp = first_difference(a, b)
    out = {"a": format_word(a), "b": format_word(b), "relation": cmp.relation.value}
    if cmp.monomial is not None:
        out["witness"] = {
            "monomial": format_monomial(cmp.monomial),
            "a_coefficient": cmp.left,
            "b_coefficient": cmp.right,
            "degree_bound": cmp.degree_bound,
        }
    return out, 0


def _parse_assignment(text: str):
    if "=" not in text:
        raise UsageError(f"expected name=word, got {text!r}")
    name, word = text.split("=", 1)
    return name.strip(), parse_word(word)


def cmd_eval(args, cfg):
    e = parse_identity(args.expr)
    env = dict(_parse_assignment(t) for t in args.set or [])
    missing = sorted(variables(e) - set(env))
    if missing:
        raise UsageError(f"unassigned variables: {', '.join(missing)}")
    w = eval_expr(e, env, FreeGroupTarget())
    phi = make_maximal_subgroup(parse_word(cfg.x))
    return {
        "expression": format_expr(e),
        "word": format_word(w),
        "length": len(w),
        "phi_image": str(phi(w)),
    }, 0


def cmd_d(args, cfg):
    a = parse_series(args.series)
    w, c = leading(a)
    return {"series": format_series(a), "d": format_word(w), "leading_coefficient": str(c)}, 0


def cmd_membership(args, cfg):
    a = parse_series(args.series)
    phi = make_maximal_subgroup(parse_word(cfg.x))
    w = d(a)
    return {
        "series": format_series(a),
        "d": format_word(w),
        "phi_image": str(phi(w)),
        "in_N": in_N(phi, a),
        "lambda": phi.lambda_index,
        "mu": phi.mu_index,
    }, 0


def cmd_coset(args, cfg):
    a = parse_series(args.series)
    phi = make_maximal_subgroup(parse_word(cfg.x))
    return {"series": format_series(a), "d": format_word(d(a)), "coset": coset_label(phi, a)}, 0


def cmd_witness(args, cfg):
    phi = make_maximal_subgroup(parse_word(cfg.x))
    units = [parse_series(t) for t in args.series or []]
    w = nonnormality_witness(phi, units, cfg.twist, cfg.depth)
    ok = w["phi_images"] == ["(1 2 3)", "(1 2)", "(2 3)"] and w["beta_in_N"] and not w["conjugate_in_N"]
    return {"witness": w, "ok": ok}, 0 if ok else 1


def cmd_invert(args, cfg):
    a = parse_series(args.series)
    twist = cfg.twist
    inv = truncated_inverse(a, args.n, twist)
    left, right = inverse_residual_guarantees(a, args.n, twist)
    residual_left = mul(a, inv.terms, twist) - Series.one()
    residual_right = mul(inv.terms, a, twist) - Series.one()
    return {
        "series": format_series(a),
        "n": args.n,
        "inverse": approx_to_json(inv),
        "left_residual": series_to_json(residual_left),
        "right_residual": series_to_json(residual_right),
        "left_residual_bound": None if left is None else format_word(left),
        "right_residual_bound": None if right is None else format_word(right),
    }, 0


def cmd_verify(args, cfg):
    if args.suite not in SUITES and args.suite != "all":
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES + ('all',))}")
    results = run_suite(args.suite, cfg)
    ok = all(r.ok for r in results)
    return {"config": cfg.to_json(), "ok": ok, "suites": [r.to_json() for r in results]}, 0 if ok else 1


def cmd_demo_theorem(args, cfg):
    report = demo_theorem(cfg)
    return report, 0 if report["ok"] else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="file of 'key = literal' lines")
    common.add_argument("--weights", help="twist weights, e.g. '{1: 1, 2: -2}'")
    common.add_argument("--seed", type=int)
    common.add_argument("--samples", type=int, help="sample count for every suite")
    common.add_argument("--depth", type=int, help="truncation depth for inverses")
    common.add_argument("--x", help="word that H must contain (default x1^2*x2)")

    p = argparse.ArgumentParser(prog="mnseries", description="Mal'cev-Neumann series over Q(s).")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("compare", parents=[common], help="Magnus order of two words")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("eval", parents=[common], help="reduce a word expression")
    s.add_argument("expr")
    s.add_argument("--set", action="append", metavar="NAME=WORD", help="assign a variable")
    s.set_defaults(func=cmd_eval)

    for name, func, text in (
        ("d", cmd_d, "least support word and its coefficient"),
        ("membership", cmd_membership, "is the series in N"),
        ("coset", cmd_coset, "right coset of N containing the series"),
    ):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("series")
        s.set_defaults(func=func)

    s = sub.add_parser("witness", parents=[common], help="non-normality witness for N")
    s.add_argument("series", nargs="*", help="candidate units (default: monomials)")
    s.set_defaults(func=cmd_witness)

    s = sub.add_parser("invert", parents=[common], help="truncated inverse")
    s.add_argument("series")
    s.add_argument("--n", type=int, default=2, help="number of geometric terms beyond 1")
    s.set_defaults(func=cmd_invert)

    s = sub.add_parser("verify", parents=[common], help="run a property suite")
    s.add_argument("suite", help=f"one of {', '.join(SUITES)}, all")
    s.add_argument("--n", type=int, help="level n for the lemma5 suite (with --desc)")
    s.add_argument("--desc", help="series shape, e.g. 'N,F2'")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("demo-theorem", parents=[common], help="r = 1 construction report")
    s.add_argument("--desc", help="series shape recorded in the report")
    s.set_defaults(func=cmd_demo_theorem)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        out, code = args.func(args, cfg)
    except (ParseError, UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MNError as exc:
        print(f"error: {exc.__class__.__name__}: {exc}", file=sys.stderr)
        return 1
    print(json.dumps(out, sort_keys=True, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
