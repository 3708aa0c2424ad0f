"""``ffchains`` command-line interface.

JSON goes to stdout unless ``--out`` names a file.  Exit status is 0 on
success, 1 when a verified assertion fails, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import bounds, constructions
from .classify import in_family_Q
from .errors import FFChainsError, WidthOutOfScope
from .firstfit import first_fit, is_wall, max_wall
from .poset import ChainPartition, dumps, poset_from_json, poset_to_json, to_dot, width
from .verify import DEFAULT_SEED, TARGETS

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- generate ---------------------------------------------------------------------

_PARAM_FAMILIES = {
    "chain": constructions.chain,
    "antichain": constructions.antichain,
    "ladder": constructions.ladder,
    "stacked": constructions.stacked_butterfly,
}
_FIXED_FAMILIES = {
    "n": constructions.n_poset,
    "butterfly": constructions.butterfly,
    "skewed": constructions.skewed_butterfly,
}
_BUNDLE_FAMILIES = {
    "reservoir": constructions.reservoir,
    "butterfly-lb": constructions.butterfly_lower_bound,
}
FAMILIES = tuple(_PARAM_FAMILIES) + tuple(_FIXED_FAMILIES) + tuple(_BUNDLE_FAMILIES)


def generate(family, param=None):
    """JSON object for a named family: a poset, or a bundle for the adversarial ones."""
    if family in _FIXED_FAMILIES:
        if param is not None:
            raise UsageError(f"family {family!r} takes no parameter")
        return poset_to_json(_FIXED_FAMILIES[family]())
    if param is None:
        raise UsageError(f"family {family!r} needs an integer parameter")
    if family in _PARAM_FAMILIES:
        return poset_to_json(_PARAM_FAMILIES[family](param))
    return _BUNDLE_FAMILIES[family](param).to_json()


# -- input loading ------------------------------------------------------------------


def _read_json(path):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from None


def load_input(path):
    """Return ``(poset, bundle_or_None)``; accepts a poset file or a bundle."""
    obj = _read_json(path)
    if isinstance(obj, dict) and "poset" in obj:
        return poset_from_json(obj["poset"]), obj
    return poset_from_json(obj), None


def _load_order(path):
    obj = _read_json(path)
    if isinstance(obj, dict):
        obj = obj.get("order")
    if not isinstance(obj, list) or not all(isinstance(x, int) for x in obj):
        raise UsageError(f"{path}: expected a list of element indices or {{\"order\": [...]}}")
    return obj


# -- bounds parameters -----------------------------------------------------------------


def _scalar(text):
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    raise UsageError(f"not a number: {text!r}")


def parse_params(text):
    """``k=v,...`` with ':'-separated lists, e.g. ``sizes=2:3,gamma=1.5,w=16``."""
    out = {}
    if not text:
        return out
    for item in text.split(","):
        if "=" not in item:
            raise UsageError(f"bad parameter {item!r}; expected key=value")
        key, val = item.split("=", 1)
        key = key.strip()
        if ":" in val:
            out[key] = [_scalar(v) for v in val.split(":") if v]
        elif key in ("cs", "sizes"):
            out[key] = [_scalar(val)]
        else:
            out[key] = _scalar(val)
    return out


# -- subcommands ------------------------------------------------------------------------


def cmd_generate(args):
    return generate(args.family, args.param), EXIT_OK


def cmd_firstfit(args):
    P, bundle = load_input(args.poset)
    runs = []
    if args.random_orders:
        gen = np.random.Generator(np.random.PCG64(np.random.SeedSequence(args.seed)))
        orders = [gen.permutation(P.n).tolist() for _ in range(args.random_orders)]
    elif args.order:
        orders = [_load_order(args.order)]
    elif bundle is not None and "order" in bundle:
        orders = [bundle["order"]]
    else:
        orders = [P.linear_extension()]
    for order in orders:
        res = first_fit(P, order, trace=args.trace)
        run = {"order": list(order), "chains": len(res), "wall": res.chains.to_json()}
        if args.trace:
            run["trace"] = list(res.trace)
        runs.append(run)
    report = {
        "n": P.n,
        "width": width(P),
        "seed": args.seed if args.random_orders else None,
        "runs": runs,
        "maxChains": max((r["chains"] for r in runs), default=0),
    }
    return report, EXIT_OK


def cmd_classify(args):
    P, _ = load_input(args.poset)
    if args.gamma is not None and not args.gamma > 0:
        raise UsageError("--gamma must be positive")
    w = width(P)
    if w > 2:
        raise WidthOutOfScope(f"width {w} is outside the width-2 dichotomy")
    return in_family_Q(P, args.gamma).to_json(), EXIT_OK


def cmd_export_dot(args):
    P, _ = load_input(args.poset)
    return to_dot(P), EXIT_OK


def cmd_bounds(args):
    params = parse_params(args.params)
    w = params.pop("w", None)
    if w is None:
        raise UsageError("bounds eval needs w=<width> among --params")
    try:
        expr = bounds.BoundExpression(args.kind, params)
        return expr.evaluate(w), EXIT_OK
    except KeyError as exc:
        raise UsageError(f"kind {args.kind!r} needs parameter {exc.args[0]!r}") from None


def cmd_maxwall(args):
    P, _ = load_input(args.poset)
    res = max_wall(P, budget=args.budget, seed=args.seed)
    out = {
        "n": P.n,
        "width": width(P),
        "size": res.size,
        "exact": res.exact,
        "expansions": res.expansions,
        "wall": res.wall.to_json(),
        "seed": args.seed,
    }
    return out, EXIT_OK


def cmd_checkwall(args):
    P, bundle = load_input(args.poset)
    if args.wall:
        obj = _read_json(args.wall)
    elif bundle is not None and "wall" in bundle:
        obj = bundle["wall"]
    else:
        raise UsageError("no wall given and the input is not a bundle")
    try:
        cp = ChainPartition.from_json(obj)
        cp.validate(P)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"bad wall JSON: {exc}") from None
    ok = is_wall(P, cp)
    return {"chains": len(cp), "isWall": ok}, EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args):
    common = {"seed": args.seed, "workers": args.workers, "timings": args.timings}
    if args.target == "reservoir":
        report = TARGETS["reservoir"](kmax=args.kmax, **common)
    elif args.target == "butterfly":
        report = TARGETS["butterfly"](qs=args.q, **common)
    elif args.target == "classifier":
        report = TARGETS["classifier"](nmax=args.nmax, **common)
    else:
        report = TARGETS["dilworth"](nmax=args.nmax, **common)
    if not report.passed:
        print(f"FAIL: {report.failure}", file=sys.stderr)
    return report.to_json(), EXIT_OK if report.passed else EXIT_FAIL


def _q_list(text):
    try:
        return [int(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser():
    p = argparse.ArgumentParser(prog="ffchains", description="First-Fit chain partitioning toolkit")
    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("--out", help="write output to this file instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[out], help="emit a named poset or adversarial bundle")
    g.add_argument("family", choices=FAMILIES)
    g.add_argument("param", nargs="?", type=int)
    g.set_defaults(func=cmd_generate)

    f = sub.add_parser("firstfit", parents=[out], help="run First-Fit on a poset")
    f.add_argument("poset")
    src = f.add_mutually_exclusive_group()
    src.add_argument("--order", help="JSON list of element indices")
    src.add_argument("--random-orders", type=int, metavar="N")
    f.add_argument("--seed", type=int, default=DEFAULT_SEED)
    f.add_argument("--trace", action="store_true")
    f.set_defaults(func=cmd_firstfit)

    c = sub.add_parser("classify", parents=[out], help="width-2 dichotomy verdict")
    c.add_argument("poset")
    c.add_argument("--gamma", type=float)
    c.set_defaults(func=cmd_classify)

    d = sub.add_parser("export-dot", parents=[out], help="Hasse diagram in Graphviz DOT")
    d.add_argument("poset")
    d.set_defaults(func=cmd_export_dot)

    b = sub.add_parser("bounds", parents=[out], help="evaluate a bound formula")
    b.add_argument("action", choices=["eval"])
    b.add_argument("--kind", required=True, choices=bounds.KINDS)
    b.add_argument("--params", default="")
    b.set_defaults(func=cmd_bounds)

    m = sub.add_parser("maxwall", parents=[out], help="largest wall (worst-case First-Fit)")
    m.add_argument("poset")
    m.add_argument("--budget", type=int, default=2_000_000)
    m.add_argument("--seed", type=int, default=0)
    m.set_defaults(func=cmd_maxwall)

    w = sub.add_parser("checkwall", parents=[out], help="check the blocking condition of a wall")
    w.add_argument("poset")
    w.add_argument("--wall", help="wall JSON; defaults to the bundle's wall")
    w.set_defaults(func=cmd_checkwall)

    v = sub.add_parser("verify", parents=[out], help="run an invariant sweep")
    v.add_argument("target", choices=sorted(TARGETS))
    v.add_argument("--kmax", type=int, default=4)
    v.add_argument("--q", type=_q_list, default=[2, 3])
    v.add_argument("--nmax", type=int, default=5)
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--timings", action="store_true", help="include wall-clock times in records")
    v.set_defaults(func=cmd_verify)
    return p


def _emit(result, out):
    text = result if isinstance(result, str) else dumps(result)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result, code = args.func(args)
    except (UsageError, WidthOutOfScope, FFChainsError, ValueError) as exc:
        print(f"ffchains: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(result, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
