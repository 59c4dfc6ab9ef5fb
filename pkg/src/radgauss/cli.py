"""Command-line front end: ``python -m radgauss <subcommand> ...``.

Tables are written as headered CSV, reports as JSON; ``--format`` overrides.
Exit status is 0 when every report is certified (or for plain tables), 2 when
some report is refuted or inconclusive, and 1 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import bounds, gaussian, rademacher
from .errors import BudgetError, DomainError, RangeError
from .verifier import (
    RegionId,
    search_worst_ratio,
    verify_all,
    verify_induction,
    verify_mixture_x_ge_sqrt3,
    verify_rectangle,
    verify_region,
)

DEFAULT_SEED = 0
NORM_WARN_TOL = 1e-9

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAIL = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- parsing helpers --------------------------------------------------------


def _floats(text):
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse numbers from {text!r}") from exc
    if not vals or not all(math.isfinite(v) for v in vals):
        raise UsageError(f"expected finite comma-separated numbers, got {text!r}")
    return vals


def _grid(args, start, stop, step):
    start = start if args.grid_start is None else args.grid_start
    stop = stop if args.grid_stop is None else args.grid_stop
    step = step if args.grid_step is None else args.grid_step
    if not (math.isfinite(start) and math.isfinite(stop) and math.isfinite(step)) or step <= 0:
        raise UsageError("grid needs finite start/stop and a positive step")
    if stop < start:
        raise UsageError("grid is empty (stop < start)")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    # rounding keeps decimal grid points such as 1.0 exact
    return np.round(start + step * np.arange(count), 12)


def _weights(args):
    if getattr(args, "equal_weights", None) is not None:
        if args.equal_weights < 1:
            raise UsageError("--equal-weights needs n >= 1")
        return rademacher.normalize(np.ones(args.equal_weights))
    if args.weights is None:
        raise UsageError("give --weights or --equal-weights")
    vals = np.asarray(_floats(args.weights))
    norm = math.sqrt(math.fsum(vals * vals))
    if abs(norm - 1.0) > NORM_WARN_TOL:
        if args.no_normalize:
            raise UsageError(f"weights have norm {norm!r}, not 1 (--no-normalize given)")
        print(f"warning: weights normalized (norm was {norm!r})", file=sys.stderr)
    return rademacher.normalize(vals)


# -- output -----------------------------------------------------------------


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _emit(args, rows=None, doc=None):
    """Write ``rows`` (list of dicts) as CSV or ``doc`` as JSON."""
    fmt = args.format or ("csv" if rows is not None else "json")
    if fmt == "csv":
        if rows is None:
            rows = doc if isinstance(doc, list) else [doc]
            rows = [_flatten(r) for r in rows]
        buf = io.StringIO()
        cols = list(rows[0].keys()) if rows else []
        for r in rows[1:]:
            cols += [k for k in r if k not in cols]
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([_cell(r.get(c)) for c in cols])
        text = buf.getvalue()
    else:
        if doc is None:
            doc = rows
        text = json.dumps(_clean(doc), indent=2, allow_nan=False) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _clean(v):
    if isinstance(v, dict):
        return {k: _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def _flatten(d, prefix=""):
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, (list, tuple)):
            out[key] = json.dumps(_clean(v))
        else:
            out[key] = v
    return out


def _report_doc(rep, args):
    return rep.to_dict(timing=not args.no_timing)


# -- subcommands ------------------------------------------------------------


def cmd_constants(args):
    c = gaussian.constants()
    d = c.as_dict()
    d["ln_c3"] = c.ln_c3
    d["c2_over_c1"] = c.c2 / c.c1
    if args.format == "csv":
        _emit(args, rows=[{"name": k, "value": v} for k, v in d.items()])
    else:
        _emit(args, doc=d)
    return EXIT_OK


def cmd_tail(args):
    w = _weights(args)
    xs = np.asarray(_floats(args.x)) if args.x is not None else _grid(args, -1.0, 5.0, 0.01)
    if args.samples is not None:
        rows = []
        for x in xs:
            est = rademacher.mc_tail(w, float(x), args.samples, args.seed)
            rows.append({"x": float(x), "tail": est.estimate, "std_error": est.std_error, "samples": est.samples})
    elif w.is_equal:
        tails = np.atleast_1d(rademacher.equal_weights_tail(w.n, xs, strict=args.strict))
        rows = [{"x": float(x), "tail": float(t)} for x, t in zip(xs, tails)]
    else:
        tails = np.atleast_1d(rademacher.exact_tail(w, xs, strict=args.strict))
        rows = [{"x": float(x), "tail": float(t)} for x, t in zip(xs, tails)]
    _emit(args, rows=rows)
    return EXIT_OK


def cmd_ratio_curve(args):
    w = _weights(args)
    xs = _grid(args, 0.005, 3.0, 0.005)
    rows = [p._asdict() for p in rademacher.ratio_curve(w, xs)]
    _emit(args, rows=rows)
    return EXIT_OK


def cmd_bounds(args):
    xs = _grid(args, -1.0, 5.0, 0.01)
    c2 = gaussian.constants().c2
    h1 = np.atleast_1d(bounds.h1(xs))
    br = np.atleast_1d(bounds.h1_branch(xs))
    q = np.atleast_1d(gaussian.gauss_tail(xs))
    rows = []
    for x, hv, b, qv in zip(xs, h1, br, q):
        rows.append({
            "x": float(x),
            "h1": float(hv),
            "branch": b.value,
            "g": float(bounds.g(x)),
            "h": float(bounds.h(x)),
            "c2_gauss_tail": c2 * float(qv),
            "gauss_tail": float(qv),
            "edelman": float(bounds.edelman_bound(x)) if x > 0 else None,
        })
    _emit(args, rows=rows)
    return EXIT_OK


def _budgets(args):
    if args.max_boxes < 1 or args.max_depth < 0:
        raise UsageError("--max-boxes must be >= 1 and --max-depth >= 0")
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    return dict(max_boxes=args.max_boxes, max_depth=args.max_depth, workers=args.workers)


def _finish(args, reports):
    docs = [_report_doc(r, args) for r in reports]
    _emit(args, doc=docs[0] if len(docs) == 1 else docs)
    return EXIT_OK if all(r.certified for r in reports) else EXIT_FAIL


def cmd_verify_region(args):
    if args.threshold < 0:
        raise UsageError("--threshold must be >= 0")
    try:
        region = RegionId.parse(args.region)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    return _finish(args, [verify_region(region, args.threshold, **_budgets(args))])


def cmd_verify_all(args):
    if args.threshold < 0:
        raise UsageError("--threshold must be >= 0")
    return _finish(args, verify_all(args.threshold, **_budgets(args)))


def cmd_verify_rectangle(args):
    if args.threshold < 0:
        raise UsageError("--threshold must be >= 0")
    return _finish(args, [verify_rectangle(args.delta_a, args.threshold, **_budgets(args))])


def cmd_verify_mixture(args):
    return _finish(args, [verify_mixture_x_ge_sqrt3(args.a_max, args.x_max, **_budgets(args))])


def cmd_induction_check(args):
    xs = _grid(args, -1.0, 5.0, 0.01)
    if args.weights is not None:
        reports = [verify_induction(_weights(args), xs)]
    else:
        if args.n is None or not (1 <= args.n <= rademacher.ATOMS_MAX_N):
            raise UsageError(f"--n must lie in [1, {rademacher.ATOMS_MAX_N}] (or give --weights)")
        if args.count < 1:
            raise UsageError("--count must be >= 1")
        rng = np.random.default_rng(args.seed)
        reports = [verify_induction(rademacher.random_weights(args.n, rng), xs) for _ in range(args.count)]
    return _finish(args, reports)


def cmd_selfnorm(args):
    scales = _floats(args.scales) if args.scales else None
    xs = _floats(args.x)
    c2 = gaussian.constants().c2
    rows = []
    for x in xs:
        est = rademacher.selfnorm_mc_tail(args.family, scales, args.n, x, args.samples, args.seed)
        bound = c2 * gaussian.gauss_tail(x)
        rows.append({
            "family": args.family,
            "n": args.n,
            "x": x,
            "estimate": est.estimate,
            "std_error": est.std_error,
            "samples": est.samples,
            "seed": est.seed,
            "c2_gauss_tail": bound,
            "within_bound": bool(est.estimate <= bound + 5.0 * est.std_error),
        })
    _emit(args, rows=rows)
    return EXIT_OK


def cmd_search(args):
    w, ratio = search_worst_ratio(args.n, args.x, args.restarts, args.seed)
    c = gaussian.constants()
    doc = {
        "n": args.n,
        "x": args.x,
        "seed": args.seed,
        "restarts": args.restarts,
        "weights": [float(v) for v in w.values],
        "ratio": ratio,
        "c1": c.c1,
        "c2": c.c2,
        "below_c2": bool(ratio <= c.c2),
    }
    _emit(args, doc=doc)
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def _common(p, grid=False, weights=False, budgets=False):
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    if grid:
        p.add_argument("--grid-start", type=float, default=None)
        p.add_argument("--grid-stop", type=float, default=None)
        p.add_argument("--grid-step", type=float, default=None)
    if weights:
        p.add_argument("--weights", default=None, help="comma-separated coefficients")
        p.add_argument("--equal-weights", type=int, default=None, metavar="N")
        p.add_argument("--no-normalize", action="store_true", help="reject weights that are not unit norm")
    if budgets:
        p.add_argument("--max-boxes", type=int, default=10**7)
        p.add_argument("--max-depth", type=int, default=80)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--no-timing", action="store_true", help="report elapsed_ms as null")


def build_parser():
    parser = _Parser(prog="radgauss", description="Rademacher versus Gaussian tail toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("constants", help="c1, c2, c3 and the region constants")
    _common(p)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("tail", help="P(S >= x) for given weights")
    _common(p, grid=True, weights=True)
    p.add_argument("--x", default=None, help="comma-separated points (default: the grid)")
    p.add_argument("--strict", action="store_true", help="P(S > x) instead")
    p.add_argument("--samples", type=int, default=None, help="Monte Carlo with this many samples")
    p.set_defaults(func=cmd_tail)

    p = sub.add_parser("ratio-curve", help="P(S >= x) / Q(x) over a grid")
    _common(p, grid=True, weights=True)
    p.set_defaults(func=cmd_ratio_curve)

    p = sub.add_parser("bounds", help="h1, g, h, c2 Q and the classical bound over a grid")
    _common(p, grid=True)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify-region", help="certify K <= threshold on one region")
    _common(p, budgets=True)
    p.add_argument("--region", required=True, help="one of " + ", ".join(r.value for r in RegionId))
    p.add_argument("--threshold", type=float, default=0.0)
    p.set_defaults(func=cmd_verify_region)

    p = sub.add_parser("verify-all", help="certify every region")
    _common(p, budgets=True)
    p.add_argument("--threshold", type=float, default=0.0)
    p.set_defaults(func=cmd_verify_all)

    p = sub.add_parser("verify-rectangle", help="certify K <= 0 on [delta_a, 1] x [sqrt 2, sqrt 3]")
    _common(p, budgets=True)
    p.add_argument("--delta-a", type=float, default=0.01)
    p.add_argument("--threshold", type=float, default=0.0)
    p.set_defaults(func=cmd_verify_rectangle)

    p = sub.add_parser("verify-mixture", help="certify the Gaussian mixture inequality for x >= sqrt 3")
    _common(p, budgets=True)
    p.add_argument("--a-max", type=float, default=0.999)
    p.add_argument("--x-max", type=float, default=8.0)
    p.set_defaults(func=cmd_verify_mixture)

    p = sub.add_parser("induction-check", help="replay the prefix induction on random or given weights")
    _common(p, grid=True, weights=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--count", type=int, default=1, help="number of random vectors")
    p.add_argument("--no-timing", action="store_true")
    p.set_defaults(func=cmd_induction_check)

    p = sub.add_parser("selfnorm", help="Monte Carlo tail of a self-normalized sum")
    _common(p)
    p.add_argument("--family", required=True, help="two-point, uniform or gaussian")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", required=True, help="comma-separated points")
    p.add_argument("--samples", type=int, default=10**6)
    p.add_argument("--scales", default=None, help="comma-separated scales")
    p.set_defaults(func=cmd_selfnorm)

    p = sub.add_parser("search", help="local search for the worst tail ratio")
    _common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--restarts", type=int, default=4)
    p.set_defaults(func=cmd_search)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DomainError, BudgetError, RangeError) as exc:
        print(f"radgauss {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
