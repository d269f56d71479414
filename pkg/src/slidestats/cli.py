"""Command-line interface: every pipeline stage behind one entry point.

Randomized commands require an explicit --seed and are bit-reproducible in
their numeric output.  CSV files carry 17 significant digits so doubles
round-trip; --format json mirrors the same values.  Report commands accept
--plot PATH to render the corresponding figure next to the delimited output.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import harness, returns
from .errors import (
    DuplicatePoint,
    NonNegativeRho2,
    NonPositiveDistance,
    NumericFailure,
    OracleUnstable,
    ParseError,
    SlideOverflow,
    SlideStatsError,
    TooFewPoints,
)
from .generators import KINDS, SourceSpec, sample
from .neighbors import load_cloud, nn_distances, nn_distances_1d
from .slide import slide_estimate

EXIT_FAILURE = 1
EXIT_PARSE = 2
EXIT_DUPLICATE = 3
EXIT_NUMERIC = 4


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _json_safe(value):
    if isinstance(value, float) and math.isnan(value):
        return None
    return value


def _emit(rows, fields, args) -> None:
    """Write dict rows as CSV (default) or JSON to --output or stdout."""
    if args.format == "json":
        payload = [{k: _json_safe(r[k]) for k in fields} for r in rows]
        text = json.dumps(payload[0] if args.single_row else payload, indent=2)
        text += "\n"
    else:
        lines = [",".join(fields)]
        lines += [",".join(_fmt(r[k]) for k in fields) for r in rows]
        text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_n_range(text: str):
    try:
        if ":" in text:
            lo, hi = text.split(":")
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(part) for part in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected LO:HI or comma list, got {text!r}"
        ) from None


def _parse_sizes(text: str):
    try:
        return [int(part) for part in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from None


def _spec_from_args(args, size, seed) -> SourceSpec:
    return SourceSpec(kind=args.kind, size=size, seed=seed, m=args.m,
                      alpha=args.alpha, beta=args.beta)


# ----------------------------------------------------------------- commands


def cmd_compute(args) -> int:
    try:
        cloud = load_cloud(args.input, dedupe=args.dedupe, expect_dim=args.dim)
        if cloud.m == 1:
            profile = nn_distances_1d(cloud.points[:, 0], mode=args.mode)
        else:
            if args.mode == "consecutive":
                raise ParseError("mode=consecutive applies to 1-D input only")
            profile = nn_distances(cloud)
        est = slide_estimate(profile, provenance=str(args.input))
    except (ParseError, TooFewPoints) as exc:
        print(f"slidestats compute: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (DuplicatePoint, NonPositiveDistance) as exc:
        print(f"slidestats compute: {exc}", file=sys.stderr)
        return EXIT_DUPLICATE
    except (NumericFailure, SlideOverflow, OracleUnstable, NonNegativeRho2,
            FloatingPointError) as exc:
        print(f"slidestats compute: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    _emit([{"rho1": est.rho1, "rho2": est.rho2, "n": est.n}],
          ("rho1", "rho2", "n"), args)
    return 0


def cmd_sample(args) -> int:
    spec = _spec_from_args(args, args.size, args.seed)
    pts = sample(spec).points
    if args.output:
        np.savetxt(args.output, pts, fmt="%.17g", delimiter=",")
    else:
        np.savetxt(sys.stdout, pts, fmt="%.17g", delimiter=",")
    return 0


def _summary_rows(summaries):
    return [s.row() for s in summaries]


def cmd_simulate(args) -> int:
    cfg = harness.parse_config(args.config) if args.config else {}
    kind = args.kind or cfg.get("kind")
    if kind is None:
        raise ParseError("simulate needs --kind or a config file with kind=")
    size = args.size if args.size is not None else cfg.get("size", 10000)
    reps = args.reps if args.reps is not None else cfg.get("reps", 100)
    seed = args.seed if args.seed is not None else cfg.get("seed")
    if seed is None:
        raise ParseError("simulate needs --seed or a config file with seed=")
    spec = SourceSpec(kind=kind, size=2,
                      m=args.m if args.m is not None else cfg.get("m", 1),
                      alpha=args.alpha if args.alpha is not None else cfg.get("alpha"),
                      beta=args.beta if args.beta is not None else cfg.get("beta"))
    summary = harness.replicate(spec, size, reps, seed, workers=args.threads)
    _emit(_summary_rows([summary]), harness.SUMMARY_FIELDS, args)
    return 0


def _parse_rows(text: str):
    rows = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            kind, m = part.split(":")
            rows.append(SourceSpec(kind=kind, size=2, m=int(m)))
        else:
            rows.append(SourceSpec(kind=part, size=2))
    return rows


def cmd_table(args) -> int:
    rows = _parse_rows(args.rows) if args.rows else None
    summaries = harness.table_run(args.size, args.reps, args.seed, rows=rows,
                                  workers=args.threads)
    _emit(_summary_rows(summaries), harness.SUMMARY_FIELDS, args)
    return 0


def cmd_returns_curve(args) -> int:
    prices = returns.load_prices(args.prices, price_col=args.price_col,
                                 skip_header=True if args.skip_header else None)
    label = args.label or os.path.splitext(os.path.basename(args.prices))[0]
    series = returns.log_returns(prices, label=label)
    curve = returns.rho_curve(series, args.n, windows=args.windows)
    rows = [{"n": n, "rho1": r1, "rho2": r2, "windows": w}
            for n, r1, r2, w in curve.rows()]
    _emit(rows, ("n", "rho1", "rho2", "windows"), args)
    if args.plot:
        from . import plotting  # matplotlib import only when rendering

        plotting.save_curve_figure([curve], args.plot, title=label)
    return 0


def cmd_scatter(args) -> int:
    if not args.family and not args.prices:
        raise ParseError("scatter needs --family and/or --prices")
    cloud_set = None
    rows = []
    if args.family:
        if args.seed is None:
            raise ParseError("scatter --family needs --seed")
        family = SourceSpec(kind=args.family, size=2, alpha=args.alpha,
                            beta=args.beta)
        cloud_set = harness.cloud(family, args.count, args.length, args.embed,
                                  args.seed, workers=args.threads)
        rows += [{"label": lab, "rho2": r2, "rho1": r1}
                 for lab, r2, r1 in cloud_set.rows()]
    marker_rows = []
    for path in args.prices or ():
        label = os.path.splitext(os.path.basename(path))[0]
        series = returns.log_returns(
            returns.load_prices(path, price_col=args.price_col), label=label)
        r2, r1 = returns.scatter_point(series, n=args.embed)
        marker_rows.append((label, r2, r1))
        rows.append({"label": label, "rho2": r2, "rho1": r1})
    _emit(rows, ("label", "rho2", "rho1"), args)
    if args.plot:
        from . import plotting

        plotting.save_scatter_figure(cloud_set, marker_rows, args.plot)
    return 0


def cmd_test_normal(args) -> int:
    if args.input:
        cloud = load_cloud(args.input)
        if cloud.m != 1:
            raise ParseError("test-normal --input expects a single-column file")
        data = cloud.points[:, 0]
    elif args.prices:
        prices = returns.load_prices(args.prices, price_col=args.price_col)
        data = returns.log_returns(prices)
    else:
        raise ParseError("test-normal needs --input or --prices")
    report = harness.normality_test(data, embed_n=args.embed, reps=args.reps,
                                    seed=args.seed, alpha=args.alpha)
    _emit([{"rho1": report.rho1, "rho2": report.rho2,
            "p_value": report.p_value, "reps": report.reps,
            "alpha": report.alpha, "reject": report.reject}],
          ("rho1", "rho2", "p_value", "reps", "alpha", "reject"), args)
    return 0


# ------------------------------------------------------------------ parser


def _add_io_flags(p, single_row=False):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", help="write to this file instead of stdout")
    p.set_defaults(single_row=single_row)


def _add_threads(p):
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                   help="worker cap for replicate-level parallelism")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="slidestats",
        description="Slide statistics of point sets: compute, simulate, test.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="rho1/rho2 of a point cloud CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--dim", type=int, help="expected coordinate columns")
    p.add_argument("--mode", choices=("nearest", "consecutive"),
                   default="nearest", help="1-D distance mode")
    p.add_argument("--dedupe", action="store_true",
                   help="collapse exactly duplicated points first")
    _add_io_flags(p, single_row=True)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("sample", help="draw a point cloud and write CSV")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--m", type=int, default=1, help="uniform-cube dimension")
    p.add_argument("--alpha", type=float, help="stable stability parameter")
    p.add_argument("--beta", type=float, help="stable skewness parameter")
    p.add_argument("--output")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("simulate", help="Monte Carlo summary for one source")
    p.add_argument("--kind", choices=KINDS)
    p.add_argument("--config", help="key=value file with kind/size/reps/seed")
    p.add_argument("--size", type=int)
    p.add_argument("--reps", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--m", type=int, help="uniform-cube dimension")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    _add_threads(p)
    _add_io_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("table", help="replicate the full simulation table")
    p.add_argument("--size", type=_parse_sizes, required=True,
                   help="sample size, or comma list of sizes")
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--rows", help="comma list like uniform-cube:2,normal,cantor")
    _add_threads(p)
    _add_io_flags(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("returns-curve",
                       help="rho1/rho2 of T_n embeddings of a price CSV")
    p.add_argument("--prices", required=True)
    p.add_argument("--price-col", dest="price_col",
                   help="price column name or 0-based index")
    p.add_argument("--skip-header", dest="skip_header", action="store_true")
    p.add_argument("--n", type=_parse_n_range, default=list(range(2, 31)),
                   help="depth range LO:HI (default 2:30)")
    p.add_argument("--windows", type=int,
                   help="window count (default: all maximal windows)")
    p.add_argument("--label")
    p.add_argument("--plot", help="also render the curve figure to this file")
    _add_io_flags(p)
    p.set_defaults(func=cmd_returns_curve)

    p = sub.add_parser("scatter",
                       help="(rho2, rho1) cloud from a family and/or price files")
    p.add_argument("--family", choices=KINDS)
    p.add_argument("--count", type=int, default=1000,
                   help="number of simulated samples")
    p.add_argument("--length", type=int, default=500,
                   help="length of each simulated series")
    p.add_argument("--embed", type=int, default=3,
                   help="delay-embedding depth (0 disables)")
    p.add_argument("--seed", type=int)
    p.add_argument("--alpha", type=float,
                   help="fix stable alpha (default: drawn from U(1,2))")
    p.add_argument("--beta", type=float,
                   help="fix stable beta (default: drawn from U(0,1))")
    p.add_argument("--prices", nargs="*",
                   help="price CSVs plotted as labeled squares")
    p.add_argument("--price-col", dest="price_col")
    p.add_argument("--plot", help="also render the scatter figure to this file")
    _add_threads(p)
    _add_io_flags(p)
    p.set_defaults(func=cmd_scatter)

    p = sub.add_parser("test-normal", help="Monte Carlo normality test")
    p.add_argument("--input", help="single-column CSV sample")
    p.add_argument("--prices", help="price CSV; test runs on its log returns")
    p.add_argument("--price-col", dest="price_col")
    p.add_argument("--embed", type=int,
                   help="delay-embedding depth (default: none)")
    p.add_argument("--reps", type=int, default=500,
                   help="null-cloud replicates")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.05,
                   help="significance level")
    _add_io_flags(p, single_row=True)
    p.set_defaults(func=cmd_test_normal)

    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if getattr(args, "embed", None) == 0:
        args.embed = None
    try:
        return args.func(args)
    except SlideStatsError as exc:
        print(f"slidestats {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
