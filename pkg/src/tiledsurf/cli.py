"""Command-line interface.

Exit codes: 0 success, 1 a verification criterion failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import exact, mc, verify
from .holonomy import holonomy_report
from .perm import PermutationError, max_label, parse_cycles
from .surface import SurfaceError, TiledSurface, topology


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {value}")
    return value


def _k_value(text: str) -> int:
    value = _positive(text)
    if value < 2:
        raise argparse.ArgumentTypeError("k must be >= 2")
    return value


def _shared(p: argparse.ArgumentParser, fmt_default: str = "json"):
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--out", help="write output to this file instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default=fmt_default)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tiledsurf", description="Random square- and polygon-tiled surfaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="topology and holonomy of one surface")
    p.add_argument("--k", type=_k_value, default=None)
    p.add_argument("--n", type=_positive, default=None, help="number of polygons (needed if labels are omitted)")
    p.add_argument("--gluing", action="append", default=None, help="cycle string, repeat k times")
    p.add_argument("--sigma", help="horizontal gluing (k = 2)")
    p.add_argument("--tau", help="vertical gluing (k = 2)")
    p.add_argument("--radius", type=_positive, default=None, help="run the saddle-connection tracer up to this radius")
    _shared(p)

    p = sub.add_parser("exact-dist", help="exact law of the vertex count")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--k", type=_k_value, default=2)
    p.add_argument("--method", choices=("genfun", "brute"), default="genfun")
    p.add_argument("--budget", type=_positive, default=None)
    _shared(p, "csv")

    p = sub.add_parser("tv", help="exact total variation distance to uniform on A_n")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--k", type=_k_value, default=2)
    _shared(p)

    p = sub.add_parser("theory", help="closed-form predictions")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--k", type=_k_value, default=2)
    _shared(p)

    p = sub.add_parser("sample", help="run a Monte Carlo experiment")
    p.add_argument("--experiment", choices=sorted(mc.EXPERIMENTS), default="genus")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--k", type=_k_value, default=2)
    p.add_argument("--samples", type=_positive, default=10_000)
    p.add_argument("--shard-size", type=_positive, default=mc.DEFAULT_SHARD)
    p.add_argument("--budget", type=_positive, default=None)
    _shared(p)

    p = sub.add_parser("pd", help="Poisson-Dirichlet comparison")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--samples", type=_positive, default=10_000)
    p.add_argument("--shard-size", type=_positive, default=mc.DEFAULT_SHARD)
    _shared(p)

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("--level", choices=("fast", "full"), default="fast")
    p.add_argument("--only", type=int, action="append", default=None, help="run only this criterion number")
    _shared(p)
    return parser


def _surface_from_args(args) -> TiledSurface:
    if args.gluing is not None and (args.sigma is not None or args.tau is not None):
        raise UsageError("use either --gluing or --sigma/--tau, not both")
    if args.gluing is None:
        if args.sigma is None or args.tau is None:
            raise UsageError("give k cycle strings with --gluing, or --sigma and --tau")
        texts = [args.sigma, args.tau]
    else:
        texts = list(args.gluing)
    k = args.k if args.k is not None else len(texts)
    if len(texts) != k:
        raise UsageError(f"--k {k} needs {k} gluings, got {len(texts)}")
    n = args.n if args.n is not None else max_label(texts)
    if n < 1:
        raise UsageError("--n is required when the gluings name no labels")
    perms = []
    for text in texts:
        try:
            perms.append(parse_cycles(text, n))
        except PermutationError as exc:
            raise UsageError(f"cannot parse cycle string {text!r}: {exc}") from None
    try:
        return TiledSurface(k, tuple(perms))
    except SurfaceError as exc:
        raise UsageError(str(exc)) from None


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _flat_rows(data: dict, prefix: str = ""):
    for key, value in data.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            yield from _flat_rows(value, name + ".")
        elif isinstance(value, list):
            yield [name, json.dumps(value)]
        else:
            yield [name, value]


def _render(data: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(data, indent=2) + "\n"
    return _csv([["key", "value"], *_flat_rows(data)])


def cmd_classify(args) -> tuple[str, int]:
    S = _surface_from_args(args)
    data = {"surface": S.to_dict(), "topology": topology(S).to_dict()}
    if S.k == 2:
        data["holonomy"] = holonomy_report(S, args.radius).to_dict()
    return _render(data, args.format), 0


def cmd_exact_dist(args) -> tuple[str, int]:
    if args.method == "brute":
        budget = args.budget if args.budget is not None else exact.budget_from_env()
        try:
            dist = exact.brute_force_dist(args.n, args.k, budget)
        except exact.BudgetExceeded as exc:
            raise UsageError(str(exc)) from None
    else:
        dist = exact.exact_dist(args.n, args.k)
    if args.format == "csv":
        return dist.to_csv(), 0
    data = {"n": args.n, "k": args.k, **dist.to_dict(), "mean": float(dist.mean()), "variance": float(dist.variance())}
    return json.dumps(data, indent=2) + "\n", 0


def cmd_tv(args) -> tuple[str, int]:
    if args.n > 14:
        raise UsageError("tv needs full character tables; use n <= 14")
    tv = exact.tv_distance(args.n, args.k)
    data = {"n": args.n, "k": args.k, "tv": f"{tv.numerator}/{tv.denominator}", "tv_float": float(tv)}
    if args.format == "csv":
        return _csv([["n", "k", "numerator", "denominator", "float"], [args.n, args.k, tv.numerator, tv.denominator, repr(float(tv))]]), 0
    return json.dumps(data, indent=2) + "\n", 0


def cmd_theory(args) -> tuple[str, int]:
    return _render(exact.theory(args.n, args.k).to_dict(), args.format), 0


def _report_output(report: mc.EstimateReport, fmt: str) -> str:
    return report.to_csv() if fmt == "csv" else report.to_json(indent=2) + "\n"


def cmd_sample(args) -> tuple[str, int]:
    options = {}
    if args.budget is not None:
        options["budget"] = args.budget
    cfg = mc.ExperimentConfig(
        n=args.n, k=args.k, samples=args.samples, seed=args.seed, workers=args.workers,
        shard_size=args.shard_size, options=options,
    )
    try:
        report = mc.EXPERIMENTS[args.experiment](cfg)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return _report_output(report, args.format), 0


def cmd_pd(args) -> tuple[str, int]:
    cfg = mc.ExperimentConfig(
        n=args.n, k=2, samples=args.samples, seed=args.seed, workers=args.workers, shard_size=args.shard_size
    )
    return _report_output(mc.run_pd_comparison(cfg), args.format), 0


def cmd_verify(args) -> tuple[str, int]:
    def echo(res):
        print(res.line(), file=sys.stderr, flush=True)

    results = verify.run(args.level, seed=args.seed, workers=args.workers, only=args.only, echo=echo)
    if args.format == "csv":
        text = _csv([["criterion", "title", "passed"], *[[r.number, r.title, r.passed] for r in results]])
    else:
        text = verify.results_json(results, args.level, args.seed) + "\n"
    if args.out:
        print(verify.summary(results))
    return text, 0 if all(r.passed for r in results) else 1


COMMANDS = {
    "classify": cmd_classify,
    "exact-dist": cmd_exact_dist,
    "tv": cmd_tv,
    "theory": cmd_theory,
    "sample": cmd_sample,
    "pd": cmd_pd,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, code = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"tiledsurf {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
