"""Command-line interface: ``walkbound <command> [options]``.

Exit status is 0 when every check passes, 1 on a bound violation or a
failed solve, 2 on a usage or input error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import __version__, solver
from .bounds import audit
from .campaign import InstanceReport, Report, check_instance, run_campaign
from .errors import (
    CensoredSample,
    InvalidArgument,
    IoFailure,
    ParseError,
    SolveFailure,
    WalkboundError,
)
from .generate import FAMILIES, WEIGHTINGS, CampaignConfig, Instance, generate_instance
from .graph import MODES, CostFunction, WalkSpec, asymmetry, format_graph, parse_graph, parse_number
from .report import FORMATS, emit_report, encode_number, write_document
from .simulate import DEFAULT_GUARD, estimate_edge_visits, estimate_hitting, st_connectivity

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


# ---------------------------------------------------------------- input


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc


def _load(args):
    if args.graph is None:
        raise InvalidArgument("--graph is required")
    parsed = parse_graph(_read(args.graph))
    g = parsed.graph
    costs = parsed.costs
    if getattr(args, "costs", None) is not None:
        costs = _costs(args.costs, g)
    return parsed, costs


def _costs(spec: str, g) -> CostFunction:
    """``--costs`` is a file with one cost per line (edge order) or an inline
    comma-separated list; a single number applies to every edge."""
    text = _read(spec) if os.path.isfile(spec) else spec
    tokens = [t for line in text.splitlines() for t in line.split("#", 1)[0].replace(",", " ").split()]
    try:
        values = [parse_number(t) for t in tokens]
    except ValueError as exc:
        raise InvalidArgument(f"bad --costs value: {exc}") from None
    if len(values) == 1:
        values = values * g.m
    if len(values) != g.m:
        raise InvalidArgument(f"--costs gives {len(values)} values for {g.m} edges")
    if not all(isinstance(v, Fraction) for v in values):
        values = [float(v) for v in values]
    return CostFunction(g, values)


def _vertex(g, label, flag):
    if label is None:
        raise InvalidArgument(f"{flag} is required")
    return g.vertex(label)


# ---------------------------------------------------------------- output


def _table(args, title: str, columns: list, rows: list, meta: dict) -> str:
    fmt = args.format
    rows = [[encode_number(x) if not isinstance(x, (str, bool)) else x for x in r] for r in rows]
    meta = {k: (encode_number(v) if not isinstance(v, (str, bool, type(None))) else v) for k, v in meta.items()}
    if fmt == "json":
        doc = {"command": title, **meta, "rows": [dict(zip(columns, r)) for r in rows]}
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        w.writerows(rows)
        return buf.getvalue()
    lines = [f"{title}: " + "  ".join(f"{k}={'-' if v is None else v}" for k, v in meta.items())]
    cells = [columns] + [["-" if x is None else str(x) for x in r] for r in rows]
    widths = [max(len(c[i]) for c in cells) for i in range(len(columns))]
    for c in cells:
        lines.append("  ".join(x.rjust(wd) for x, wd in zip(c, widths)).rstrip())
    return "\n".join(lines) + "\n"


def _emit(args, text: str):
    write_document(text, args.out)


# ---------------------------------------------------------------- commands


def cmd_exact(args) -> int:
    parsed, costs = _load(args)
    g = parsed.graph
    a = _vertex(g, args.target, "--target")
    spec = WalkSpec(g, a, parsed.weights)
    with_costs = parsed.has_costs or args.costs is not None
    mode = spec.resolve_mode(args.mode, costs if with_costs else None)
    sources = [_vertex(g, args.source, "--source")] if args.source is not None else range(g.n)
    rows = []
    for x in sources:
        h = solver.hitting_time(spec, x, mode=mode)
        row = [g.label(x), h]
        if with_costs:
            row.append(solver.hitting_time(spec, x, costs=costs, mode=mode))
        rows.append(row)
    cols = ["vertex", "hitting_time"] + (["cost_hitting_time"] if with_costs else [])
    _emit(args, _table(args, "exact", cols, rows, {"target": g.label(a), "mode": mode}))
    return EXIT_OK


def cmd_bounds(args) -> int:
    parsed, costs = _load(args)
    g = parsed.graph
    a = _vertex(g, args.target, "--target") if args.target is not None else None
    pairs = None
    if args.source is not None:
        if a is None:
            raise InvalidArgument("--source needs --target")
        pairs = [(_vertex(g, args.source, "--source"), a)]
    rep = audit(g, parsed.weights, costs, target=a, pairs=pairs, mode=args.mode)
    if args.source is not None:
        src = pairs[0][0]
        rep.records = [r for r in rep.records if (r.source, r.target) == (src, a)]
    inst = InstanceReport(0, args.graph, "input", g.n, g.m, rep.mode, parsed.weights.is_constant(),
                          asymmetry(parsed.weights), -1 if a is None else a, rep.max_hitting,
                          rep.sharp, rep.unit_path, records=rep.records, checks=rep.checks)
    report = Report({"graph": args.graph, "target": args.target, "source": args.source, "mode": args.mode},
                    __version__, [inst])
    _emit(args, emit_report(report, args.format))
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_visits(args) -> int:
    parsed, _ = _load(args)
    g = parsed.graph
    a = _vertex(g, args.target, "--target")
    spec = WalkSpec(g, a, parsed.weights)
    mode = spec.resolve_mode(args.mode)
    if (args.vertex is None) == (args.edge is None):
        raise InvalidArgument("give exactly one of --vertex or --edge")
    if args.vertex is not None:
        x = g.vertex(args.vertex)
        counts = solver.vertex_visit_counts(spec, x, mode)
        what = {"vertex": g.label(x)}
    else:
        u, v = (g.vertex(t) for t in _pair(args.edge))
        counts = solver.edge_visit_counts(spec, (u, v), mode)
        what = {"edge": f"{g.label(u)}-{g.label(v)}"}
    rows = [[g.label(s), counts[s]] for s in range(g.n)]
    _emit(args, _table(args, "visits", ["start", "expected_visits"], rows,
                       {"target": g.label(a), **what, "mode": mode}))
    return EXIT_OK


def _pair(text: str):
    parts = text.replace(",", " ").replace("-", " ").split()
    if len(parts) != 2:
        raise InvalidArgument(f"--edge expects 'u,v', got {text!r}")
    return parts


def cmd_commute(args) -> int:
    parsed, _ = _load(args)
    g = parsed.graph
    u = _vertex(g, args.source, "--source")
    v = _vertex(g, args.target, "--target")
    w = parsed.weights
    mode = WalkSpec(g, v, w).resolve_mode(args.mode)
    c = solver.commute_time(g, w, u, v, mode)
    res = solver.effective_resistance(g, w, u, v, mode)
    total = solver.network_total_conductance(g, w)
    product = total * res
    ok = c == product if isinstance(c, Fraction) else abs(c - product) <= 1e-9 * max(1.0, abs(c))
    rows = [[g.label(u), g.label(v), c, res, total, product, ok]]
    _emit(args, _table(args, "commute", ["u", "v", "commute_time", "resistance", "total_conductance",
                                         "conductance_times_resistance", "identity_holds"], rows,
                       {"mode": mode}))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_simulate(args) -> int:
    parsed, costs = _load(args)
    g = parsed.graph
    a = _vertex(g, args.target, "--target")
    x = _vertex(g, args.source, "--source")
    spec = WalkSpec(g, a, parsed.weights)
    with_costs = parsed.has_costs or args.costs is not None
    if args.edge is not None:
        u, v = (g.vertex(t) for t in _pair(args.edge))
        est = estimate_edge_visits(spec, (u, v), x, args.walks, args.seed, args.guard, args.workers,
                                   allow_censored=True)
        quantity = f"visits to edge {g.label(u)}-{g.label(v)}"
    else:
        est = estimate_hitting(spec, costs if with_costs else None, x, args.walks, args.seed, args.guard,
                               args.workers, allow_censored=True)
        quantity = "cost hitting time" if with_costs else "hitting time"
    rows = [[g.label(x), g.label(a), est.mean, est.sd, est.half_width, est.count, est.censored]]
    _emit(args, _table(args, "simulate", ["source", "target", "mean", "sd", "half_width_95", "walks",
                                          "censored"], rows,
                       {"quantity": quantity, "seed": str(args.seed)}))
    if est.censored:
        raise CensoredSample(f"{est.censored} walk(s) reached the {args.guard}-step guard", est.censored)
    return EXIT_OK


def cmd_connect(args) -> int:
    parsed, _ = _load(args)
    g = parsed.graph
    s = _vertex(g, args.source, "--source")
    t = _vertex(g, args.target, "--target")
    verdict = st_connectivity(g, parsed.weights, s, t, args.epsilon, args.walk_bound, args.seed)
    rows = [[g.label(s), g.label(t), verdict.verdict, verdict.repetitions, verdict.walk_length, verdict.steps]]
    _emit(args, _table(args, "connect", ["source", "target", "verdict", "repetitions", "walk_length",
                                         "steps"], rows, {"epsilon": args.epsilon, "seed": str(args.seed)}))
    return EXIT_OK


def _config(args, **extra) -> CampaignConfig:
    n_min = args.n if args.n is not None else args.n_min
    n_max = args.n if args.n is not None else args.n_max
    return CampaignConfig(
        family=args.family, count=args.count, n_min=n_min, n_max=n_max, m=args.m,
        extra_max=args.extra_max, weighting=args.weighting, tau_max=Fraction(args.tau_max),
        cost_max=Fraction(args.cost_max), seed=args.seed, mode=args.mode, **extra,
    )


def cmd_generate(args) -> int:
    inst = generate_instance(_config(args), args.index)
    g = inst.graph
    header = (f"# {inst.name}: n={g.n} m={g.m} target={g.label(inst.target)} seed={args.seed}\n"
              f"# columns: u v weight cost\n")
    _emit(args, header + format_graph(g, inst.weights, inst.costs))
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.graph is not None:
        parsed, costs = _load(args)
        g = parsed.graph
        a = _vertex(g, args.target, "--target") if args.target is not None else 0
        inst = Instance(0, "input", g, parsed.weights, costs, a, args.graph)
        config = CampaignConfig(mode=args.mode, seed=args.seed, simulate_walks=args.walks or 0)
        result = check_instance(inst, config)
        report = Report({"graph": args.graph, "target": args.target, **config.as_dict()}, __version__, [result])
    else:
        config = _config(args, commute_pairs=args.commute_pairs, simulate_walks=args.walks or 0)
        report = run_campaign(config, workers=args.workers)
    _emit(args, emit_report(report, args.format))
    return EXIT_OK if report.passed else EXIT_FAIL


# ---------------------------------------------------------------- parser


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _epsilon(text: str) -> float:
    v = float(text)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError("epsilon must lie in (0, 1)")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="walkbound", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"walkbound {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", metavar="PATH", help="edge-list file ('-' for stdin)")
    common.add_argument("--mode", choices=MODES, help="arithmetic mode (default: rational for exact input, n <= 200)")
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")

    def add(name, helptext, func, *flags):
        p = sub.add_parser(name, parents=[common], help=helptext, description=helptext)
        for flag in flags:
            flag(p)
        p.set_defaults(func=func)
        return p

    target = lambda p: p.add_argument("--target", metavar="A", help="absorbing vertex label")  # noqa: E731
    source = lambda p: p.add_argument("--source", metavar="X", help="start vertex label")  # noqa: E731
    costs = lambda p: p.add_argument("--costs", metavar="PATH|inline",  # noqa: E731
                                     help="edge costs: a file, a comma list in edge order, or one number")
    seed = lambda p: p.add_argument("--seed", type=_seed, default=0, metavar="U64")  # noqa: E731
    workers = lambda p: p.add_argument("--workers", type=_positive,  # noqa: E731
                                       help="worker count (default: WALKBOUND_THREADS or all CPUs)")

    def generator(p):
        p.add_argument("--family", choices=FAMILIES, default="random-connected")
        p.add_argument("--n", type=_positive, help="fixed vertex count")
        p.add_argument("--n-min", type=_positive, default=2)
        p.add_argument("--n-max", type=_positive, default=12)
        p.add_argument("--m", type=int, help="edge count (path length for the path family)")
        p.add_argument("--extra-max", type=int, default=12, help="most extra edges beyond a spanning tree")
        p.add_argument("--weighting", choices=WEIGHTINGS, default="mixed")
        p.add_argument("--tau-max", default="3", help="weight ceiling (exact number)")
        p.add_argument("--cost-max", default="5", help="cost ceiling (exact number)")

    add("exact", "exact (cost) hitting times to a target", cmd_exact, target, source, costs)
    add("bounds", "exact hitting times against every applicable bound", cmd_bounds, target, source, costs)
    p = add("visits", "expected visits to a vertex or traversals of an edge", cmd_visits, target)
    p.add_argument("--vertex", metavar="X")
    p.add_argument("--edge", metavar="U,V")
    add("commute", "commute time and the effective-resistance identity", cmd_commute, source, target)
    p = add("simulate", "Monte Carlo estimate of a hitting time", cmd_simulate, target, source, costs, seed,
            workers)
    p.add_argument("--walks", type=_positive, default=100_000, metavar="N")
    p.add_argument("--guard", type=_positive, default=DEFAULT_GUARD, help="step cap per walk")
    p.add_argument("--edge", metavar="U,V", help="estimate traversals of this edge instead")
    p = add("connect", "randomized s-t connectivity test", cmd_connect, source, target, seed)
    p.add_argument("--epsilon", type=_epsilon, default=0.01, metavar="E")
    p.add_argument("--walk-bound", type=_positive, metavar="N", help="hitting-time bound N (default: m^2 or F)")
    p = add("generate", "print one seeded random instance as an edge list", cmd_generate, seed, generator)
    p.add_argument("--count", type=int, default=1, help=argparse.SUPPRESS)
    p.add_argument("--index", type=int, default=0, help="instance number within the seeded stream")
    p = add("verify", "run the verification campaign (or every check on --graph)", cmd_verify,
            target, costs, seed, workers, generator)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--commute-pairs", type=int, default=20)
    p.add_argument("--walks", type=int, default=0, metavar="N", help="Monte Carlo spot checks per instance")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SolveFailure, CensoredSample) as exc:
        print(f"walkbound: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ParseError, IoFailure, WalkboundError, ValueError) as exc:
        print(f"walkbound: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
