"""End-to-end verification campaign over generated instances."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__, solver
from .bounds import Check, audit
from .errors import WalkboundError
from .generate import CampaignConfig, Instance, generate_instance, instance_count
from .graph import FLOAT, FLOAT_RTOL, RATIONAL, WalkSpec, asymmetry, bfs_distances, to_mode
from .simulate import estimate_hitting, worker_count


@dataclass
class InstanceReport:
    index: int
    name: str
    family: str
    n: int
    m: int
    mode: str
    simple: bool
    tau: object
    target: int
    max_hitting: object = None
    sharp: bool | None = None
    unit_path: bool = False
    #: Largest relative residual of the floating solves; ``None`` in rational mode.
    residual: float | None = None
    records: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    simulations: list = field(default_factory=list)
    error: str | None = None

    @property
    def violations(self) -> list:
        return [r for r in self.records if not r.passed]

    @property
    def failed_checks(self) -> list:
        return [c for c in self.checks if not c.passed]

    @property
    def passed(self) -> bool:
        return self.error is None and not self.violations and not self.failed_checks


@dataclass
class Report:
    config: dict
    version: str
    instances: list

    @property
    def passed(self) -> bool:
        return all(i.passed for i in self.instances)

    def summary(self) -> dict:
        records = [r for i in self.instances for r in i.records]
        slacks = [r.slack for r in records]
        return {
            "instances": len(self.instances),
            "records": len(records),
            "violations": sum(len(i.violations) for i in self.instances),
            "checks": sum(len(i.checks) for i in self.instances),
            "failed_checks": sum(len(i.failed_checks) for i in self.instances),
            "errors": sum(i.error is not None for i in self.instances),
            "sharp_instances": sum(bool(i.sharp) for i in self.instances),
            "unit_paths": sum(i.unit_path for i in self.instances),
            "min_slack": min(slacks) if slacks else None,
            "max_slack": max(slacks) if slacks else None,
            "passed": self.passed,
        }


def _close(x, y, mode, rtol=FLOAT_RTOL) -> bool:
    if mode == RATIONAL:
        return x == y
    return abs(x - y) <= rtol * max(1.0, abs(float(y)))


def check_instance(inst: Instance, config: CampaignConfig) -> InstanceReport:
    """Audit one instance and run every applicable cross-check."""
    g, w, f, a = inst.graph, inst.weights, inst.costs, inst.target
    out = InstanceReport(inst.index, inst.name, inst.family, g.n, g.m, "", w.is_constant(),
                         asymmetry(w), a)
    try:
        _run_checks(inst, config, out)
    except WalkboundError as exc:
        out.error = f"{type(exc).__name__}: {exc}"
    return out


def _run_checks(inst, config, out):
    g, w, f, a = inst.graph, inst.weights, inst.costs, inst.target
    rep = audit(g, w, f, target=a, mode=config.mode)
    mode = out.mode = rep.mode
    out.records = rep.records
    out.checks = checks = list(rep.checks)
    out.max_hitting, out.sharp, out.unit_path = rep.max_hitting, rep.sharp, rep.unit_path
    simple = w.is_constant()
    spec = WalkSpec(g, a, w)
    system = solver.system(spec, mode, costs=f)
    h = system.hitting()
    hf = system.cost_hitting(f)
    if mode == FLOAT:
        out.residual = max(h.residual, hf.residual)
    rng = np.random.default_rng([config.seed, inst.index, 1])

    if rep.sharp is not None:
        checks.append(Check("sharpness", a, rep.sharp == rep.unit_path,
                            f"sharp={rep.sharp} unit_path={rep.unit_path}"))

    if inst.expected is not None:
        ok = all(_close(h[v], to_mode(x, mode), mode) for v, x in enumerate(inst.expected))
        checks.append(Check("fixture-values", a, ok))

    if simple:
        targets = range(g.n) if rep.all_pairs else [a]
        for t in targets:
            ht = solver.system(WalkSpec(g, t, w), mode).hitting()
            total = sum((ht[z] for z in g.neighbors(t)), to_mode(0, mode))
            checks.append(Check("neighbor-sum", t, _close(total, 2 * g.m - g.degree(t), mode),
                                f"{total} vs {2 * g.m - g.degree(t)}"))

    for e in range(g.m):
        visits = system.edge_visits(e, check=False)
        ref = system.cost_hitting(_indicator(g, e))
        checks.append(Check("edge-visits", a, all(_close(x, y, mode) for x, y in zip(visits, ref)),
                            f"edge {e}"))

    if g.n >= 2:
        is_tree = g.m == g.n - 1
        F = solver.network_total_conductance(g, w)
        for _ in range(config.commute_pairs):
            u, v = (int(x) for x in rng.choice(g.n, size=2, replace=False))
            c = solver.commute_time(g, w, u, v, mode)
            res = solver.effective_resistance(g, w, u, v, mode)
            checks.append(Check("electric-identity", v, _close(c, F * res, mode), f"pair ({u}, {v})"))
            if mode == RATIONAL:
                cf = solver.commute_time(g, w, u, v, FLOAT)
                rf = solver.effective_resistance(g, w, u, v, FLOAT)
                checks.append(Check("electric-identity-float", v,
                                    abs(cf - float(F) * rf) <= FLOAT_RTOL * abs(cf), f"pair ({u}, {v})"))
            if is_tree and simple:
                d = bfs_distances(g, u)[v]
                checks.append(Check("tree-commute", v, _close(c, 2 * g.m * d, mode), f"pair ({u}, {v})"))

        if is_tree and simple:
            for x in range(g.n):
                if x == a:
                    continue
                fast = solver.tree_visit_counts(spec, x, mode)
                dense = system.vertex_visits(x)
                checks.append(Check("tree-visits", a, all(_close(p, q, mode) for p, q in zip(fast, dense)),
                                    f"x={x}"))

    if simple:
        for x in g.neighbors(a):
            e = g.edge_id(a, x)
            cut = g.without_edge(e)
            if not cut.is_connected():
                continue
            h_cut = solver.hitting_times(WalkSpec(cut, a), mode)
            checks.append(Check("edge-removal", a,
                                all(q >= p or _close(p, q, mode) for p, q in zip(h, h_cut)),
                                f"removed ({a}, {x})"))

    if g.n <= config.value_iteration_max_n:
        vi = solver.value_iteration(spec)
        ok = all(abs(x - float(y)) <= 1e-10 * max(1.0, abs(float(y))) for x, y in zip(vi, h))
        checks.append(Check("value-iteration", a, ok))

    if config.simulate_walks > 0 and g.n >= 2:
        src = max(range(g.n), key=lambda v: h[v])
        est = estimate_hitting(spec, None, src, config.simulate_walks, seed=config.seed * 1_000_003 + inst.index,
                               workers=1, allow_censored=True)
        out.simulations.append({
            "source": src, "target": a, "exact": h[src], "mean": est.mean,
            "half_width": est.half_width, "censored": est.censored,
            "within_3hw": abs(est.mean - float(h[src])) <= 3 * est.half_width,
        })


def _indicator(g, e):
    from .graph import CostFunction
    return CostFunction.indicator(g, e)


def _work(args):
    config, index = args
    return check_instance(generate_instance(config, index), config)


def run_campaign(config: CampaignConfig, workers: int | None = None) -> Report:
    """Generate every instance of ``config``, check it, and collect a report.

    Instances are independent; with several workers they run in separate
    processes.  The report is ordered by instance index either way.
    """
    count = instance_count(config)
    jobs = [(config, i) for i in range(count)]
    workers = min(worker_count(workers), max(count, 1))
    if workers == 1:
        results = [_work(j) for j in jobs]
    else:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_work, jobs, chunksize=max(1, count // (4 * workers))))
    results.sort(key=lambda r: r.index)
    return Report(config.as_dict(), __version__, results)
