"""Closed-form upper bounds on hitting times and an auditor that checks
exact solves against them.

The two polynomials used throughout are

    P(t, m) = 1 + 2 * (t + t**2 + ... + t**(m-1))
    F(t, m) = P(t, 1) + P(t, 2) + ... + P(t, m)

Both are evaluated by Horner's scheme on their coefficient form, which is
exact for Fraction arguments and has no trouble at ``t = 1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .errors import InvalidArgument, NotATree, Unreachable
from .graph import (
    FLOAT_RTOL,
    INF,
    RATIONAL,
    CostFunction,
    EdgeWeights,
    Graph,
    WalkSpec,
    asymmetry,
    bfs_distances,
    edge_distances,
    to_mode,
    tree_structure,
)
from . import solver

#: Audits evaluate every ordered pair up to this many vertices.
ALL_PAIRS_MAX_N = 64


def _check_t(t, lo=0):
    if not t >= lo:
        raise InvalidArgument(f"t must be >= {lo}, got {t}")


def _check_m(m, lo):
    if int(m) != m or m < lo:
        raise InvalidArgument(f"m must be an integer >= {lo}, got {m}")
    return int(m)


def poly_P(t, m):
    """``1 + 2 * sum(t**k for k in 1..m-1)``; requires ``t >= 0`` and ``m >= 1``."""
    _check_t(t)
    m = _check_m(m, 1)
    s = t * 0
    for _ in range(m - 1):
        s = t * (s + 1)
    return 2 * s + 1


def poly_F(t, m):
    """``sum(c_k * t**k for k < m)`` with ``c_0 = m`` and ``c_k = 2(m - k)``."""
    _check_t(t)
    m = _check_m(m, 0)
    acc = t * 0
    for k in range(m - 1, -1, -1):
        acc = acc * t + (m if k == 0 else 2 * (m - k))
    return acc


def bound_simple_distance(m, d):
    """``m**2 - (m - d)**2`` for a simple walk at distance ``d`` from the target."""
    m = _check_m(m, 1)
    if int(d) != d or not 1 <= d <= m:
        raise InvalidArgument(f"need 1 <= d <= m, got d={d}, m={m}")
    return Fraction(m * m - (m - int(d)) ** 2)


def bound_tree_tail(tail_a, tail_x):
    """``tail_a**2 - tail_x**2`` for simple walks on trees."""
    if not 0 <= tail_x <= tail_a:
        raise InvalidArgument(f"need 0 <= tail_x <= tail_a, got {tail_x}, {tail_a}")
    return Fraction(tail_a * tail_a - tail_x * tail_x)


def bound_weighted_F(tau, m):
    """``F(tau, m)``, the bound on the maximum hitting time at asymmetry ``tau``."""
    _check_t(tau, 1)
    return poly_F(tau, m)


def bound_coarse(tau, m):
    """``m**2 * tau**(m - 1)``, cruder than :func:`bound_weighted_F`."""
    _check_t(tau, 1)
    m = _check_m(m, 0)
    if m == 0:
        return tau * 0
    return m * m * tau ** (m - 1)


class CostBound(NamedTuple):
    fine: object
    coarse: object


def _edge_dists(g: Graph, a: int):
    dists = edge_distances(g, a, bfs_distances(g, a))
    for e, d in enumerate(dists):
        if d == INF:
            raise Unreachable(f"edge {g.edges[e]} is not connected to vertex {a}")
    return dists


def bound_cost_simple(g: Graph, a: int, costs: CostFunction) -> CostBound:
    """``sum((2 d_a(e) + 1) f(e))`` and the coarser ``m**2 * max(f)``."""
    dists = _edge_dists(g, a)
    zero = costs.values[0] * 0 if g.m else Fraction(0)
    fine = sum(((2 * d + 1) * f for d, f in zip(dists, costs.values)), zero)
    coarse = g.m * g.m * max(costs.values, default=zero)
    return CostBound(fine, coarse)


def bound_main(g: Graph, a: int, weights: EdgeWeights | None, costs: CostFunction):
    """``sum(P(tau, d_a(e) + 1) * f(e))`` with ``tau`` the asymmetry of ``weights``."""
    if weights is None:
        weights = EdgeWeights.constant(g, 1)
    tau = asymmetry(weights)
    dists = _edge_dists(g, a)
    cache = {}
    total = costs.values[0] * 0 if g.m else Fraction(0)
    for d, f in zip(dists, costs.values):
        if d not in cache:
            cache[d] = poly_P(tau, d + 1)
        total += cache[d] * f
    return total


def directional_asymmetry(spec: WalkSpec):
    """Largest away-over-towards probability ratio at any non-absorbing tree vertex.

    At a vertex ``v`` with parent ``u`` (towards ``a``) and child ``c``, the
    ratio is ``w(v, c) / w(v, u)``.  Never below 1.
    """
    g, a = spec.graph, spec.absorbing
    ts = tree_structure(g, a)
    if not ts.is_tree:
        raise NotATree("directional asymmetry is defined on trees")
    w = spec.weights
    best = Fraction(1) if w.exact else 1.0
    for v in range(g.n):
        if v == a:
            continue
        toward = w.values[g.edge_id(v, ts.parent[v])]
        for c, e in zip(g.adjacency[v], g.incident[v]):
            if c != ts.parent[v]:
                best = max(best, w.values[e] / toward)
    return best


# ---------------------------------------------------------------- audit

#: Bound kinds compared against plain hitting times.
LENGTH_BOUNDS = ("distance", "tree-tail", "weighted-F", "tree-directional", "coarse")
#: Bound kinds compared against cost hitting times.
COST_BOUNDS = ("cost-simple", "cost-coarse", "main")


@dataclass(frozen=True)
class BoundRecord:
    source: int
    target: int
    kind: str
    exact: object
    bound: object
    slack: object
    passed: bool


@dataclass(frozen=True)
class Check:
    """A named identity or consistency check tied to one target vertex."""

    name: str
    target: int
    passed: bool
    detail: str = ""


@dataclass
class BoundReport:
    graph: Graph
    mode: str
    records: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    max_hitting: object = None
    all_pairs: bool = False
    sharp: bool | None = None
    unit_path: bool = False

    @property
    def violations(self) -> list:
        return [r for r in self.records if not r.passed]

    @property
    def failed_checks(self) -> list:
        return [c for c in self.checks if not c.passed]

    @property
    def passed(self) -> bool:
        return not self.violations and not self.failed_checks

    def max_slack(self):
        return max((r.slack for r in self.records), default=None)

    def min_slack(self):
        return min((r.slack for r in self.records), default=None)


def passes(exact, bound, mode: str) -> bool:
    """Zero tolerance in rational mode, ``1e-9 * bound`` in floating mode."""
    slack = bound - exact
    if mode == RATIONAL:
        return slack >= 0
    return slack >= -FLOAT_RTOL * abs(float(bound))


def audit(graph: Graph, weights: EdgeWeights | None = None, costs: CostFunction | None = None,
          target: int | None = None, pairs=None, mode: str | None = None) -> BoundReport:
    """Exact hitting times against every applicable bound.

    Every ordered pair is evaluated when the graph has at most
    :data:`ALL_PAIRS_MAX_N` vertices; otherwise only ``target`` (all sources)
    or the explicit ``(source, target)`` pairs.  A disconnected graph is
    audited on the component of ``target``.
    """
    if weights is None:
        weights = EdgeWeights.constant(graph, 1)
    if costs is None:
        costs = CostFunction.constant(graph, 1)
    vmap = list(range(graph.n))
    if not graph.is_connected():
        if target is None:
            raise Unreachable("audit of a disconnected graph needs a target")
        vmap = graph.component(target)
        sub, emap = graph.subgraph(vmap)
        weights = EdgeWeights(sub, [weights[e] for e in emap])
        costs = CostFunction(sub, [costs[e] for e in emap])
        graph = sub
        target = vmap.index(target)
        if pairs is not None:
            pairs = [(vmap.index(s), vmap.index(t)) for s, t in pairs]
    g = graph
    probe = WalkSpec(g, 0 if target is None else target, weights)
    mode = probe.resolve_mode(mode, costs)

    if g.n <= ALL_PAIRS_MAX_N:
        wanted = {t: None for t in range(g.n)}
    elif pairs is not None:
        wanted = {}
        for s, t in pairs:
            wanted.setdefault(t, set()).add(s)
    elif target is not None:
        wanted = {target: None}
    else:
        raise InvalidArgument("large graphs need a target or explicit pairs")

    report = BoundReport(g, mode, all_pairs=g.n <= ALL_PAIRS_MAX_N, unit_path=g.is_path() and weights.is_constant())
    simple = weights.is_constant()
    m = g.m
    tau = to_mode(asymmetry(weights), mode)
    F_tau = bound_weighted_F(tau, m)
    coarse = bound_coarse(tau, m)
    is_tree = g.m == g.n - 1
    max_h = None
    for a in sorted(wanted):
        spec = WalkSpec(g, a, weights)
        sources = wanted[a]
        sources = range(g.n) if sources is None else sorted(sources)
        system = solver.system(spec, mode, costs=costs)
        h = system.hitting()
        hf = system.cost_hitting(costs)
        dist = bfs_distances(g, a)
        fmode_costs = costs.as_mode(mode)
        main = bound_main(g, a, weights.as_mode(mode), fmode_costs)
        per_target = {"weighted-F": F_tau, "coarse": coarse, "main": main}
        if simple:
            fine, crude = bound_cost_simple(g, a, fmode_costs)
            per_target["cost-simple"] = fine
            per_target["cost-coarse"] = crude
            report.checks.append(Check("cost-chain", vmap[a], passes(fine, crude, mode),
                                       f"{fine} <= {crude}"))
        ts = tree_structure(g, a) if is_tree else None
        if ts is not None:
            tilde = to_mode(directional_asymmetry(spec), mode)
            per_target["tree-directional"] = bound_weighted_F(tilde, m)
            if simple:
                fast = solver.tree_hitting_times(spec, mode)
                report.checks.append(Check("tree-fast-path", vmap[a], _same(fast.values, h.values, mode)))
                inc_ok = all(
                    _close(h[x] - h[ts.parent[x]], 2 * ts.tails[x] + 1, mode) for x in ts.order[1:]
                )
                report.checks.append(Check("tail-increments", vmap[a], inc_ok))
        for x in sources:
            if x == a:
                continue
            max_h = h[x] if max_h is None or h[x] > max_h else max_h
            bounds = dict(per_target)
            if simple:
                bounds["distance"] = bound_simple_distance(m, dist[x])
                if ts is not None:
                    bounds["tree-tail"] = bound_tree_tail(ts.branch_tail(x), ts.tails[x])
            for kind in LENGTH_BOUNDS + COST_BOUNDS:
                if kind not in bounds:
                    continue
                exact = hf[x] if kind in COST_BOUNDS else h[x]
                b = to_mode(bounds[kind], mode)
                report.records.append(
                    BoundRecord(vmap[x], vmap[a], kind, exact, b, b - exact, passes(exact, b, mode))
                )
    report.records.sort(key=lambda r: (r.source, r.target, r.kind))
    report.max_hitting = max_h if max_h is not None else to_mode(0, mode)
    if report.all_pairs:
        report.sharp = _close(report.max_hitting, m * m, mode)
    return report


def _close(x, y, mode) -> bool:
    if mode == RATIONAL:
        return x == y
    return abs(x - y) <= FLOAT_RTOL * max(1.0, abs(y))


def _same(xs, ys, mode) -> bool:
    return all(_close(x, y, mode) for x, y in zip(xs, ys))
