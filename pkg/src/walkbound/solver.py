"""Absorbing-walk linear systems: hitting times, cost hitting times, visit
counts, hit-before probabilities and electric-network quantities.

All hitting-type quantities for a walk absorbed at ``a`` solve one matrix

    L[x, y] = delta(x, y) - (x != a) * p_xy

against different right-hand sides, so the factorization is built once per
(:class:`~walkbound.graph.WalkSpec`, mode) and cached.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import InvalidArgument, NotATree, NotSimpleWalk, SolveFailure, Unreachable
from .graph import (
    FLOAT,
    FLOAT_RTOL,
    RATIONAL,
    RATIONAL_MAX_N,
    CostFunction,
    EdgeWeights,
    Graph,
    WalkSpec,
    to_mode,
    tree_structure,
)
from .linalg import FloatLU, RationalLU, gauss_seidel

KINDS = ("hitting", "cost-hitting", "vertex-visits", "edge-visits", "probability", "voltage")

#: Above this size floating solves switch from dense LU to Gauss-Seidel.
DENSE_MAX_N = 3000


@dataclass(frozen=True)
class SolveResult:
    """Per-vertex solution vector tagged with its kind and arithmetic mode.

    ``residual`` is the relative residual of a floating solve and ``None``
    in rational mode, where solves are exact.
    """

    values: tuple
    kind: str
    mode: str
    residual: float | None = None

    def __getitem__(self, v):
        return self.values[v]

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def as_array(self) -> np.ndarray:
        return np.array([float(v) for v in self.values])

    def max(self):
        return max(self.values)


class AbsorbingSystem:
    """Factorized ``L`` for one walk spec in one arithmetic mode."""

    def __init__(self, spec: WalkSpec, mode: str, method: str = "auto"):
        g, a = spec.graph, spec.absorbing
        if not g.is_connected():
            stray = next(v for v in range(g.n) if not g.same_component(v, a))
            raise Unreachable(f"vertex {stray} cannot reach absorbing vertex {a}")
        if method == "auto":
            method = "exact" if mode == RATIONAL else ("lu" if g.n <= DENSE_MAX_N else "gauss-seidel")
        if method not in ("exact", "lu", "gauss-seidel"):
            raise InvalidArgument(f"unknown solve method {method!r}")
        if (method == "exact") != (mode == RATIONAL):
            raise InvalidArgument(f"method {method!r} does not match mode {mode!r}")
        self.spec = spec
        self.mode = mode
        self.method = method
        self.rows = spec.rows(mode)
        self._factor = None

    @property
    def n(self):
        return self.spec.graph.n

    def _factorization(self):
        if self._factor is None:
            if self.method == "exact":
                sparse = []
                for x, row in enumerate(self.rows):
                    r = {x: Fraction(1)}
                    for y, p, _ in row:
                        r[y] = r.get(y, Fraction(0)) - p
                    sparse.append(r)
                self._factor = RationalLU(sparse)
            elif self.method == "lu":
                self._factor = FloatLU(self.matrix())
            else:
                self._factor = "gauss-seidel"
        return self._factor

    def matrix(self) -> np.ndarray:
        """Dense floating copy of ``L`` (for inspection and residual checks)."""
        mat = np.eye(self.n)
        for x, row in enumerate(self.rows):
            for y, p, _ in row:
                mat[x, y] -= float(p)
        return mat

    def solve(self, rhs, kind: str) -> SolveResult:
        if kind not in KINDS:
            raise InvalidArgument(f"unknown result kind {kind!r}")
        rhs = list(rhs)
        rhs[self.spec.absorbing] = 0
        factor = self._factorization()
        if self.method == "exact":
            return SolveResult(tuple(factor.solve(rhs)), kind, RATIONAL)
        b = np.array([float(v) for v in rhs])
        if self.method == "lu":
            h = factor.solve(b)
        else:
            h = gauss_seidel(self.rows, b, {self.spec.absorbing})
        residual = self.residual(h, b)
        if not residual <= FLOAT_RTOL:
            raise SolveFailure(f"relative residual {residual:.3g} exceeds {FLOAT_RTOL}")
        return SolveResult(tuple(float(v) for v in h), kind, FLOAT, residual)

    def residual(self, h, b) -> float:
        r = np.array(b, dtype=float)
        for x, row in enumerate(self.rows):
            acc = h[x]
            for y, p, _ in row:
                acc -= p * h[y]
            r[x] -= acc
        a = self.spec.absorbing
        r[a] = b[a] - h[a]
        scale = float(np.max(np.abs(b))) if len(b) else 0.0
        return float(np.max(np.abs(r))) / (scale if scale > 0 else 1.0)

    # right-hand sides --------------------------------------------------

    def hitting(self) -> SolveResult:
        one = to_mode(1, self.mode)
        return self.solve([one] * self.n, "hitting")

    def cost_rhs(self, costs: CostFunction) -> list:
        if costs.graph is not self.spec.graph:
            raise InvalidArgument("costs belong to a different graph")
        vals = [to_mode(c, self.mode) for c in costs.values]
        zero = to_mode(0, self.mode)
        rhs = []
        for row in self.rows:
            acc = zero
            for _, p, e in row:
                acc += p * vals[e]
            rhs.append(acc)
        return rhs

    def cost_hitting(self, costs: CostFunction) -> SolveResult:
        return self.solve(self.cost_rhs(costs), "cost-hitting")

    def vertex_visits(self, x: int) -> SolveResult:
        if x == self.spec.absorbing:
            raise InvalidArgument("visit counts are defined for x != a")
        rhs = [to_mode(0, self.mode)] * self.n
        rhs[x] = to_mode(1, self.mode)
        return self.solve(rhs, "vertex-visits")

    def edge_visits(self, e: int, check: bool = True) -> SolveResult:
        g, a = self.spec.graph, self.spec.absorbing
        x, z = g.edges[e]
        zero = to_mode(0, self.mode)
        total = [zero] * self.n
        for src, dst in ((x, z), (z, x)):
            if src == a:
                continue
            p = next(p for y, p, _ in self.rows[src] if y == dst)
            visits = self.vertex_visits(src)
            total = [t + p * s for t, s in zip(total, visits.values)]
        total[a] = zero
        result = SolveResult(tuple(total), "edge-visits", self.mode,
                             None if self.mode == RATIONAL else 0.0)
        if check:
            ref = self.cost_hitting(CostFunction.indicator(g, e))
            _assert_same(result.values, ref.values, self.mode, "edge visits vs indicator cost")
        return result


def _assert_same(xs, ys, mode, what):
    for v, (p, q) in enumerate(zip(xs, ys)):
        if mode == RATIONAL:
            ok = p == q
        else:
            ok = abs(p - q) <= FLOAT_RTOL * max(1.0, abs(q))
        if not ok:
            raise SolveFailure(f"{what} disagree at vertex {v}: {p} != {q}")


@lru_cache(maxsize=512)
def _cached_system(spec: WalkSpec, mode: str, method: str) -> AbsorbingSystem:
    return AbsorbingSystem(spec, mode, method)


def system(spec: WalkSpec, mode: str | None = None, method: str = "auto",
           costs: CostFunction | None = None) -> AbsorbingSystem:
    """Cached :class:`AbsorbingSystem` for ``spec`` (mode resolved from inputs)."""
    return _cached_system(spec, spec.resolve_mode(mode, costs), method)


def hitting_times(spec: WalkSpec, mode: str | None = None, method: str = "auto") -> SolveResult:
    """Expected steps to absorption from every vertex."""
    return system(spec, mode, method).hitting()


def cost_hitting_times(spec: WalkSpec, costs: CostFunction, mode: str | None = None,
                       method: str = "auto") -> SolveResult:
    """Expected accumulated edge cost until absorption from every vertex."""
    return system(spec, mode, method, costs).cost_hitting(costs)


def vertex_visit_counts(spec: WalkSpec, x: int, mode: str | None = None) -> SolveResult:
    """Expected number of visits to ``x`` (time 0 included) before absorption."""
    return system(spec, mode).vertex_visits(x)


def edge_visit_counts(spec: WalkSpec, e, mode: str | None = None, check: bool = True) -> SolveResult:
    """Expected number of traversals of edge ``e`` (either direction).

    Computed as ``p_xz S_x + p_zx S_z`` from two vertex-visit solves and, when
    ``check`` is set, compared against the solve with indicator cost on ``e``.
    """
    if not isinstance(e, int):
        e = spec.graph.edge_id(*e)
    return system(spec, mode).edge_visits(e, check=check)


def hitting_time(spec: WalkSpec, source: int, costs: CostFunction | None = None,
                 mode: str | None = None):
    """Scalar ``H(source, a)``, solved on the component of ``a`` only."""
    g, a = spec.graph, spec.absorbing
    if not g.same_component(source, a):
        raise Unreachable(f"vertex {source} cannot reach {a}")
    sub, vmap, emap = _component(g, a)
    weights = EdgeWeights(sub, [spec.weights[e] for e in emap])
    sub_spec = WalkSpec(sub, vmap.index(a), weights)
    if costs is None:
        return hitting_times(sub_spec, mode)[vmap.index(source)]
    sub_costs = CostFunction(sub, [costs[e] for e in emap])
    return cost_hitting_times(sub_spec, sub_costs, mode)[vmap.index(source)]


def _component(g: Graph, v: int):
    vertices = g.component(v)
    sub, emap = g.subgraph(vertices)
    return sub, vertices, emap


def _restrict(g: Graph, weights, u, v):
    """Component of ``u`` (must also hold ``v``) with matching weights."""
    if not g.same_component(u, v):
        raise Unreachable(f"vertices {u} and {v} are in different components")
    if weights is None:
        weights = EdgeWeights.constant(g, 1)
    if g.is_connected():
        return g, weights, u, v
    sub, vmap, emap = _component(g, u)
    return sub, EdgeWeights(sub, [weights[e] for e in emap]), vmap.index(u), vmap.index(v)


def _mode_for(weights: EdgeWeights, n: int, mode):
    if mode is None:
        return RATIONAL if weights.exact and n <= RATIONAL_MAX_N else FLOAT
    return mode


# ---------------------------------------------------------------- probabilities


def hit_before_probability(graph: Graph, weights: EdgeWeights | None, target: int, avoid: int,
                           mode: str | None = None) -> SolveResult:
    """Probability, from every vertex, of reaching ``target`` before ``avoid``.

    Equivalently the voltages when ``target`` is held at 1 and ``avoid`` at 0
    with edge conductances equal to the weights.
    """
    if target == avoid:
        raise InvalidArgument("target and avoid must differ")
    if not graph.is_connected():
        raise Unreachable("hit_before_probability needs a connected graph")
    if weights is None:
        weights = EdgeWeights.constant(graph, 1)
    spec = WalkSpec(graph, avoid, weights)
    mode = spec.resolve_mode(mode)
    rows = list(spec.rows(mode))
    rows[target] = ()
    one, zero = to_mode(1, mode), to_mode(0, mode)
    rhs = [zero] * graph.n
    rhs[target] = one
    if mode == RATIONAL:
        sparse = []
        for x, row in enumerate(rows):
            r = {x: Fraction(1)}
            for y, p, _ in row:
                r[y] = r.get(y, Fraction(0)) - p
            sparse.append(r)
        return SolveResult(tuple(RationalLU(sparse).solve(rhs)), "probability", RATIONAL)
    mat = np.eye(graph.n)
    for x, row in enumerate(rows):
        for y, p, _ in row:
            mat[x, y] -= p
    b = np.array([float(v) for v in rhs])
    h = FloatLU(mat).solve(b)
    res = float(np.max(np.abs(mat @ h - b)))
    if not res <= FLOAT_RTOL:
        raise SolveFailure(f"relative residual {res:.3g} exceeds {FLOAT_RTOL}")
    h = np.clip(h, 0.0, 1.0)
    return SolveResult(tuple(float(v) for v in h), "probability", FLOAT, res)


# ---------------------------------------------------------------- electric network


def network_total_conductance(graph: Graph, weights: EdgeWeights | None = None):
    """Sum of conductances over directed edges, i.e. twice the weight sum."""
    if weights is None:
        return Fraction(2 * graph.m)
    zero = Fraction(0) if weights.exact else 0.0
    return 2 * sum(weights.values, zero)


def effective_resistance(graph: Graph, weights: EdgeWeights | None, u: int, v: int,
                         mode: str | None = None):
    """Voltage drop between ``u`` and ``v`` per unit current (resistances 1/w)."""
    if u == v:
        return Fraction(0) if mode != FLOAT else 0.0
    g, w, u, v = _restrict(graph, weights, u, v)
    mode = _mode_for(w, g.n, mode)
    cond = [to_mode(x, mode) for x in w.values]
    zero, one = to_mode(0, mode), to_mode(1, mode)
    rhs = [zero] * g.n
    rhs[u] = one
    if mode == RATIONAL:
        sparse = [dict() for _ in range(g.n)]
        for e, (x, y) in enumerate(g.edges):
            c = cond[e]
            for s, t in ((x, y), (y, x)):
                if s == v:
                    continue
                sparse[s][s] = sparse[s].get(s, zero) + c
                sparse[s][t] = sparse[s].get(t, zero) - c
        sparse[v] = {v: one}
        volts = RationalLU(sparse).solve(rhs)
        return volts[u]
    mat = np.zeros((g.n, g.n))
    for e, (x, y) in enumerate(g.edges):
        c = cond[e]
        mat[x, x] += c
        mat[y, y] += c
        mat[x, y] -= c
        mat[y, x] -= c
    mat[v, :] = 0.0
    mat[v, v] = 1.0
    b = np.array([float(t) for t in rhs])
    volts = FloatLU(mat).solve(b)
    res = float(np.max(np.abs(mat @ volts - b)))
    if not res <= FLOAT_RTOL:
        raise SolveFailure(f"relative residual {res:.3g} exceeds {FLOAT_RTOL}")
    return float(volts[u])


def commute_time(graph: Graph, weights: EdgeWeights | None, u: int, v: int,
                 mode: str | None = None):
    """``H(u, v) + H(v, u)`` from two hitting-time solves."""
    if u == v:
        return Fraction(0) if mode != FLOAT else 0.0
    g, w, u, v = _restrict(graph, weights, u, v)
    there = hitting_times(WalkSpec(g, v, w), mode)[u]
    back = hitting_times(WalkSpec(g, u, w), mode)[v]
    return there + back


def stationary_distribution(graph: Graph, weights: EdgeWeights | None = None) -> tuple:
    """Stationary law of the non-absorbed walk: vertex conductance over total."""
    if weights is None:
        weights = EdgeWeights.constant(graph, 1)
    zero = Fraction(0) if weights.exact else 0.0
    strength = [sum((weights.values[e] for e in graph.incident[x]), zero) for x in range(graph.n)]
    total = sum(strength, zero)
    if not total > 0:
        raise InvalidArgument("stationary distribution needs at least one edge")
    return tuple(s / total for s in strength)


# ---------------------------------------------------------------- tree fast paths


def _require_simple_tree(spec: WalkSpec):
    ts = tree_structure(spec.graph, spec.absorbing)
    if not ts.is_tree:
        raise NotATree("tree closed forms need a tree")
    if not spec.is_simple:
        raise NotSimpleWalk("tree closed forms need constant weights")
    return ts


def tree_hitting_times(spec: WalkSpec, mode: str | None = None) -> SolveResult:
    """Hitting times on a tree by adding ``2 * tail + 1`` outward from ``a``.

    Linear time; all values are integers.
    """
    ts = _require_simple_tree(spec)
    h = [0] * spec.graph.n
    for x in ts.order[1:]:
        h[x] = h[ts.parent[x]] + 2 * ts.tails[x] + 1
    mode = spec.resolve_mode(mode)
    return SolveResult(tuple(to_mode(v, mode) for v in h), "hitting", mode,
                       None if mode == RATIONAL else 0.0)


def tree_visit_counts(spec: WalkSpec, x: int, mode: str | None = None) -> SolveResult:
    """Visits to ``x`` on a tree: ``d * deg(x)``.

    ``d`` is the position, counted from ``a``, of the last vertex that the
    path from ``a`` to ``x`` shares with the path from the start to ``a``.
    """
    ts = _require_simple_tree(spec)
    if x == spec.absorbing:
        raise InvalidArgument("visit counts are defined for x != a")
    index = {v: i for i, v in enumerate(ts.path(x))}
    d = [0] * spec.graph.n
    for v in ts.order[1:]:
        d[v] = index[v] if v in index else d[ts.parent[v]]
    deg = spec.graph.degree(x)
    mode = spec.resolve_mode(mode)
    return SolveResult(tuple(to_mode(k * deg, mode) for k in d), "vertex-visits", mode,
                       None if mode == RATIONAL else 0.0)


# ---------------------------------------------------------------- oracle


def value_iteration(spec: WalkSpec, costs: CostFunction | None = None, tol: float = 1e-14,
                    max_doublings: int = 80, doubling: bool = True, max_iter: int = 10**6,
                    history: bool = False):
    """Fixed point of ``h <- r + P h`` with ``h_a`` pinned to 0, from ``h = 0``.

    With ``doubling`` the iterate count doubles per round
    (``h_2k = h_k + P^k h_k``), so convergence costs ``O(log H)`` matrix
    products instead of ``O(H)`` vector updates.  The iterates are
    nondecreasing for nonnegative ``r``.  Returns the final vector, or the
    list of iterates when ``history`` is set.
    """
    g, a = spec.graph, spec.absorbing
    rows = spec.rows(FLOAT)
    P = np.zeros((g.n, g.n))
    for x, row in enumerate(rows):
        for y, p, _ in row:
            P[x, y] = p
    if costs is None:
        r = np.ones(g.n)
    else:
        fv = np.array([float(c) for c in costs.values])
        r = np.array([sum(p * fv[e] for _, p, e in row) for row in rows], dtype=float)
    r[a] = 0.0
    h = r.copy() if doubling else np.zeros(g.n)
    trail = [h.copy()]
    rounds = max_doublings if doubling else max_iter
    for _ in range(rounds):
        if doubling:
            new = h + P @ h
            P = P @ P
        else:
            new = r + P @ h
        new[a] = 0.0
        change = float(np.max(np.abs(new - h))) if g.n else 0.0
        h = new
        if history:
            trail.append(h.copy())
        if change <= tol * max(1.0, float(np.max(np.abs(h)))):
            return trail if history else h
    raise SolveFailure("value iteration did not converge")
