"""Seeded Monte Carlo walks, hitting-time estimates and the bounded-memory
s-t connectivity test.

Random numbers
--------------
Walk ``i`` of a run with seed ``s`` draws its ``k``-th uniform (``k = 1, 2,
...``) as::

    key = mix64(mix64(s) + (i + 1) * GAMMA)
    u_k = (mix64(key + k * GAMMA) >> 11) * 2**-53

with all arithmetic modulo 2**64, ``GAMMA = 0x9E3779B97F4A7C15`` and
``mix64`` the SplitMix64 finalizer (see :func:`mix64`).  Each draw depends
only on ``(s, i, k)``, so any partition of walks across workers gives the
same per-walk outcomes.  A step from ``x`` takes the first neighbor slot
``j`` (in sorted neighbor order) whose cumulative probability is ``>= u``.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numba
import numpy as np

from .bounds import bound_weighted_F
from .errors import CensoredSample, InvalidArgument, Unreachable
from .graph import CostFunction, EdgeWeights, Graph, WalkSpec, asymmetry

GAMMA = 0x9E3779B97F4A7C15
_MASK = (1 << 64) - 1

#: Per-walk step guard used by the estimators.
DEFAULT_GUARD = 10**9

Z95 = 1.96


def mix64(z: int) -> int:
    """SplitMix64 output function on a 64-bit integer."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def stream_key(seed: int, walk: int) -> int:
    return mix64((mix64(seed) + (walk + 1) * GAMMA) & _MASK)


def uniform(seed: int, walk: int, k: int) -> float:
    """The ``k``-th uniform double of walk ``walk`` (pure-Python reference)."""
    return (mix64((stream_key(seed, walk) + k * GAMMA) & _MASK) >> 11) * 2.0**-53


# ---------------------------------------------------------------- kernel

_U30 = np.uint64(30)
_U27 = np.uint64(27)
_U31 = np.uint64(31)
_U11 = np.uint64(11)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_G = np.uint64(GAMMA)
_ONE = np.uint64(1)


@numba.njit(cache=True, nogil=True)
def _mix(z):
    z = (z ^ (z >> _U30)) * _M1
    z = (z ^ (z >> _U27)) * _M2
    return z ^ (z >> _U31)


@numba.njit(cache=True, nogil=True)
def _walks(offsets, nbrs, cum, edge_of, costs, target, start, max_steps, seed_key,
           first, out_cost, out_steps, out_pos, counts):
    inv53 = 1.0 / 9007199254740992.0
    for i in range(out_cost.shape[0]):
        key = _mix(seed_key + (np.uint64(first + i) + _ONE) * _G)
        x = start
        steps = 0
        cost = 0.0
        ctr = np.uint64(0)
        while x != target and steps < max_steps:
            lo = offsets[x]
            hi = offsets[x + 1]
            if lo == hi:
                break
            ctr += _ONE
            u = np.float64(_mix(key + ctr * _G) >> _U11) * inv53
            # first slot with cum >= u
            left = lo
            right = hi - 1
            while left < right:
                mid = (left + right) // 2
                if cum[mid] >= u:
                    right = mid
                else:
                    left = mid + 1
            e = edge_of[left]
            cost += costs[e]
            if counts.shape[0] > 0:
                counts[e] += 1
            x = nbrs[left]
            steps += 1
        out_cost[i] = cost
        out_steps[i] = steps
        out_pos[i] = x


@dataclass(frozen=True)
class _Tables:
    offsets: np.ndarray
    nbrs: np.ndarray
    cum: np.ndarray
    edge_of: np.ndarray


@lru_cache(maxsize=128)
def _tables(weights: EdgeWeights) -> _Tables:
    g = weights.graph
    offsets = np.zeros(g.n + 1, dtype=np.int64)
    nbrs, cum, edge_of = [], [], []
    for x in range(g.n):
        ws = [float(weights.values[e]) for e in g.incident[x]]
        total = math.fsum(ws)
        acc = 0.0
        for i, (y, e, w) in enumerate(zip(g.adjacency[x], g.incident[x], ws)):
            acc += w
            nbrs.append(y)
            edge_of.append(e)
            cum.append(1.0 if i == len(ws) - 1 else acc / total)
        offsets[x + 1] = len(nbrs)
    return _Tables(offsets, np.array(nbrs, dtype=np.int64), np.array(cum, dtype=np.float64),
                   np.array(edge_of, dtype=np.int64))


def worker_count(workers: int | None = None) -> int:
    if workers is None:
        env = os.environ.get("WALKBOUND_THREADS")
        workers = int(env) if env else (os.cpu_count() or 1)
    if workers < 1:
        raise InvalidArgument("worker count must be >= 1")
    return workers


@dataclass(frozen=True)
class WalkBatch:
    """Per-walk outcomes of one seeded run, indexed by walk number."""

    cost: np.ndarray
    steps: np.ndarray
    position: np.ndarray
    target: int

    @property
    def absorbed(self) -> np.ndarray:
        return self.position == self.target


def simulate_walks(graph: Graph, weights: EdgeWeights | None, target: int, start: int, walks: int,
                   seed: int, costs: CostFunction | None = None, max_steps: int = DEFAULT_GUARD,
                   workers: int | None = None, first: int = 0) -> WalkBatch:
    """Run walks ``first .. first+walks-1`` from ``start`` until ``target`` or ``max_steps``."""
    if weights is None:
        weights = EdgeWeights.constant(graph, 1)
    if walks < 0 or max_steps < 0:
        raise InvalidArgument("walks and max_steps must be nonnegative")
    t = _tables(weights)
    fcost = np.ones(graph.m) if costs is None else np.array([float(c) for c in costs.values])
    out_cost = np.zeros(walks)
    out_steps = np.zeros(walks, dtype=np.int64)
    out_pos = np.zeros(walks, dtype=np.int64)
    no_counts = np.zeros(0, dtype=np.int64)
    seed_key = np.uint64(mix64(int(seed)))
    workers = min(worker_count(workers), max(walks, 1))
    bounds = np.linspace(0, walks, workers + 1).astype(np.int64)

    def run(k):
        lo, hi = int(bounds[k]), int(bounds[k + 1])
        _walks(t.offsets, t.nbrs, t.cum, t.edge_of, fcost, target, start, max_steps, seed_key,
               first + lo, out_cost[lo:hi], out_steps[lo:hi], out_pos[lo:hi], no_counts)

    if workers == 1:
        run(0)
    else:
        with ThreadPoolExecutor(workers) as pool:
            list(pool.map(run, range(workers)))
    return WalkBatch(out_cost, out_steps, out_pos, target)


# ---------------------------------------------------------------- single walk


@dataclass(frozen=True)
class WalkOutcome:
    absorbed: bool
    steps: int
    accumulated_cost: float
    position: int
    edge_counts: tuple | None = None


def simulate_walk(spec: WalkSpec, costs: CostFunction | None, start: int, max_steps: int,
                  seed: int, walk: int = 0, edge_counts: bool = False) -> WalkOutcome:
    """One walk (stream ``walk`` of ``seed``) from ``start``, stopped at ``a`` or ``max_steps``."""
    g = spec.graph
    if not 0 <= start < g.n:
        raise InvalidArgument(f"start vertex {start} out of range")
    if max_steps < 0:
        raise InvalidArgument("max_steps must be >= 0")
    t = _tables(spec.weights)
    fcost = np.ones(g.m) if costs is None else np.array([float(c) for c in costs.values])
    cost, steps, pos = np.zeros(1), np.zeros(1, dtype=np.int64), np.zeros(1, dtype=np.int64)
    counts = np.zeros(g.m if edge_counts else 0, dtype=np.int64)
    _walks(t.offsets, t.nbrs, t.cum, t.edge_of, fcost, spec.absorbing, start, max_steps,
           np.uint64(mix64(int(seed))), walk, cost, steps, pos, counts)
    return WalkOutcome(bool(pos[0] == spec.absorbing), int(steps[0]), float(cost[0]), int(pos[0]),
                       tuple(int(c) for c in counts) if edge_counts else None)


# ---------------------------------------------------------------- estimates


@dataclass(frozen=True)
class EstimateSummary:
    mean: float
    sd: float
    count: int
    half_width: float
    seed: int
    censored: int = 0

    def contains(self, value, widths: float = 1.0) -> bool:
        return abs(float(value) - self.mean) <= widths * self.half_width


def summarize(samples: np.ndarray, seed: int, censored: int = 0) -> EstimateSummary:
    """Mean, sample sd and 95% normal half-width, summed in walk order."""
    n = len(samples)
    if n == 0:
        raise InvalidArgument("cannot summarize zero samples")
    mean = math.fsum(samples) / n
    sd = math.sqrt(math.fsum((samples - mean) ** 2) / (n - 1)) if n > 1 else 0.0
    return EstimateSummary(mean, sd, n, Z95 * sd / math.sqrt(n), seed, censored)


def _estimate(spec, costs, start, walks, seed, guard, workers, allow_censored):
    if walks < 1:
        raise InvalidArgument("need at least one walk")
    g, a = spec.graph, spec.absorbing
    if not g.same_component(start, a):
        raise Unreachable(f"vertex {start} cannot reach {a}")
    batch = simulate_walks(g, spec.weights, a, start, walks, seed, costs, guard, workers)
    censored = int(np.count_nonzero(~batch.absorbed))
    summary = summarize(batch.cost, seed, censored)
    if censored and not allow_censored:
        raise CensoredSample(f"{censored} of {walks} walks hit the {guard}-step guard", censored)
    return summary


def estimate_hitting(spec: WalkSpec, costs: CostFunction | None, start: int, walks: int, seed: int,
                     guard: int = DEFAULT_GUARD, workers: int | None = None,
                     allow_censored: bool = False) -> EstimateSummary:
    """Monte Carlo estimate of the (cost) hitting time from ``start``.

    Raises :class:`CensoredSample` when any walk reaches ``guard`` steps
    unabsorbed, unless ``allow_censored`` is set.
    """
    return _estimate(spec, costs, start, walks, seed, guard, workers, allow_censored)


def estimate_edge_visits(spec: WalkSpec, e, start: int, walks: int, seed: int,
                         guard: int = DEFAULT_GUARD, workers: int | None = None,
                         allow_censored: bool = False) -> EstimateSummary:
    """Monte Carlo estimate of the expected number of traversals of ``e``."""
    g = spec.graph
    if not isinstance(e, int):
        e = g.edge_id(*e)
    return _estimate(spec, CostFunction.indicator(g, e), start, walks, seed, guard, workers,
                     allow_censored)


# ---------------------------------------------------------------- connectivity

CONNECTED = "connected-certain"
NOT_CONNECTED = "not-connected-probable"


@dataclass(frozen=True)
class ConnectivityVerdict:
    verdict: str
    repetitions: int
    walk_length: int
    epsilon: float
    steps: int

    @property
    def connected(self) -> bool:
        return self.verdict == CONNECTED


def default_walk_bound(graph: Graph, weights: EdgeWeights | None = None) -> int:
    """``m**2`` for simple walks, ``ceil(F(tau, m))`` otherwise."""
    if weights is None or weights.is_constant():
        return graph.m * graph.m
    return math.ceil(bound_weighted_F(asymmetry(weights), graph.m))


def st_connectivity(graph: Graph, weights: EdgeWeights | None, source: int, target: int,
                    epsilon: float, N: int | None = None, seed: int = 0) -> ConnectivityVerdict:
    """Decide whether ``source`` reaches ``target`` using only walk state.

    Runs up to ``ceil(log2(1/epsilon))`` walks of ``2N`` steps.  Reaching
    ``target`` proves connectivity.  Otherwise each miss has probability at
    most 1/2 when ``N`` bounds the expected hitting time (Markov's
    inequality), so a connected pair is missed with probability below
    ``epsilon``.
    """
    if not 0 < epsilon < 1:
        raise InvalidArgument("epsilon must lie in (0, 1)")
    if N is None:
        N = max(default_walk_bound(graph, weights), 1)
    if N < 1:
        raise InvalidArgument("N must be >= 1")
    k = max(math.ceil(math.log2(1 / epsilon)), 1)
    if source == target:
        return ConnectivityVerdict(CONNECTED, 0, 2 * N, epsilon, 0)
    if weights is None:
        weights = EdgeWeights.constant(graph, 1)
    t = _tables(weights)
    ones = np.ones(graph.m)
    cost, steps, pos = np.zeros(1), np.zeros(1, dtype=np.int64), np.zeros(1, dtype=np.int64)
    no_counts = np.zeros(0, dtype=np.int64)
    seed_key = np.uint64(mix64(int(seed)))
    used = 0
    for rep in range(k):
        _walks(t.offsets, t.nbrs, t.cum, t.edge_of, ones, target, source, 2 * N, seed_key, rep,
               cost, steps, pos, no_counts)
        used += int(steps[0])
        if pos[0] == target:
            return ConnectivityVerdict(CONNECTED, rep + 1, 2 * N, epsilon, used)
    return ConnectivityVerdict(NOT_CONNECTED, k, 2 * N, epsilon, used)
