"""Shared strategies and independent oracles for the test suite.

The oracles here assemble their linear systems straight from the edge list
and hand them to sympy (exact) or numpy (float), so they share no code with
the solver under test.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import strategies as st

from walkbound.graph import CostFunction, EdgeWeights, Graph


def _to_fraction(x) -> Fraction:
    x = sympy.nsimplify(x) if not isinstance(x, sympy.Rational) else x
    return Fraction(int(x.p), int(x.q))


def oracle_hitting(g: Graph, weights, a: int, costs=None) -> list:
    """Exact ``H^f(v, a)`` by sympy's LU solve on the first-step equations."""
    w = [sympy.Rational(str(x)) for x in (weights if weights is not None else [1] * g.m)]
    f = [sympy.Rational(str(x)) for x in (costs if costs is not None else [1] * g.m)]
    strength = [sympy.Integer(0)] * g.n
    for e, (u, v) in enumerate(g.edges):
        strength[u] += w[e]
        strength[v] += w[e]
    M = sympy.eye(g.n)
    b = sympy.zeros(g.n, 1)
    for e, (u, v) in enumerate(g.edges):
        for x, y in ((u, v), (v, u)):
            if x == a:
                continue
            p = w[e] / strength[x]
            M[x, y] -= p
            b[x] += p * f[e]
    h = M.LUsolve(b)
    return [_to_fraction(h[i]) for i in range(g.n)]


def oracle_hitting_float(g: Graph, weights, a: int, costs=None) -> np.ndarray:
    w = np.array([float(x) for x in weights] if weights is not None else np.ones(g.m))
    f = np.array([float(x) for x in costs] if costs is not None else np.ones(g.m))
    strength = np.zeros(g.n)
    for e, (u, v) in enumerate(g.edges):
        strength[u] += w[e]
        strength[v] += w[e]
    M = np.eye(g.n)
    b = np.zeros(g.n)
    for e, (u, v) in enumerate(g.edges):
        for x, y in ((u, v), (v, u)):
            if x != a:
                M[x, y] -= w[e] / strength[x]
                b[x] += w[e] / strength[x] * f[e]
    return np.linalg.solve(M, b)


def brute_distances(g: Graph) -> list:
    """All-pairs distances by Floyd-Warshall (independent of the BFS under test)."""
    inf = float("inf")
    d = [[0 if i == j else inf for j in range(g.n)] for i in range(g.n)]
    for u, v in g.edges:
        d[u][v] = d[v][u] = 1
    for k in range(g.n):
        for i in range(g.n):
            for j in range(g.n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return d


# ---------------------------------------------------------------- strategies


@st.composite
def connected_graphs(draw, n_min=1, n_max=9, extra_max=8):
    """Random spanning tree plus a few extra edges."""
    n = draw(st.integers(n_min, n_max))
    edges = set()
    for v in range(1, n):
        u = draw(st.integers(0, v - 1))
        edges.add((u, v))
    missing = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in edges]
    if missing:
        extra = draw(st.lists(st.sampled_from(missing), max_size=min(extra_max, len(missing)), unique=True))
        edges.update(extra)
    return Graph(n, tuple(sorted(edges)))


@st.composite
def trees(draw, n_min=1, n_max=12):
    n = draw(st.integers(n_min, n_max))
    return Graph(n, tuple((draw(st.integers(0, v - 1)), v) for v in range(1, n)))


exact_weights = st.fractions(min_value=1, max_value=3, max_denominator=8)
exact_costs = st.fractions(min_value=0, max_value=5, max_denominator=8)


@st.composite
def weighted_instances(draw, graphs=None, unit=None):
    """``(graph, weights, costs, target)`` with exact weights and costs."""
    g = draw(graphs if graphs is not None else connected_graphs())
    if unit is None:
        unit = draw(st.booleans())
    w = [Fraction(1)] * g.m if unit else [draw(exact_weights) for _ in range(g.m)]
    f = [draw(exact_costs) for _ in range(g.m)]
    a = draw(st.integers(0, g.n - 1))
    return g, EdgeWeights(g, w), CostFunction(g, f), a


@pytest.fixture
def path_graph():
    def make(m):
        return Graph(m + 1, tuple((k, k + 1) for k in range(m)))
    return make
