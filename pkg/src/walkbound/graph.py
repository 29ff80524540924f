"""Graph and walk data model: ingestion, validation, distances, transition
probabilities and asymmetry.

Vertices are dense integer ids ``0..n-1``.  Scalars are either
:class:`fractions.Fraction` (exact-rational mode) or ``float`` (floating
mode); the type of the stored values is the mode tag.
"""
from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import (
    DuplicateEdge,
    InvalidArgument,
    MalformedLine,
    NegativeCost,
    NonPositiveWeight,
    NotATree,
    SelfLoop,
    Unreachable,
)

RATIONAL = "rational"
FLOAT = "float"
MODES = (RATIONAL, FLOAT)

#: Largest system solved in exact-rational mode when no mode is requested.
RATIONAL_MAX_N = 200

#: Default relative tolerance attached to floating mode.
FLOAT_RTOL = 1e-9

INF = math.inf

_INT_RE = re.compile(r"^[+-]?\d+$")
_FRAC_RE = re.compile(r"^[+-]?\d+/\d+$")


def parse_number(token: str):
    """Parse an integer or ``p/q`` token as a Fraction, anything else as float."""
    if _INT_RE.match(token) or _FRAC_RE.match(token):
        try:
            return Fraction(token)
        except ZeroDivisionError:
            raise ValueError(f"zero denominator in {token!r}") from None
    value = float(token)
    if not math.isfinite(value):
        raise ValueError(f"non-finite number {token!r}")
    return value


def is_exact(values: Iterable) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in values)


def to_mode(value, mode: str):
    """Convert a scalar to the given arithmetic mode (no rounding into rational)."""
    if mode == RATIONAL:
        return value if isinstance(value, Fraction) else Fraction(value)
    return float(value)


@dataclass(frozen=True, eq=False)
class Graph:
    """Finite simple undirected graph.

    Parameters
    ----------
    n : int
        Number of vertices.
    edges : sequence of pairs
        Edge ``i`` joins ``edges[i][0]`` and ``edges[i][1]``.  Pairs are stored
        with the smaller endpoint first.
    labels : sequence of str, optional
        Original vertex labels, ``labels[v]`` for vertex ``v``.
    """

    n: int
    edges: tuple
    labels: tuple | None = None

    def __post_init__(self):
        if self.n < 0:
            raise InvalidArgument("vertex count must be nonnegative")
        normalized = []
        index = {}
        for i, (u, v) in enumerate(self.edges):
            u, v = int(u), int(v)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidArgument(f"edge {i} = ({u}, {v}) out of range")
            if u == v:
                raise SelfLoop(f"self-loop at vertex {u}")
            key = (u, v) if u < v else (v, u)
            if key in index:
                raise DuplicateEdge(f"duplicate edge {key}")
            index[key] = i
            normalized.append(key)
        object.__setattr__(self, "edges", tuple(normalized))
        object.__setattr__(self, "_index", index)
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != self.n:
                raise InvalidArgument("labels must have one entry per vertex")
            object.__setattr__(self, "labels", labels)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple:
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(nbrs)) for nbrs in adj)

    @cached_property
    def incident(self) -> tuple:
        """Per-vertex edge indices, ordered like :attr:`adjacency`."""
        return tuple(
            tuple(self._index[(min(x, y), max(x, y))] for y in self.adjacency[x])
            for x in range(self.n)
        )

    def neighbors(self, x: int) -> tuple:
        return self.adjacency[x]

    def degree(self, x: int) -> int:
        return len(self.adjacency[x])

    def edge_id(self, u: int, v: int) -> int:
        try:
            return self._index[(min(u, v), max(u, v))]
        except KeyError:
            raise InvalidArgument(f"({u}, {v}) is not an edge") from None

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self._index

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def vertex(self, label) -> int:
        """Vertex id for an original label (or a decimal id when unlabeled)."""
        if self.labels is not None and str(label) in self.labels:
            return self.labels.index(str(label))
        try:
            v = int(label)
        except (TypeError, ValueError):
            raise InvalidArgument(f"unknown vertex {label!r}") from None
        if not 0 <= v < self.n:
            raise InvalidArgument(f"unknown vertex {label!r}")
        return v

    @cached_property
    def component_ids(self) -> tuple:
        comp = [-1] * self.n
        c = 0
        for s in range(self.n):
            if comp[s] >= 0:
                continue
            comp[s] = c
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for y in self.adjacency[x]:
                    if comp[y] < 0:
                        comp[y] = c
                        queue.append(y)
            c += 1
        return tuple(comp)

    def is_connected(self) -> bool:
        return self.n <= 1 or max(self.component_ids) == 0

    def same_component(self, u: int, v: int) -> bool:
        return self.component_ids[u] == self.component_ids[v]

    def component(self, v: int) -> list:
        c = self.component_ids[v]
        return [x for x in range(self.n) if self.component_ids[x] == c]

    def subgraph(self, vertices: Sequence[int]):
        """Induced subgraph on ``vertices``.

        Returns ``(subgraph, edge_map)`` where vertex ``i`` of the subgraph is
        ``vertices[i]`` and ``edge_map[j]`` is the original index of edge ``j``.
        """
        remap = {v: i for i, v in enumerate(vertices)}
        edges, edge_map = [], []
        for i, (u, v) in enumerate(self.edges):
            if u in remap and v in remap:
                edges.append((remap[u], remap[v]))
                edge_map.append(i)
        labels = [self.label(v) for v in vertices]
        return Graph(len(vertices), tuple(edges), labels), edge_map

    def without_edge(self, e: int) -> Graph:
        """Same vertex set with edge ``e`` removed (later edges shift down)."""
        edges = self.edges[:e] + self.edges[e + 1 :]
        return Graph(self.n, edges, self.labels)

    def is_path(self) -> bool:
        """True when the graph is a path P_m (m >= 1) or a single vertex."""
        if not self.is_connected() or self.m != self.n - 1:
            return False
        return all(self.degree(v) <= 2 for v in range(self.n))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


class _EdgeFunction:
    """Per-edge scalar attached to a graph; shared by weights and costs."""

    __slots__ = ("graph", "values")

    def __init__(self, graph: Graph, values):
        values = tuple(Fraction(v) if isinstance(v, int) else v for v in values)
        if len(values) != graph.m:
            raise InvalidArgument(
                f"{type(self).__name__} needs {graph.m} values, got {len(values)}"
            )
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "values", values)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @classmethod
    def constant(cls, graph: Graph, value=1):
        return cls(graph, [Fraction(value) if not isinstance(value, float) else value] * graph.m)

    @property
    def exact(self) -> bool:
        return is_exact(self.values)

    def __getitem__(self, e: int):
        return self.values[e]

    def __len__(self):
        return len(self.values)

    def __call__(self, x: int, y: int):
        """Evaluate on a vertex pair; zero for non-adjacent pairs."""
        if not self.graph.has_edge(x, y):
            return Fraction(0) if self.exact else 0.0
        return self.values[self.graph.edge_id(x, y)]

    def as_mode(self, mode: str):
        return type(self)(self.graph, [to_mode(v, mode) for v in self.values])

    def __repr__(self):
        return f"{type(self).__name__}({list(map(str, self.values))})"


class EdgeWeights(_EdgeFunction):
    """Strictly positive per-edge weights (conductances)."""

    __slots__ = ()

    def __init__(self, graph: Graph, values):
        super().__init__(graph, values)
        for e, w in enumerate(self.values):
            if not w > 0:
                raise NonPositiveWeight(f"weight of edge {e} is {w}, must be > 0")

    def is_constant(self) -> bool:
        return len(set(self.values)) <= 1


class CostFunction(_EdgeFunction):
    """Nonnegative per-edge costs.  The cost of a walk sums its edge costs."""

    __slots__ = ()

    def __init__(self, graph: Graph, values):
        super().__init__(graph, values)
        for e, f in enumerate(self.values):
            if not f >= 0:
                raise NegativeCost(f"cost of edge {e} is {f}, must be >= 0")

    @classmethod
    def indicator(cls, graph: Graph, e: int):
        values = [Fraction(0)] * graph.m
        values[e] = Fraction(1)
        return cls(graph, values)

    def path_cost(self, walk: Sequence[int]):
        """Cost of the vertex sequence ``walk`` (0 for walks of length 0)."""
        total = Fraction(0) if self.exact else 0.0
        for x, y in zip(walk, walk[1:]):
            total += self.values[self.graph.edge_id(x, y)]
        return total


@dataclass(frozen=True)
class WalkSpec:
    """A random walk on ``graph`` absorbed at vertex ``absorbing``.

    ``weights=None`` means the simple random walk (unit weights).
    """

    graph: Graph
    absorbing: int
    weights: EdgeWeights | None = None

    def __post_init__(self):
        if not 0 <= self.absorbing < self.graph.n:
            raise InvalidArgument(f"absorbing vertex {self.absorbing} out of range")
        if self.weights is None:
            object.__setattr__(self, "weights", EdgeWeights.constant(self.graph, 1))
        elif self.weights.graph is not self.graph:
            raise InvalidArgument("weights belong to a different graph")

    @property
    def is_simple(self) -> bool:
        return self.weights.is_constant()

    def resolve_mode(self, mode: str | None = None, costs: CostFunction | None = None) -> str:
        """Explicit mode, or rational for small exact inputs and float otherwise."""
        if mode is not None:
            if mode not in MODES:
                raise InvalidArgument(f"unknown arithmetic mode {mode!r}")
            return mode
        exact = self.weights.exact and (costs is None or costs.exact)
        return RATIONAL if exact and self.graph.n <= RATIONAL_MAX_N else FLOAT

    def rows(self, mode: str) -> tuple:
        """Per-vertex tuple of ``(neighbor, probability, edge)``; empty at ``a``."""
        cache = self.__dict__.setdefault("_rows", {})
        if mode not in cache:
            cache[mode] = _transition_rows(self.graph, self.weights, self.absorbing, mode)
        return cache[mode]


def _transition_rows(graph, weights, absorbing, mode):
    rows = []
    for x in range(graph.n):
        if x == absorbing:
            rows.append(())
            continue
        ws = [to_mode(weights.values[e], mode) for e in graph.incident[x]]
        total = sum(ws)
        rows.append(
            tuple(
                (y, w / total, e)
                for y, w, e in zip(graph.adjacency[x], ws, graph.incident[x])
            )
        )
    return tuple(rows)


# ---------------------------------------------------------------- ingestion


@dataclass(frozen=True)
class ParsedGraph:
    graph: Graph
    weights: EdgeWeights
    costs: CostFunction
    has_weights: bool
    has_costs: bool


def parse_graph(text: str) -> ParsedGraph:
    """Parse an edge-list document.

    One edge per line: ``u v [weight [cost]]``.  ``#`` starts a comment and
    blank lines are skipped.  Vertex labels map to ids in order of first
    appearance.  Numbers written as integers or ``p/q`` are exact; a single
    decimal anywhere in the document switches weights and costs to float.

    Raises
    ------
    MalformedLine, SelfLoop, DuplicateEdge, NonPositiveWeight, NegativeCost
        Each carries the 1-based number of the offending line.
    """
    labels: dict[str, int] = {}
    edges, weights, costs, lines = [], [], [], []
    seen: dict[tuple, int] = {}
    has_weights = has_costs = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].split()
        if not body:
            continue
        if len(body) < 2 or len(body) > 4:
            raise MalformedLine(f"expected 'u v [weight [cost]]', got {raw.strip()!r}", lineno)
        u_lab, v_lab = body[0], body[1]
        if u_lab == v_lab:
            raise SelfLoop(f"self-loop at {u_lab!r}", lineno)
        try:
            w = parse_number(body[2]) if len(body) > 2 else Fraction(1)
            f = parse_number(body[3]) if len(body) > 3 else Fraction(1)
        except ValueError as exc:
            raise MalformedLine(str(exc), lineno) from None
        if len(body) > 2 and not w > 0:
            raise NonPositiveWeight(f"weight {body[2]} must be > 0", lineno)
        if len(body) > 3 and not f >= 0:
            raise NegativeCost(f"cost {body[3]} must be >= 0", lineno)
        has_weights |= len(body) > 2
        has_costs |= len(body) > 3
        u = labels.setdefault(u_lab, len(labels))
        v = labels.setdefault(v_lab, len(labels))
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdge(f"edge {u_lab}-{v_lab} already on line {seen[key]}", lineno)
        seen[key] = lineno
        edges.append((u, v))
        weights.append(w)
        costs.append(f)
        lines.append(lineno)
    if not (is_exact(weights) and is_exact(costs)):
        weights = [float(w) for w in weights]
        costs = [float(f) for f in costs]
    graph = Graph(len(labels), tuple(edges), tuple(labels))
    return ParsedGraph(
        graph, EdgeWeights(graph, weights), CostFunction(graph, costs), has_weights, has_costs
    )


def format_graph(graph: Graph, weights: EdgeWeights | None = None, costs: CostFunction | None = None) -> str:
    """Inverse of :func:`parse_graph` (numbers written exactly)."""
    if costs is not None and weights is None:
        weights = EdgeWeights.constant(graph, 1)
    out = []
    for e, (u, v) in enumerate(graph.edges):
        cols = [graph.label(u), graph.label(v)]
        if weights is not None:
            cols.append(_fmt(weights[e]))
        if costs is not None:
            cols.append(_fmt(costs[e]))
        out.append(" ".join(cols))
    return "\n".join(out) + "\n"


def _fmt(x) -> str:
    return str(x) if isinstance(x, Fraction) else repr(float(x))


# ---------------------------------------------------------------- distances


def bfs_distances(g: Graph, a: int) -> list:
    """Hop distance from ``a`` to every vertex; unreachable vertices get ``INF``."""
    dist = [INF] * g.n
    dist[a] = 0
    queue = deque([a])
    while queue:
        x = queue.popleft()
        for y in g.adjacency[x]:
            if dist[y] == INF:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def edge_distances(g: Graph, a: int, dist: list | None = None) -> list:
    if dist is None:
        dist = bfs_distances(g, a)
    return [min(dist[u], dist[v]) for u, v in g.edges]


def edge_distance(g: Graph, a: int, e) -> int:
    """Distance from ``a`` to the nearer endpoint of ``e`` (index or vertex pair)."""
    if not isinstance(e, int):
        e = g.edge_id(*e)
    d = edge_distances(g, a)[e]
    if d == INF:
        raise Unreachable(f"edge {g.edges[e]} is not connected to vertex {a}")
    return d


# ---------------------------------------------------------------- walk scalars


def transition_probabilities(spec: WalkSpec, mode: str | None = None) -> dict:
    """Map each directed edge ``(x, y)`` with ``x != a`` to ``p_xy``."""
    mode = spec.resolve_mode(mode)
    return {(x, y): p for x, row in enumerate(spec.rows(mode)) for y, p, _ in row}


def asymmetry(obj) -> Fraction | float:
    """Largest ratio between two weights at a common vertex (1 with no edges).

    Accepts a :class:`WalkSpec` or :class:`EdgeWeights`.  The absorbing
    vertex does not matter: the ratio is a property of the weights.
    """
    weights = obj.weights if isinstance(obj, WalkSpec) else obj
    g = weights.graph
    tau = Fraction(1) if weights.exact else 1.0
    for x in range(g.n):
        ws = [weights.values[e] for e in g.incident[x]]
        if ws:
            tau = max(tau, max(ws) / min(ws))
    return tau


# ---------------------------------------------------------------- tree tails


@dataclass(frozen=True)
class TreeStructure:
    """Rooted view of a connected graph from vertex ``a``.

    ``parent[v]`` is the BFS parent (``-1`` at ``a``), ``order`` lists
    vertices in BFS order.  When the graph is a tree, ``tails[v]`` is the
    number of edges in the tail of ``v`` (the subtree cut off from ``a`` by
    ``v``), with ``tails[a] = m``.
    """

    graph: Graph
    a: int
    is_tree: bool
    parent: tuple
    depth: tuple
    order: tuple
    tails: tuple | None

    def _require_tree(self):
        if not self.is_tree:
            raise NotATree("graph has a cycle")

    def tail(self, x: int) -> int:
        self._require_tree()
        return self.tails[x]

    def path(self, x: int) -> list:
        """Vertices ``[a, a_1, ..., x]`` of the unique BFS-tree path."""
        out = [x]
        while out[-1] != self.a:
            out.append(self.parent[out[-1]])
        return out[::-1]

    def branch_tail(self, x: int) -> int:
        """Edges in the component of ``T \\ a`` that contains ``x`` (0 at ``a``)."""
        self._require_tree()
        if x == self.a:
            return 0
        return self.tails[self.path(x)[1]] + 1


def tree_structure(g: Graph, a: int) -> TreeStructure:
    if not g.is_connected():
        raise Unreachable("tree_structure needs a connected graph")
    parent = [-1] * g.n
    depth = [0] * g.n
    order = [a]
    seen = [False] * g.n
    seen[a] = True
    i = 0
    while i < len(order):
        x = order[i]
        i += 1
        for y in g.adjacency[x]:
            if not seen[y]:
                seen[y] = True
                parent[y] = x
                depth[y] = depth[x] + 1
                order.append(y)
    is_tree = g.m == g.n - 1
    tails = None
    if is_tree:
        size = [0] * g.n
        for x in reversed(order[1:]):
            size[parent[x]] += size[x] + 1
        size[a] = g.m
        tails = tuple(size)
    return TreeStructure(g, a, is_tree, tuple(parent), tuple(depth), tuple(order), tails)
