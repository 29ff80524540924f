"""Seeded random instances: paths, uniform-attachment trees and connected
graphs built from a random spanning tree plus extra edges."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidConfig
from .fixtures import all_fixtures
from .graph import FLOAT, MODES, CostFunction, EdgeWeights, Graph

FAMILIES = ("path", "random-tree", "random-connected", "fixture")
WEIGHTINGS = ("unit", "random", "mixed")

#: Random weights and costs are rounded to these denominators so they stay exact.
WEIGHT_DENOMINATOR = 64
COST_DENOMINATOR = 8


@dataclass(frozen=True)
class CampaignConfig:
    """What to generate and which checks to run.

    ``weighting="mixed"`` alternates unit weights (even instance index) and
    random weights (odd index).  ``m`` fixes the edge count of
    random-connected graphs; otherwise it is drawn uniformly from
    ``[n - 1, min(n(n-1)/2, n - 1 + extra_max)]``.
    """

    family: str = "random-connected"
    count: int = 100
    n_min: int = 2
    n_max: int = 12
    m: int | None = None
    extra_max: int = 12
    weighting: str = "mixed"
    tau_max: Fraction = Fraction(3)
    cost_max: Fraction = Fraction(5)
    seed: int = 0
    mode: str | None = None
    commute_pairs: int = 20
    value_iteration_max_n: int = 12
    simulate_walks: int = 0

    def __post_init__(self):
        object.__setattr__(self, "tau_max", Fraction(self.tau_max))
        object.__setattr__(self, "cost_max", Fraction(self.cost_max))
        if self.family not in FAMILIES:
            raise InvalidConfig(f"unknown family {self.family!r}")
        if self.weighting not in WEIGHTINGS:
            raise InvalidConfig(f"unknown weighting {self.weighting!r}")
        if self.mode is not None and self.mode not in MODES:
            raise InvalidConfig(f"unknown mode {self.mode!r}")
        if self.count < 0:
            raise InvalidConfig("count must be >= 0")
        if not 1 <= self.n_min <= self.n_max:
            raise InvalidConfig("need 1 <= n_min <= n_max")
        if self.tau_max < 1:
            raise InvalidConfig("tau_max must be >= 1")
        if self.cost_max < 0:
            raise InvalidConfig("cost_max must be >= 0")
        if self.m is not None and self.family == "random-connected":
            if self.n_min != self.n_max:
                raise InvalidConfig("a fixed m needs n_min == n_max")
            n = self.n_min
            if not n - 1 <= self.m <= n * (n - 1) // 2:
                raise InvalidConfig(f"m={self.m} impossible for a connected simple graph on {n} vertices")

    def as_dict(self) -> dict:
        d = asdict(self)
        d["tau_max"] = str(self.tau_max)
        d["cost_max"] = str(self.cost_max)
        return d


@dataclass(frozen=True)
class Instance:
    index: int
    family: str
    graph: Graph
    weights: EdgeWeights
    costs: CostFunction
    target: int
    name: str = ""
    expected: tuple | None = None


def _rng(config: CampaignConfig, index: int) -> np.random.Generator:
    return np.random.default_rng([config.seed, index])


def random_tree_edges(n: int, rng: np.random.Generator) -> list:
    """Uniform attachment on a random vertex order."""
    order = rng.permutation(n)
    return [(int(order[i]), int(order[rng.integers(0, i)])) for i in range(1, n)]


def random_connected_edges(n: int, m: int, rng: np.random.Generator) -> list:
    edges = random_tree_edges(n, rng)
    present = {(min(u, v), max(u, v)) for u, v in edges}
    missing = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in present]
    extra = m - (n - 1)
    picks = rng.choice(len(missing), size=extra, replace=False) if extra > 0 else []
    return edges + [missing[int(i)] for i in sorted(picks)]


def _weights(g: Graph, config: CampaignConfig, index: int, rng) -> EdgeWeights:
    unit = config.weighting == "unit" or (config.weighting == "mixed" and index % 2 == 0)
    if unit or config.tau_max == 1:
        return EdgeWeights.constant(g, 1)
    log_top = math.log(config.tau_max)
    vals = []
    for _ in range(g.m):
        w = Fraction(round(math.exp(rng.uniform(0.0, log_top)) * WEIGHT_DENOMINATOR), WEIGHT_DENOMINATOR)
        vals.append(min(max(w, Fraction(1)), config.tau_max))
    return EdgeWeights(g, vals)


def _costs(g: Graph, config: CampaignConfig, rng) -> CostFunction:
    top = int(config.cost_max * COST_DENOMINATOR)
    return CostFunction(g, [Fraction(int(rng.integers(0, top + 1)), COST_DENOMINATOR) for _ in range(g.m)])


def generate_instance(config: CampaignConfig, index: int) -> Instance:
    """Instance number ``index`` of ``config``; deterministic per (seed, index)."""
    if config.family == "fixture":
        fixtures = all_fixtures()
        if not 0 <= index < len(fixtures):
            raise InvalidConfig(f"fixture index {index} out of range 0..{len(fixtures) - 1}")
        fx = fixtures[index]
        g = fx.graph
        inst = Instance(index, "fixture", g, EdgeWeights.constant(g, 1), CostFunction.constant(g, 1),
                        fx.target, fx.name, fx.hitting)
        return _to_mode(inst, config.mode)
    rng = _rng(config, index)
    n = int(rng.integers(config.n_min, config.n_max + 1))
    if config.family == "path":
        if config.m is not None:
            n = config.m + 1
        g = Graph(n, tuple((k, k + 1) for k in range(n - 1)))
    elif config.family == "random-tree":
        g = Graph(n, tuple(random_tree_edges(n, rng)))
    else:
        top = n * (n - 1) // 2
        m = config.m if config.m is not None else int(
            rng.integers(n - 1, min(top, n - 1 + config.extra_max) + 1))
        g = Graph(n, tuple(random_connected_edges(n, m, rng)))
    weights = _weights(g, config, index, rng)
    costs = _costs(g, config, rng)
    target = int(rng.integers(0, n))
    inst = Instance(index, config.family, g, weights, costs, target, f"{config.family}-{index}")
    return _to_mode(inst, config.mode)


def _to_mode(inst: Instance, mode):
    if mode != FLOAT:
        return inst
    return Instance(inst.index, inst.family, inst.graph, inst.weights.as_mode(FLOAT),
                    inst.costs.as_mode(FLOAT), inst.target, inst.name, inst.expected)


def instance_count(config: CampaignConfig) -> int:
    return len(all_fixtures()) if config.family == "fixture" else config.count
