"""Lower-bound instances on a hierarchically well-separated binary tree.

Vertices use heap numbering: the root is 0 and vertex v has children
2v+1 and 2v+2, so the depth of v is floor(log2(v+1)). The edge from a
depth-i vertex to its child has length D / m^i. Every vertex is a facility
of cost 1 and a potential demand location.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import ConfigurationError
from .instance import OnlineInstance, PredictionStream, save_graph, save_predictions
from .metric import FacilityUniverse, GraphSpace

DEFAULT_MAX_DEMANDS = 2_000_000
_REL_TOL = 1e-12


@dataclass(frozen=True)
class HstInstanceSpec:
    m: int
    h: int
    D: float
    eta_inf: float
    seed: int = 0
    max_demands: int = DEFAULT_MAX_DEMANDS

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 2:
            raise ConfigurationError("m must be an integer >= 2")
        if int(self.h) != self.h or self.h < 0:
            raise ConfigurationError("h must be a nonnegative integer")
        if not self.D > 0:
            raise ConfigurationError("D must be positive")
        if not 0 < self.eta_inf <= 1:
            raise ConfigurationError("eta_inf must lie in (0, 1]")

    @property
    def n(self) -> int:
        return sum(self.m ** i for i in range(self.h + 1))

    def edge_length(self, depth: int) -> float:
        return self.D / self.m ** depth

    def depth_to_leaf(self, depth: int) -> float:
        """Distance from a depth-`depth` vertex down to any leaf below it."""
        return sum(self.edge_length(j) for j in range(depth, self.h))

    @property
    def h_prime(self) -> int:
        """First phase whose subtree diameter is below eta_inf."""
        for i in range(self.h + 1):
            if 2 * self.depth_to_leaf(i) < self.eta_inf:
                return i
        return self.h

    @property
    def leaf_solution_bound(self) -> float:
        """Upper bound 1 + h D m / (m - 1) on the one-leaf solution's cost."""
        return 1 + self.h * self.D * self.m / (self.m - 1)


class HstInstance(NamedTuple):
    instance: OnlineInstance
    predictions: PredictionStream
    f_star: int


def depth_of(v: int) -> int:
    return (int(v) + 1).bit_length() - 1


def tree_edges(spec: HstInstanceSpec) -> list[tuple[int, int, float]]:
    n_internal = 2 ** spec.h - 1
    return [(v, c, spec.edge_length(depth_of(v)))
            for v in range(n_internal) for c in (2 * v + 1, 2 * v + 2)]


def _root_dist(spec: HstInstanceSpec, v: int) -> float:
    return sum(spec.edge_length(j) for j in range(depth_of(v)))


def tree_distance(spec: HstInstanceSpec, u: int, v: int) -> float:
    """Closed-form distance via the lowest common ancestor."""
    a, b = int(u), int(v)
    while a != b:
        if a > b:
            a = (a - 1) // 2
        else:
            b = (b - 1) // 2
    return _root_dist(spec, u) + _root_dist(spec, v) - 2 * _root_dist(spec, a)


def generate_hst_instance(spec: HstInstanceSpec) -> HstInstance:
    """Phase i (0-based) puts m^i demands on the depth-i vertex of a random
    root-to-leaf path. The leaf at the end of the path is f*.

    A demand within eta_inf of f* is predicted to be its own vertex. Otherwise
    the prediction is the path vertex with the largest distance to f* that
    does not exceed eta_inf, so no prediction errs by more than eta_inf.
    """
    if spec.n > spec.max_demands:
        raise ConfigurationError(f"parameters give n={spec.n} demands, above the cap {spec.max_demands}")
    rng = np.random.default_rng(spec.seed)
    path = [0]
    for _ in range(spec.h):
        path.append(2 * path[-1] + 1 + int(rng.integers(2)))
    f_star = path[-1]
    to_leaf = [spec.depth_to_leaf(i) for i in range(spec.h + 1)]
    limit = spec.eta_inf * (1 + _REL_TOL)

    demands, preds = [], []
    for i, v in enumerate(path):
        if to_leaf[i] < spec.eta_inf:
            p = v
        else:
            p = path[next(j for j in range(i, spec.h + 1) if to_leaf[j] <= limit)]
        demands += [v] * spec.m ** i
        preds += [p] * spec.m ** i

    n_vertices = 2 ** (spec.h + 1) - 1
    space = GraphSpace(n_vertices, tree_edges(spec))
    universe = FacilityUniverse.uniform(np.arange(n_vertices), 1.0)
    name = f"hst_m{spec.m}_h{spec.h}_s{spec.seed}"
    inst = OnlineInstance(space, universe, demands, name)
    return HstInstance(inst, PredictionStream(preds), f_star)


def paper_parameters(n_target: int, eta_inf: float, seed: int = 0) -> HstInstanceSpec:
    """m = ln n / ln ln n (rounded, at least 2), the tallest tree with at most
    n_target demands, and D = 1/m so that m D = 1."""
    if n_target < 16:
        raise ConfigurationError("n_target must be at least 16")
    ln = math.log(n_target)
    m = max(2, math.floor(ln / math.log(ln) + 0.5))
    h, total = 0, 1
    while total + m ** (h + 1) <= n_target:
        h += 1
        total += m ** h
    return HstInstanceSpec(m=m, h=h, D=1.0 / m, eta_inf=eta_inf, seed=seed)


def scale_phase(spec: HstInstanceSpec) -> int:
    """Smallest h' with D / m^h' <= eta_inf, clamped to [0, h]."""
    h = 0
    while h < spec.h and spec.edge_length(h) > spec.eta_inf * (1 + _REL_TOL):
        h += 1
    return h


def save_hst(result: HstInstance, directory) -> dict[str, Path]:
    """Write the tree in the graph file format: edges, demands, facilities, predictions."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = {k: directory / f for k, f in (("edges", "edges.txt"), ("demands", "demands.csv"),
                                           ("facilities", "facilities.csv"),
                                           ("predictions", "predictions.txt"))}
    save_graph(result.instance, paths["edges"], paths["demands"], paths["facilities"])
    save_predictions(paths["predictions"], result.predictions)
    return paths
