"""The Meyerson step: class-wise nearest facilities and the randomized opening rule."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigurationError
from .metric import INF, FacilityUniverse
from .state import MEY, RunState


@dataclass
class MeyStepTrace:
    delta: list[float]          # delta_0 .. delta_L
    p: list[float]              # p_1 .. p_L
    candidates: list[int]       # f_1 .. f_L
    opened: Optional[int]
    connected_to: int
    connect_cost: float
    returned_cost: float


def class_nearest(dists: np.ndarray, is_open: np.ndarray, universe: FacilityUniverse):
    """f_k = argmin over F u G_k of d(x, .) for k = 1..L, and delta_0..delta_L.

    Ties go to the smaller distance, then the smaller cost class, then the
    smaller facility index.
    """
    order = universe.class_order
    bounds = universe.class_bounds
    d_ord = dists[order]
    open_ord = is_open[order]
    if open_ord.any():
        open_pos = int(np.argmin(np.where(open_ord, d_ord, INF)))
        delta0 = float(d_ord[open_pos])
    else:
        open_pos, delta0 = -1, INF

    deltas = [delta0]
    cands = []
    best_pos, best_d = -1, INF
    for k in range(1, universe.L + 1):
        lo, hi = bounds[k - 1], bounds[k]
        if hi > lo:
            j = lo + int(np.argmin(d_ord[lo:hi]))
            if d_ord[j] < best_d:
                best_pos, best_d = j, float(d_ord[j])
        pos, d = best_pos, best_d
        if open_pos >= 0 and (delta0 < d or (delta0 == d and open_pos < pos)):
            pos, d = open_pos, delta0
        cands.append(int(order[pos]))
        deltas.append(d)
    return cands, deltas


def opening_probabilities(deltas, unit: float = 1.0) -> list[float]:
    """p_k = (delta_{k-1} - delta_k) / (unit * 2^k); infinite when delta_0 is."""
    return [(deltas[k - 1] - deltas[k]) / (unit * 2.0 ** k) for k in range(1, len(deltas))]


def select_class(p, r: float) -> Optional[int]:
    """The 1-based i with r in [s_{i+1}, s_i), s_k = sum_{j>=k} p_j, s_{L+1} = 0.

    Returns None when r >= s_1, i.e. nothing opens.
    """
    s = 0.0
    # walk from the top class down: the first suffix sum exceeding r identifies i
    for i in range(len(p), 0, -1):
        s += p[i - 1]
        if r < s:
            return i
    return None


def mey_step(dists, state: RunState, universe: FacilityUniverse, rng: np.random.Generator) -> MeyStepTrace:
    """Serve one demand with the Meyerson rule.

    `dists` holds d(x, f) for every facility f. Opens at most one facility,
    connects x to its nearest open facility and returns the step's cost
    (connection plus rounded opening cost), which is the Pred budget.
    """
    if len(universe) == 0:
        raise ConfigurationError("empty facility universe")
    dists = np.asarray(dists, dtype=float)
    cands, deltas = class_nearest(dists, state.is_open, universe)
    p = opening_probabilities(deltas, universe.scale)
    i = select_class(p, float(rng.random()))
    opened = None
    open_cost = 0.0
    if i is not None:
        f = cands[i - 1]
        if state.open(f, MEY):
            opened = f
            open_cost = float(universe.alg_cost[f])
    connected_to, connect_cost = nearest_open(dists, state.is_open)
    return MeyStepTrace(deltas, p, cands, opened, connected_to, connect_cost, connect_cost + open_cost)


def nearest_open(dists, is_open) -> tuple[int, float]:
    """Nearest open facility (lowest index on ties) and its distance."""
    masked = np.where(is_open, dists, INF)
    f = int(np.argmin(masked))
    d = float(masked[f])
    if math.isinf(d):
        raise RuntimeError("no open facility to connect to")
    return f, d
