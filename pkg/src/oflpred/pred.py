"""The Prediction step: a budgeted loop opening facilities in shrinking balls
around the (calibrated) prediction."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .metric import INF, FacilityUniverse
from .state import PRED, RunState


@dataclass
class PredStepTrace:
    opened: list[int] = field(default_factory=list)
    adopted: list[int] = field(default_factory=list)
    fractional_candidate: Optional[tuple[int, float]] = None
    fractional_opened: bool = False
    spent: float = 0.0
    stop: str = "budget"        # budget | already_open | no_candidate


def best_standalone(x_dists, universe: FacilityUniverse) -> int:
    """f'_x = argmin_f d(x, f) + w(f); ties by distance, cost class, index."""
    w = universe.alg_cost
    total = x_dists + w
    n = len(total)
    keys = np.lexsort((np.arange(n), universe.class_of, x_dists, total))
    return int(keys[0])


def calibrate(x_dists, pred: int, universe: FacilityUniverse) -> int:
    """Replace a far prediction by f'_x when d(x, pred) >= 2 d(x, f'_x) + w(f'_x)."""
    x_dists = np.asarray(x_dists, dtype=float)
    f = best_standalone(x_dists, universe)
    if x_dists[pred] >= 2.0 * x_dists[f] + universe.alg_cost[f]:
        return f
    return int(pred)


def _cheapest_within(pred_dists, r, cost) -> int:
    c = np.where(pred_dists <= r, cost, INF)
    cmin = c.min()
    if cmin == INF:
        return -1
    # cheapest, then nearest to pred, then lowest index (argmin takes the first)
    return int(np.argmin(np.where(c == cmin, pred_dists, INF)))


REOPEN_POLICIES = ("stop", "adopt", "charge")


def pred_step(pred_dists, q: float, state: RunState, universe: FacilityUniverse,
              rng: np.random.Generator, reopen: str = "adopt") -> PredStepTrace:
    """Spend budget `q` opening facilities near the prediction.

    `pred_dists` holds d(pred, f) for every facility f. Each round takes the
    radius r = d(pred, F_P) / 2 and the cheapest facility within r (nearest
    to pred on ties). While the budget covers it, open and pay; the final
    unaffordable candidate is opened with probability q / w, so the expected
    spend equals q. Stops without a fractional draw if the ball is empty or
    the candidate is already in F_P (only possible at radius 0).

    A candidate already opened by the Meyerson step is handled per `reopen`:
    "stop" ends the step; "adopt" counts it toward F_P at no charge, which
    halves the radius; "charge" does the same but deducts its cost from the
    budget as the plain loop would.
    """
    pred_dists = np.asarray(pred_dists, dtype=float)
    cost = universe.alg_cost
    trace = PredStepTrace()
    q = float(q)
    while True:
        anchors = state.pred_radius_set
        r = 0.5 * float(pred_dists[anchors].min()) if anchors else INF
        f = _cheapest_within(pred_dists, r, cost)
        if f < 0:
            trace.stop = "no_candidate"
            return trace
        w = float(cost[f])
        if state.is_open[f]:
            if reopen == "stop" or f in state.pred_anchor:
                trace.stop = "already_open"
                return trace
            if reopen == "charge":
                if q < w:
                    break
                q -= w
            state.pred_anchor.add(f)
            state.pred_radius_set.append(f)
            trace.adopted.append(f)
            continue
        if q < w:
            break
        state.open(f, PRED)
        trace.opened.append(f)
        trace.spent += w
        q -= w
    prob = q / w
    if state.is_open[f]:
        # "charge" policy ran out of budget on an open facility; nothing left to open
        trace.stop = "already_open"
        return trace
    trace.fractional_candidate = (f, prob)
    # a zero-probability opening needs no draw; keeps the stream aligned with plain Meyerson
    if prob > 0 and rng.random() < prob:
        state.open(f, PRED)
        trace.fractional_opened = True
        trace.spent += w
    return trace
