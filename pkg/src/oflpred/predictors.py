"""Prediction generators: controlled-error synthetic predictions and the simple
retraining predictor."""
from __future__ import annotations

import numpy as np

from .errors import ConfigurationError
from .instance import OnlineInstance, PredictionStream
from .offline import OfflineSolution, mp_solve

RETRAIN_POLICIES = ("doubling", "never")


def annulus_candidates(inst: OnlineInstance, center: int, eta: float) -> np.ndarray:
    """Facilities f with eta/2 <= d(f, center) <= eta."""
    d = inst.facility_dist[center]
    return np.flatnonzero((d >= eta / 2) & (d <= eta))


def controlled_predictions(inst: OnlineInstance, offline: OfflineSolution, eta_target: float,
                           seed=None) -> PredictionStream:
    """For each demand, a uniformly random facility in the annulus
    [eta/2, eta] around its offline facility; the offline facility itself
    when the annulus is empty. Max error is at most `eta_target` by construction.
    """
    if not eta_target > 0:
        raise ConfigurationError("eta_target must be positive")
    rng = np.random.default_rng(seed)
    cache: dict[int, np.ndarray] = {}
    out = np.empty(inst.n, dtype=np.intp)
    for i, center in enumerate(offline.opt_of):
        center = int(center)
        cands = cache.get(center)
        if cands is None:
            cands = cache[center] = annulus_candidates(inst, center, eta_target)
        out[i] = cands[rng.integers(len(cands))] if len(cands) else center
    return PredictionStream(out)


def random_predictions(inst: OnlineInstance, seed=None) -> PredictionStream:
    """Uniformly random facility per demand (uninformative predictions)."""
    rng = np.random.default_rng(seed)
    return PredictionStream(rng.integers(len(inst.universe), size=inst.n))


def nearest_in(inst: OnlineInstance, point: int, open_set) -> int:
    cols = np.asarray(open_set, dtype=np.intp)
    d = inst.space.distances(point, inst.universe.points[cols])
    return int(cols[int(np.argmin(d))])


class SimplePredictor:
    """Predict the nearest facility of an MP solution on train plus seen test data.

    Retraining reruns the MP solver from scratch. With the doubling policy it
    happens whenever the number of seen test demands has doubled since the
    last retrain (after 1, 2, 4, ... demands).
    """

    def __init__(self, train: OnlineInstance, retrain_policy: str = "doubling"):
        if train.n == 0:
            raise ConfigurationError("simple predictor needs a nonempty training set")
        if retrain_policy not in RETRAIN_POLICIES:
            raise ConfigurationError(f"unknown retrain policy {retrain_policy!r}")
        self.train = train
        self.policy = retrain_policy
        self.seen: list[int] = []
        self.next_retrain = 1
        self.retrains = 0
        self.solution = mp_solve(train).open_set

    def predict(self, point: int) -> int:
        return nearest_in(self.train, point, self.solution)

    def observe(self, point: int) -> None:
        self.seen.append(int(point))
        if self.policy == "doubling" and len(self.seen) >= self.next_retrain:
            self.next_retrain = 2 * len(self.seen)
            data = np.concatenate([self.train.demands, np.asarray(self.seen, dtype=np.intp)])
            self.solution = mp_solve(self.train.with_demands(data)).open_set
            self.retrains += 1


def simple_predictor(train: OnlineInstance, test_stream, retrain_policy: str = "doubling") -> PredictionStream:
    """Predictions for `test_stream` (point indices in arrival order).

    The prediction for the i-th test demand only sees train and test demands
    before i.
    """
    if isinstance(test_stream, OnlineInstance):
        test_stream = test_stream.demands
    pred = SimplePredictor(train, retrain_policy)
    out = []
    for x in test_stream:
        out.append(pred.predict(int(x)))
        pred.observe(int(x))
    return PredictionStream(out)
