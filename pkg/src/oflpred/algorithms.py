"""Online runs: Prediction-augmented Meyerson, plain Meyerson and Follow-Predict."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .instance import OnlineInstance, as_stream
from .meyerson import mey_step
from .pred import calibrate, pred_step
from .state import FOLLOW, MEY, PRED, DemandRecord, RunState

__all__ = ["CostSummary", "RunState", "run_pam", "run_meyerson", "run_follow_predict",
           "recompute_objective", "ALGORITHMS"]


@dataclass(frozen=True)
class CostSummary:
    total_opening: float
    total_connection: float
    breakdown: dict = field(default_factory=dict)

    @property
    def total(self) -> float:
        return self.total_opening + self.total_connection


def _summarize(inst: OnlineInstance, state: RunState) -> CostSummary:
    raw = inst.universe.raw_cost
    opening = float(sum(raw[f] for f in state.open_order))
    connection = float(sum(r.connection for r in state.records))
    by = {MEY: 0.0, PRED: 0.0, FOLLOW: 0.0}
    for f, who in state.opened_by.items():
        by[who] += float(raw[f])
    breakdown = {"mey_opening": by[MEY], "pred_opening": by[PRED], "follow_opening": by[FOLLOW],
                 "n_open": len(state.open_order)}
    return CostSummary(opening, connection, breakdown)


def recompute_objective(inst: OnlineInstance, state: RunState) -> float:
    """sum_{f in F} w(f) + sum_i d(x_i, f_i), from the final state alone."""
    raw = inst.universe.raw_cost
    total = float(sum(raw[f] for f in state.F))
    for i, rec in enumerate(state.records):
        total += float(inst.dist_matrix[i, rec.facility])
    return total


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def run_pam(inst: OnlineInstance, preds, seed=None, budget_scale: float = 1.0,
            calibrated: bool = True, reopen: str = "adopt") -> tuple[RunState, CostSummary]:
    """Prediction-augmented Meyerson.

    Per demand: calibrate the prediction, run the Meyerson step, then the
    Prediction step with the Meyerson step's cost as budget. The demand
    connects to its nearest facility as of the end of the Meyerson step.
    `budget_scale` multiplies the budget; 0 turns the run into plain Meyerson.
    """
    preds = as_stream(preds).validate(inst)
    rng = _rng(seed)
    uni = inst.universe
    state = RunState(len(uni))
    D, FD = inst.dist_matrix, inst.facility_dist
    raw = uni.raw_cost
    for i in range(inst.n):
        row = D[i]
        p = calibrate(row, preds[i], uni) if calibrated else preds[i]
        mt = mey_step(row, state, uni, rng)
        pt = pred_step(FD[p], budget_scale * mt.returned_cost, state, uni, rng, reopen)
        pred_open = pt.opened + ([pt.fractional_candidate[0]] if pt.fractional_opened else [])
        state.records.append(DemandRecord(
            demand=int(inst.demands[i]), facility=mt.connected_to, connection=mt.connect_cost,
            mey_opening=float(raw[mt.opened]) if mt.opened is not None else 0.0,
            pred_opening=float(sum(raw[f] for f in pred_open)),
            n_open=len(state.open_order)))
    return state, _summarize(inst, state)


def run_meyerson(inst: OnlineInstance, seed=None) -> tuple[RunState, CostSummary]:
    rng = _rng(seed)
    uni = inst.universe
    state = RunState(len(uni))
    D = inst.dist_matrix
    raw = uni.raw_cost
    for i in range(inst.n):
        mt = mey_step(D[i], state, uni, rng)
        state.records.append(DemandRecord(
            demand=int(inst.demands[i]), facility=mt.connected_to, connection=mt.connect_cost,
            mey_opening=float(raw[mt.opened]) if mt.opened is not None else 0.0,
            n_open=len(state.open_order)))
    return state, _summarize(inst, state)


def run_follow_predict(inst: OnlineInstance, preds, seed=None) -> tuple[RunState, CostSummary]:
    """Open every predicted facility on first sight and connect to it. `seed` is unused."""
    preds = as_stream(preds).validate(inst)
    state = RunState(len(inst.universe))
    raw = inst.universe.raw_cost
    for i in range(inst.n):
        f = preds[i]
        newly = state.open(f, FOLLOW)
        state.records.append(DemandRecord(
            demand=int(inst.demands[i]), facility=f, connection=float(inst.dist_matrix[i, f]),
            pred_opening=float(raw[f]) if newly else 0.0, n_open=len(state.open_order)))
    return state, _summarize(inst, state)


ALGORITHMS = {
    "pam": lambda inst, preds, seed: run_pam(inst, preds, seed),
    "meyerson": lambda inst, preds, seed: run_meyerson(inst, seed),
    "follow": lambda inst, preds, seed: run_follow_predict(inst, preds, seed),
}

