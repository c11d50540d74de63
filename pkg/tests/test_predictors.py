import numpy as np
import pytest

from oflpred.instance import compute_errors
from oflpred.offline import evaluate, mp_solve
from oflpred.predictors import (SimplePredictor, annulus_candidates, controlled_predictions,
                                simple_predictor)
from oflpred.synthetic import clustered_instance

from helpers import line_instance


def test_annulus_membership():
    inst = line_instance([0.0], [0.0, 0.6, 0.9, 3.0])
    assert list(annulus_candidates(inst, 0, 1.0)) == [1, 2]


def test_controlled_uniform_over_annulus():
    inst = line_instance([0.0] * 400, [0.0, 0.6, 0.9, 3.0])
    off = evaluate(inst, [0])
    preds = controlled_predictions(inst, off, 1.0, seed=0)
    assert set(preds.pred) == {1, 2}
    assert 150 < np.sum(preds.pred == 1) < 250


def test_empty_annulus_falls_back():
    inst = clustered_instance(50, 2, seed=0)
    off = mp_solve(inst)
    preds = controlled_predictions(inst, off, 1e-9, seed=0)
    assert np.array_equal(preds.pred, off.opt_of)
    assert compute_errors(inst, preds, off).eta_inf == 0.0


@pytest.mark.parametrize("eta", [0.5, 3.0, 20.0, 500.0])
def test_error_bound(eta):
    inst = clustered_instance(80, 3, seed=1)
    off = mp_solve(inst)
    for seed in range(3):
        preds = controlled_predictions(inst, off, eta, seed=seed)
        assert compute_errors(inst, preds, off).eta_inf <= eta


def test_exact_hit():
    # the test demand sits on the only facility of the training solution
    inst = line_instance([0.0, 0.1, 0.0], [0.0, 30.0])
    train = inst.with_demands(inst.demands[:2])
    preds = simple_predictor(train, [2])
    assert preds[0] == 0
    assert inst.facility_dist[preds[0], 0] == 0.0


def test_never_policy_uses_train_solution():
    inst = clustered_instance(120, 3, seed=2)
    train = inst.with_demands(inst.demands[:40])
    sol = mp_solve(train).open_set
    preds = simple_predictor(train, inst.demands[40:], "never")
    D = inst.dist_matrix[40:][:, list(sol)]
    assert np.array_equal(preds.pred, np.asarray(sol)[np.argmin(D, axis=1)])


def test_doubling_schedule():
    inst = clustered_instance(60, 2, seed=3)
    p = SimplePredictor(inst.with_demands(inst.demands[:10]), "doubling")
    for x in inst.demands[10:30]:
        p.observe(int(x))
    # after 1, 2, 4, 8, 16 seen demands
    assert p.retrains == 5


def test_causality():
    inst = clustered_instance(80, 2, seed=5)
    train = inst.with_demands(inst.demands[:20])
    a = simple_predictor(train, inst.demands[20:])
    changed = np.concatenate([inst.demands[20:50], inst.demands[20:50][::-1]])
    b = simple_predictor(train, changed)
    # predictions for the shared prefix cannot see the differing suffix
    assert np.array_equal(a.pred[:30], b.pred[:30])
