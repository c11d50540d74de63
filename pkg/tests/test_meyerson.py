import math

import numpy as np
import pytest

from oflpred.meyerson import (class_nearest, mey_step, nearest_open, opening_probabilities,
                              select_class)
from oflpred.metric import FacilityUniverse
from oflpred.state import MEY, PRED, RunState


def test_first_demand_always_opens():
    # one facility of cost 1 at distance 2, nothing open yet
    uni = FacilityUniverse([1], [1.0])
    state = RunState(1)
    tr = mey_step(np.array([2.0]), state, uni, np.random.default_rng(0))
    assert tr.delta[0] == math.inf and tr.p[0] == math.inf
    assert tr.opened == 0
    assert tr.returned_cost == 3.0


def test_probability_formula():
    # open O at 5 (cost 1), A at 3 (cost 1), B at 4 (cost 2)
    uni = FacilityUniverse([0, 1, 2], [1.0, 1.0, 2.0])
    d = np.array([5.0, 3.0, 4.0])
    state = RunState(3)
    state.open(0, MEY)
    cands, deltas = class_nearest(d, state.is_open, uni)
    assert deltas == [5.0, 3.0, 3.0]
    assert cands == [1, 1]
    assert opening_probabilities(deltas) == [1.0, 0.0]
    rng = np.random.default_rng(7)
    for _ in range(50):
        s = state.copy()
        assert mey_step(d, s, uni, rng).opened == 1


def test_colocated_with_open_facility():
    uni = FacilityUniverse([0, 1], [1.0, 2.0])
    state = RunState(2)
    state.open(0, MEY)
    tr = mey_step(np.array([0.0, 3.0]), state, uni, np.random.default_rng(0))
    assert tr.p == [0.0, 0.0]
    assert tr.opened is None and tr.returned_cost == 0.0


def test_opening_probability_scale():
    # costs 3 and 6 normalize to classes 1, 2 with unit 3
    assert opening_probabilities([4.0, 1.0, 0.0], unit=3.0) == [0.5, 1.0 / 12]


@pytest.mark.parametrize("p,r,expected", [
    ([0.1, 0.075, 0.05], 0.0, 3),
    ([0.1, 0.075, 0.05], 0.0499, 3),
    ([0.1, 0.075, 0.05], 0.05, 2),
    ([0.1, 0.075, 0.05], 0.124, 2),
    ([0.1, 0.075, 0.05], 0.125, 1),
    ([0.1, 0.075, 0.05], 0.2249, 1),
    ([0.1, 0.075, 0.05], 0.2251, None),
    ([0.75, 0.375, 0.125], 0.9999, 1),
    ([math.inf, 0.0], 0.3, 1),
])
def test_select_class(p, r, expected):
    assert select_class(p, r) == expected


def test_mey_step_uses_select_class():
    # mey_step's choice must equal select_class on the same uniform draw
    uni = FacilityUniverse([0, 1, 2, 3], [1, 1, 2, 4])
    d = np.array([1.0, 0.8, 0.5, 0.1])
    base = RunState(4)
    base.open(0, MEY)
    rng_a, rng_b = np.random.default_rng(11), np.random.default_rng(11)
    p = mey_step(d, base.copy(), uni, np.random.default_rng(0)).p
    for _ in range(2000):
        tr = mey_step(d, base.copy(), uni, rng_a)
        i = select_class(p, rng_b.random())
        assert tr.opened == (None if i is None else tr.candidates[i - 1])


def test_class_ties():
    # equal distances: lower class first, then lower index
    uni = FacilityUniverse([0, 1, 2], [2.0, 1.0, 1.0])
    cands, deltas = class_nearest(np.array([1.0, 1.0, 1.0]), np.zeros(3, bool), uni)
    assert cands == [1, 1]
    state = RunState(3)
    state.open(2, PRED)
    cands, _ = class_nearest(np.array([1.0, 1.0, 1.0]), state.is_open, uni)
    # open facility 2 ties with class-1 facility 1; same class, lower index wins
    assert cands == [1, 1]


def test_nearest_open_lowest_index():
    assert nearest_open(np.array([2.0, 1.0, 1.0]), np.array([True, True, True])) == (1, 1.0)
    with pytest.raises(RuntimeError):
        nearest_open(np.array([1.0]), np.array([False]))
