import itertools

import numpy as np
import pytest

from oflpred.errors import ConfigurationError
from oflpred.offline import brute_force, evaluate, mp_radius, mp_solve

from helpers import line_instance, random_instance


@pytest.mark.parametrize("w,dists,r", [(4, [0, 1, 2], 7 / 3), (1, [0], 1.0), (1, [5], 6.0),
                                       (1, [0, 10], 1.0), (3, [1, 1, 1], 2.0)])
def test_mp_radius(w, dists, r):
    got = mp_radius(w, dists)
    assert got == pytest.approx(r)
    assert sum(max(0.0, got - d) for d in dists) == pytest.approx(w)


def test_single_facility():
    inst = line_instance([0, 1, 2], [5])
    sol = mp_solve(inst)
    assert sol.open_set == (0,)
    assert sol.cost == 1 + 5 + 4 + 3


def test_colocated_facilities():
    inst = line_instance([0, 0.5], [0, 0], [1.0, 2.0])
    sol = mp_solve(inst)
    assert sol.open_set == (0,)


def _exhaustive(inst):
    m = len(inst.universe)
    best = np.inf
    for k in range(1, m + 1):
        for S in itertools.combinations(range(m), k):
            best = min(best, evaluate(inst, S).cost)
    return best


def test_brute_force_matches_exhaustive():
    rng = np.random.default_rng(2)
    for _ in range(20):
        inst = random_instance(rng, int(rng.integers(1, 9)), int(rng.integers(1, 7)))
        assert brute_force(inst).cost == pytest.approx(_exhaustive(inst))


def test_brute_force_split_path():
    # more than 10 facilities exercises the high/low bit split
    rng = np.random.default_rng(3)
    inst = random_instance(rng, 10, 12)
    assert brute_force(inst).cost == pytest.approx(_exhaustive(inst))


def test_brute_force_dominance():
    inst = line_instance([0, 0, 0], [0, 50], [1.0, 100.0])
    assert brute_force(inst).open_set == (0,)


def test_brute_force_limit():
    inst = line_instance([0], list(range(21)))
    with pytest.raises(ConfigurationError):
        brute_force(inst)


def test_mp_within_three():
    rng = np.random.default_rng(4)
    inst = random_instance(rng, 8, 4)
    bf, mp = brute_force(inst), mp_solve(inst)
    assert bf.cost <= mp.cost + 1e-9 <= 3 * bf.cost + 1e-9


def test_evaluate_accounting():
    inst = line_instance([0, 3, 10], [1, 8], [2.0, 3.0])
    sol = evaluate(inst, [1, 0])
    assert sol.open_set == (0, 1)
    assert list(sol.assignment) == [0, 0, 1]
    assert sol.opening_cost == 5.0 and sol.connection_cost == 1 + 2 + 2
