"""Small instance builders shared by the tests."""
import numpy as np

from oflpred.instance import OnlineInstance
from oflpred.metric import EuclideanSpace, FacilityUniverse


def line_instance(demands, facilities, costs=None, name="line"):
    """Points on the real line: demands first, then facilities."""
    demands = list(demands)
    facilities = list(facilities)
    coords = np.array(demands + facilities, dtype=float)[:, None]
    costs = [1.0] * len(facilities) if costs is None else costs
    n = len(demands)
    uni = FacilityUniverse(np.arange(n, n + len(facilities)), costs)
    return OnlineInstance(EuclideanSpace(coords), uni, np.arange(n), name)


def random_instance(rng, n_demands, n_facilities, cost_range=(1.0, 8.0), dim=2):
    coords = rng.uniform(0, 10, size=(n_demands + n_facilities, dim))
    uni = FacilityUniverse(np.arange(n_demands, n_demands + n_facilities),
                           rng.uniform(*cost_range, size=n_facilities))
    return OnlineInstance(EuclideanSpace(coords), uni, np.arange(n_demands), "random")
