"""Synthetic instances for the benchmark harness.

The clustered family places Gaussian demand clusters far apart, one
facility at each cluster center and a few decoy facilities around it.
`synth_noncost` replaces opening costs to produce non-uniform-cost variants.
"""
from __future__ import annotations

import numpy as np

from .errors import ConfigurationError
from .instance import OnlineInstance
from .metric import EuclideanSpace, FacilityUniverse

COST_MODELS = ("uniform", "distance", "log-uniform")


def clustered_instance(n: int, clusters: int, seed=None, *, spread: float = 1.0,
                       separation: float = 100.0, center_cost: float = 10.0,
                       decoys: int = 2, decoy_cost=(1.0, 40.0), decoy_radius=(2.0, 6.0),
                       dim: int = 2, shuffle: bool = True, name: str | None = None) -> OnlineInstance:
    """Gaussian clusters with a facility at every center plus `decoys` per cluster.

    Decoys sit at a uniform distance in `decoy_radius` (in units of `spread`)
    from their center, with cost drawn uniformly from the `decoy_cost` values.
    Returns an instance whose point universe is demands followed by facilities.
    """
    if n < 1 or clusters < 1:
        raise ConfigurationError("need at least one demand and one cluster")
    rng = np.random.default_rng(seed)
    centers = _spaced_centers(rng, clusters, separation, dim)
    sizes = rng.multinomial(n - clusters, np.full(clusters, 1.0 / clusters)) + 1
    label = np.repeat(np.arange(clusters), sizes)
    pts = centers[label] + rng.normal(scale=spread, size=(n, dim))
    if shuffle:
        pts = pts[rng.permutation(n)]

    fac, cost = [], []
    for c in centers:
        fac.append(c)
        cost.append(center_cost)
        for _ in range(decoys):
            u = rng.normal(size=dim)
            u /= np.linalg.norm(u)
            fac.append(c + u * spread * rng.uniform(*decoy_radius))
            cost.append(float(rng.choice(np.asarray(decoy_cost, dtype=float))))
    coords = np.vstack([pts, np.asarray(fac)])
    universe = FacilityUniverse(np.arange(n, n + len(fac)), cost)
    return OnlineInstance(EuclideanSpace(coords), universe, np.arange(n),
                          name or f"clusters{clusters}_n{n}_s{seed}")


def _spaced_centers(rng, k, separation, dim):
    # rejection sampling in a box just large enough to hold k well-separated centers
    side = separation * max(2.0, np.ceil(k ** (1.0 / dim)) * 1.5)
    centers = []
    while len(centers) < k:
        c = rng.uniform(0, side, size=dim)
        if all(np.linalg.norm(c - o) >= separation for o in centers):
            centers.append(c)
    return np.asarray(centers)


def point_cloud_instance(n: int, clusters: int, seed=None, *, spread: float = 1.0,
                         separation: float = 10.0, cost: float = 1.0, dim: int = 2,
                         name: str | None = None) -> OnlineInstance:
    """Clustered points where every demand location is also a facility.

    This mirrors datasets in which facilities may open at any data point.
    """
    rng = np.random.default_rng(seed)
    centers = _spaced_centers(rng, clusters, separation, dim)
    label = rng.integers(clusters, size=n)
    pts = centers[label] + rng.normal(scale=spread, size=(n, dim))
    universe = FacilityUniverse.uniform(np.arange(n), cost)
    return OnlineInstance(EuclideanSpace(pts), universe, np.arange(n),
                          name or f"cloud{clusters}_n{n}_s{seed}")


def scattered_sites_instance(n: int, clusters: int, seed=None, *, sites: int = 4,
                             spread: float = 1.0, separation: float = 20.0, dim: int = 2,
                             name: str | None = None) -> OnlineInstance:
    """Gaussian demand clusters with facility sites scattered over the bounding box.

    `sites * clusters` facilities are placed uniformly in the demands' bounding
    box (padded by 2 spread), plus one site near each cluster center. All
    costs are 1; pair with `synth_noncost` for the non-uniform variant.
    """
    if n < 1 or clusters < 1:
        raise ConfigurationError("need at least one demand and one cluster")
    rng = np.random.default_rng(seed)
    centers = _spaced_centers(rng, clusters, separation, dim)
    label = rng.integers(clusters, size=n)
    pts = centers[label] + rng.normal(scale=spread, size=(n, dim))
    lo, hi = pts.min(axis=0) - 2 * spread, pts.max(axis=0) + 2 * spread
    fac = np.vstack([rng.uniform(lo, hi, size=(sites * clusters, dim)),
                     centers + rng.normal(scale=0.5 * spread, size=(clusters, dim))])
    universe = FacilityUniverse.uniform(np.arange(n, n + len(fac)), 1.0)
    return OnlineInstance(EuclideanSpace(np.vstack([pts, fac])), universe, np.arange(n),
                          name or f"sites{clusters}_n{n}_s{seed}")


def synth_noncost(inst: OnlineInstance, model: str = "log-uniform", seed=None, *,
                  c: float = 1.0, levels: int = 4, base: float = 1.0) -> FacilityUniverse:
    """Replace facility opening costs.

    uniform      every facility costs `c`
    log-uniform  base * 2^U with U uniform on [0, levels); normalized costs
                 then fall in {1, 2, ..., 2^(levels-1)}
    distance     base * (1 + d(f, m_f) / s), where m_f is the centroid of the
                 k = n / |F| demands nearest to f and s is the mean of those
                 distances; facilities at the heart of a cluster are cheapest
    """
    m = len(inst.universe)
    if model == "uniform":
        raw = np.full(m, float(c))
    elif model == "log-uniform":
        if levels < 1:
            raise ConfigurationError("levels must be >= 1")
        rng = np.random.default_rng(seed)
        raw = base * 2.0 ** rng.uniform(0, levels, size=m)
    elif model == "distance":
        if not isinstance(inst.space, EuclideanSpace):
            raise ConfigurationError("the distance cost model needs euclidean coordinates")
        k = max(1, inst.n // m)
        D = inst.dist_matrix
        coords = inst.space.coords
        off = np.empty(m)
        for f in range(m):
            near = np.argsort(D[:, f], kind="stable")[:k]
            centroid = coords[inst.demands[near]].mean(axis=0)
            off[f] = np.linalg.norm(coords[inst.universe.points[f]] - centroid)
        s = off.mean() or 1.0
        raw = base * (1.0 + off / s)
    else:
        raise ConfigurationError(f"unknown cost model {model!r}; choose from {COST_MODELS}")
    return inst.universe.with_costs(raw)
