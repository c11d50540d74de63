"""Offline benchmarks: a Mettu-Plaxton style 3-approximation and exact enumeration."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ValidationError
from .instance import OnlineInstance

BRUTE_FORCE_MAX_FACILITIES = 20


@dataclass(frozen=True)
class OfflineSolution:
    open_set: tuple[int, ...]
    assignment: np.ndarray
    cost: float
    opening_cost: float
    connection_cost: float

    @property
    def opt_of(self) -> np.ndarray:
        """Nearest open facility per demand (lowest index on ties)."""
        return self.assignment


def evaluate(inst: OnlineInstance, open_set) -> OfflineSolution:
    """Assign each demand to its nearest facility in `open_set` and price the result."""
    open_set = tuple(sorted(int(f) for f in set(open_set)))
    if not open_set:
        raise ValidationError("an offline solution needs at least one open facility")
    cols = np.asarray(open_set, dtype=np.intp)
    if inst.n:
        sub = inst.dist_matrix[:, cols]
        # argmin returns the first minimum, i.e. the lowest facility index
        pick = np.argmin(sub, axis=1)
        assignment = cols[pick]
        connection = float(sub[np.arange(inst.n), pick].sum())
    else:
        assignment = np.zeros(0, dtype=np.intp)
        connection = 0.0
    assignment.setflags(write=False)
    opening = float(inst.universe.raw_cost[cols].sum())
    return OfflineSolution(open_set, assignment, opening + connection, opening, connection)


def mp_radius(cost: float, distances) -> float:
    """The r >= 0 with sum_x max(0, r - d_x) = cost.

    The left side is continuous, piecewise linear and strictly increasing
    once r exceeds the smallest distance, so the root is found on the
    segment where exactly j of the sorted distances lie below r.
    """
    d = np.sort(np.asarray(distances, dtype=float))
    if d.size == 0:
        raise ValidationError("mp_radius needs at least one demand")
    if not cost > 0:
        raise ValidationError("opening cost must be positive")
    j = np.arange(1, d.size + 1)
    r = (cost + np.cumsum(d)) / j
    nxt = np.append(d[1:], np.inf)
    k = int(np.argmax(r <= nxt))
    return float(r[k])


def mp_radii(inst: OnlineInstance) -> np.ndarray:
    D = inst.dist_matrix
    w = inst.universe.raw_cost
    return np.array([mp_radius(w[f], D[:, f]) for f in range(len(inst.universe))])


def mp_solve(inst: OnlineInstance) -> OfflineSolution:
    """Greedy by radius: take f unless an already chosen f' lies within 2 r_f."""
    if inst.n == 0:
        raise ValidationError("mp_solve needs at least one demand")
    radii = mp_radii(inst)
    order = np.lexsort((np.arange(len(radii)), radii))
    FD = inst.facility_dist
    chosen: list[int] = []
    for f in order:
        if all(FD[f, g] > 2.0 * radii[f] for g in chosen):
            chosen.append(int(f))
    return evaluate(inst, chosen)


def brute_force(inst: OnlineInstance) -> OfflineSolution:
    """Exact optimum by enumerating every nonempty facility subset."""
    m = len(inst.universe)
    if m > BRUTE_FORCE_MAX_FACILITIES:
        raise ConfigurationError(
            f"brute_force enumerates 2^{m} subsets; limit is {BRUTE_FORCE_MAX_FACILITIES} facilities")
    if inst.n == 0:
        raise ValidationError("brute_force needs at least one demand")
    D = inst.dist_matrix.T  # (m, n)
    w = inst.universe.raw_cost
    lo_bits = min(m, 10)
    hi_bits = m - lo_bits

    # min distance per demand for every subset of the low facilities (row 0 = empty set)
    n_lo = 1 << lo_bits
    lo_min = np.full((n_lo, inst.n), np.inf)
    lo_cost = np.zeros(n_lo)
    for mask in range(1, n_lo):
        b = (mask & -mask).bit_length() - 1
        prev = mask & (mask - 1)
        lo_min[mask] = np.minimum(lo_min[prev], D[b])
        lo_cost[mask] = lo_cost[prev] + w[b]

    best_cost, best_mask = np.inf, 0
    hi_min = np.full(inst.n, np.inf)
    hi_cost = 0.0
    hi_cache = {0: (hi_min, hi_cost)}
    for hmask in range(1 << hi_bits):
        if hmask:
            b = (hmask & -hmask).bit_length() - 1
            pm, pc = hi_cache[hmask & (hmask - 1)]
            hi_min = np.minimum(pm, D[lo_bits + b])
            hi_cost = pc + w[lo_bits + b]
            hi_cache[hmask] = (hi_min, hi_cost)
        totals = np.minimum(lo_min, hi_min).sum(axis=1) + lo_cost + hi_cost
        if hmask == 0:
            totals[0] = np.inf
        k = int(np.argmin(totals))
        if totals[k] < best_cost:
            best_cost, best_mask = float(totals[k]), (hmask << lo_bits) | k
    chosen = [f for f in range(m) if best_mask >> f & 1]
    return evaluate(inst, chosen)
