"""Distance oracles and the facility universe.

Two metric spaces are supported: points in R^d under the l2 norm, and
vertices of a connected undirected graph under shortest-path distance.
Facilities carry their raw opening cost plus the normalized, rounded-down
power-of-two cost that the online algorithms operate on.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, dijkstra

from .errors import ValidationError

INF = math.inf


class MetricSpace:
    kind = "abstract"

    def __len__(self) -> int:
        raise NotImplementedError

    def _check(self, a) -> int:
        a = int(a)
        if not 0 <= a < len(self):
            raise IndexError(f"point index {a} out of range for space of size {len(self)}")
        return a

    def distance(self, a: int, b: int) -> float:
        raise NotImplementedError

    def distances(self, a: int, targets) -> np.ndarray:
        """Distances from point `a` to every point in `targets`."""
        raise NotImplementedError

    def pairwise(self, sources, targets) -> np.ndarray:
        raise NotImplementedError


class EuclideanSpace(MetricSpace):
    kind = "euclidean"

    def __init__(self, coords):
        coords = np.asarray(coords, dtype=float)
        if coords.ndim == 1:
            coords = coords[:, None]
        if coords.ndim != 2:
            raise ValidationError("coordinates must be a 2-D array")
        if not np.all(np.isfinite(coords)):
            raise ValidationError("coordinates must be finite")
        self.coords = coords
        self.coords.setflags(write=False)

    def __len__(self):
        return self.coords.shape[0]

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    def distance(self, a, b):
        a, b = self._check(a), self._check(b)
        if a == b:
            return 0.0
        return float(np.linalg.norm(self.coords[a] - self.coords[b]))

    def distances(self, a, targets):
        a = self._check(a)
        diff = self.coords[np.asarray(targets, dtype=np.intp)] - self.coords[a]
        return np.sqrt(np.einsum("ij,ij->i", diff, diff))

    def pairwise(self, sources, targets):
        A = self.coords[np.asarray(sources, dtype=np.intp)]
        B = self.coords[np.asarray(targets, dtype=np.intp)]
        diff = A[:, None, :] - B[None, :, :]
        return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


class GraphSpace(MetricSpace):
    """Shortest-path metric of a connected, undirected, nonnegatively weighted graph.

    Single-source distance rows are computed lazily and memoized per source.
    """

    kind = "graph"

    def __init__(self, n_vertices: int, edges: Iterable[tuple[int, int, float]]):
        n_vertices = int(n_vertices)
        if n_vertices <= 0:
            raise ValidationError("graph must have at least one vertex")
        weights: dict[tuple[int, int], float] = {}
        for u, v, w in edges:
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise ValidationError(f"edge ({u}, {v}) references a vertex outside [0, {n_vertices})")
            if u == v:
                raise ValidationError(f"self-loop at vertex {u}")
            if not (w >= 0 and math.isfinite(w)):
                raise ValidationError(f"edge ({u}, {v}) has invalid weight {w}")
            key = (min(u, v), max(u, v))
            if key in weights and weights[key] != w:
                raise ValidationError(
                    f"duplicate edge {key} with conflicting weights {weights[key]} and {w}"
                )
            weights[key] = w
        self.n_vertices = n_vertices
        self.edges = tuple((u, v, w) for (u, v), w in sorted(weights.items()))
        rows = [u for u, v, _ in self.edges] + [v for u, v, _ in self.edges]
        cols = [v for u, v, _ in self.edges] + [u for u, v, _ in self.edges]
        # explicit zeros in a csr matrix stay edges for csgraph
        data = [w for _, _, w in self.edges] * 2
        self._csr = csr_matrix((data, (rows, cols)), shape=(n_vertices, n_vertices))
        n_comp, _ = connected_components(self._csr, directed=False)
        if n_comp != 1:
            raise ValidationError(f"graph is disconnected ({n_comp} components)")
        self._rows: dict[int, np.ndarray] = {}
        self._lock = threading.Lock()

    def __len__(self):
        return self.n_vertices

    def row(self, a: int) -> np.ndarray:
        a = self._check(a)
        row = self._rows.get(a)
        if row is None:
            with self._lock:
                row = self._rows.get(a)
                if row is None:
                    row = dijkstra(self._csr, directed=False, indices=a)
                    row.setflags(write=False)
                    self._rows[a] = row
        return row

    def distance(self, a, b):
        return float(self.row(a)[self._check(b)])

    def distances(self, a, targets):
        return self.row(a)[np.asarray(targets, dtype=np.intp)]

    def pairwise(self, sources, targets):
        sources = np.asarray(sources, dtype=np.intp)
        targets = np.asarray(targets, dtype=np.intp)
        uniq, inv = np.unique(sources, return_inverse=True)
        block = np.stack([self.row(s)[targets] for s in uniq]) if len(uniq) else np.zeros((0, len(targets)))
        return block[inv.ravel()]


def distance(space: MetricSpace, a: int, b: int) -> float:
    return space.distance(a, b)


def distance_to_set(space: MetricSpace, x: int, S) -> float:
    """d(x, S) = min over y in S of d(x, y); infinity when S is empty."""
    S = list(S)
    if not S:
        return INF
    return float(space.distances(x, S).min())


def normalize_costs(raw: Sequence[float]) -> tuple[list[int], int]:
    """Scale costs so the minimum is 1, then round each down to a power of two.

    Returns the normalized costs and the number of cost classes L, where the
    largest normalized cost is 2^(L-1).
    """
    raw = [float(c) for c in raw]
    if not raw:
        raise ValidationError("no opening costs given")
    for c in raw:
        if not (c > 0 and math.isfinite(c)):
            raise ValidationError(f"opening costs must be positive and finite, got {c}")
    cmin = min(raw)
    exps = [_floor_log2(c / cmin) for c in raw]
    norm = [1 << e for e in exps]
    return norm, max(exps) + 1


def _floor_log2(ratio: float) -> int:
    # frexp is exact, unlike log2 near powers of two
    m, e = math.frexp(ratio)
    return max(e - 1, 0)


@dataclass(frozen=True)
class FacilityUniverse:
    """Facilities as point indices into a metric space, with their costs.

    `scale` is the minimum raw cost; `alg_cost = scale * norm_cost` is the
    rounded cost expressed in the instance's own units, which is what the
    online algorithms charge and compare against distances.
    """

    points: np.ndarray
    raw_cost: np.ndarray
    norm_cost: np.ndarray = field(init=False)
    L: int = field(init=False)
    scale: float = field(init=False)

    def __post_init__(self):
        points = np.asarray(self.points, dtype=np.intp).ravel()
        raw = np.asarray(self.raw_cost, dtype=float).ravel()
        if len(points) == 0:
            raise ValidationError("facility universe is empty")
        if len(points) != len(raw):
            raise ValidationError("points and raw_cost lengths differ")
        norm, L = normalize_costs(raw)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "raw_cost", raw)
        object.__setattr__(self, "norm_cost", np.asarray(norm, dtype=np.int64))
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "scale", float(raw.min()))
        for arr in (self.points, self.raw_cost, self.norm_cost):
            arr.setflags(write=False)
        class_of = np.log2(self.norm_cost).astype(np.int64) + 1
        # facilities sorted by (class, index): prefix up to bounds[k] is G_k
        order = np.lexsort((np.arange(len(points)), class_of))
        bounds = np.searchsorted(class_of[order], np.arange(0, L + 1), side="right")
        alg = self.scale * self.norm_cost.astype(float)
        for name, val in (("class_of", class_of), ("class_order", order),
                          ("class_bounds", bounds), ("alg_cost", alg)):
            val.setflags(write=False)
            object.__setattr__(self, name, val)

    @classmethod
    def uniform(cls, points, cost: float = 1.0) -> "FacilityUniverse":
        points = np.asarray(points, dtype=np.intp)
        return cls(points, np.full(len(points), float(cost)))

    def __len__(self):
        return len(self.points)

    def members(self, k: int) -> np.ndarray:
        """Facility indices of G_k, i.e. normalized cost at most 2^(k-1)."""
        if k <= 0:
            return np.zeros(0, dtype=np.intp)
        k = min(k, self.L)
        return np.sort(self.class_order[: self.class_bounds[k]])

    def with_costs(self, raw_cost) -> "FacilityUniverse":
        return FacilityUniverse(self.points, raw_cost)
