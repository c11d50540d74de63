"""Online instances, prediction streams, file ingestion and prediction error."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ParseError, ValidationError
from .metric import EuclideanSpace, FacilityUniverse, GraphSpace, MetricSpace


class OnlineInstance:
    """An ordered demand sequence over a metric space with a facility universe.

    Demands and facilities are point indices into `space`. Facility-side
    distance tables are built lazily and shared by every run on the instance.
    """

    def __init__(self, space: MetricSpace, universe: FacilityUniverse, demands, name: str = "instance"):
        demands = np.asarray(demands, dtype=np.intp).ravel()
        for arr, what in ((demands, "demand"), (universe.points, "facility")):
            if len(arr) and (arr.min() < 0 or arr.max() >= len(space)):
                raise ValidationError(f"{what} index out of range for the metric space")
        demands.setflags(write=False)
        self.space = space
        self.universe = universe
        self._demands = demands
        self.name = name

    @property
    def demands(self) -> np.ndarray:
        return self._demands

    @property
    def n(self) -> int:
        return len(self._demands)

    def __len__(self):
        return self.n

    @cached_property
    def dist_matrix(self) -> np.ndarray:
        """d(x_i, f) for every demand i and facility f, shape (n, |F|)."""
        m = self.space.pairwise(self._demands, self.universe.points)
        m.setflags(write=False)
        return m

    @cached_property
    def facility_dist(self) -> np.ndarray:
        m = self.space.pairwise(self.universe.points, self.universe.points)
        m.setflags(write=False)
        return m

    def with_demands(self, demands, name=None) -> "OnlineInstance":
        return OnlineInstance(self.space, self.universe, demands, name or self.name)

    def with_universe(self, universe: FacilityUniverse, name=None) -> "OnlineInstance":
        inst = OnlineInstance(self.space, universe, self._demands, name or self.name)
        if np.array_equal(universe.points, self.universe.points):
            # distances do not depend on costs
            for attr in ("dist_matrix", "facility_dist"):
                if attr in self.__dict__:
                    inst.__dict__[attr] = self.__dict__[attr]
        return inst


@dataclass(frozen=True)
class PredictionStream:
    pred: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.pred, dtype=np.intp).ravel()
        arr.setflags(write=False)
        object.__setattr__(self, "pred", arr)

    def __len__(self):
        return len(self.pred)

    def __getitem__(self, i):
        return int(self.pred[i])

    def validate(self, inst: OnlineInstance) -> "PredictionStream":
        if len(self.pred) != inst.n:
            raise ValidationError(f"{len(self.pred)} predictions for {inst.n} demands")
        if len(self.pred) and (self.pred.min() < 0 or self.pred.max() >= len(inst.universe)):
            raise ValidationError("prediction is not a valid facility index")
        return self


@dataclass(frozen=True)
class ErrorReport:
    per_demand_error: np.ndarray

    @cached_property
    def _desc(self) -> np.ndarray:
        return np.sort(self.per_demand_error)[::-1]

    @property
    def eta_inf(self) -> float:
        return float(self._desc[0]) if len(self._desc) else 0.0

    @property
    def eta_1(self) -> float:
        return float(self.per_demand_error.sum())

    def eta_t_inf(self, t: int) -> float:
        """t-th largest error (1-based): the maximum after dropping t-1 outliers."""
        if not 1 <= t <= len(self._desc):
            raise ValueError(f"t must lie in [1, {len(self._desc)}]")
        return float(self._desc[t - 1])

    def eta_t_1(self, t: int) -> float:
        """Total error after dropping the t-1 largest errors."""
        if not 1 <= t <= len(self._desc):
            raise ValueError(f"t must lie in [1, {len(self._desc)}]")
        return float(self._desc[t - 1:].sum())


def compute_errors(inst: OnlineInstance, preds: PredictionStream, offline) -> ErrorReport:
    """Per-demand error d(pred(x_i), opt(x_i)) against an offline solution."""
    preds.validate(inst)
    opt = np.asarray(offline.opt_of, dtype=np.intp)
    if len(opt) != inst.n:
        raise ValidationError("offline solution does not cover every demand")
    err = inst.facility_dist[preds.pred, opt].astype(float)
    err.setflags(write=False)
    return ErrorReport(err)


# -- file ingestion ---------------------------------------------------------

def _read_csv_rows(path) -> list[tuple[int, list[float]]]:
    rows = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            cells = [c.strip() for c in row]
            if not cells or all(c == "" for c in cells):
                continue
            try:
                vals = [float(c) for c in cells]
            except ValueError:
                raise ParseError(path, lineno, f"non-numeric field in {row!r}") from None
            if not all(math.isfinite(v) for v in vals):
                raise ParseError(path, lineno, "non-finite value")
            rows.append((lineno, vals))
    return rows


def _vertex_id(path, lineno, value: float) -> int:
    if value < 0 or value != int(value):
        raise ParseError(path, lineno, f"invalid vertex id {value}")
    return int(value)


def _split_costs(path, rows, width: int) -> tuple[list[list[float]], list[float]]:
    first = len(rows[0][1])
    for lineno, v in rows:
        if len(v) != first or first not in (width, width + 1):
            raise ValidationError(f"{path}:{lineno}: expected {width} columns (+ optional cost) on every row")
    if first == width:
        return [v for _, v in rows], [1.0] * len(rows)
    return [v[:-1] for _, v in rows], [v[-1] for _, v in rows]


def load_euclidean(points_file, facilities_file, name=None) -> OnlineInstance:
    """Demand coordinates (arrival order) plus facility coordinates with optional cost."""
    pts = _read_csv_rows(points_file)
    if not pts:
        raise ValidationError(f"{points_file}: no demand points")
    dim = len(pts[0][1])
    for lineno, v in pts:
        if len(v) != dim:
            raise ValidationError(f"{points_file}:{lineno}: expected {dim} coordinates, got {len(v)}")
    fac = _read_csv_rows(facilities_file)
    if not fac:
        raise ValidationError(f"{facilities_file}: no facilities")
    fcoords, costs = _split_costs(facilities_file, fac, dim)
    coords = np.array([v for _, v in pts] + fcoords, dtype=float)
    space = EuclideanSpace(coords)
    n = len(pts)
    universe = FacilityUniverse(np.arange(n, n + len(fcoords)), costs)
    return OnlineInstance(space, universe, np.arange(n), name or Path(points_file).stem)


def read_edges(edges_file) -> list[tuple[int, int, float]]:
    edges = []
    with open(edges_file) as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            if len(parts) != 3:
                raise ParseError(edges_file, lineno, "expected 'u v weight'")
            try:
                u, v, w = float(parts[0]), float(parts[1]), float(parts[2])
            except ValueError:
                raise ParseError(edges_file, lineno, f"non-numeric field in {line.strip()!r}") from None
            edges.append((_vertex_id(edges_file, lineno, u), _vertex_id(edges_file, lineno, v), w))
    return edges


def load_graph(edges_file, demands_file, facilities_file, name=None) -> OnlineInstance:
    edges = read_edges(edges_file)
    if not edges:
        raise ValidationError(f"{edges_file}: no edges")
    dem_rows = _read_csv_rows(demands_file)
    if not dem_rows:
        raise ValidationError(f"{demands_file}: no demands")
    demands = []
    for lineno, v in dem_rows:
        if len(v) != 1:
            raise ParseError(demands_file, lineno, "expected a single vertex id")
        demands.append(_vertex_id(demands_file, lineno, v[0]))
    fac_rows = _read_csv_rows(facilities_file)
    if not fac_rows:
        raise ValidationError(f"{facilities_file}: no facilities")
    fverts, costs = _split_costs(facilities_file, fac_rows, 1)
    facilities = [_vertex_id(facilities_file, ln, v[0]) for (ln, _), v in zip(fac_rows, fverts)]
    n_vertices = 1 + max([max(u, v) for u, v, _ in edges] + demands + facilities)
    space = GraphSpace(n_vertices, edges)
    return OnlineInstance(space, FacilityUniverse(facilities, costs), demands,
                          name or Path(edges_file).stem)


def load_predictions(path, inst: OnlineInstance | None = None) -> PredictionStream:
    vals = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            s = line.strip()
            if not s:
                continue
            try:
                vals.append(int(s))
            except ValueError:
                raise ParseError(path, lineno, f"expected a facility index, got {s!r}") from None
    stream = PredictionStream(vals)
    return stream.validate(inst) if inst is not None else stream


def save_predictions(path, preds: PredictionStream) -> None:
    Path(path).write_text("".join(f"{int(p)}\n" for p in preds.pred))


def _fmt(x: float) -> str:
    return repr(float(x))


def save_euclidean(inst: OnlineInstance, points_file, facilities_file) -> None:
    if not isinstance(inst.space, EuclideanSpace):
        raise ValidationError("instance is not euclidean")
    coords = inst.space.coords
    with open(points_file, "w") as fh:
        for p in inst.demands:
            fh.write(",".join(_fmt(c) for c in coords[p]) + "\n")
    with open(facilities_file, "w") as fh:
        for p, c in zip(inst.universe.points, inst.universe.raw_cost):
            fh.write(",".join([_fmt(v) for v in coords[p]] + [_fmt(c)]) + "\n")


def save_graph(inst: OnlineInstance, edges_file, demands_file, facilities_file) -> None:
    if not isinstance(inst.space, GraphSpace):
        raise ValidationError("instance is not a graph instance")
    with open(edges_file, "w") as fh:
        for u, v, w in inst.space.edges:
            fh.write(f"{u} {v} {_fmt(w)}\n")
    Path(demands_file).write_text("".join(f"{int(p)}\n" for p in inst.demands))
    with open(facilities_file, "w") as fh:
        for p, c in zip(inst.universe.points, inst.universe.raw_cost):
            fh.write(f"{int(p)},{_fmt(c)}\n")


def as_stream(preds: Sequence[int] | PredictionStream) -> PredictionStream:
    return preds if isinstance(preds, PredictionStream) else PredictionStream(preds)
