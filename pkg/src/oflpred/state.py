from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MEY = "mey"
PRED = "pred"
FOLLOW = "follow"


@dataclass
class DemandRecord:
    demand: int
    facility: int
    connection: float
    mey_opening: float = 0.0
    pred_opening: float = 0.0
    n_open: int = 0


class RunState:
    """Mutable state of one online run.

    Facilities are only ever added. Each open facility is attributed to the
    procedure that opened it first, so F_M and F_P partition F.
    """

    def __init__(self, n_facilities: int):
        self.is_open = np.zeros(n_facilities, dtype=bool)
        self.opened_by: dict[int, str] = {}
        self.open_order: list[int] = []
        self.pred_open: list[int] = []
        # facilities that set the Pred radius: F_P plus Mey facilities Pred adopted
        self.pred_radius_set: list[int] = []
        self.pred_anchor: set[int] = set()
        self.records: list[DemandRecord] = []

    def copy(self) -> "RunState":
        new = RunState.__new__(RunState)
        new.is_open = self.is_open.copy()
        new.opened_by = dict(self.opened_by)
        new.open_order = list(self.open_order)
        new.pred_open = list(self.pred_open)
        new.pred_radius_set = list(self.pred_radius_set)
        new.pred_anchor = set(self.pred_anchor)
        new.records = list(self.records)
        return new

    def open(self, f: int, by: str) -> bool:
        """Open facility `f`; returns False when it was already open."""
        f = int(f)
        if self.is_open[f]:
            return False
        self.is_open[f] = True
        self.opened_by[f] = by
        self.open_order.append(f)
        if by == PRED:
            self.pred_open.append(f)
            self.pred_radius_set.append(f)
            self.pred_anchor.add(f)
        return True

    @property
    def F(self) -> frozenset:
        return frozenset(self.open_order)

    @property
    def F_P(self) -> frozenset:
        return frozenset(self.pred_open)

    @property
    def F_M(self) -> frozenset:
        return frozenset(f for f, by in self.opened_by.items() if by == MEY)

    def snapshot(self, i: int) -> frozenset:
        """Open facilities right after demand i was served."""
        return frozenset(self.open_order[: self.records[i].n_open])
