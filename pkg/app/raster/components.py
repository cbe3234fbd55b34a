"""
Connected-component labeling.

Two-pass union-find over horizontal runs: runs of set pixels are linked to
overlapping runs of the previous row, then every run takes the label of its
root. Labels follow the raster-scan order of each component's first pixel.
"""

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from app.core.errors import ParameterError, ShapeError
from app.core.types import BitMask

__all__ = ("LabelGrid", "connected_components")


@dataclass(frozen=True)
class LabelGrid:
    labels: npt.NDArray[np.int32]  # 0 = background
    count: int

    @property
    def height(self) -> int:
        return int(self.labels.shape[0])

    @property
    def width(self) -> int:
        return int(self.labels.shape[1])

    def component(self, label: int) -> BitMask:
        return self.labels == label

    def areas(self) -> np.ndarray:
        """Pixel count per label; index 0 is the background."""
        return np.bincount(self.labels.ravel(), minlength=self.count + 1)


class _UnionFind:
    def __init__(self):
        self.parent: list[int] = []

    def make(self) -> int:
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # smaller id wins so roots stay the earliest run
            lo, hi = min(ra, rb), max(ra, rb)
            self.parent[hi] = lo


def _row_runs(row: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    padded = np.concatenate(([0], row.astype(np.int8), [0]))
    step = np.diff(padded)
    return np.flatnonzero(step == 1), np.flatnonzero(step == -1)


def connected_components(mask: BitMask, connectivity: int = 8) -> LabelGrid:
    mask = np.asarray(mask, dtype=bool)
    if mask.ndim != 2:
        raise ShapeError(f"expected a 2-D mask, got shape {mask.shape}")
    if connectivity not in (4, 8):
        raise ParameterError(f"connectivity must be 4 or 8, got {connectivity}")

    reach = 1 if connectivity == 8 else 0
    uf = _UnionFind()
    runs: list[tuple[int, int, int, int]] = []  # (row, start, end, run id)
    previous: list[tuple[int, int, int]] = []

    for y in range(mask.shape[0]):
        starts, ends = _row_runs(mask[y])
        current: list[tuple[int, int, int]] = []
        k = 0
        for s, e in zip(starts.tolist(), ends.tolist(), strict=True):
            rid = uf.make()
            while k < len(previous) and previous[k][1] + reach <= s:
                k += 1
            m = k
            while m < len(previous) and previous[m][0] < e + reach:
                uf.union(rid, previous[m][2])
                m += 1
            current.append((s, e, rid))
            runs.append((y, s, e, rid))
        previous = current

    labels = np.zeros(mask.shape, dtype=np.int32)
    assigned: dict[int, int] = {}
    for y, s, e, rid in runs:
        root = uf.find(rid)
        if root not in assigned:
            assigned[root] = len(assigned) + 1
        labels[y, s:e] = assigned[root]

    return LabelGrid(labels=labels, count=len(assigned))
