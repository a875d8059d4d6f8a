"""Betti numbers and Euler characteristics of binary masks.

Two cubical readings of a grid are supported. In the V-construction each
pixel is a vertex: edges join direct neighbors, squares fill 2x2 foreground
blocks, cubes fill 2x2x2 blocks; it realizes direct foreground adjacency.
In the T-construction each pixel is a top-dimensional cell whose shared
faces/edges/corners are counted once; it realizes all-neighbor foreground
adjacency. ``A`` therefore pairs with T and ``D`` with V.

Component counts give beta_0 directly and, via the padded complement,
beta_1 (2D holes) and beta_2 (3D cavities). The remaining 3D beta_1 follows
from the Euler characteristic of the matching construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError
from .grid import (
    BinaryMask,
    Connectivity,
    _label_phase,
    foreground_component_count,
    pad_with_background,
)

CONSTRUCTION_FOR = {Connectivity.A: "T", Connectivity.D: "V"}


@dataclass(frozen=True)
class CellCensus:
    """Distinct cell counts per dimension for one construction."""

    counts: tuple[int, ...]
    construction: str

    @property
    def euler(self) -> int:
        return int(sum((-1) ** d * c for d, c in enumerate(self.counts)))


@dataclass(frozen=True)
class TopologySummary:
    betti: tuple[int, ...]
    euler: int
    construction: str
    connectivity: Connectivity

    def __post_init__(self):
        alternating = sum((-1) ** d * b for d, b in enumerate(self.betti))
        if alternating != self.euler:
            raise ValueError(
                f"betti {self.betti} inconsistent with euler {self.euler}"
            )
        if any(b < 0 for b in self.betti):
            raise ValueError(f"negative betti count in {self.betti}")


def _census_v(data: np.ndarray) -> tuple[int, ...]:
    ndim = data.ndim
    counts = [0] * (ndim + 1)
    for span in _axis_subsets(ndim):
        arr = data
        for axis in span:
            lo = [slice(None)] * ndim
            hi = [slice(None)] * ndim
            lo[axis] = slice(None, -1)
            hi[axis] = slice(1, None)
            arr = arr[tuple(lo)] & arr[tuple(hi)]
        counts[len(span)] += int(arr.sum())
    return tuple(counts)


def _census_t(data: np.ndarray) -> tuple[int, ...]:
    ndim = data.ndim
    padded = np.pad(data, 1, mode="constant", constant_values=False)
    counts = [0] * (ndim + 1)
    for shared in _axis_subsets(ndim):
        # a cell lying between pixels along the axes in `shared` is present
        # iff any touching pixel is foreground
        arr = padded
        for axis in range(ndim):
            lo = [slice(None)] * arr.ndim
            hi = [slice(None)] * arr.ndim
            if axis in shared:
                lo[axis] = slice(None, -1)
                hi[axis] = slice(1, None)
                arr = arr[tuple(lo)] | arr[tuple(hi)]
            else:
                lo[axis] = slice(1, -1)
                arr = arr[tuple(lo)]
        counts[ndim - len(shared)] += int(arr.sum())
    return tuple(counts)


def _axis_subsets(ndim: int):
    for k in range(ndim + 1):
        yield from itertools.combinations(range(ndim), k)


def cell_census(mask: BinaryMask, construction: str) -> CellCensus:
    if construction == "V":
        return CellCensus(_census_v(mask.data), "V")
    if construction == "T":
        return CellCensus(_census_t(mask.data), "T")
    raise ValueError(f"construction must be 'V' or 'T', got {construction!r}")


def euler_characteristic(mask: BinaryMask, construction: str) -> int:
    return cell_census(mask, construction).euler


def bounded_background_count(mask: BinaryMask, conn: Connectivity) -> int:
    """Background components that do not reach the outside of the grid.

    Computed on a one-pixel background pad, where exactly one component
    (the one containing the frame) is unbounded.
    """
    padded = pad_with_background(mask, 1)
    _, n_bg = _label_phase(~padded.data, not conn.foreground_all)
    return n_bg - 1


def betti_numbers(mask: BinaryMask, conn: Connectivity) -> TopologySummary:
    construction = CONSTRUCTION_FOR[conn]
    b0 = foreground_component_count(mask, conn)
    chi = euler_characteristic(mask, construction)
    bounded = bounded_background_count(mask, conn)
    if mask.ndim == 2:
        betti = (b0, bounded)
    else:
        b2 = bounded
        betti = (b0, b0 + b2 - chi, b2)
    return TopologySummary(
        betti=betti, euler=chi, construction=construction, connectivity=conn
    )


def betti_number_error(
    pred: BinaryMask, gt: BinaryMask, conn: Connectivity, dim: int
) -> int:
    """Absolute per-dimension difference of Betti numbers; never aggregated."""
    if pred.dims != gt.dims:
        raise DimensionMismatchError(f"mask dims differ: {pred.dims} vs {gt.dims}")
    if not 0 <= dim < pred.ndim:
        raise ValueError(f"dimension {dim} invalid for a {pred.ndim}D mask")
    bp = betti_numbers(pred, conn).betti[dim]
    bg = betti_numbers(gt, conn).betti[dim]
    return abs(bp - bg)
