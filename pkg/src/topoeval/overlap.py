"""Pixel overlap and centerline overlap between binary masks.

Skeletons come from Zhang-Suen parallel thinning run to convergence: two
sub-iterations per round, each deleting simultaneously every foreground
pixel with 2..6 neighbors, exactly one 0->1 transition around its ring, and
the directional face conditions of the sub-iteration. The procedure is
deterministic. Known limitation inherited from the algorithm: isolated
2x2 squares are deleted entirely, so such components vanish from the
skeleton.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, UndefinedMetricError
from .grid import BinaryMask


@dataclass(frozen=True)
class Skeleton:
    """Thinned one-pixel-wide subset of its source mask."""

    mask: BinaryMask

    @property
    def data(self) -> np.ndarray:
        return self.mask.data

    def is_empty(self) -> bool:
        return not bool(self.mask.data.any())


def dice(pred: BinaryMask, gt: BinaryMask) -> float:
    """2|P&G| / (|P|+|G|); two empty masks agree perfectly."""
    if pred.dims != gt.dims:
        raise DimensionMismatchError(f"mask dims differ: {pred.dims} vs {gt.dims}")
    p = pred.count_foreground()
    g = gt.count_foreground()
    if p + g == 0:
        return 1.0
    inter = int((pred.data & gt.data).sum())
    return 2.0 * inter / (p + g)


def _neighborhood(img: np.ndarray):
    """The 8 neighbor planes of the interior, clockwise from north."""
    p2 = img[:-2, 1:-1]
    p3 = img[:-2, 2:]
    p4 = img[1:-1, 2:]
    p5 = img[2:, 2:]
    p6 = img[2:, 1:-1]
    p7 = img[2:, :-2]
    p8 = img[1:-1, :-2]
    p9 = img[:-2, :-2]
    return p2, p3, p4, p5, p6, p7, p8, p9


def _thinning_pass(img: np.ndarray, second: bool) -> bool:
    ring = _neighborhood(img)
    center = img[1:-1, 1:-1]
    b = np.zeros(center.shape, np.uint8)
    for plane in ring:
        b += plane
    transitions = np.zeros(center.shape, np.uint8)
    for k in range(8):
        transitions += (ring[k] == 0) & (ring[(k + 1) % 8] == 1)
    p2, _, p4, _, p6, _, p8, _ = ring
    if not second:
        cond_a = (p2 * p4 * p6) == 0
        cond_b = (p4 * p6 * p8) == 0
    else:
        cond_a = (p2 * p4 * p8) == 0
        cond_b = (p2 * p6 * p8) == 0
    deletable = (
        (center == 1)
        & (b >= 2)
        & (b <= 6)
        & (transitions == 1)
        & cond_a
        & cond_b
    )
    if not deletable.any():
        return False
    center[deletable] = 0
    return True


def skeletonize_2d(mask: BinaryMask) -> Skeleton:
    """Zhang-Suen thinning to convergence."""
    if mask.ndim != 2:
        raise ValueError(f"thinning is defined for 2D masks, got {mask.ndim}D")
    img = np.pad(mask.data.astype(np.uint8), 1)
    changed = True
    while changed:
        changed = _thinning_pass(img, second=False)
        changed = _thinning_pass(img, second=True) or changed
    return Skeleton(BinaryMask(img[1:-1, 1:-1].astype(bool)))


def cldice(pred: BinaryMask, gt: BinaryMask) -> float:
    """Harmonic mean of skeleton-in-mask precision and sensitivity."""
    if pred.dims != gt.dims:
        raise DimensionMismatchError(f"mask dims differ: {pred.dims} vs {gt.dims}")
    if pred.ndim != 2:
        raise ValueError("centerline overlap is defined for 2D masks")
    skel_p = skeletonize_2d(pred)
    skel_g = skeletonize_2d(gt)
    if skel_p.is_empty() or skel_g.is_empty():
        raise UndefinedMetricError(
            "centerline overlap undefined: a skeleton is empty"
        )
    tprec = int((skel_p.data & gt.data).sum()) / int(skel_p.data.sum())
    tsens = int((skel_g.data & pred.data).sum()) / int(skel_g.data.sum())
    if tprec + tsens == 0.0:
        return 0.0
    return 2.0 * tprec * tsens / (tprec + tsens)
