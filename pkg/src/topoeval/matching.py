"""Spatially-aware per-dimension topological error between two binary masks.

Dimension-0 features (components) of prediction and ground truth are matched
through the components of the mask union: a union component yields one match
iff it contains at least one component from each side. Dimension-1 features
in 2D (holes) and dimension-2 features in 3D (cavities) are matched dually:
bounded background components of the union (= BG(pred) intersect BG(gt))
mediate between the holes of the two masks, and a maximum-cardinality
bipartite matching over the mediated hole pairs is taken.

The resulting error counts the features on either side that found no
spatially corresponding partner, so it always dominates the plain Betti
number difference.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError
from .grid import BinaryMask, Connectivity, _label_phase, mask_union, pad_with_background


@dataclass(frozen=True)
class MatchingResult:
    dim: int
    matched_pairs: tuple[tuple[int, int], ...]
    unmatched_pred: int
    unmatched_gt: int

    @property
    def bm_error(self) -> int:
        return self.unmatched_pred + self.unmatched_gt


def _require_same_dims(pred: BinaryMask, gt: BinaryMask) -> None:
    if pred.dims != gt.dims:
        raise DimensionMismatchError(f"mask dims differ: {pred.dims} vs {gt.dims}")


def match_dim0(pred: BinaryMask, gt: BinaryMask, conn: Connectivity) -> MatchingResult:
    """Match foreground components of pred and gt through the union."""
    _require_same_dims(pred, gt)
    diagonal = conn.foreground_all
    pred_labels, n_pred = _label_phase(pred.data, diagonal)
    gt_labels, n_gt = _label_phase(gt.data, diagonal)
    union = mask_union(pred, gt)
    union_labels, n_union = _label_phase(union.data, diagonal)

    # lowest-id component of each side inside every union component
    pred_rep = _representatives(union_labels, pred_labels, pred.data, n_union)
    gt_rep = _representatives(union_labels, gt_labels, gt.data, n_union)

    pairs = tuple(
        (int(pred_rep[u]), int(gt_rep[u]))
        for u in range(n_union)
        if pred_rep[u] >= 0 and gt_rep[u] >= 0
    )
    return MatchingResult(
        dim=0,
        matched_pairs=pairs,
        unmatched_pred=n_pred - len(pairs),
        unmatched_gt=n_gt - len(pairs),
    )


def _representatives(union_labels, side_labels, side_mask, n_union) -> np.ndarray:
    rep = np.full(n_union, -1, np.int64)
    u = union_labels[side_mask]
    s = side_labels[side_mask]
    # reversed ascending write so the smallest side id per union component wins
    order = np.lexsort((s, u))[::-1]
    rep[u[order]] = s[order]
    return rep


def _bounded_bg_labeling(mask: BinaryMask, conn: Connectivity):
    """Hole labeling on a one-pixel pad: returns (labels, hole_id array, count).

    ``hole_id`` maps each padded-BG component id to a hole index, or -1 for
    the single unbounded component (the one containing the frame corner).
    """
    padded = pad_with_background(mask, 1)
    labels, n = _label_phase(~padded.data, not conn.foreground_all)
    outside = labels[(0,) * padded.ndim]
    hole_id = np.full(n, -1, np.int64)
    bounded = [c for c in range(n) if c != outside]
    hole_id[bounded] = np.arange(len(bounded))
    return labels, hole_id, len(bounded)


def _match_holes(pred: BinaryMask, gt: BinaryMask, conn: Connectivity, dim: int) -> MatchingResult:
    _require_same_dims(pred, gt)
    pred_labels, pred_hole, n_pred = _bounded_bg_labeling(pred, conn)
    gt_labels, gt_hole, n_gt = _bounded_bg_labeling(gt, conn)
    union_labels, union_hole, n_union = _bounded_bg_labeling(
        mask_union(pred, gt), conn
    )

    # every union-BG component lies inside exactly one BG component of each
    # side; one pixel per mediator suffices to read off the containing holes
    edges = set()
    anchors = _first_index_per_label(union_labels.ravel(), len(union_hole))
    for comp, anchor in enumerate(anchors):
        if union_hole[comp] < 0 or anchor < 0:
            continue
        p = pred_hole[pred_labels.ravel()[anchor]]
        g = gt_hole[gt_labels.ravel()[anchor]]
        if p >= 0 and g >= 0:
            edges.add((int(p), int(g)))

    matching = _hopcroft_karp(sorted(edges), n_pred, n_gt)
    return MatchingResult(
        dim=dim,
        matched_pairs=tuple(sorted(matching)),
        unmatched_pred=n_pred - len(matching),
        unmatched_gt=n_gt - len(matching),
    )


def _first_index_per_label(flat_labels: np.ndarray, n: int) -> np.ndarray:
    first = np.full(n, -1, np.int64)
    idx = np.flatnonzero(flat_labels >= 0)
    first[flat_labels[idx[::-1]]] = idx[::-1]
    return first


def match_dim1_2d(pred: BinaryMask, gt: BinaryMask, conn: Connectivity) -> MatchingResult:
    """Match 2D holes of pred and gt through shared holes of the union."""
    if pred.ndim != 2 or gt.ndim != 2:
        raise ValueError("dimension-1 matching is defined for 2D masks")
    return _match_holes(pred, gt, conn, dim=1)


def match_dim2_3d(pred: BinaryMask, gt: BinaryMask, conn: Connectivity) -> MatchingResult:
    """Match 3D cavities of pred and gt through shared cavities of the union."""
    if pred.ndim != 3 or gt.ndim != 3:
        raise ValueError("dimension-2 matching is defined for 3D masks")
    return _match_holes(pred, gt, conn, dim=2)


def _hopcroft_karp(
    edges: list[tuple[int, int]], n_left: int, n_right: int
) -> list[tuple[int, int]]:
    """Maximum-cardinality bipartite matching via layered augmenting paths.

    Iterative throughout, so hole counts in the tens of thousands do not
    touch the interpreter recursion limit.
    """
    adj: list[list[int]] = [[] for _ in range(n_left)]
    for u, v in edges:
        adj[u].append(v)

    INF = float("inf")
    match_left = [-1] * n_left
    match_right = [-1] * n_right
    dist = [INF] * n_left

    def bfs() -> bool:
        queue = deque()
        for u in range(n_left):
            if match_left[u] < 0:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = INF
        found = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = match_right[v]
                if w < 0:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found

    def augment(root: int) -> bool:
        stack = [(root, iter(adj[root]))]
        path: list[tuple[int, int]] = []
        while stack:
            u, neighbors = stack[-1]
            advanced = False
            for v in neighbors:
                w = match_right[v]
                if w < 0:
                    path.append((u, v))
                    for uu, vv in path:
                        match_left[uu] = vv
                        match_right[vv] = uu
                    return True
                if dist[w] == dist[u] + 1:
                    path.append((u, v))
                    stack.append((w, iter(adj[w])))
                    advanced = True
                    break
            if not advanced:
                dist[u] = INF
                stack.pop()
                if path:
                    path.pop()
        return False

    while bfs():
        for u in range(n_left):
            if match_left[u] < 0:
                augment(u)
    return [(u, match_left[u]) for u in range(n_left) if match_left[u] >= 0]
