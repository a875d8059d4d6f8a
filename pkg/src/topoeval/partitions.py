"""Distributional agreement between two pixel partitions.

A partition assigns every pixel to one cluster; here clusters are the
connected components of a labeling (both phases, or the common foreground
only). The contingency table of two partitions carries everything the
metrics need: variation of information from the entropies, and the Rand
family from pair counts / squared cluster proportions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, UndefinedMetricError
from .grid import ComponentLabeling

SCOPES = ("full", "fg_only")


@dataclass(frozen=True, eq=False)
class ContingencyTable:
    """Sparse joint counts n_ij plus marginals for two cluster assignments."""

    rows: np.ndarray
    cols: np.ndarray
    counts: np.ndarray
    row_marginals: np.ndarray
    col_marginals: np.ndarray
    total: int

    def __post_init__(self):
        if self.counts.sum() != self.total:
            raise ValueError("joint counts do not sum to the total")
        if self.row_marginals.sum() != self.total or self.col_marginals.sum() != self.total:
            raise ValueError("marginals inconsistent with total")


def build_contingency(
    x: ComponentLabeling, y: ComponentLabeling, scope: str = "full"
) -> ContingencyTable:
    """Joint cluster counts of two labelings over the chosen pixel scope."""
    if x.dims != y.dims:
        raise DimensionMismatchError(f"labeling dims differ: {x.dims} vs {y.dims}")
    if scope not in SCOPES:
        raise ValueError(f"scope must be one of {SCOPES}, got {scope!r}")

    xl = x.labels.ravel()
    yl = y.labels.ravel()
    if scope == "fg_only":
        keep = x.phase_array()[xl] & y.phase_array()[yl]
        xl = xl[keep]
        yl = yl[keep]
        if xl.size == 0:
            raise UndefinedMetricError(
                "fg_only scope is empty: the foregrounds share no pixel"
            )

    n_y = int(yl.max()) + 1
    keys = xl.astype(np.int64) * n_y + yl
    uniq, counts = np.unique(keys, return_counts=True)
    return ContingencyTable(
        rows=uniq // n_y,
        cols=uniq % n_y,
        counts=counts.astype(np.int64),
        row_marginals=np.bincount(xl).astype(np.int64),
        col_marginals=np.bincount(yl).astype(np.int64),
        total=int(xl.size),
    )


def _entropy(counts: np.ndarray, total: int) -> float:
    p = counts[counts > 0] / total
    return float(-(p * np.log(p)).sum())


def variation_of_information(t: ContingencyTable, log_base: str = "e") -> float:
    """H(X|Y) + H(Y|X); zero iff the partitions coincide up to relabeling."""
    if t.total <= 0:
        raise UndefinedMetricError("variation of information needs at least one pixel")
    if log_base not in ("e", "2"):
        raise ValueError(f"log_base must be 'e' or '2', got {log_base!r}")
    h_x = _entropy(t.row_marginals, t.total)
    h_y = _entropy(t.col_marginals, t.total)
    h_xy = _entropy(t.counts, t.total)
    voi = 2.0 * h_xy - h_x - h_y
    if log_base == "2":
        voi /= math.log(2.0)
    return max(voi, 0.0)


def rand_scores(t: ContingencyTable) -> dict[str, float]:
    """Rand index, adjusted Rand index, and adapted Rand error.

    RI and ARI use standard pair counting with adjustment for chance. The
    adapted Rand error is one minus the Rand F-score built from squared
    cluster proportions, the scoring convention of the neuron-segmentation
    challenges.
    """
    if t.total < 2:
        raise UndefinedMetricError("Rand scores need at least two pixels")
    n = t.total
    sum_ij = float((t.counts * (t.counts - 1)).sum()) / 2.0
    sum_a = float((t.row_marginals * (t.row_marginals - 1)).sum()) / 2.0
    sum_b = float((t.col_marginals * (t.col_marginals - 1)).sum()) / 2.0
    pairs = n * (n - 1) / 2.0

    ri = (pairs + 2.0 * sum_ij - sum_a - sum_b) / pairs

    expected = sum_a * sum_b / pairs
    denom = 0.5 * (sum_a + sum_b) - expected
    if denom == 0.0:
        # both partitions trivial (all singletons or a single cluster)
        ari = 1.0
    else:
        ari = (sum_ij - expected) / denom

    p_sq = float((t.counts.astype(float) ** 2).sum()) / (n * n)
    s_sq = float((t.row_marginals.astype(float) ** 2).sum()) / (n * n)
    t_sq = float((t.col_marginals.astype(float) ** 2).sum()) / (n * n)
    are = 1.0 - 2.0 * p_sq / (s_sq + t_sq)

    return {"ri": ri, "ari": ari, "are": are}


