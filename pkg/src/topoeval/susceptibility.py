"""How strongly a label's topological reading depends on the adjacency choice.

Every metric here compares the two partitions a single label produces under
the two opposite connectivity settings. The comparison is symmetric in the
two settings, zero when the partitions coincide, and grows with the number
of features that appear or merge when diagonal adjacency flips between the
phases. Dataset-level values are per-image means.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import TopoevalError
from .grid import BinaryMask, Connectivity, label_components
from .manifest import DatasetManifest
from .partitions import build_contingency, rand_scores, variation_of_information
from .topology import betti_numbers

SUSCEPTIBILITY_METRICS = ("beta0", "beta1", "voi", "are")


def susceptibility_beta(label: BinaryMask, dim: int) -> int:
    """|beta_dim under D - beta_dim under A| for one label."""
    if not 0 <= dim < label.ndim:
        raise ValueError(f"dimension {dim} invalid for a {label.ndim}D mask")
    b_d = betti_numbers(label, Connectivity.D).betti[dim]
    b_a = betti_numbers(label, Connectivity.A).betti[dim]
    return abs(b_d - b_a)


def susceptibility_partition(label: BinaryMask, metric: str) -> float:
    """VOI or adapted Rand error between the label's D and A partitions."""
    if metric not in ("voi", "are"):
        raise ValueError(f"metric must be 'voi' or 'are', got {metric!r}")
    parts_d = label_components(label, Connectivity.D)
    parts_a = label_components(label, Connectivity.A)
    table = build_contingency(parts_d, parts_a, scope="full")
    if metric == "voi":
        return variation_of_information(table)
    return rand_scores(table)["are"]


def _image_susceptibility(label: BinaryMask) -> dict[str, float]:
    return {
        "beta0": float(susceptibility_beta(label, 0)),
        "beta1": float(susceptibility_beta(label, 1)),
        "voi": susceptibility_partition(label, "voi"),
        "are": susceptibility_partition(label, "are"),
    }


@dataclass(frozen=True)
class SusceptibilityReport:
    dataset: str
    image_count: int
    means: dict[str, float]
    per_image: tuple[tuple[str, dict[str, float]], ...]
    errors: tuple[tuple[str, str], ...] = field(default_factory=tuple)

    def __post_init__(self):
        for key, value in self.means.items():
            if value < 0:
                raise ValueError(f"susceptibility {key} is negative: {value}")


def dataset_susceptibility(manifest: DatasetManifest, loader=None) -> SusceptibilityReport:
    """Per-image susceptibility metrics and their means over a dataset.

    Unreadable files become error entries; the report is still produced as
    long as at least one label loads.
    """
    if loader is None:
        from .mask_io import load_mask as loader

    per_image = []
    errors = []
    for path in manifest.labels:
        try:
            label = loader(path)
            per_image.append((str(path), _image_susceptibility(label)))
        except (TopoevalError, OSError, ValueError) as exc:
            errors.append((str(path), str(exc)))
    if not per_image:
        raise ValueError(f"no readable labels in manifest {manifest.name!r}")

    means = {
        key: sum(metrics[key] for _, metrics in per_image) / len(per_image)
        for key in SUSCEPTIBILITY_METRICS
    }
    return SusceptibilityReport(
        dataset=manifest.name,
        image_count=len(per_image),
        means=means,
        per_image=tuple(per_image),
        errors=tuple(errors),
    )
