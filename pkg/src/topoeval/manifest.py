"""Dataset manifests: which label files form a dataset and under which
connectivity its semantics are meant to be read."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .grid import Connectivity


@dataclass(frozen=True)
class DatasetManifest:
    name: str
    connectivity: Connectivity
    labels: tuple[Path, ...]
    predictions: tuple[Path, ...] | None = None
    dimensionality: int | None = None

    def __post_init__(self):
        paths = list(self.labels) + list(self.predictions or ())
        if len(set(paths)) != len(paths):
            raise ValueError("manifest paths must be distinct")
        if self.predictions is not None and len(self.predictions) != len(self.labels):
            raise ValueError(
                f"{len(self.predictions)} predictions for {len(self.labels)} labels"
            )
        if self.dimensionality not in (None, 2, 3):
            raise ValueError(f"dimensionality must be 2 or 3, got {self.dimensionality}")


def load_manifest(path) -> DatasetManifest:
    """Read a JSON manifest; relative paths resolve against its directory.

    Keys: ``name``, ``connectivity`` ("A" or "D"), and either ``labels``
    (list of paths) or ``label_glob`` (pattern, expanded sorted). Optional:
    ``predictions``, ``dimensionality``.
    """
    path = Path(path)
    spec = json.loads(path.read_text())
    base = path.parent

    def resolve(p: str) -> Path:
        candidate = Path(p)
        return candidate if candidate.is_absolute() else base / candidate

    if "labels" in spec:
        labels = tuple(resolve(p) for p in spec["labels"])
    elif "label_glob" in spec:
        labels = tuple(sorted(base.glob(spec["label_glob"])))
    else:
        raise ValueError(f"{path}: manifest needs 'labels' or 'label_glob'")
    if not labels:
        raise ValueError(f"{path}: manifest lists no label files")

    predictions = None
    if spec.get("predictions"):
        predictions = tuple(resolve(p) for p in spec["predictions"])

    try:
        connectivity = Connectivity(spec["connectivity"])
    except (KeyError, ValueError) as exc:
        raise ValueError(f"{path}: manifest needs connectivity 'A' or 'D'") from exc

    return DatasetManifest(
        name=spec.get("name", path.stem),
        connectivity=connectivity,
        labels=labels,
        predictions=predictions,
        dimensionality=spec.get("dimensionality"),
    )


def save_manifest(manifest: DatasetManifest, path) -> None:
    payload = {
        "name": manifest.name,
        "connectivity": manifest.connectivity.value,
        "labels": [str(p) for p in manifest.labels],
    }
    if manifest.predictions is not None:
        payload["predictions"] = [str(p) for p in manifest.predictions]
    if manifest.dimensionality is not None:
        payload["dimensionality"] = manifest.dimensionality
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
