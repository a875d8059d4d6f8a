"""Binary masks, pixel-connectivity policies, and connected-component labeling.

Labeling is a two-pass raster scan with union-find. The scan kernels are
JIT-compiled with numba when it is installed; the pure-Python definitions are
used verbatim otherwise, so both paths run the identical algorithm.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DimensionMismatchError

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is an accelerator, not a requirement
    njit = None


class Phase(Enum):
    FG = "FG"
    BG = "BG"


class Connectivity(Enum):
    """Foreground/background adjacency policy for a binary grid.

    ``A``: the foreground uses *all* neighbors (8 in 2D, 26 in 3D) and the
    background the *direct* ones (4 in 2D, 6 in 3D). ``D`` is the inverse
    assignment. The two phases always get opposite policies so that a closed
    curve of one phase actually separates the other.
    """

    A = "A"
    D = "D"

    @property
    def foreground_all(self) -> bool:
        return self is Connectivity.A

    @property
    def inverse(self) -> "Connectivity":
        return Connectivity.D if self is Connectivity.A else Connectivity.A

    def fg_offsets(self, ndim: int) -> tuple[tuple[int, ...], ...]:
        return _all_offsets(ndim) if self.foreground_all else _direct_offsets(ndim)

    def bg_offsets(self, ndim: int) -> tuple[tuple[int, ...], ...]:
        return _direct_offsets(ndim) if self.foreground_all else _all_offsets(ndim)


def _all_offsets(ndim: int) -> tuple[tuple[int, ...], ...]:
    return tuple(
        off
        for off in itertools.product((-1, 0, 1), repeat=ndim)
        if any(d != 0 for d in off)
    )


def _direct_offsets(ndim: int) -> tuple[tuple[int, ...], ...]:
    offsets = []
    for axis in range(ndim):
        for step in (-1, 1):
            off = [0] * ndim
            off[axis] = step
            offsets.append(tuple(off))
    return tuple(offsets)


@dataclass(frozen=True, eq=False)
class BinaryMask:
    """Dense 2D or 3D binary grid; True marks foreground.

    The backing array is made read-only on construction, so masks can be
    shared freely between threads.
    """

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data)
        if arr.dtype != np.bool_:
            raise ValueError(f"mask data must be boolean, got {arr.dtype}")
        if arr.ndim not in (2, 3):
            raise ValueError(f"mask must be 2D or 3D, got {arr.ndim}D")
        if min(arr.shape) < 1:
            raise ValueError(f"mask extents must all be >= 1, got {arr.shape}")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @classmethod
    def from_array(cls, values) -> "BinaryMask":
        """Build a mask from any array-like; nonzero becomes foreground."""
        return cls(np.asarray(values) != 0)

    @classmethod
    def from_flat(cls, dims, bits) -> "BinaryMask":
        """Build from extents plus a flat row-major sequence of truth values."""
        dims = tuple(int(d) for d in dims)
        flat = np.asarray(bits, dtype=bool).ravel()
        expected = int(np.prod(dims)) if dims else 0
        if flat.size != expected:
            raise ValueError(
                f"flat data has {flat.size} entries, dims {dims} need {expected}"
            )
        return cls(flat.reshape(dims))

    @property
    def dims(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def size(self) -> int:
        return self.data.size

    def count_foreground(self) -> int:
        return int(self.data.sum())

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryMask):
            return NotImplemented
        return self.dims == other.dims and bool(np.array_equal(self.data, other.data))

    def __hash__(self):
        return hash((self.dims, self.data.tobytes()))


def _require_same_dims(a: BinaryMask, b: BinaryMask) -> None:
    if a.dims != b.dims:
        raise DimensionMismatchError(f"mask dims differ: {a.dims} vs {b.dims}")


def mask_union(a: BinaryMask, b: BinaryMask) -> BinaryMask:
    _require_same_dims(a, b)
    return BinaryMask(a.data | b.data)


def mask_intersection(a: BinaryMask, b: BinaryMask) -> BinaryMask:
    _require_same_dims(a, b)
    return BinaryMask(a.data & b.data)


def mask_complement(a: BinaryMask) -> BinaryMask:
    return BinaryMask(~a.data)


def pad_with_background(a: BinaryMask, width: int = 1) -> BinaryMask:
    if width < 0:
        raise ValueError("pad width must be >= 0")
    return BinaryMask(np.pad(a.data, width, mode="constant", constant_values=False))


# --------------------------------------------------------------------------
# Union-find over a raster scan.
#
# Provisional labels are created in raster order, so renumbering set roots by
# their smallest provisional member yields final ids ordered by each
# component's first raster pixel. Only "prior" neighbors (already scanned)
# are inspected, which covers every adjacency exactly once.
# --------------------------------------------------------------------------


def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        up = parent[x]
        parent[x] = root
        x = up
    return root


def _union(parent, a, b):
    ra = _find(parent, a)
    rb = _find(parent, b)
    if ra == rb:
        return ra
    if ra < rb:
        parent[rb] = ra
        return ra
    parent[ra] = rb
    return rb


def _renumber(parent, labels_flat, n_provisional):
    final = np.full(n_provisional, -1, np.int64)
    count = 0
    for i in range(n_provisional):
        root = _find(parent, i)
        if final[root] < 0:
            final[root] = count
            count += 1
        final[i] = final[root]
    for k in range(labels_flat.size):
        if labels_flat[k] >= 0:
            labels_flat[k] = final[labels_flat[k]]
    return count


def _scan_2d(on, diagonal):
    h, w = on.shape
    labels = np.full((h, w), -1, np.int64)
    parent = np.empty(h * w, np.int64)
    nxt = 0
    for r in range(h):
        for c in range(w):
            if on[r, c] == 0:
                continue
            lab = -1
            if c > 0 and on[r, c - 1] != 0:
                lab = labels[r, c - 1]
            if r > 0:
                if on[r - 1, c] != 0:
                    prev = labels[r - 1, c]
                    lab = prev if lab < 0 else _union(parent, lab, prev)
                if diagonal:
                    if c > 0 and on[r - 1, c - 1] != 0:
                        prev = labels[r - 1, c - 1]
                        lab = prev if lab < 0 else _union(parent, lab, prev)
                    if c + 1 < w and on[r - 1, c + 1] != 0:
                        prev = labels[r - 1, c + 1]
                        lab = prev if lab < 0 else _union(parent, lab, prev)
            if lab < 0:
                parent[nxt] = nxt
                lab = nxt
                nxt += 1
            labels[r, c] = lab
    count = _renumber(parent, labels.ravel(), nxt)
    return labels, count


def _scan_3d(on, diagonal):
    d0, d1, d2 = on.shape
    labels = np.full((d0, d1, d2), -1, np.int64)
    parent = np.empty(d0 * d1 * d2, np.int64)
    nxt = 0
    for z in range(d0):
        for y in range(d1):
            for x in range(d2):
                if on[z, y, x] == 0:
                    continue
                lab = -1
                if diagonal:
                    # prior half-neighborhood: 9 in the previous slice + 4 in this one
                    for dz in (-1, 0):
                        for dy in (-1, 0, 1):
                            for dx in (-1, 0, 1):
                                if dz == 0 and (dy > 0 or (dy == 0 and dx >= 0)):
                                    continue
                                zz = z + dz
                                yy = y + dy
                                xx = x + dx
                                if zz < 0 or yy < 0 or yy >= d1 or xx < 0 or xx >= d2:
                                    continue
                                if on[zz, yy, xx] == 0:
                                    continue
                                prev = labels[zz, yy, xx]
                                lab = prev if lab < 0 else _union(parent, lab, prev)
                else:
                    if z > 0 and on[z - 1, y, x] != 0:
                        prev = labels[z - 1, y, x]
                        lab = prev if lab < 0 else _union(parent, lab, prev)
                    if y > 0 and on[z, y - 1, x] != 0:
                        prev = labels[z, y - 1, x]
                        lab = prev if lab < 0 else _union(parent, lab, prev)
                    if x > 0 and on[z, y, x - 1] != 0:
                        prev = labels[z, y, x - 1]
                        lab = prev if lab < 0 else _union(parent, lab, prev)
                if lab < 0:
                    parent[nxt] = nxt
                    lab = nxt
                    nxt += 1
                labels[z, y, x] = lab
    count = _renumber(parent, labels.ravel(), nxt)
    return labels, count


if njit is not None:
    _find = njit(cache=True)(_find)
    _union = njit(cache=True)(_union)
    _renumber = njit(cache=True)(_renumber)
    _scan_2d = njit(cache=True)(_scan_2d)
    _scan_3d = njit(cache=True)(_scan_3d)


def _label_phase(on: np.ndarray, diagonal: bool):
    scan = _scan_2d if on.ndim == 2 else _scan_3d
    return scan(np.ascontiguousarray(on, dtype=np.uint8), diagonal)


@dataclass(frozen=True)
class ComponentInfo:
    id: int
    phase: Phase
    size: int
    touches_border: bool


@dataclass(frozen=True, eq=False)
class ComponentLabeling:
    """Full partition of a mask into foreground and background components.

    ``labels`` assigns every pixel one id; ids are contiguous from 0 and
    ordered by each component's first pixel in raster order, interleaving
    the two phases.
    """

    labels: np.ndarray
    components: tuple[ComponentInfo, ...]
    connectivity: Connectivity

    def __post_init__(self):
        self.labels.setflags(write=False)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.labels.shape

    def count(self, phase: Phase) -> int:
        return sum(1 for comp in self.components if comp.phase is phase)

    def sizes(self, phase: Phase) -> list[int]:
        return [comp.size for comp in self.components if comp.phase is phase]

    def phase_array(self) -> np.ndarray:
        """Boolean array per component id: True where the component is FG."""
        return np.array([comp.phase is Phase.FG for comp in self.components], bool)


def _border_indicator(shape: tuple[int, ...]) -> np.ndarray:
    border = np.zeros(shape, bool)
    for axis in range(len(shape)):
        face = [slice(None)] * len(shape)
        face[axis] = 0
        border[tuple(face)] = True
        face[axis] = shape[axis] - 1
        border[tuple(face)] = True
    return border


def label_components(mask: BinaryMask, conn: Connectivity) -> ComponentLabeling:
    """Label FG and BG components under the pair of adjacencies in ``conn``.

    Returns the full partition of the grid; ids are deterministic
    (first-visit raster order across both phases).
    """
    fg = mask.data
    fg_labels, n_fg = _label_phase(fg, conn.foreground_all)
    bg_labels, n_bg = _label_phase(~fg, not conn.foreground_all)

    flat_fg = fg_labels.ravel()
    flat_bg = bg_labels.ravel()
    # first raster pixel per per-phase component; per-phase ids are already
    # ordered by it, so these arrays are strictly increasing
    fg_anchor = _first_occurrences(flat_fg, n_fg)
    bg_anchor = _first_occurrences(flat_bg, n_bg)

    anchors = np.concatenate([fg_anchor, bg_anchor])
    order = np.argsort(anchors, kind="stable")
    global_id = np.empty(n_fg + n_bg, np.int64)
    global_id[order] = np.arange(n_fg + n_bg)

    labels = np.empty(mask.dims, np.int64)
    if n_fg:
        labels[fg] = global_id[:n_fg][fg_labels[fg]]
    if n_bg:
        labels[~fg] = global_id[n_fg:][bg_labels[~fg]]

    sizes = np.bincount(labels.ravel(), minlength=n_fg + n_bg)
    border_labels = np.unique(labels[_border_indicator(mask.dims)])
    touches = np.zeros(n_fg + n_bg, bool)
    touches[border_labels] = True
    is_fg = np.zeros(n_fg + n_bg, bool)
    is_fg[global_id[:n_fg]] = True

    components = tuple(
        ComponentInfo(
            id=i,
            phase=Phase.FG if is_fg[i] else Phase.BG,
            size=int(sizes[i]),
            touches_border=bool(touches[i]),
        )
        for i in range(n_fg + n_bg)
    )
    return ComponentLabeling(labels=labels, components=components, connectivity=conn)


def _first_occurrences(flat_labels: np.ndarray, n: int) -> np.ndarray:
    anchors = np.full(n, flat_labels.size, np.int64)
    idx = np.flatnonzero(flat_labels >= 0)
    # reversed so the smallest index wins the final write
    anchors[flat_labels[idx[::-1]]] = idx[::-1]
    return anchors


def count_components(labeling: ComponentLabeling, phase: Phase) -> int:
    return labeling.count(phase)


def foreground_component_count(mask: BinaryMask, conn: Connectivity) -> int:
    """Number of FG components only; avoids labeling the background."""
    _, n = _label_phase(mask.data, conn.foreground_all)
    return n
