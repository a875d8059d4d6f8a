"""Bit-exact reading and writing of binary masks.

2D masks travel as 8-bit grayscale PNG, 3D masks as uint8 NRRD with raw or
gzip encoding. The NRRD codec covers exactly that profile; headers list
sizes fastest-axis-first, so they are the reverse of the numpy shape.
"""

from __future__ import annotations

import gzip
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import MaskFormatError
from .grid import BinaryMask

_NRRD_MAGIC = "NRRD"
_NRRD_UINT8 = {"uint8", "unsigned char", "uchar", "uint8_t"}


def load_mask(path, binarize_threshold: int = 0) -> BinaryMask:
    """Read a mask file; pixels strictly above the threshold are foreground."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    suffix = path.suffix.lower()
    if suffix == ".png":
        values = _read_png(path)
    elif suffix == ".nrrd":
        values = _read_nrrd(path)
    else:
        raise MaskFormatError(f"unsupported mask format: {path.name}")
    return BinaryMask(values > binarize_threshold)


def save_mask(mask: BinaryMask, path) -> None:
    """Write a mask losslessly; PNG for 2D, NRRD for 2D or 3D."""
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".png":
        if mask.ndim != 2:
            raise MaskFormatError("PNG holds 2D masks only; use NRRD for 3D")
        img = Image.fromarray(mask.data.astype(np.uint8) * 255, mode="L")
        img.save(path, format="PNG")
    elif suffix == ".nrrd":
        _write_nrrd(mask, path)
    else:
        raise MaskFormatError(f"unsupported mask format: {path.name}")


def _read_png(path: Path) -> np.ndarray:
    with Image.open(path) as img:
        if img.format != "PNG":
            raise MaskFormatError(f"{path.name}: not a PNG file")
        if img.mode == "1":
            img = img.convert("L")
        if img.mode != "L":
            raise MaskFormatError(
                f"{path.name}: unsupported PNG mode {img.mode!r}; "
                "expected 8-bit grayscale"
            )
        return np.asarray(img, dtype=np.uint8)


def _read_nrrd(path: Path) -> np.ndarray:
    raw = path.read_bytes()
    header_end = raw.find(b"\n\n")
    if header_end < 0:
        raise MaskFormatError(f"{path.name}: missing NRRD header terminator")
    header_lines = raw[:header_end].decode("ascii", errors="replace").splitlines()
    payload = raw[header_end + 2 :]

    if not header_lines or not header_lines[0].startswith(_NRRD_MAGIC):
        raise MaskFormatError(f"{path.name}: not an NRRD file")

    fields = {}
    for line in header_lines[1:]:
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise MaskFormatError(f"{path.name}: malformed header line {line!r}")
        key, _, value = line.partition(":")
        fields[key.strip().lower()] = value.lstrip("= ").strip()

    for required in ("type", "dimension", "sizes", "encoding"):
        if required not in fields:
            raise MaskFormatError(f"{path.name}: header lacks {required!r}")
    if fields["type"].lower() not in _NRRD_UINT8:
        raise MaskFormatError(
            f"{path.name}: unsupported voxel type {fields['type']!r}; expected uint8"
        )
    try:
        ndim = int(fields["dimension"])
        sizes = [int(s) for s in fields["sizes"].split()]
    except ValueError as exc:
        raise MaskFormatError(f"{path.name}: corrupt header numbers") from exc
    if len(sizes) != ndim or ndim not in (2, 3) or min(sizes, default=0) < 1:
        raise MaskFormatError(f"{path.name}: invalid sizes {sizes} for {ndim}D")

    encoding = fields["encoding"].lower()
    if encoding == "raw":
        data = payload
    elif encoding in ("gzip", "gz"):
        try:
            data = gzip.decompress(payload)
        except OSError as exc:
            raise MaskFormatError(f"{path.name}: corrupt gzip payload") from exc
    else:
        raise MaskFormatError(
            f"{path.name}: unsupported encoding {fields['encoding']!r}"
        )

    expected = int(np.prod(sizes))
    if len(data) != expected:
        raise MaskFormatError(
            f"{path.name}: payload has {len(data)} bytes, header implies {expected}"
        )
    # sizes are fastest-first; numpy shape is the reverse
    return np.frombuffer(data, dtype=np.uint8).reshape(tuple(reversed(sizes)))


def _write_nrrd(mask: BinaryMask, path: Path) -> None:
    sizes = " ".join(str(s) for s in reversed(mask.dims))
    header = (
        "NRRD0004\n"
        "type: uint8\n"
        f"dimension: {mask.ndim}\n"
        f"sizes: {sizes}\n"
        "encoding: gzip\n"
        "\n"
    )
    payload = gzip.compress(
        np.ascontiguousarray(mask.data.astype(np.uint8)).tobytes(), mtime=0
    )
    path.write_bytes(header.encode("ascii") + payload)
