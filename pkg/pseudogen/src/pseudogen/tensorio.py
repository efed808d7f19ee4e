"""Reader/writer for the `.pdt` tensor files the imaging engine uses.

One JSON header line, a newline, then raw little-endian float32 values
in row-major order. Implemented here independently so this package
talks to the engine purely through the on-disk format.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

MAGIC = "PDT1"
MAX_DIM = 1 << 20
MAX_ELEMENTS = 1 << 28


class TensorFormatError(ValueError):
    """Raised when a file does not parse as a valid tensor."""


def write_tensor(path: str | Path, array: np.ndarray,
                 meta: dict | None = None) -> None:
    """Write a float32 tensor atomically (temp file + rename)."""
    arr = np.ascontiguousarray(array, dtype=np.float32)
    if not 1 <= arr.ndim <= 4:
        raise TensorFormatError(f"tensor must be 1-4D, got {arr.ndim}D")
    header = {
        "magic": MAGIC,
        "dtype": "f32",
        "byte_order": "LE",
        "layout": "row-major",
        "shape": list(arr.shape),
        "meta": meta or {},
    }
    blob = json.dumps(header, sort_keys=True,
                      separators=(",", ":")).encode() + b"\n"
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with tmp.open("wb") as fh:
        fh.write(blob)
        fh.write(arr.astype("<f4").tobytes())
    os.replace(tmp, path)


def read_header(path: str | Path) -> dict:
    with Path(path).open("rb") as fh:
        line = fh.readline(1 << 16)
    if not line.endswith(b"\n"):
        raise TensorFormatError(f"{path}: unterminated header line")
    try:
        header = json.loads(line)
    except json.JSONDecodeError as exc:
        raise TensorFormatError(f"{path}: header is not JSON: {exc}") from exc
    if header.get("magic") != MAGIC:
        raise TensorFormatError(f"{path}: bad magic {header.get('magic')!r}")
    if header.get("dtype") != "f32" or header.get("byte_order") != "LE":
        raise TensorFormatError(
            f"{path}: unsupported dtype/byte order "
            f"{header.get('dtype')}/{header.get('byte_order')}")
    shape = header.get("shape")
    if (not isinstance(shape, list) or not 1 <= len(shape) <= 4
            or not all(isinstance(d, int) and 0 < d <= MAX_DIM
                       for d in shape)):
        raise TensorFormatError(f"{path}: bad shape {shape!r}")
    if int(np.prod(shape)) > MAX_ELEMENTS:
        raise TensorFormatError(f"{path}: shape {shape} too large")
    return header


def read_tensor(path: str | Path) -> np.ndarray:
    """Read a tensor as float32, validating the payload length."""
    header = read_header(path)
    shape = tuple(header["shape"])
    count = int(np.prod(shape))
    with Path(path).open("rb") as fh:
        fh.readline(1 << 16)
        payload = fh.read()
    if len(payload) != 4 * count:
        raise TensorFormatError(
            f"{path}: expected {4 * count} payload bytes, got {len(payload)}")
    return np.frombuffer(payload, dtype="<f4").reshape(shape).astype(
        np.float32)
