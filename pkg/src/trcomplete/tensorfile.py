"""Binary tensor container: magic, version, dims, little-endian float64 payload.

Layout (all integers little-endian):

    bytes 0..3    magic ``b"TNSR"``
    bytes 4..7    format version (uint32, currently 1)
    bytes 8..11   element type tag (uint32, 1 = float64 little-endian)
    bytes 12..15  order j (uint32)
    then          j dims (uint64 each)
    then          prod(dims) float64 values in semantic order (first index fastest)

Round trips are bit-exact.
"""

from __future__ import annotations

import struct
from math import prod
from pathlib import Path

import numpy as np

from .tensor import tensor_from_flat, tensor_to_flat

__all__ = ["MAGIC", "VERSION", "FLOAT64_TAG", "TensorFileError", "header_size",
           "save_tensor", "load_tensor"]

MAGIC = b"TNSR"
VERSION = 1
FLOAT64_TAG = 1


class TensorFileError(Exception):
    """Raised for malformed or truncated tensor files."""


def header_size(order: int) -> int:
    return 16 + 8 * order


def save_tensor(path, t: np.ndarray) -> None:
    t = np.asarray(t, dtype=np.float64)
    if t.ndim < 1:
        t = t.reshape(1)
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<III", VERSION, FLOAT64_TAG, t.ndim))
        fh.write(struct.pack(f"<{t.ndim}Q", *t.shape))
        fh.write(tensor_to_flat(t).astype("<f8").tobytes())


def load_tensor(path) -> np.ndarray:
    raw = Path(path).read_bytes()
    if len(raw) < 16:
        raise TensorFileError(f"{path}: truncated header")
    if raw[:4] != MAGIC:
        raise TensorFileError(f"{path}: bad magic {raw[:4]!r}")
    version, tag, order = struct.unpack_from("<III", raw, 4)
    if version != VERSION:
        raise TensorFileError(f"{path}: unsupported version {version}")
    if tag != FLOAT64_TAG:
        raise TensorFileError(f"{path}: unsupported element type tag {tag}")
    if order < 1:
        raise TensorFileError(f"{path}: invalid order {order}")
    if len(raw) < header_size(order):
        raise TensorFileError(f"{path}: truncated dims")
    dims = struct.unpack_from(f"<{order}Q", raw, 16)
    if any(d < 1 for d in dims):
        raise TensorFileError(f"{path}: invalid dims {dims}")
    count = prod(dims)
    expected = header_size(order) + 8 * count
    if len(raw) != expected:
        raise TensorFileError(f"{path}: size {len(raw)} != expected {expected}")
    values = np.frombuffer(raw, dtype="<f8", count=count, offset=header_size(order))
    return tensor_from_flat(values.astype(np.float64), dims)
