"""Binary tensor container ("THOP" format) shared by all tensor kinds.

Layout, integers little-endian:

    magic "THOP" | version u32 | semantics u8 (0 simple, 1 walk) |
    payload u8 (0 float64, 1 int64) | L u32 | rows u32 | cols u32 |
    depth u32 | entries, 8 bytes each, row-major (i outer, j middle, k inner)

Integer payloads hold occurrence-count tensors; float payloads hold
normalized tensors (depth == n) or depth-reduced tensors (depth == d).
"""

from __future__ import annotations

import struct

import numpy as np

from .errors import ParseError
from .reduce import ReducedTensor
from .tensors import NormalizedTensor, PathTensor, Semantics

MAGIC = b"THOP"
FORMAT_VERSION = 1

_HEADER = struct.Struct("<4sIBBIIII")
_SEMANTICS_CODE = {Semantics.SIMPLE_PATH: 0, Semantics.WALK: 1}
_CODE_SEMANTICS = {code: sem for sem, code in _SEMANTICS_CODE.items()}
_PAYLOAD_FLOAT = 0
_PAYLOAD_INT = 1


def write_tensor(path, tensor) -> None:
    """Serialize a PathTensor, NormalizedTensor, or ReducedTensor."""
    if isinstance(tensor, PathTensor):
        payload, dtype, depth = _PAYLOAD_INT, "<i8", tensor.n
    elif isinstance(tensor, NormalizedTensor):
        payload, dtype, depth = _PAYLOAD_FLOAT, "<f8", tensor.n
    elif isinstance(tensor, ReducedTensor):
        payload, dtype, depth = _PAYLOAD_FLOAT, "<f8", tensor.d
    else:
        raise TypeError(f"cannot serialize {type(tensor).__name__}")
    data = np.ascontiguousarray(tensor.values, dtype=dtype)
    header = _HEADER.pack(
        MAGIC,
        FORMAT_VERSION,
        _SEMANTICS_CODE[tensor.semantics],
        payload,
        tensor.length,
        tensor.n,
        tensor.n,
        depth,
    )
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(data.tobytes(order="C"))


def read_tensor(path):
    """Read a THOP file back into the matching tensor type.

    Integer payloads become PathTensors; float payloads become a
    NormalizedTensor when depth == n and a ReducedTensor otherwise.
    """
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < _HEADER.size:
        raise ParseError("file too short for a THOP header")
    magic, version, sem_code, payload, length, rows, cols, depth = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise ParseError("not a THOP tensor file (bad magic)")
    if version != FORMAT_VERSION:
        raise ParseError(f"unsupported THOP format version {version}")
    if rows != cols:
        raise ParseError(f"row/column counts differ: {rows} vs {cols}")
    if sem_code not in _CODE_SEMANTICS:
        raise ParseError(f"unknown semantics code {sem_code}")
    expected = _HEADER.size + rows * cols * depth * 8
    if len(blob) != expected:
        raise ParseError(
            f"payload size mismatch: expected {expected} bytes, file has {len(blob)}"
        )
    semantics = _CODE_SEMANTICS[sem_code]
    if payload == _PAYLOAD_INT:
        if depth != rows:
            raise ParseError("integer tensors must have depth == n")
        values = (
            np.frombuffer(blob, dtype="<i8", offset=_HEADER.size)
            .reshape(rows, cols, depth)
            .astype(np.int64)
        )
        return PathTensor(n=rows, length=length, semantics=semantics, values=values)
    if payload == _PAYLOAD_FLOAT:
        values = (
            np.frombuffer(blob, dtype="<f8", offset=_HEADER.size)
            .reshape(rows, cols, depth)
            .astype(np.float64)
        )
        if depth == rows:
            return NormalizedTensor(n=rows, length=length, semantics=semantics, values=values)
        return ReducedTensor(n=rows, length=length, semantics=semantics, d=depth, values=values)
    raise ParseError(f"unknown payload code {payload}")
