"""Serialization of lattice fields: JSON and the FCS1 binary container.

FCS1 layout (all integers little-endian)::

    offset  size  field
    0       4     magic b"FCS1"
    4       4     group tag, ASCII, NUL padded (b"SU2\\0", b"U1\\0\\0", ...)
    8       1     kind: b"A" connection (3, N, N, N, d, d) or b"U" gauge map (N, N, N, d, d)
    9       3     reserved, zero
    12      4     N (uint32)
    16      4     d (uint32)
    20      ...   matrix entries in row-major order, each as two float64 (re, im)

JSON uses ``{"type", "group", "grid_n", "data"}`` with complex entries as
``[re, im]`` pairs.
"""
import json
import struct
from pathlib import Path

import numpy as np

from . import lie
from .errors import PreconditionError
from .lattice import GaugeMapField, LatticeConnection

MAGIC = b"FCS1"
_HEADER = struct.Struct("<4s4sc3xII")
_KINDS = {b"A": "connection", b"U": "gauge"}


def _group_tag(group_id):
    tag = group_id.encode("ascii")
    if len(tag) > 4:
        raise PreconditionError(f"group tag {group_id!r} longer than 4 bytes")
    return tag.ljust(4, b"\0")


def to_bytes(field):
    """FCS1 encoding of a :class:`LatticeConnection` or :class:`GaugeMapField`."""
    if isinstance(field, LatticeConnection):
        kind, data = b"A", field.a
    elif isinstance(field, GaugeMapField):
        kind, data = b"U", field.u
    else:
        raise TypeError(f"cannot serialize {type(field).__name__}")
    head = _HEADER.pack(MAGIC, _group_tag(field.group_id), kind, field.n, data.shape[-1])
    body = np.ascontiguousarray(data, dtype="<c16").tobytes()
    return head + body


def from_bytes(buf):
    if len(buf) < _HEADER.size:
        raise PreconditionError("truncated FCS1 header")
    magic, tag, kind, n, d = _HEADER.unpack_from(buf)
    if magic != MAGIC:
        raise PreconditionError(f"bad magic {magic!r}")
    if kind not in _KINDS:
        raise PreconditionError(f"unknown field kind {kind!r}")
    group_id = tag.rstrip(b"\0").decode("ascii")
    if group_id not in lie.REP_DIM or lie.REP_DIM[group_id] != d:
        raise PreconditionError(f"group tag {group_id!r} does not match matrix size {d}")
    shape = ((3,) if kind == b"A" else ()) + (n, n, n, d, d)
    count = int(np.prod(shape))
    body = buf[_HEADER.size:]
    if len(body) != 16 * count:
        raise PreconditionError(f"FCS1 body has {len(body)} bytes, expected {16 * count}")
    data = np.frombuffer(body, dtype="<c16").reshape(shape).astype(complex)
    if kind == b"A":
        return LatticeConnection(data, group_id)
    return GaugeMapField(data, group_id)


def matrix_to_json(m):
    """Nested lists with complex entries as ``[re, im]``."""
    m = np.asarray(m, dtype=complex)
    return np.stack([m.real, m.imag], axis=-1).tolist()


def matrix_from_json(obj):
    arr = np.asarray(obj, dtype=float)
    if arr.shape[-1] != 2:
        raise PreconditionError("complex entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def to_json(field):
    if isinstance(field, LatticeConnection):
        kind, data = "connection", field.a
    elif isinstance(field, GaugeMapField):
        kind, data = "gauge", field.u
    else:
        raise TypeError(f"cannot serialize {type(field).__name__}")
    return {"type": kind, "group": field.group_id, "grid_n": field.n, "data": matrix_to_json(data)}


def from_json(obj):
    kind = obj.get("type")
    data = matrix_from_json(obj["data"])
    if kind == "connection":
        return LatticeConnection(data, obj["group"])
    if kind == "gauge":
        return GaugeMapField(data, obj["group"])
    raise PreconditionError(f"unknown field type {kind!r}")


def save(field, path):
    """Write ``field`` to ``path``; ``.json`` selects JSON, anything else FCS1."""
    path = Path(path)
    if path.suffix == ".json":
        path.write_text(json.dumps(to_json(field)))
    else:
        path.write_bytes(to_bytes(field))
    return path


def load(path):
    path = Path(path)
    if path.suffix == ".json":
        return from_json(json.loads(path.read_text()))
    return from_bytes(path.read_bytes())
