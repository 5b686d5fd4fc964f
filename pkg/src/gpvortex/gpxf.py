"""Binary field files (GPXF).

Layout, all little-endian: magic ``GPXF``; u32 version (1); u32 x3 node
counts; f64 x3 periods; u32 kind (1 real, 2 complex, 3 vector); f64
payload with axis 1 varying fastest.  Complex values are stored as
(re, im) pairs and vectors as (v1, v2, v3) triples per node.
"""

from __future__ import annotations

import os
import struct
import tempfile

import numpy as np

from .torus_grid import GridError, TorusGrid

MAGIC = b"GPXF"
VERSION = 1
KIND_REAL, KIND_COMPLEX, KIND_VECTOR = 1, 2, 3
_HEADER = struct.Struct("<4sI3I3dI")


class GPXFError(ValueError):
    pass


def _kind_of(grid: TorusGrid, f: np.ndarray) -> int:
    if f.shape == grid.shape:
        return KIND_COMPLEX if np.iscomplexobj(f) else KIND_REAL
    if f.shape == (3,) + grid.shape and not np.iscomplexobj(f):
        return KIND_VECTOR
    raise GPXFError(f"field of shape {f.shape} does not match grid {grid.shape}")


def encode(grid: TorusGrid, f) -> bytes:
    f = np.asarray(f)
    kind = _kind_of(grid, f)
    header = _HEADER.pack(MAGIC, VERSION, *grid.shape, *(float(v) for v in grid.L), kind)
    if kind == KIND_REAL:
        payload = f.astype("<f8").ravel(order="F")
    elif kind == KIND_COMPLEX:
        z = f.ravel(order="F")
        payload = np.stack([z.real, z.imag], axis=1).astype("<f8").ravel()
    else:
        # (3, n1, n2, n3) -> (n3, n2, n1, 3) in C order puts axis 1 fastest among nodes
        payload = np.ascontiguousarray(np.transpose(f, (3, 2, 1, 0))).astype("<f8").ravel()
    return header + payload.tobytes()


def decode(data: bytes):
    """Return (grid, field) from GPXF bytes."""
    if len(data) < _HEADER.size:
        raise GPXFError("file shorter than the GPXF header")
    magic, version, n1, n2, n3, L1, L2, L3, kind = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise GPXFError("bad magic (not a GPXF file)")
    if version != VERSION:
        raise GPXFError(f"unsupported GPXF version {version}")
    if kind not in (KIND_REAL, KIND_COMPLEX, KIND_VECTOR):
        raise GPXFError(f"unknown field kind {kind}")
    try:
        grid = TorusGrid((n1, n2, n3), (L1, L2, L3))
    except GridError as exc:
        raise GPXFError(f"invalid grid in header: {exc}") from None
    per = {KIND_REAL: 1, KIND_COMPLEX: 2, KIND_VECTOR: 3}[kind]
    count = n1 * n2 * n3 * per
    if len(data) != _HEADER.size + 8 * count:
        raise GPXFError(f"payload has {len(data) - _HEADER.size} bytes, expected {8 * count}")
    vals = np.frombuffer(data, dtype="<f8", offset=_HEADER.size).astype(float)
    if kind == KIND_REAL:
        f = vals.reshape((n1, n2, n3), order="F")
    elif kind == KIND_COMPLEX:
        pairs = vals.reshape(-1, 2)
        f = (pairs[:, 0] + 1j * pairs[:, 1]).reshape((n1, n2, n3), order="F")
    else:
        f = np.transpose(vals.reshape(n3, n2, n1, 3), (3, 2, 1, 0)).copy()
    return grid, f


def atomic_write_bytes(path, data: bytes) -> None:
    """Write to a temporary file in the target directory, then rename over the target."""
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_field(path, grid: TorusGrid, f) -> None:
    atomic_write_bytes(path, encode(grid, f))


def read_field(path):
    with open(path, "rb") as fh:
        return decode(fh.read())
