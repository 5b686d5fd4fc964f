import struct

import numpy as np
import pytest

from gpvortex.gpxf import GPXFError, decode, encode, read_field, write_field
from gpvortex.torus_grid import TorusGrid


@pytest.fixture
def grid():
    return TorusGrid((16, 18, 20), (1.0, 2.0, 0.5))


def test_round_trip_all_kinds(grid, tmp_path):
    rng = np.random.default_rng(0)
    fields = [rng.normal(size=grid.shape),
              rng.normal(size=grid.shape) + 1j * rng.normal(size=grid.shape),
              rng.normal(size=(3,) + grid.shape)]
    for k, f in enumerate(fields):
        path = tmp_path / f"f{k}.gpxf"
        write_field(path, grid, f)
        g2, f2 = read_field(path)
        assert g2 == grid
        assert np.array_equal(f2, f)
        assert f2.dtype == f.dtype


def test_header_and_node_order(grid):
    f = np.zeros(grid.shape)
    f[1, 0, 0] = 7.0
    f[0, 1, 0] = 9.0
    data = encode(grid, f)
    magic, version, n1, n2, n3, L1, L2, L3, kind = struct.unpack_from("<4sI3I3dI", data)
    assert (magic, version, kind) == (b"GPXF", 1, 1)
    assert (n1, n2, n3) == grid.n and (L1, L2, L3) == grid.L
    vals = np.frombuffer(data, "<f8", offset=48)
    # axis 1 varies fastest
    assert vals[1] == 7.0 and vals[16] == 9.0


def test_interleaved_complex_and_vector_payloads(grid):
    z = np.zeros(grid.shape, complex)
    z[0, 0, 0] = 1 + 2j
    vals = np.frombuffer(encode(grid, z), "<f8", offset=48)
    assert list(vals[:2]) == [1.0, 2.0]
    v = np.zeros((3,) + grid.shape)
    v[:, 1, 0, 0] = (4.0, 5.0, 6.0)
    vals = np.frombuffer(encode(grid, v), "<f8", offset=48)
    assert list(vals[3:6]) == [4.0, 5.0, 6.0]


def test_corrupt_inputs(grid):
    data = encode(grid, np.zeros(grid.shape))
    with pytest.raises(GPXFError):
        decode(b"XXXX" + data[4:])
    with pytest.raises(GPXFError):
        decode(data[:-8])
    with pytest.raises(GPXFError):
        decode(data[:20])
    bad = bytearray(data)
    struct.pack_into("<I", bad, 8, 15)
    with pytest.raises(GPXFError):
        decode(bytes(bad))
    with pytest.raises(GPXFError):
        encode(grid, np.zeros((4, 4, 4)))
