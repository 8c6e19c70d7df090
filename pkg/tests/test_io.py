import struct

import numpy as np
import pytest

from flatcs import io, lattice, lie
from flatcs.errors import PreconditionError


@pytest.mark.parametrize("gid", ["U1", "SU2", "SO3", "U2"])
def test_fcs1_roundtrip(gid, rng, tmp_path):
    a = lattice.random_smooth_connection(8, gid, rng)
    path = io.save(a, tmp_path / "a.fcs")
    b = io.load(path)
    assert b.group_id == gid
    np.testing.assert_array_equal(b.a, a.a)


def test_fcs1_header_layout(rng):
    u = lattice.random_smooth_gauge(8, "SU2", rng)
    buf = io.to_bytes(u)
    magic, tag, kind, n, d = struct.unpack_from("<4s4sc3xII", buf)
    assert (magic, tag, kind, n, d) == (b"FCS1", b"SU2\0", b"U", 8, 2)
    assert len(buf) == 20 + 16 * 8**3 * 4
    # first entry, little-endian (re, im)
    re, im = struct.unpack_from("<dd", buf, 20)
    assert complex(re, im) == u.u[0, 0, 0, 0, 0]


def test_json_roundtrip(rng, tmp_path):
    u = lattice.random_smooth_gauge(8, "U2", rng)
    v = io.load(io.save(u, tmp_path / "u.json"))
    np.testing.assert_allclose(v.u, u.u, atol=0)


@pytest.mark.parametrize(
    "mutate",
    [
        lambda b: b"XCS1" + b[4:],
        lambda b: b[:4] + b"SU3\0" + b[8:],
        lambda b: b[:8] + b"Q" + b[9:],
        lambda b: b[:-8],
        lambda b: b[:10],
    ],
)
def test_corrupt_containers_are_rejected(mutate):
    buf = io.to_bytes(lattice.LatticeConnection.zero(8, "SU2"))
    with pytest.raises(PreconditionError):
        io.from_bytes(mutate(buf))


def test_matrix_json():
    m = lie.expm(0.3j * lie.SIGMA[1])
    np.testing.assert_array_equal(io.matrix_from_json(io.matrix_to_json(m)), m)
