import numpy as np
import pytest
import scipy.linalg

from flatcs import holonomy, lattice, lie
from flatcs.errors import FlatnessError, PreconditionError
from flatcs.holonomy import LatticeLoop

LC = lattice.LatticeConnection


def test_loop_validation():
    with pytest.raises(PreconditionError):
        LatticeLoop(np.array([[0, 0, 0], [1, 1, 0]]), 8)
    with pytest.raises(PreconditionError):
        LatticeLoop(np.array([[0, 0, 0], [1, 0, 0]]), 8)
    loop = LatticeLoop.axis(2, 8, winding=-2)
    assert len(loop) == 16
    assert len(LatticeLoop.rectangle(8, lengths=(2, 3))) == 10


@pytest.mark.parametrize("gid", ["SU2", "SO3", "U2"])
def test_constant_connection_holonomy_is_exponential(gid, rng):
    n = 16
    xi = lie.random_algebra(gid, rng)
    z = np.zeros_like(xi)
    conn = LC.constant([xi, z, z], n, gid)
    g = holonomy.holonomy(conn, LatticeLoop.axis(0, n)).matrix
    np.testing.assert_allclose(g, scipy.linalg.expm(-2 * np.pi * xi), atol=1e-12)


def test_contractible_loop_on_flat_connection_is_trivial():
    b = lie.algebra_basis("SU2")[0]
    conn = lattice.flat_from_holonomy([0.4 * b, 1.3 * b, -0.2 * b], 16, "SU2")
    g = holonomy.holonomy(conn, LatticeLoop.rectangle(16, axes=(0, 1), lengths=(5, 3))).matrix
    np.testing.assert_allclose(g, np.eye(2), atol=1e-12)


@pytest.mark.parametrize("c", [0.3, 1.7, -2.4])
def test_u1_cover_holonomy_is_the_unwrapped_angle(c):
    n = 16
    conn = lattice.flat_from_holonomy([np.array([[1j * c]]), np.zeros((1, 1)), np.zeros((1, 1))], n, "U1")
    lift = holonomy.tilde_holonomy(conn, LatticeLoop.axis(0, n))
    assert lift.angle == pytest.approx(-2 * np.pi * c, abs=1e-10)
    np.testing.assert_allclose(lift.project().matrix, holonomy.holonomy(conn, LatticeLoop.axis(0, n)).matrix)


def test_u2_cover_projects_to_holonomy(rng):
    n = 16
    x = lie.random_algebra("U2", rng, scale=0.8)
    conn = LC.constant([x, 0 * x, 0 * x], n, "U2")
    loop = LatticeLoop.axis(0, n)
    lift = holonomy.tilde_holonomy(conn, loop)
    np.testing.assert_allclose(lift.project().matrix, holonomy.holonomy(conn, loop).matrix, atol=1e-10)
    # the R-factor records the winding of the determinant
    assert 2 * lift.angle == pytest.approx(float(np.imag(np.trace(-2 * np.pi * x))), abs=1e-9)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_so3_full_turns_lift_to_signs(k, rng):
    # a rotation by 2 pi k about a random axis: trivial in SO(3), (-1)^k in SU(2)
    axis = rng.standard_normal(3)
    axis /= np.linalg.norm(axis)
    x = lie.su2_alg_to_so3(0.5j * k * np.einsum("a,aij->ij", axis, lie.SIGMA))
    n = 16
    conn = LC.constant([x, 0 * x, 0 * x], n, "SO3")
    loop = LatticeLoop.axis(0, n)
    np.testing.assert_allclose(holonomy.holonomy(conn, loop).matrix, np.eye(3), atol=1e-10)
    lift = holonomy.tilde_holonomy(conn, loop)
    np.testing.assert_allclose(lift.matrix, (-1) ** k * np.eye(2), atol=1e-10)


def test_cover_holonomy_requires_flatness():
    conn = LC.constant(list(0.5j * lie.SIGMA), 8, "SU2")
    with pytest.raises(FlatnessError):
        holonomy.tilde_holonomy(conn, LatticeLoop.axis(0, 8))


def test_multiplicativity_is_exact(rng):
    conn = lattice.random_smooth_connection(16, "SU2", rng)
    l1 = LatticeLoop.axis(0, 16)
    l2 = LatticeLoop.rectangle(16, axes=(1, 2), lengths=(3, 4))
    assert holonomy.multiplicativity_check(conn, l1, l2) < 1e-12


def test_equivariance_converges(rng):
    conn = lattice.random_smooth_connection(16, "SU2", rng, amplitude=0.3, kmax=1)
    u = lattice.random_smooth_gauge(16, "SU2", rng, amplitude=0.5)
    errs = []
    for n in (16, 32):
        # resample the same smooth fields on the finer grid by spectral-free reconstruction
        c = conn if n == 16 else _refine(conn)
        v = u if n == 16 else _refine_gauge(u)
        errs.append(holonomy.holonomy_equivariance_check(c, LatticeLoop.axis(1, n), v))
    assert errs[1] < errs[0] / 3


def test_equivariance_exact_for_constant_gauge(rng):
    conn = lattice.random_smooth_connection(16, "SU2", rng)
    u = lattice.GaugeMapField.constant(lie.random_group("SU2", rng), 16, "SU2")
    assert holonomy.holonomy_equivariance_check(conn, LatticeLoop.axis(2, 16), u) < 1e-12


def _refine(conn):
    from numpy.fft import fftn, ifftn

    n = conn.n
    spec = fftn(conn.a, axes=(1, 2, 3))
    big = np.zeros((3, 2 * n, 2 * n, 2 * n) + conn.a.shape[-2:], dtype=complex)
    k = np.r_[0 : n // 2, -n // 2 : 0]
    ix = np.ix_(range(3), k, k, k)
    big[ix] = spec
    return LC(lie.project_algebra(ifftn(big, axes=(1, 2, 3)) * 8, conn.group_id), conn.group_id)


def _refine_gauge(u):
    # gauge maps are exponentials of band-limited fields; refine the logarithm
    x = lie.logm(u.u)
    c = _refine(LC(np.stack([x, x, x]), u.group_id)).a[0]
    return lattice.GaugeMapField(lie.expm(c), u.group_id)
