import numpy as np
import pytest

from flatcs import doubling, lattice, lie
from flatcs.errors import FlatnessError, LedgerError, PreconditionError, ResolutionError

LC = lattice.LatticeConnection


def test_reflection_is_an_involution(rng):
    a = lattice.random_smooth_connection(8, "SU2", rng)
    np.testing.assert_array_equal(doubling.reflect(doubling.reflect(a)).a, a.a)
    s = doubling.symmetrize(a)
    assert doubling.symmetry_residual(s) < 1e-15


def test_reflection_reverses_cs(rng):
    # R reverses orientation, so CS(R^* a) = -CS(a) relative to the zero connection
    a = lattice.random_smooth_connection(8, "SU2", rng)
    z = LC.zero(8, "SU2")
    assert lattice.cs_value(doubling.reflect(a), z) == pytest.approx(-lattice.cs_value(a, z), abs=1e-12)


def test_split_assemble_roundtrip(rng):
    a = lattice.random_smooth_connection(16, "SU2", rng)
    dec = doubling.split(a)
    assert dec.b.shape[3] == 9
    assert max(dec.matching_residuals.values()) < 1e-14
    np.testing.assert_array_equal(doubling.assemble(dec).a, a.a)


def test_assemble_rejects_mismatched_halves(rng):
    dec = doubling.split(lattice.random_smooth_connection(8, "SU2", rng))
    dec.c[0] += 0.1 * lie.algebra_basis("SU2")[0]
    with pytest.raises(PreconditionError):
        doubling.assemble(dec)


def test_diagonal_connections():
    b = lie.algebra_basis("SU2")
    sym = LC.constant([0.3 * b[0], 0.2 * b[1], 0 * b[0]], 8, "SU2")
    assert doubling.is_diagonal(sym)
    skew = LC.constant([0 * b[0], 0 * b[0], 0.5 * b[2]], 8, "SU2")
    v = doubling.is_diagonal(skew)
    assert not v and v.normal_residual == pytest.approx(np.max(np.abs(0.5 * b[2])))


def test_bump_support():
    n, eps = 64, np.pi / 4
    s, _ = doubling.interface_distance(n)
    beta = doubling.bump(n, eps)
    assert beta[0] == 1 and beta[n // 2] == 1
    assert np.all(beta[np.abs(s) >= eps / 3] == 0)


@pytest.mark.parametrize("gid", ["SU2", "SO3", "U2"])
def test_temporal_gauge_kills_normal_component(gid, rng):
    a = lattice.random_smooth_connection(64, gid, rng, amplitude=0.4)
    u = doubling.temporal_gauge(a)
    before = doubling.temporal_residual(a)
    after = doubling.temporal_residual(lattice.gauge_apply(u, a))
    assert after < 0.02 * before
    # identity away from the bicollar
    s, _ = doubling.interface_distance(64)
    far = np.abs(s) >= np.pi / 4
    np.testing.assert_allclose(u.u[:, :, far], np.broadcast_to(np.eye(lie.REP_DIM[gid]), u.u[:, :, far].shape), atol=1e-12)


def test_temporal_gauge_needs_resolution(rng):
    with pytest.raises(ResolutionError):
        doubling.temporal_gauge(LC.zero(8, "SU2"))


def test_symmetric_references_agree():
    b = lie.algebra_basis("SU2")
    a0 = LC.zero(16, "SU2")
    a1 = LC.constant([0.4 * b[0], -0.7 * b[2], 0 * b[0]], 16, "SU2")
    assert doubling.symmetric_reference_check(a0, a1, trials=3) < 1e-10


def test_symmetric_reference_check_rejects_asymmetric():
    b = lie.algebra_basis("SU2")
    a1 = LC.constant([0 * b[0], 0 * b[0], 0.3 * b[2]], 8, "SU2")
    with pytest.raises(PreconditionError):
        doubling.symmetric_reference_check(LC.zero(8, "SU2"), a1)


def test_quantization_of_gauge_transformed_flats():
    h = lie.algebra_basis("SU2")[2]
    base = lattice.flat_from_holonomy([0.3 * h, 0.1 * h, -0.4 * h], 32, "SU2")
    v = doubling.quantization_check((lattice.degree_map(1, 32), base), base)
    assert v.passed
    assert v.nearest == -2.0


def test_quantization_requires_flatness():
    a = LC.constant(list(0.5j * lie.SIGMA), 8, "SU2")
    with pytest.raises(FlatnessError):
        doubling.quantization_check(a, LC.zero(8, "SU2"))


def test_ledger_arithmetic():
    led = doubling.gluing_ledger(0.5, 0.0, 2.0, 2)
    assert led.k_n == 2.0
    assert led.kappa_un == pytest.approx(2 * (0.0 - 0.5) + 2.0)
    for n in (1, 2, 3, 4):
        assert doubling.gluing_ledger(0.0, 0.0, 1.7, n).k_n == pytest.approx(0.5 * n * (n - 1) * 1.7, abs=1e-12)


def test_ledger_errors():
    with pytest.raises(LedgerError):
        doubling.gluing_ledger(0.3, 0.0, 0.0, 2)
    with pytest.raises(LedgerError):
        doubling.gluing_ledger(0.5, 0.0, 0.0, 2, kappa_un=0.0)


def test_doubled_map_has_zero_jump():
    u = doubling._half_bump(1, 1, 32)
    z = LC.zero(32, "SU2")
    assert abs(lattice.cs_jump(u, z, z).value + 2) < 0.05
    assert abs(lattice.cs_jump(doubling.doubled(u), z, z).value) < 1e-10


def test_gluing_experiment_small_grid():
    # coarse grid: the hedgehog spans only 8 cells, so use the N < 64 tolerance
    led = doubling.gluing_experiment(2, grid_n=32, tol=0.05)
    assert led.residual < doubling.LEDGER_TOL
    assert led.kappa_un_measured == pytest.approx(-4, abs=0.1)
