import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flatcs import config, heatflow, lattice, lie
from flatcs.errors import GroupMismatchError, MembershipError, PreconditionError, StencilError

LC = lattice.LatticeConnection


def frame(lam, n):
    """Constant ``a_i = lam i sigma_i / 2``."""
    a = np.broadcast_to((lam * 0.5j * lie.SIGMA)[:, None, None, None], (3, n, n, n, 2, 2))
    return LC(a.copy(), "SU2")


def quaternion_degree(u):
    """``(1 / 2 pi^2) int det[q, d1 q, d2 q, d3 q]`` for an SU(2)-valued field."""
    q = lie.su2_to_quaternion(u.u)
    h = lattice.grid_spacing(u.n)
    dq = [lattice.diff(q, ax, h) for ax in range(3)]
    return float(np.sum(np.linalg.det(np.stack([q] + dq, axis=-1))) * h**3 / (2 * np.pi**2))


# --- stencils


@pytest.mark.parametrize("order", [2, 4])
def test_diff_matches_symbol_on_fourier_modes(order, monkeypatch):
    monkeypatch.setattr(config.numerics, "stencil_order", order)
    n = 16
    h = lattice.grid_spacing(n)
    th = lattice.coordinates(n)
    for k in (1, 3, 5):
        f = np.sin(k * th[1])
        np.testing.assert_allclose(lattice.diff(f, 1, h), lattice.stencil_symbol(k, h) * np.cos(k * th[1]), atol=1e-12)


def test_diff_is_skew_adjoint(rng):
    n, h = 8, lattice.grid_spacing(8)
    f, g = rng.standard_normal((2, n, n, n))
    assert np.sum(lattice.diff(f, 0, h) * g) == pytest.approx(-np.sum(f * lattice.diff(g, 0, h)), abs=1e-10)


def test_fourth_order_accuracy():
    errs = []
    for n in (16, 32):
        th = lattice.coordinates(n)
        d = lattice.diff(np.sin(th[0]), 0, lattice.grid_spacing(n))
        errs.append(np.max(np.abs(d - np.cos(th[0]))))
    assert np.log2(errs[0] / errs[1]) == pytest.approx(4, abs=0.1)


# --- containers


def test_connection_validation_and_arithmetic(rng):
    a = lattice.random_smooth_connection(8, "SU2", rng)
    b = lattice.random_smooth_connection(8, "SU2", rng)
    np.testing.assert_allclose((a + b - b).a, a.a, atol=1e-15)
    np.testing.assert_allclose((2 * a).a, 2 * a.a)
    with pytest.raises(GroupMismatchError):
        a + LC.zero(8, "U2")
    with pytest.raises(PreconditionError):
        a + LC.zero(16, "SU2")
    with pytest.raises(MembershipError):
        LC(np.ones((3, 8, 8, 8, 2, 2)), "SU2")
    assert a.coarsen().n == 4
    assert not a.a.flags.writeable


# --- curvature


def test_curvature_of_constant_frame():
    # F_12 = [a_1, a_2] = lam^2 [i s1/2, i s2/2] = -lam^2 i s3 / 2
    lam, n = 0.7, 8
    c = lattice.curvature(frame(lam, n))
    np.testing.assert_allclose(c.f[0], np.broadcast_to(-lam**2 * 0.5j * lie.SIGMA[2], c.f[0].shape), atol=1e-14)


def test_flat_from_holonomy_is_flat():
    h = lie.algebra_basis("SU2")[2]
    c = lattice.flat_from_holonomy([0.3 * h, -1.1 * h, 2.0 * h], 16, "SU2")
    assert lattice.curvature(c).sup < 1e-14


def test_flat_from_holonomy_rejects_noncommuting():
    b = lie.algebra_basis("SU2")
    with pytest.raises(PreconditionError):
        lattice.flat_from_holonomy([b[0], b[1], 0 * b[0]], 8, "SU2")


def test_gauge_transform_of_flat_is_nearly_flat(rng):
    u = lattice.random_smooth_gauge(32, "SU2", rng)
    c = lattice.gauge_apply(u, LC.zero(32, "SU2"))
    assert lattice.curvature(c).l2 < 1e-3


def test_gauge_apply_guards(rng):
    u = lattice.GaugeMapField(lie.random_group("SU2", rng, size=(8, 8, 8)), "SU2")
    with pytest.raises(StencilError):
        lattice.gauge_apply(u, LC.zero(8, "SU2"))


# --- Chern-Simons


@pytest.mark.parametrize("lam", [0.3, 0.7, 1.2])
def test_cs_and_energy_of_constant_frame(lam):
    c, z = frame(lam, 8), LC.zero(8, "SU2")
    assert lattice.cs_value(c, z) == pytest.approx(-2 * np.pi * lam**3, rel=1e-12)
    assert heatflow.ym_energy(c) == pytest.approx(3 * np.pi * lam**4, rel=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_cs_cocycle(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (lattice.random_smooth_connection(8, "SU2", rng) for _ in range(3))
    lhs = lattice.cs_value(a, c)
    rhs = lattice.cs_value(a, b) + lattice.cs_value(b, c)
    assert lhs == pytest.approx(rhs, abs=1e-10)


def test_cs_invariant_under_constant_gauge(rng):
    a = lattice.random_smooth_connection(8, "SU2", rng)
    u = lattice.GaugeMapField.constant(lie.random_group("SU2", rng), 8, "SU2")
    z = LC.zero(8, "SU2")
    assert lattice.cs_value(lattice.gauge_apply(u, a), z) == pytest.approx(lattice.cs_value(a, z), abs=1e-12)


def test_path_action_equals_cs_difference(rng):
    a0 = lattice.random_smooth_connection(8, "SU2", rng)
    a1 = lattice.random_smooth_connection(8, "SU2", rng)
    path = [a0 + t * (a1 - a0) for t in np.linspace(0, 1, 4)]
    z = LC.zero(8, "SU2")
    assert lattice.path_action(path) == pytest.approx(lattice.cs_value(a1, z) - lattice.cs_value(a0, z), abs=1e-12)


def test_cs_eval_zero_and_report():
    z = LC.zero(16, "SU2")
    rep = lattice.cs_eval(z, z)
    assert rep.value == 0 and rep.richardson_error == 0
    assert rep.to_json()["grid_n"] == 16


@pytest.mark.parametrize("d", [1, -1, 2])
def test_degree_map_degree_oracle(d):
    u = lattice.degree_map(d, 32)
    assert quaternion_degree(u) == pytest.approx(-d, abs=0.01)


@pytest.mark.parametrize("d", [1, -2])
def test_jump_is_twice_the_degree(d):
    u = lattice.degree_map(d, 32)
    z = LC.zero(32, "SU2")
    rep = lattice.cs_jump(u, z, z)
    assert rep.check.passed
    assert rep.value == pytest.approx(2 * quaternion_degree(u), abs=0.05)


def test_jump_of_degree_zero_maps_vanishes(rng):
    z = LC.zero(16, "SU2")
    u = lattice.random_smooth_gauge(16, "SU2", rng)
    assert abs(lattice.cs_jump(u, z, z).value) < 0.05
    c = lattice.GaugeMapField.constant(lie.random_group("SU2", rng), 16, "SU2")
    assert abs(lattice.cs_jump(c, z, z).value) < 1e-12


def test_degree_map_needs_resolution():
    with pytest.raises(PreconditionError):
        lattice.degree_map(2, 16)


def test_analytic_fields_converge():
    ns, diffs, values = lattice.cs_convergence("abc-frame", (8, 16, 32))
    assert diffs[1] < diffs[0]
    assert np.all(np.isfinite(values))


def test_norms(rng):
    a = lattice.random_smooth_connection(8, "SU2", rng)
    assert lattice.h1_norm(a) >= lattice.l2_norm(a) > 0
