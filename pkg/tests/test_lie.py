import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from flatcs import lie
from flatcs.errors import BranchCutError, GroupMismatchError, MembershipError, RetractionError

GROUPS = lie.GROUP_IDS


@pytest.mark.parametrize("gid", GROUPS)
def test_expm_matches_scipy(gid, rng):
    xs = lie.random_algebra(gid, rng, scale=1.3, size=20)
    ref = np.array([scipy.linalg.expm(x) for x in xs])
    np.testing.assert_allclose(lie.expm(xs), ref, atol=1e-12)


@pytest.mark.parametrize("gid", GROUPS)
def test_exp_lands_in_group(gid, rng):
    g = lie.expm(lie.random_algebra(gid, rng, size=50))
    assert np.max(lie.unitarity_defect(g)) < 1e-12
    if gid == "SU2":
        np.testing.assert_allclose(np.linalg.det(g), 1, atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-1.0, 1.0), min_size=3, max_size=3))
def test_log_inverts_exp_inside_injectivity_radius(c):
    x = np.einsum("k,kij->ij", np.array(c, dtype=complex), lie.algebra_basis("SU2"))
    np.testing.assert_allclose(lie.logm(lie.expm(x)), x, atol=1e-10)


def test_log_branch_cut():
    g = np.diag([-1.0, -1.0]).astype(complex)
    with pytest.raises(BranchCutError):
        lie.logm(g)


def test_inner_product_normalization():
    # <i s_a / 2, i s_b / 2> = delta_ab / (4 pi^2)
    x = 0.5j * lie.SIGMA
    gram = np.array([[lie.inner(a, b) for b in x] for a in x])
    np.testing.assert_allclose(gram, np.eye(3) / (4 * np.pi**2), atol=1e-15)


@pytest.mark.parametrize("gid", GROUPS)
def test_inner_is_ad_invariant(gid, rng):
    x, y = lie.random_algebra(gid, rng, size=2)
    g = lie.random_group(gid, rng)
    gx, gy = g @ x @ lie.dagger(g), g @ y @ lie.dagger(g)
    assert lie.inner(gx, gy) == pytest.approx(lie.inner(x, y), abs=1e-13)
    assert lie.inner(x, x) > 0


@pytest.mark.parametrize("gid", GROUPS)
def test_project_algebra_idempotent(gid, rng):
    d = lie.REP_DIM[gid]
    m = rng.standard_normal((5, d, d)) + 1j * rng.standard_normal((5, d, d))
    p = lie.project_algebra(m.copy(), gid)
    np.testing.assert_allclose(lie.project_algebra(p.copy(), gid), p, atol=1e-15)
    np.testing.assert_allclose(p + lie.dagger(p), 0, atol=1e-15)


def test_covering_map_is_homomorphism(rng):
    u, v = lie.random_group("SU2", rng, size=2)
    r = lie.su2_to_so3
    np.testing.assert_allclose(r(u @ v), r(u) @ r(v), atol=1e-12)
    np.testing.assert_allclose(r(-u), r(u), atol=1e-12)


def test_so3_to_su2_is_a_preimage(rng):
    u = lie.random_group("SU2", rng, size=100)
    w = lie.so3_to_su2(lie.su2_to_so3(u))
    # w = +-u
    sign = np.sign(np.real(np.einsum("nij,nij->n", np.conj(w), u)))
    np.testing.assert_allclose(w, sign[:, None, None] * u, atol=1e-10)


def test_algebra_isomorphism_commutes_with_exp(rng):
    x = lie.random_algebra("SU2", rng)
    np.testing.assert_allclose(lie.su2_to_so3(lie.expm(x)), scipy.linalg.expm(lie.su2_alg_to_so3(x)), atol=1e-12)
    np.testing.assert_allclose(lie.so3_alg_to_su2(lie.su2_alg_to_so3(x)), x, atol=1e-14)


def test_element_validation():
    with pytest.raises(MembershipError):
        lie.GroupElement(np.diag([1.0, 2.0]), "SU2")
    with pytest.raises(MembershipError):
        lie.GroupElement(np.diag([1j, 1j]), "SU2")  # det -1
    with pytest.raises(MembershipError):
        lie.AlgebraElement(np.eye(2), "SU2")
    with pytest.raises(GroupMismatchError):
        lie.GroupElement.identity("SU2") @ lie.GroupElement.identity("U2")


def test_element_ops(rng):
    x = lie.AlgebraElement(lie.random_algebra("SU2", rng), "SU2")
    y = lie.AlgebraElement(lie.random_algebra("SU2", rng), "SU2")
    g = lie.matrix_exp(x)
    np.testing.assert_allclose(lie.matrix_log(g).matrix, x.matrix, atol=1e-10)
    np.testing.assert_allclose((x.bracket(y) + y.bracket(x)).matrix, 0, atol=1e-15)
    ad = lie.adjoint_action(g, y)
    assert lie.inner_product(ad, ad) == pytest.approx(lie.inner_product(y, y))


def test_retract(rng):
    g = lie.random_group("SO3", rng)
    near = lie.retract_to_group(g + 1e-3 * rng.standard_normal((3, 3)), "SO3")
    assert np.linalg.norm(near.matrix - g) < 5e-3
    with pytest.raises(RetractionError):
        lie.retract_to_group(5 * np.eye(2), "SU2")


def test_commutator_1x1_is_zero():
    x = np.array([[1j]])
    assert lie.commutator(x, 2 * x).shape == (1, 1)
    assert lie.commutator(x, 2 * x)[0, 0] == 0
