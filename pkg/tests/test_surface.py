import json

import numpy as np
import pytest

from flatcs import lie, surface
from flatcs.errors import FeasibilityError, MembershipError, PreconditionError

Sig = surface.CompressionBodySignature


def test_quaternion_pair_solves_minus_identity():
    # [i, j] = i j i^-1 j^-1 = -1 in the unit quaternions
    a, b = 1j * lie.SIGMA[0], 1j * lie.SIGMA[1]
    pairs = np.array([[a, b]])
    np.testing.assert_allclose(surface.commutator_product(pairs), -np.eye(2), atol=1e-15)
    assert surface.surface_defect(pairs, -np.eye(2)) < 1e-15


@pytest.mark.parametrize("genus", [1, 2, 3])
@pytest.mark.parametrize("delta", ["I", "minusI"])
def test_solver_reaches_tolerance(genus, delta):
    data = Sig.closed_surface(genus, delta)
    p = surface.solve_commutator(data, seed=genus)
    assert surface.commutator_defect(p, data) <= surface.DEFECT_TOL
    assert np.max(lie.unitarity_defect(p.surface_tuples[0])) < 1e-10


def test_genus_zero_minus_identity_is_empty():
    with pytest.raises(FeasibilityError):
        surface.solve_commutator(Sig.closed_surface(0, "minusI"))


def test_abelian_groups_reject_minus_identity():
    with pytest.raises(FeasibilityError):
        Sig.closed_surface(1, "minusI", group="U2")
    with pytest.raises(FeasibilityError):
        Sig.closed_surface(1, 3, group="U1")
    with pytest.raises(MembershipError):
        Sig.closed_surface(1, "half")


def test_u1_variety_is_a_torus():
    data = Sig.closed_surface(2, "I", group="U1")
    p = surface.solve_commutator(data, seed=0)
    assert surface.commutator_defect(p, data) < 1e-14


def test_u2_solutions_carry_phases():
    data = Sig.closed_surface(1, "I", group="U2")
    p = surface.solve_commutator(data, seed=4)
    assert surface.commutator_defect(p, data) <= surface.DEFECT_TOL
    dets = np.linalg.det(p.surface_tuples[0])
    assert np.max(np.abs(dets - 1)) > 1e-3


def test_conjugation_preserves_defect(rng):
    data = Sig.closed_surface(2, "minusI")
    p = surface.solve_commutator(data, seed=5)
    q = p.conjugate(lie.random_group("SU2", rng))
    assert surface.commutator_defect(q, data) <= 1e-8


def test_align_recovers_conjugator(rng):
    data = Sig.closed_surface(2, "I")
    p = surface.solve_commutator(data, seed=6)
    g = lie.random_group("SU2", rng)
    al = surface.align(p, p.conjugate(g))
    assert al.residual < 1e-8
    # central ambiguity: g up to sign
    assert min(np.linalg.norm(al.g - g), np.linalg.norm(al.g + g)) < 1e-8


@pytest.mark.parametrize("delta", ["I", "minusI"])
def test_connect_stays_on_variety(delta):
    data = Sig.closed_surface(2, delta)
    p0 = surface.solve_commutator(data, seed=10)
    p1 = surface.solve_commutator(data, seed=11)
    path = surface.connect(p0, p1, data, steps=24)
    assert path[0] is p0 and path[-1] is p1
    assert max(surface.commutator_defect(q, data) for q in path) <= surface.PATH_TOL
    # consecutive points stay close
    jumps = [np.linalg.norm(a.generators() - b.generators()) for a, b in zip(path, path[1:])]
    assert max(jumps) < 1.5


def test_connect_rejects_non_representations():
    # the quaternion pair satisfies the relation for -I, not I
    data = Sig.closed_surface(1, "I")
    bad = surface.RepPoint((np.array([[1j * lie.SIGMA[0], 1j * lie.SIGMA[1]]]),), np.zeros((0, 2, 2)))
    with pytest.raises(PreconditionError):
        surface.connect(bad, bad, data)


def test_restrictions_of_compression_body():
    data = Sig((1, 2), 1, ("minusI", "minusI"))
    p = surface.solve_commutator(data, seed=2)
    minus = surface.restrict_minus(p, data)
    assert [r.pairs.shape[0] for r in minus] == [1, 2]
    plus = surface.restrict_plus(p, data)
    assert plus.surface.genus == 4
    # delta_+ = (-I)(-I) = I
    assert surface.surface_defect(plus.pairs, plus.surface.delta) < 1e-8


def test_handlebody_has_free_images_only():
    data = Sig.handlebody(3)
    p = surface.solve_commutator(data, seed=0)
    assert p.free_images.shape == (3, 2, 2)
    assert surface.restrict_plus(p, data).surface.genus == 3


def test_rep_point_json_roundtrip():
    data = Sig.closed_surface(2, "minusI")
    p = surface.solve_commutator(data, seed=3)
    q = surface.RepPoint.from_json(json.loads(json.dumps(p.to_json())))
    np.testing.assert_array_equal(q.generators(), p.generators())
