from fractions import Fraction

import numpy as np
import pytest

from flatcs import groups
from flatcs.errors import CatalogError


@pytest.mark.parametrize("name,n_g,big", [("U1", 1, 1), ("SU2", 2, 2), ("SO3", 4, 12), ("U2", 1, 1)])
def test_catalog_entries(name, n_g, big):
    spec = groups.get_spec(name)
    assert spec.n_G == n_g
    assert spec.N_G == big


def test_unknown_group():
    with pytest.raises(CatalogError):
        groups.get_spec("SU3")


def test_granularity():
    # factor / N_G: unitary 1, special unitary 2, complexified real 4
    assert groups.granularity("SU2").granularity == Fraction(1)
    assert groups.granularity("SO3").granularity == Fraction(1, 3)
    assert groups.granularity("U1").granularity == Fraction(1)
    assert groups.granularity("SO3", hypothesis1=True).granularity == Fraction(4)


def test_check_on_lattice():
    v = groups.granularity("SU2")
    assert groups.check_on_lattice(-2.004, v, 0.01).passed
    chk = groups.check_on_lattice(0.5, v, 0.01)
    assert not chk.passed
    assert chk.distance == pytest.approx(0.5)


def test_component_count_of_klein_four_in_so3():
    # centralizer of the diagonal Klein four-group in SO(3) is itself: 4 components
    gens = [np.diag([1.0, -1.0, -1.0]), np.diag([-1.0, 1.0, -1.0])]
    n = groups.centralizer_component_bound(groups.get_spec("SO3"), gens, samples=400, rng=np.random.default_rng(0))
    assert n == 4


def test_component_count_in_su2_of_quaternion_pair():
    # i sigma_1 and i sigma_2 generate the quaternion group; centralizer is {+-I}
    s = np.array([[[0, 1j], [1j, 0]], [[0, 1], [-1, 0]]])
    n = groups.centralizer_component_bound(groups.get_spec("SU2"), list(s), samples=400, rng=np.random.default_rng(0))
    assert n == 2


@pytest.mark.parametrize("name,expected", [("U1", 1), ("SU2", 2), ("SO3", 4)])
def test_n_g_estimate(name, expected):
    est = groups.n_G_estimate(name, trials=5, seed=1, samples=300)
    assert est.bound == expected
    assert est.generators


def test_n_g_estimate_is_deterministic():
    a = groups.n_G_estimate("SO3", trials=4, seed=7, samples=200).to_json()
    b = groups.n_G_estimate("SO3", trials=4, seed=7, samples=200).to_json()
    assert a == b
