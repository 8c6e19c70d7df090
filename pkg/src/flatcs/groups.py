"""Catalog of structure groups and the Chern-Simons granularity they imply.

``n_G`` is the largest number of components of the centralizer of a subgroup
of G, and ``N_G = lcm(1, ..., n_G)``.  The catalog stores these as constants;
:func:`n_G_estimate` recomputes a lower bound numerically by sampling
centralizers.
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.sparse.csgraph import connected_components

from . import lie
from .errors import CatalogError

FLAVOR_FACTOR = {"unitary": 1, "special_unitary": 2, "complexified_real": 4}


@dataclass(frozen=True)
class GroupSpec:
    name: str
    rep_dim: int
    center_order: float
    pi1: str
    cover_name: str
    n_G: int
    rep_flavor: str
    N_G: int = field(init=False)

    def __post_init__(self):
        if self.n_G < 1:
            raise ValueError("n_G must be positive")
        if self.rep_flavor not in FLAVOR_FACTOR:
            raise ValueError(f"unknown representation flavor {self.rep_flavor!r}")
        object.__setattr__(self, "N_G", math.lcm(*range(1, self.n_G + 1)))

    def to_json(self):
        return {
            "name": self.name,
            "rep_dim": self.rep_dim,
            "center_order": "inf" if math.isinf(self.center_order) else int(self.center_order),
            "pi1": self.pi1,
            "cover_name": self.cover_name,
            "n_G": self.n_G,
            "N_G": self.N_G,
            "rep_flavor": self.rep_flavor,
        }


CATALOG = {
    "U1": GroupSpec("U1", 1, math.inf, "Z", "R", 1, "unitary"),
    "SU2": GroupSpec("SU2", 2, 2, "0", "SU2", 2, "special_unitary"),
    "SO3": GroupSpec("SO3", 3, 1, "Z/2", "SU2", 4, "complexified_real"),
    # centralizers in U(n) are products of unitary groups, hence connected;
    # n_G_estimate over 200 trials agrees
    "U2": GroupSpec("U2", 2, math.inf, "Z", "R x SU2", 1, "unitary"),
}


def get_spec(name):
    if isinstance(name, GroupSpec):
        return name
    try:
        return CATALOG[name]
    except KeyError:
        raise CatalogError(f"group {name!r} is not in the catalog") from None


@dataclass(frozen=True)
class GranularityVerdict:
    """Lattice ``granularity * Z`` on which Chern-Simons critical values lie."""

    granularity: Fraction
    hypothesis1: bool

    def nearest(self, value):
        """Nearest lattice point to ``value`` and the distance to it."""
        g = float(self.granularity)
        k = round(value / g)
        return k * g, abs(value - k * g)


@dataclass(frozen=True)
class LatticeCheck:
    """Outcome of testing a measured value against a granularity lattice."""

    value: float
    verdict: GranularityVerdict
    nearest: float
    distance: float
    tolerance: float

    @property
    def passed(self):
        return self.distance <= self.tolerance

    def to_json(self):
        return {
            "value": self.value,
            "granularity": str(self.verdict.granularity),
            "hypothesis1": self.verdict.hypothesis1,
            "nearest": self.nearest,
            "distance": self.distance,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def granularity(spec, hypothesis1=False):
    """Step of the critical-value lattice: ``factor / N_G`` with factor 1, 2 or 4."""
    spec = get_spec(spec)
    denom = 1 if hypothesis1 else spec.N_G
    return GranularityVerdict(Fraction(FLAVOR_FACTOR[spec.rep_flavor], denom), bool(hypothesis1))


def check_on_lattice(value, verdict, rel_tol):
    near, dist = verdict.nearest(value)
    return LatticeCheck(float(value), verdict, float(near), float(dist), rel_tol * float(verdict.granularity))


# ---------------------------------------------------------------------------
# centralizer sampling


def _commutator_residual(g, gens):
    # g: (S, d, d), gens: (k, d, d) -> (S, k, d, d)
    return g[:, None] @ gens[None] - gens[None] @ g[:, None]


def _project_to_centralizer(g, gens, group_id, iters=30):
    """Gauss-Newton on ``g -> exp(X) g`` driving every ``[g, s]`` to zero."""
    basis = lie.algebra_basis(group_id)
    for _ in range(iters):
        res = _commutator_residual(g, gens)
        r = np.concatenate([res.real, res.imag], axis=-1).reshape(len(g), -1)
        if np.max(np.abs(r)) < 1e-14:
            break
        # derivative along basis element b: [b g, s]
        cols = []
        for b in basis:
            dres = _commutator_residual(b @ g, gens)
            cols.append(np.concatenate([dres.real, dres.imag], axis=-1).reshape(len(g), -1))
        jac = np.stack(cols, axis=-1)
        step = -(np.linalg.pinv(jac, rcond=1e-10) @ r[..., None])[..., 0]
        x = np.einsum("sk,kij->sij", step.astype(complex), basis)
        g = lie.retract(lie.expm(x) @ g, group_id)
    res = _commutator_residual(g, gens)
    return g, np.sqrt(np.sum(np.abs(res) ** 2, axis=(-3, -2, -1)))


def centralizer_component_bound(spec, generators, samples=1000, tol=1e-8, cluster_radius=0.5, rng=None):
    """Lower bound for the number of components of the centralizer of ``<generators>``.

    Random Haar samples are pushed onto the centralizer by Gauss-Newton, the
    ones whose commutators vanish to ``tol`` are kept, and survivors are
    clustered by the transitive closure of ``dist < cluster_radius``.
    """
    spec = get_spec(spec)
    gens = [s.matrix if isinstance(s, lie.GroupElement) else np.asarray(s, dtype=complex) for s in generators]
    if not gens:
        return 1
    rng = np.random.default_rng(rng)
    gens = np.stack(gens)
    g = lie.random_group(spec.name, rng, size=samples)
    g, res = _project_to_centralizer(g, gens, spec.name)
    keep = g[res <= tol]
    if len(keep) == 0:
        return 0
    flat = keep.reshape(len(keep), -1)
    dist = np.linalg.norm(flat[:, None, :] - flat[None, :, :], axis=-1)
    ncomp, _ = connected_components(dist < cluster_radius, directed=False)
    return int(ncomp)


def structured_generators(name):
    """Generator sets known to realize the largest centralizer component count."""
    if name == "SU2":
        return [[1j * lie.SIGMA[2], 1j * lie.SIGMA[1]]]
    if name == "SO3":
        klein = [np.diag([1.0, -1.0, -1.0]).astype(complex), np.diag([-1.0, 1.0, -1.0]).astype(complex)]
        half_turn = [np.diag([-1.0, -1.0, 1.0]).astype(complex)]
        return [klein, half_turn]
    if name == "U2":
        return [[np.diag([1.0, -1.0]).astype(complex), np.array([[0, 1], [1, 0]], dtype=complex)]]
    return [[]]


@dataclass
class NGEstimate:
    bound: int
    generators: list
    trials: int

    def to_json(self):
        return {
            "bound": self.bound,
            "trials": self.trials,
            "generators": [[_mat_json(m) for m in gs] for gs in self.generators],
        }


def _mat_json(m):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def n_G_estimate(spec, trials=50, seed=0, samples=1000):
    """Numerical lower bound for ``n_G``; returns an :class:`NGEstimate`.

    Runs :func:`centralizer_component_bound` on the structured generator sets
    and on ``trials`` random sets of 1 to 3 Haar elements; the result is the
    maximum, together with every generator set attaining it.
    """
    spec = get_spec(spec)
    rng = np.random.default_rng(seed)
    sets = [list(s) for s in structured_generators(spec.name)]
    for _ in range(trials):
        k = int(rng.integers(1, 4))
        sets.append(list(lie.random_group(spec.name, rng, size=k)))
    # one child stream per set so the reduction is order-independent
    streams = np.random.SeedSequence(seed).spawn(len(sets))
    counts = [
        centralizer_component_bound(spec, s, samples=samples, rng=np.random.default_rng(ss))
        for s, ss in zip(sets, streams)
    ]
    best = max(counts)
    return NGEstimate(best, [s for s, c in zip(sets, counts) if c == best], trials)
