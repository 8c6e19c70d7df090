"""Representation variety of a compression body.

A compression body H with incoming boundary ``Sigma_-`` (surfaces of genus
g_1, ..., g_s) and ``t`` one-handles is homotopy equivalent to a wedge of
those surfaces and ``t`` circles.  A point of its representation variety is a
tuple of matrices ``(A_ij, B_ij)`` with ``prod_j [A_ij, B_ij] = delta_i`` for
every surface, together with ``t`` unconstrained free-loop images.

Solving happens in the universal cover realized by SU(2): SO(3) bundles use
``delta = -I`` for the nontrivial class, and for U(1) and U(2) the abelian
winding of delta must vanish (otherwise there are no flat connections).
Commutators of U(2) elements only see the SU(2) factor, so U(2) points are
SU(2) solutions times free phases.
"""
from dataclasses import dataclass

import numpy as np

from . import lie
from .errors import (
    BranchCutError,
    ContinuationError,
    FeasibilityError,
    MembershipError,
    PreconditionError,
    SolverError,
)

DEFECT_TOL = 1e-8
PATH_TOL = 1e-6
COVER_DIM = {"SU2": 2, "SO3": 2, "U2": 2, "U1": 1}


def _delta_matrix(delta, group):
    """Central element of the cover as a matrix; integers are abelian windings."""
    d = COVER_DIM[group]
    if isinstance(delta, str):
        if delta in ("I", "identity", "plusI"):
            return np.eye(d, dtype=complex)
        if delta in ("minusI", "-I"):
            if group not in ("SU2", "SO3"):
                raise FeasibilityError(f"-I is not a central element of the {group} cover relation")
            return -np.eye(d, dtype=complex)
        raise MembershipError(f"unknown delta {delta!r}")
    if np.isscalar(delta) and group in ("U1", "U2"):
        if int(delta) != 0:
            raise FeasibilityError("the R-factor of delta is nonzero: no flat connections")
        return np.eye(d, dtype=complex)
    m = np.asarray(delta, dtype=complex)
    if m.shape != (d, d):
        raise MembershipError(f"delta must be {d}x{d}")
    if np.max(np.abs(m - m[0, 0] * np.eye(d))) > 1e-12 or abs(abs(m[0, 0]) - 1) > 1e-12:
        raise MembershipError("delta must be central")
    if group in ("U1", "U2") and abs(m[0, 0] - 1) > 1e-12:
        raise FeasibilityError("the R-factor of delta is nonzero: no flat connections")
    if group in ("SU2", "SO3") and abs(abs(np.real(m[0, 0])) - 1) > 1e-12:
        raise MembershipError("delta must be +-I in SU(2)")
    return m


@dataclass(frozen=True)
class SurfaceData:
    genus: int
    delta: np.ndarray


@dataclass(frozen=True, eq=False)
class CompressionBodySignature:
    """Handle data of a compression body: genera of ``Sigma_-``, one-handle count, deltas."""

    surface_genera: tuple
    free_rank: int
    deltas: tuple
    group: str = "SU2"

    def __post_init__(self):
        if self.group not in COVER_DIM:
            raise MembershipError(f"unsupported group {self.group!r}")
        genera = tuple(int(g) for g in self.surface_genera)
        deltas = tuple(self.deltas) if len(self.deltas) else ("I",) * len(genera)
        if len(deltas) != len(genera):
            raise PreconditionError("one delta per surface is required")
        if any(g < 0 for g in genera) or self.free_rank < 0:
            raise PreconditionError("genera and free rank must be non-negative")
        object.__setattr__(self, "surface_genera", genera)
        object.__setattr__(self, "deltas", tuple(_delta_matrix(d, self.group) for d in deltas))

    @property
    def plus_genus(self):
        """Genus of the outgoing boundary ``Sigma_+``."""
        return sum(self.surface_genera) + self.free_rank

    @property
    def delta_plus(self):
        out = np.eye(COVER_DIM[self.group], dtype=complex)
        for d in self.deltas:
            out = out @ d
        return out

    @classmethod
    def closed_surface(cls, genus, delta="I", group="SU2"):
        return cls((genus,), 0, (delta,), group)

    @classmethod
    def handlebody(cls, genus, group="SU2"):
        return cls((), genus, (), group)


@dataclass(frozen=True, eq=False)
class RepPoint:
    """Surface tuples (one ``(g_i, 2, d, d)`` array per surface) plus ``(t, d, d)`` free images."""

    surface_tuples: tuple
    free_images: np.ndarray

    def to_json(self):
        return {
            "surface_tuples": [[[_mjson(p[0]), _mjson(p[1])] for p in s] for s in self.surface_tuples],
            "free_images": [_mjson(m) for m in self.free_images],
        }

    @classmethod
    def from_json(cls, obj):
        tuples = tuple(
            np.array([[_mfromjson(a), _mfromjson(b)] for a, b in s], dtype=complex).reshape(len(s), 2, *_shape(s))
            for s in obj["surface_tuples"]
        )
        d = tuples[0].shape[-1] if tuples else 2
        free = np.array([_mfromjson(m) for m in obj["free_images"]], dtype=complex)
        if not len(free):
            d = free.shape[-1] if free.ndim == 3 else d
            free = np.zeros((0, d, d), dtype=complex)
        return cls(tuples, free)

    def conjugate(self, g):
        """Pointwise ``g^{-1} X g``."""
        gi = lie.dagger(g)
        return RepPoint(tuple(gi @ s @ g for s in self.surface_tuples), gi @ self.free_images @ g)

    def generators(self):
        """All matrices in a fixed order (surface pairs, then free images)."""
        parts = [s.reshape(-1, *s.shape[-2:]) for s in self.surface_tuples]
        parts.append(self.free_images.reshape(-1, *self.free_images.shape[-2:]))
        return np.concatenate(parts) if parts else np.zeros((0, 2, 2), dtype=complex)


def _shape(s):
    if not len(s):
        return (2, 2)
    m = _mfromjson(s[0][0])
    return m.shape


def _mjson(m):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def _mfromjson(rows):
    return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)


@dataclass(frozen=True, eq=False)
class SurfaceRep:
    """Representation of a single closed surface group."""

    surface: SurfaceData
    pairs: np.ndarray


# ---------------------------------------------------------------------------
# relation and defect


def commutator_product(pairs):
    """``prod_j A_j B_j A_j^{-1} B_j^{-1}`` for ``pairs`` of shape ``(g, 2, d, d)``."""
    d = pairs.shape[-1] if len(pairs) else 2
    out = np.eye(d, dtype=complex)
    for a, b in pairs:
        out = out @ a @ b @ lie.dagger(a) @ lie.dagger(b)
    return out


def surface_defect(pairs, delta):
    """``||log(prod [A_j, B_j] delta^{-1})||``; ``inf`` on the branch cut."""
    w = commutator_product(pairs) @ lie.dagger(delta)
    try:
        return float(lie.norm(lie.logm(w)))
    except BranchCutError:
        return float("inf")


def _check_shapes(point, data):
    if len(point.surface_tuples) != len(data.surface_genera):
        raise PreconditionError("point and signature disagree on the number of surfaces")
    for s, g in zip(point.surface_tuples, data.surface_genera):
        if len(s) != g:
            raise PreconditionError("point and signature disagree on a genus")
    if len(point.free_images) != data.free_rank:
        raise PreconditionError("point and signature disagree on the free rank")


def commutator_defect(point, data):
    """Largest surface defect of ``point``; 0 iff it is a representation."""
    _check_shapes(point, data)
    defects = [surface_defect(s, d) for s, d in zip(point.surface_tuples, data.deltas)]
    return max(defects, default=0.0)


# ---------------------------------------------------------------------------
# descent


def _jacobian(pairs, basis):
    """Derivative of the relation word under ``X -> exp(eps b) X`` for every generator and basis b."""
    g = len(pairs)
    d = pairs.shape[-1]
    comms = [a @ b @ lie.dagger(a) @ lie.dagger(b) for a, b in pairs]
    prefix = [np.eye(d, dtype=complex)]
    for c in comms:
        prefix.append(prefix[-1] @ c)
    suffix = [np.eye(d, dtype=complex)]
    for c in reversed(comms):
        suffix.append(c @ suffix[-1])
    suffix = suffix[::-1]
    cols = []
    for j, (a, b) in enumerate(pairs):
        ai, bi = lie.dagger(a), lie.dagger(b)
        for e in basis:
            da = e @ a @ b @ ai @ bi - a @ b @ ai @ e @ bi
            cols.append(prefix[j] @ da @ suffix[j + 1])
        for e in basis:
            db = a @ e @ b @ ai @ bi - a @ b @ ai @ bi @ e
            cols.append(prefix[j] @ db @ suffix[j + 1])
    jac = np.stack(cols, axis=-1).reshape(d * d, -1)
    return np.concatenate([jac.real, jac.imag])


def _residual(pairs, delta):
    r = (commutator_product(pairs) - delta).ravel()
    return np.concatenate([r.real, r.imag])


def _apply_step(pairs, step, basis):
    x = np.einsum("nk,kij->nij", step.reshape(-1, len(basis)).astype(complex), basis)
    flat = pairs.reshape(-1, *pairs.shape[-2:])
    return (lie.expm(x) @ flat).reshape(pairs.shape)


def _project(pairs, delta, basis, max_iters, group, tol=DEFECT_TOL * 1e-3):
    """Gauss-Newton-preconditioned descent on ``1/2 ||prod [A,B] - delta||_F^2``.

    Steps are minimum-norm solutions of the linearized relation, accepted by
    Armijo backtracking; the iterate is re-retracted to the group every 50
    steps.  Returns ``(pairs, defect, iterations)``.
    """
    if len(pairs) == 0:
        return pairs, surface_defect(pairs, delta), 0
    r = _residual(pairs, delta)
    f = 0.5 * r @ r
    for it in range(1, max_iters + 1):
        if np.sqrt(2 * f) < tol:
            break
        jac = _jacobian(pairs, basis)
        step = -np.linalg.lstsq(jac, r, rcond=1e-12)[0]
        slope = -(jac @ step) @ (jac @ step)
        t = 1.0
        while True:
            trial = _apply_step(pairs, t * step, basis)
            rt = _residual(trial, delta)
            ft = 0.5 * rt @ rt
            if ft <= f + 1e-4 * t * slope or t < 1e-10:
                break
            t *= 0.5
        if ft >= f and t < 1e-10:
            # stalled at a singular point of the relation map: use the plain gradient
            grad = jac.T @ r
            trial = _apply_step(pairs, -1e-2 * grad, basis)
            rt = _residual(trial, delta)
            ft = 0.5 * rt @ rt
        pairs, r, f = trial, rt, ft
        if it % 50 == 0:
            pairs = lie.retract(pairs, "SU2" if pairs.shape[-1] == 2 else "U1")
    return pairs, surface_defect(pairs, delta), it


def _solver_basis(group):
    return lie.algebra_basis("U1" if COVER_DIM[group] == 1 else "SU2")


def _random_cover(group, rng, size):
    if COVER_DIM[group] == 1:
        return lie.random_group("U1", rng, size=size)
    return lie.random_group("SU2", rng, size=size)


def _check_feasible(data):
    for g, d in zip(data.surface_genera, data.deltas):
        if g == 0 and np.max(np.abs(d - np.eye(len(d)))) > 1e-12:
            raise FeasibilityError("genus-0 surface with nontrivial delta: the variety is empty")


def _with_phases(point, data, rng):
    """U(2) points: multiply SU(2) solutions by free U(1) phases."""
    if data.group != "U2":
        return point

    def ph(shape):
        return np.exp(1j * np.pi * rng.random(shape))[..., None, None]

    tuples = tuple(s * ph(s.shape[:-2]) for s in point.surface_tuples)
    return RepPoint(tuples, point.free_images * ph(point.free_images.shape[:-2]))


def solve_commutator(data, seed=0, max_iters=2000, restarts=20):
    """Find a point of the representation variety from a random start.

    Raises :class:`FeasibilityError` on empty varieties and
    :class:`SolverError` (with the best defect) if ``max_iters`` iterations
    over all restarts do not reach defect 1e-8.
    """
    _check_feasible(data)
    rng = np.random.default_rng(seed)
    basis = _solver_basis(data.group)
    d = COVER_DIM[data.group]
    tuples = []
    best = 0.0
    budget = max_iters
    for g, delta in zip(data.surface_genera, data.deltas):
        found = None
        best_s = (np.inf, None)
        for _ in range(restarts):
            if budget <= 0:
                break
            pairs = _random_cover(data.group, rng, (g, 2)) if g else np.zeros((0, 2, d, d), dtype=complex)
            pairs, defect, used = _project(pairs, delta, basis, min(budget, 200), data.group)
            budget -= max(used, 1)
            if defect < best_s[0]:
                best_s = (defect, pairs)
            if defect <= DEFECT_TOL:
                found = pairs
                break
        if found is None:
            raise SolverError(f"no convergence within {max_iters} iterations", best_s[0], best_s[1])
        best = max(best, surface_defect(found, delta))
        tuples.append(found)
    free = _random_cover(data.group, rng, (data.free_rank,)) if data.free_rank else np.zeros((0, d, d), complex)
    return _with_phases(RepPoint(tuple(tuples), free), data, rng)


# ---------------------------------------------------------------------------
# paths


def _geodesic_log(g):
    """Log of a stack of SU(2) or U(1) matrices; picks a fixed axis at ``-I``."""
    if g.shape[-1] == 1:
        return 1j * np.angle(g)
    q = lie.su2_to_quaternion(g)
    c = np.clip(q[..., 0], -1.0, 1.0)
    theta = np.arccos(c)
    v = q[..., 1:]
    s = np.linalg.norm(v, axis=-1)
    axis = np.where(s[..., None] > 1e-14, v / np.where(s > 1e-14, s, 1.0)[..., None], [0.0, 0.0, 1.0])
    return 1j * theta[..., None, None] * np.einsum("...k,kij->...ij", axis, lie.SIGMA)


def _interpolate(m0, m1, t):
    if m0.shape[-1] == 2 and m0.size and np.max(np.abs(np.abs(np.linalg.det(m0)) - 1)) < 1e-9:
        # strip U(2) phases into a separate U(1) interpolation
        ph0 = np.sqrt(np.linalg.det(m0))
        ph1 = np.sqrt(np.linalg.det(m1))
        s0, s1 = m0 / ph0[..., None, None], m1 / ph1[..., None, None]
        if np.max(np.abs(ph0 - 1)) < 1e-12 and np.max(np.abs(ph1 - 1)) < 1e-12:
            return s0 @ lie.expm(t * _geodesic_log(lie.dagger(s0) @ s1))
        dphi = np.angle(ph1 / ph0)
        su = s0 @ lie.expm(t * _geodesic_log(lie.dagger(s0) @ s1))
        return su * (ph0 * np.exp(1j * t * dphi))[..., None, None]
    return m0 @ lie.expm(t * _geodesic_log(lie.dagger(m0) @ m1))


def connect(p0, p1, data, steps=64, max_iters=500):
    """Discrete path of representations from ``p0`` to ``p1``.

    Generators are interpolated along group geodesics and every interior
    interpolant is pushed back onto the variety by descent started at the
    interpolant.  Endpoints are returned unchanged.
    """
    for p in (p0, p1):
        if commutator_defect(p, data) > DEFECT_TOL:
            raise PreconditionError("endpoints must be representations (defect <= 1e-8)")
    if steps < 1:
        raise PreconditionError("steps must be positive")
    basis = _solver_basis(data.group)
    path = [p0]
    for k in range(1, steps):
        t = k / steps
        tuples = []
        for s0, s1, delta in zip(p0.surface_tuples, p1.surface_tuples, data.deltas):
            guess = _interpolate(s0, s1, t)
            proj, defect, _ = _project(_su2_part(guess, data), delta, basis, max_iters, data.group)
            if defect > PATH_TOL:
                raise ContinuationError(f"projection failed at step {k} (defect {defect:.3g})", k)
            tuples.append(proj * _phase_part(guess, data))
        free = _interpolate(p0.free_images, p1.free_images, t) if len(p0.free_images) else p0.free_images
        path.append(RepPoint(tuple(tuples), free))
    path.append(p1)
    return path


def _su2_part(m, data):
    if data.group != "U2" or not m.size:
        return m
    return m / np.sqrt(np.linalg.det(m))[..., None, None]


def _phase_part(m, data):
    if data.group != "U2" or not m.size:
        return 1.0
    return np.sqrt(np.linalg.det(m))[..., None, None]


# ---------------------------------------------------------------------------
# restrictions and alignment


def restrict_minus(point, data):
    """Restriction to the incoming end: one :class:`SurfaceRep` per component of ``Sigma_-``."""
    _check_shapes(point, data)
    return [
        SurfaceRep(SurfaceData(g, d), s)
        for g, d, s in zip(data.surface_genera, data.deltas, point.surface_tuples)
    ]


def restrict_plus(point, data):
    """Restriction to the outgoing end ``Sigma_+`` of genus ``sum g_i + t``.

    In the wedge presentation the a- and b-curves of ``Sigma_+`` map to the
    surface generators, and each one-handle contributes a pair ``(C_k, 1)``
    whose b-curve bounds a compressing disk.  The relation on ``Sigma_+``
    holds with ``delta_+ = prod delta_i``.
    """
    _check_shapes(point, data)
    d = COVER_DIM[data.group]
    parts = [s for s in point.surface_tuples if len(s)]
    if data.free_rank:
        eye = np.broadcast_to(np.eye(d, dtype=complex), point.free_images.shape)
        parts.append(np.stack([point.free_images, eye], axis=1))
    pairs = np.concatenate(parts) if parts else np.zeros((0, 2, d, d), dtype=complex)
    return SurfaceRep(SurfaceData(data.plus_genus, data.delta_plus), pairs)


@dataclass(frozen=True)
class Alignment:
    g: np.ndarray
    residual: float


def _conj_residual(g, xs, ys):
    return float(np.sqrt(np.sum(np.abs(lie.dagger(g) @ xs @ g - ys) ** 2)))


def align(p0, p1):
    """Best ``g`` with ``g^{-1} X g ~ X'`` over all generators, and the residual.

    For SU(2) the objective is a quadratic form on unit quaternions, so the
    maximizer is the top eigenvector of a 4x4 symmetric matrix.  Among the two
    central lifts ``+-g`` the one nearest the identity is returned.
    """
    xs, ys = p0.generators(), p1.generators()
    if xs.shape != ys.shape:
        raise PreconditionError("points have different shapes")
    d = xs.shape[-1] if xs.size else 2
    if d == 1:
        g = np.eye(1, dtype=complex)
        return Alignment(g, _conj_residual(g, xs, ys))
    basis_q = np.eye(4)

    def overlap(q1, q2):
        g1, g2 = lie.quaternion_to_su2(q1), lie.quaternion_to_su2(q2)
        return float(np.real(np.sum(np.conj(lie.dagger(g1) @ xs @ g2) * ys)))

    m = np.array([[overlap(a, b) for b in basis_q] for a in basis_q])
    m = 0.5 * (m + m.T)
    w, v = np.linalg.eigh(m)
    q = v[:, -1]
    if q[0] < 0:
        q = -q
    g = lie.quaternion_to_su2(q)
    return Alignment(g, _conj_residual(g, xs, ys))
