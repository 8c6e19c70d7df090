"""Matrix Lie groups U(1), SU(2), SO(3), U(2) in a fixed faithful representation.

Group elements are unitary matrices and algebra elements anti-Hermitian
matrices, always stored as ``complex128``.  SO(3) lives in its real 3x3
representation (complexified), the other groups in their defining one.

Two layers are provided:

* element wrappers (:class:`GroupElement`, :class:`AlgebraElement`) that
  validate membership and carry a ``group_id``;
* batched array kernels (:func:`expm`, :func:`inner`, ...) acting on stacks of
  matrices with shape ``(..., d, d)``, used by the lattice code.
"""
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .config import tolerances
from .errors import BranchCutError, GroupMismatchError, MembershipError, RetractionError

GROUP_IDS = ("U1", "SU2", "SO3", "U2")
REP_DIM = {"U1": 1, "SU2": 2, "SO3": 3, "U2": 2}

SIGMA = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

# (L_a)_{bc} = -eps_{abc}; [L_1, L_2] = L_3
_EPS = np.zeros((3, 3, 3))
for _a, _b, _c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    _EPS[_a, _b, _c] = 1.0
    _EPS[_a, _c, _b] = -1.0
SO3_BASIS = (-_EPS).astype(complex)


def _check_group_id(group_id):
    if group_id not in REP_DIM:
        raise MembershipError(f"unknown group {group_id!r}; expected one of {GROUP_IDS}")


def algebra_basis(group_id):
    """Real basis of the Lie algebra as an array of shape ``(dim, d, d)``."""
    _check_group_id(group_id)
    if group_id == "U1":
        return np.array([[[1j]]])
    if group_id == "SU2":
        return 1j * SIGMA / 2
    if group_id == "SO3":
        return SO3_BASIS.copy()
    return np.concatenate([1j * np.eye(2, dtype=complex)[None] / 2, 1j * SIGMA / 2])


# ---------------------------------------------------------------------------
# batched kernels


def dagger(m):
    return np.conj(np.swapaxes(m, -1, -2))


def matmul(x, y):
    """Batched matrix product; 2x2 stacks are expanded entrywise, which beats
    the generic kernel by an order of magnitude for large stacks."""
    if x.shape[-1] != 2 or y.shape[-1] != 2:
        return x @ y
    x00, x01, x10, x11 = x[..., 0, 0], x[..., 0, 1], x[..., 1, 0], x[..., 1, 1]
    y00, y01, y10, y11 = y[..., 0, 0], y[..., 0, 1], y[..., 1, 0], y[..., 1, 1]
    out = np.empty(np.broadcast_shapes(x.shape, y.shape), dtype=np.result_type(x, y))
    out[..., 0, 0] = x00 * y00 + x01 * y10
    out[..., 0, 1] = x00 * y01 + x01 * y11
    out[..., 1, 0] = x10 * y00 + x11 * y10
    out[..., 1, 1] = x10 * y01 + x11 * y11
    return out


def commutator(x, y):
    if x.shape[-1] == 1:
        return np.zeros(np.broadcast_shapes(x.shape, y.shape), dtype=np.result_type(x, y))
    if x.shape[-1] != 2 or y.shape[-1] != 2:
        return x @ y - y @ x
    # 2x2 closed form: the diagonal products cancel
    x01, x10, y01, y10 = x[..., 0, 1], x[..., 1, 0], y[..., 0, 1], y[..., 1, 0]
    dx = x[..., 0, 0] - x[..., 1, 1]
    dy = y[..., 0, 0] - y[..., 1, 1]
    out = np.empty(np.broadcast_shapes(x.shape, y.shape), dtype=np.result_type(x, y))
    out[..., 0, 0] = x01 * y10 - x10 * y01
    out[..., 1, 1] = -out[..., 0, 0]
    out[..., 0, 1] = dx * y01 - dy * x01
    out[..., 1, 0] = dy * x10 - dx * y10
    return out


def inner(x, y):
    """Normalized Ad-invariant inner product ``-Tr(xy) / (2 pi^2)`` over the last two axes."""
    if x.shape[-1] == 2 and y.shape[-1] == 2:
        tr = x[..., 0, 0] * y[..., 0, 0] + x[..., 0, 1] * y[..., 1, 0] + x[..., 1, 0] * y[..., 0, 1] + x[..., 1, 1] * y[..., 1, 1]
        return -np.real(tr) / (2 * np.pi**2)
    return -np.real(np.einsum("...ij,...ji->...", x, y)) / (2 * np.pi**2)


def norm(x):
    return np.sqrt(np.maximum(inner(x, x), 0.0))


def project_algebra(m, group_id):
    """Orthogonal projection of arbitrary matrices onto the algebra."""
    x = 0.5 * (m - dagger(m))
    if group_id == "SU2":
        half_tr = 0.5 * (x[..., 0, 0] + x[..., 1, 1])
        x[..., 0, 0] -= half_tr
        x[..., 1, 1] -= half_tr
    elif group_id == "SO3":
        x = np.real(x).astype(complex)
    return x


def expm(x):
    """Exponential of a stack of anti-Hermitian matrices (exactly unitary output)."""
    x = np.asarray(x, dtype=complex)
    if x.shape[-1] == 1:
        return np.exp(x)
    if x.shape[-1] == 2:
        return _expm_2x2(x)
    w, v = np.linalg.eigh(1j * x)
    return (v * np.exp(-1j * w)[..., None, :]) @ dagger(v)


def _expm_2x2(x):
    # x = i*phi*I + i*(n . sigma) with n real
    phi = np.imag(x[..., 0, 0] + x[..., 1, 1]) / 2
    y = x - 1j * phi[..., None, None] * np.eye(2)
    # y^2 = -theta^2 I for traceless anti-Hermitian y
    theta = np.sqrt(np.maximum(np.real(-(y @ y)[..., 0, 0]), 0.0))
    sinc = np.sinc(theta / np.pi)
    out = np.cos(theta)[..., None, None] * np.eye(2) + sinc[..., None, None] * y
    return np.exp(1j * phi)[..., None, None] * out


def logm(g, eps=None):
    """Principal logarithm of a stack of unitary matrices.

    Raises :class:`BranchCutError` if any eigenvalue lies within ``eps`` of -1.
    """
    eps = tolerances.eps_log if eps is None else eps
    g = np.asarray(g, dtype=complex)
    flat = g.reshape(-1, g.shape[-2], g.shape[-1])
    out = np.empty_like(flat)
    for k, m in enumerate(flat):
        t, z = scipy.linalg.schur(m, output="complex")
        lam = np.diag(t)
        if np.min(np.abs(lam + 1.0)) < eps:
            raise BranchCutError("eigenvalue within branch margin of -1")
        # unitary => normal => Schur form is diagonal
        out[k] = (z * (1j * np.angle(lam))[None, :]) @ dagger(z)
    out = 0.5 * (out - dagger(out))
    return out.reshape(g.shape)


def unitarity_defect(g):
    d = g.shape[-1]
    return np.linalg.norm(dagger(g) @ g - np.eye(d), axis=(-2, -1))


def random_group(group_id, rng, size=()):
    """Haar-distributed random elements, shape ``size + (d, d)``."""
    _check_group_id(group_id)
    size = tuple(np.atleast_1d(size)) if size != () else ()
    if group_id == "U1":
        return np.exp(2j * np.pi * rng.random(size))[..., None, None]
    q = rng.standard_normal(size + (4,))
    q /= np.linalg.norm(q, axis=-1, keepdims=True)
    u = quaternion_to_su2(q)
    if group_id == "SU2":
        return u
    if group_id == "SO3":
        return su2_to_so3(u)
    # U(2) = (U(1) x SU(2)) / Z2, phase uniform on [0, pi) covers once
    phase = np.exp(1j * np.pi * rng.random(size))
    return phase[..., None, None] * u


def random_algebra(group_id, rng, scale=1.0, size=()):
    """Gaussian random algebra elements with coefficient std ``scale`` in :func:`algebra_basis`."""
    basis = algebra_basis(group_id)
    size = tuple(np.atleast_1d(size)) if size != () else ()
    c = rng.standard_normal(size + (len(basis),)) * scale
    return np.einsum("...k,kij->...ij", c.astype(complex), basis)


# ---------------------------------------------------------------------------
# SU(2) <-> quaternions <-> SO(3)


def quaternion_to_su2(q):
    """Unit quaternion ``(q0, q1, q2, q3)`` to ``q0 I + i (q1 s1 + q2 s2 + q3 s3)``."""
    q = np.asarray(q, dtype=float)
    return q[..., 0, None, None] * np.eye(2) + 1j * np.einsum("...k,kij->...ij", q[..., 1:], SIGMA)


def su2_to_quaternion(u):
    u = np.asarray(u)
    q0 = np.real(u[..., 0, 0] + u[..., 1, 1]) / 2
    q1 = np.imag(u[..., 0, 1] + u[..., 1, 0]) / 2
    q2 = np.real(u[..., 0, 1] - u[..., 1, 0]) / 2
    q3 = np.imag(u[..., 0, 0] - u[..., 1, 1]) / 2
    return np.stack([q0, q1, q2, q3], axis=-1)


def su2_to_so3(u):
    """Covering map: the adjoint action of SU(2) on span(sigma) as a real 3x3 matrix."""
    u = np.asarray(u, dtype=complex)
    r = 0.5 * np.einsum("aij,...jk,bkl,...il->...ab", SIGMA, u, SIGMA, np.conj(u))
    return np.real(r).astype(complex)


def su2_alg_to_so3(x):
    """Derivative of :func:`su2_to_so3` at the identity (Lie algebra isomorphism)."""
    x = np.asarray(x, dtype=complex)
    r = 0.5 * np.einsum("aij,...jk,bki->...ab", SIGMA, x, SIGMA) - 0.5 * np.einsum(
        "aij,bjk,...ki->...ab", SIGMA, SIGMA, x
    )
    return np.real(r).astype(complex)


def so3_alg_to_su2(m):
    """Inverse of :func:`su2_alg_to_so3`."""
    m = np.real(np.asarray(m))
    # coefficients in the basis L_a, which is the image of -i sigma_a / 2
    c = np.stack([m[..., 2, 1], m[..., 0, 2], m[..., 1, 0]], axis=-1)
    return np.einsum("...a,aij->...ij", c.astype(complex), -0.5j * SIGMA)


def so3_to_su2(r):
    """One of the two SU(2) preimages of a rotation (the other is its negative)."""
    r = np.real(np.asarray(r))
    # for w in SU(2): I + sum_ab R(w)_ab s_a s_b = 4 Re(w_0) w; pre-multiply by a
    # half-turn v so that w = u v has a large scalar part
    best = None
    for v in _HALF_TURNS:
        m = np.eye(2) + np.einsum("...ab,aij,bjk->...ik", r @ _HALF_TURN_ROT[v], SIGMA, SIGMA)
        size = np.linalg.norm(m, axis=(-2, -1))
        if best is None:
            best, bsize, bv = m, size, np.broadcast_to(v, size.shape).copy()
        else:
            take = size > bsize
            best = np.where(take[..., None, None], m, best)
            bsize = np.where(take, size, bsize)
            bv = np.where(take, v, bv)
    w = best / (bsize / np.sqrt(2))[..., None, None]
    return w @ dagger(_HALF_TURN_SU2[bv])


_HALF_TURN_SU2 = np.concatenate([np.eye(2, dtype=complex)[None], 1j * SIGMA])
_HALF_TURNS = (0, 1, 2, 3)
_HALF_TURN_ROT = np.real(su2_to_so3(_HALF_TURN_SU2))


# ---------------------------------------------------------------------------
# element wrappers


def _validate_group(m, group_id, tol):
    d = REP_DIM[group_id]
    if m.shape != (d, d):
        raise MembershipError(f"{group_id} element must be {d}x{d}, got {m.shape}")
    if unitarity_defect(m) > tol:
        raise MembershipError(f"matrix is not unitary to {tol:g}")
    if group_id == "SU2" and abs(np.linalg.det(m) - 1) > tol * 10:
        raise MembershipError("SU(2) element must have determinant 1")
    if group_id == "SO3":
        if np.max(np.abs(np.imag(m))) > tol or np.real(np.linalg.det(m)) < 0:
            raise MembershipError("SO(3) element must be a real rotation")


def _validate_algebra(m, group_id, tol):
    d = REP_DIM[group_id]
    if m.shape != (d, d):
        raise MembershipError(f"{group_id} algebra element must be {d}x{d}, got {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m))))
    if np.max(np.abs(m + dagger(m))) > tol * scale:
        raise MembershipError("algebra element must be anti-Hermitian")
    if group_id == "SU2" and abs(np.trace(m)) > tol * scale:
        raise MembershipError("su(2) element must be traceless")
    if group_id == "SO3" and np.max(np.abs(np.imag(m))) > tol * scale:
        raise MembershipError("so(3) element must be real")


def _frozen(m):
    a = np.array(m, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GroupElement:
    """Group element stored in the faithful representation of ``group_id``."""

    matrix: np.ndarray
    group_id: str

    def __post_init__(self):
        _check_group_id(self.group_id)
        m = _frozen(self.matrix)
        _validate_group(m, self.group_id, tolerances.tau_unitary)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, group_id):
        return cls(np.eye(REP_DIM[group_id]), group_id)

    def inverse(self):
        return GroupElement(dagger(self.matrix), self.group_id)

    def __matmul__(self, other):
        _same_group(self, other)
        return GroupElement(self.matrix @ other.matrix, self.group_id)

    def __repr__(self):
        return f"GroupElement({self.group_id}, {np.round(self.matrix, 6).tolist()})"


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """Lie algebra element stored as an anti-Hermitian matrix."""

    matrix: np.ndarray
    group_id: str

    def __post_init__(self):
        _check_group_id(self.group_id)
        m = _frozen(self.matrix)
        _validate_algebra(m, self.group_id, tolerances.tau_unitary)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def zero(cls, group_id):
        d = REP_DIM[group_id]
        return cls(np.zeros((d, d)), group_id)

    def __add__(self, other):
        _same_group(self, other)
        return AlgebraElement(self.matrix + other.matrix, self.group_id)

    def __sub__(self, other):
        _same_group(self, other)
        return AlgebraElement(self.matrix - other.matrix, self.group_id)

    def __neg__(self):
        return AlgebraElement(-self.matrix, self.group_id)

    def __mul__(self, s):
        return AlgebraElement(float(s) * self.matrix, self.group_id)

    __rmul__ = __mul__

    def bracket(self, other):
        _same_group(self, other)
        return AlgebraElement(commutator(self.matrix, other.matrix), self.group_id)

    def __repr__(self):
        return f"AlgebraElement({self.group_id}, {np.round(self.matrix, 6).tolist()})"


def _same_group(a, b):
    if a.group_id != b.group_id:
        raise GroupMismatchError(f"{a.group_id} vs {b.group_id}")


# ---------------------------------------------------------------------------
# element operations


def inner_product(x, y):
    """``<x, y> = -Tr(xy) / (2 pi^2)``; positive definite on the algebra."""
    _same_group(x, y)
    return float(inner(x.matrix, y.matrix))


def matrix_exp(x):
    m = expm(x.matrix)
    if x.group_id == "SO3":
        m = np.real(m)
    return GroupElement(m, x.group_id)


def matrix_log(g):
    """Principal logarithm; raises :class:`BranchCutError` near the eigenvalue -1."""
    m = logm(g.matrix)
    if g.group_id == "SO3":
        m = np.real(m)
    return AlgebraElement(m, g.group_id)


def adjoint_action(g, x):
    """``Ad(g) x = g x g^{-1}``."""
    _same_group(g, x)
    m = g.matrix @ x.matrix @ dagger(g.matrix)
    return AlgebraElement(0.5 * (m - dagger(m)), x.group_id)


def retract(m, group_id):
    """Batched polar retraction onto the group; see :func:`retract_to_group`."""
    _check_group_id(group_id)
    m = np.asarray(m, dtype=complex)
    if group_id == "SO3":
        m = np.real(m)
    w, s, vh = np.linalg.svd(m)
    if np.min(s) < 1e-8:
        raise RetractionError("singular polar factor")
    u = w @ vh
    if group_id == "SO3":
        if np.any(np.linalg.det(u) < 0):
            raise RetractionError("matrix lies in the wrong component of O(3)")
        return u.astype(complex)
    if group_id == "SU2":
        det = np.linalg.det(u)
        if np.any(np.abs(det - 1) > 1.0):
            raise RetractionError("determinant too far from 1 for SU(2)")
        u = u / np.sqrt(det)[..., None, None]
    return u


def retract_to_group(m, group_id):
    """Nearest group element under the polar retraction.

    ``m`` must be within Frobenius distance 0.5 of the group, otherwise a
    :class:`RetractionError` is raised.
    """
    m = np.asarray(m, dtype=complex)
    u = retract(m, group_id)
    if np.linalg.norm(u - m) > 0.5:
        raise RetractionError("matrix is farther than 0.5 from the group")
    return GroupElement(u, group_id)
