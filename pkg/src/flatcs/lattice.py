"""Connections, gauge maps and the Chern-Simons functional on a periodic grid over T^3.

The torus is ``[0, 2 pi)^3`` with ``N`` sites per axis and spacing
``h = 2 pi / N``; site ``(i, j, k)`` sits at ``h * (i, j, k)``.  A connection
is ``a = a_1 dtheta_1 + a_2 dtheta_2 + a_3 dtheta_3`` with algebra-valued
components sampled at sites, stored in an array of shape ``(3, N, N, N, d, d)``.

Conventions:

* derivatives are periodic central differences, fourth order unless
  ``config.numerics.stencil_order`` says otherwise; the stencils are
  skew-adjoint, so summation by parts is exact;
* integrals are equal-weight sums times ``h^3`` (the periodic trapezoid rule);
* ``dtheta_1 ^ dtheta_2 ^ dtheta_3`` is positive and the wedge of 1-forms is
  ``mu (x) nu - nu (x) mu``;
* 2-forms are stored by components ``(F_12, F_23, F_31)``.
"""
import functools
import hashlib
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import lie
from .config import numerics
from .errors import GroupMismatchError, MembershipError, PreconditionError, ResolutionError, StencilError
from .groups import LatticeCheck, check_on_lattice, granularity

# (i, j, k) with (i, j) the 2-form component paired with the 1-form component k
CYCLIC = ((0, 1, 2), (1, 2, 0), (2, 0, 1))


def grid_spacing(n):
    return 2 * np.pi / n


def coordinates(n):
    """Site coordinates ``theta_1, theta_2, theta_3`` as three ``(N, N, N)`` arrays."""
    t = np.arange(n) * grid_spacing(n)
    return np.meshgrid(t, t, t, indexing="ij")


def diff(f, axis, h):
    """Central difference along a spatial axis of a site-sampled field.

    Fourth order by default; ``config.numerics.stencil_order = 2`` selects the
    three-point stencil.
    """
    n = f.shape[axis]
    if numerics.stencil_order == 2:
        p = np.concatenate([_take(f, axis, n - 1, n), f, _take(f, axis, 0, 1)], axis=axis)
        out = _take(p, axis, 2, n + 2) - _take(p, axis, 0, n)
        out *= 1 / (2 * h)
        return out
    if numerics.stencil_order != 4:
        raise PreconditionError("stencil_order must be 2 or 4")
    p = np.concatenate([_take(f, axis, n - 2, n), f, _take(f, axis, 0, 2)], axis=axis)
    near = _take(p, axis, 3, n + 3) - _take(p, axis, 1, n + 1)
    far = _take(p, axis, 4, n + 4) - _take(p, axis, 0, n)
    near *= 8 / (12 * h)
    far *= 1 / (12 * h)
    near -= far
    return near


def stencil_symbol(k, h):
    """Multiplier ``s`` with ``diff(exp(i k theta)) = i s exp(i k theta)``."""
    k = np.asarray(k, dtype=float)
    if numerics.stencil_order == 2:
        return np.sin(k * h) / h
    return (8 * np.sin(k * h) - np.sin(2 * k * h)) / (6 * h)


def _take(f, axis, start, stop):
    idx = [slice(None)] * f.ndim
    idx[axis] = slice(start, stop)
    return f[tuple(idx)]


def _readonly(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class LatticeConnection:
    """Algebra-valued 1-form on the ``N^3`` periodic grid."""

    a: np.ndarray
    group_id: str
    label: Optional[str] = None

    def __post_init__(self):
        a = _readonly(self.a)
        d = lie.REP_DIM[self.group_id]
        n = a.shape[1] if a.ndim == 6 else -1
        if a.shape != (3, n, n, n, d, d):
            raise PreconditionError(f"connection array must have shape (3, N, N, N, {d}, {d}), got {a.shape}")
        scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
        if a.size and np.max(np.abs(a + np.swapaxes(a.conj(), -1, -2))) > 1e-9 * scale:
            raise MembershipError("connection entries must be anti-Hermitian")
        object.__setattr__(self, "a", a)

    @property
    def n(self):
        return self.a.shape[1]

    @property
    def h(self):
        return grid_spacing(self.n)

    @classmethod
    def zero(cls, n, group_id):
        d = lie.REP_DIM[group_id]
        return cls(np.zeros((3, n, n, n, d, d)), group_id, label="zero")

    @classmethod
    def constant(cls, xis, n, group_id=None):
        """``sum_i xi_i dtheta_i`` with constant algebra elements ``xi``."""
        mats = [x.matrix if isinstance(x, lie.AlgebraElement) else np.asarray(x, dtype=complex) for x in xis]
        if group_id is None:
            group_id = xis[0].group_id
        a = np.broadcast_to(np.stack(mats)[:, None, None, None], (3, n, n, n) + mats[0].shape)
        return cls(a, group_id)

    def _check(self, other):
        if self.group_id != other.group_id:
            raise GroupMismatchError(f"{self.group_id} vs {other.group_id}")
        if self.n != other.n:
            raise PreconditionError(f"grid mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        self._check(other)
        return LatticeConnection(self.a + other.a, self.group_id)

    def __sub__(self, other):
        self._check(other)
        return LatticeConnection(self.a - other.a, self.group_id)

    def __mul__(self, s):
        return LatticeConnection(float(s) * self.a, self.group_id)

    __rmul__ = __mul__

    def coarsen(self):
        """Every other site: the same field sampled on the ``N/2`` grid."""
        if self.n % 2:
            raise ResolutionError("odd grids cannot be coarsened")
        return LatticeConnection(self.a[:, ::2, ::2, ::2], self.group_id, self.label)

    def identifier(self):
        if self.label:
            return self.label
        return hashlib.sha1(self.a.tobytes()).hexdigest()[:12]


@dataclass(frozen=True, eq=False)
class GaugeMapField:
    """Group-valued map sampled at the sites of the ``N^3`` grid."""

    u: np.ndarray
    group_id: str

    def __post_init__(self):
        u = _readonly(self.u)
        d = lie.REP_DIM[self.group_id]
        n = u.shape[0] if u.ndim == 5 else -1
        if u.shape != (n, n, n, d, d):
            raise PreconditionError(f"gauge map must have shape (N, N, N, {d}, {d}), got {u.shape}")
        object.__setattr__(self, "u", u)

    @property
    def n(self):
        return self.u.shape[0]

    @classmethod
    def identity(cls, n, group_id):
        d = lie.REP_DIM[group_id]
        return cls(np.broadcast_to(np.eye(d, dtype=complex), (n, n, n, d, d)), group_id)

    @classmethod
    def constant(cls, g, n, group_id=None):
        m = g.matrix if isinstance(g, lie.GroupElement) else np.asarray(g, dtype=complex)
        group_id = group_id or g.group_id
        return cls(np.broadcast_to(m, (n, n, n) + m.shape), group_id)

    def coarsen(self):
        if self.n % 2:
            raise ResolutionError("odd grids cannot be coarsened")
        return GaugeMapField(self.u[::2, ::2, ::2], self.group_id)

    def __matmul__(self, other):
        return GaugeMapField(lie.matmul(self.u, other.u), self.group_id)

    def max_neighbor_angle(self):
        """Upper bound on the rotation angle of ``u(x)^{-1} u(x + e_i)`` over sites and axes.

        Uses ``|u - v|_F >= 2 sin(phi_max / 2)`` for unitaries, which avoids
        an eigen-decomposition per site.
        """
        worst = 0.0
        for axis in range(3):
            step = self.u - np.roll(self.u, -1, axis=axis)
            worst = max(worst, float(np.max(np.sum(np.abs(step) ** 2, axis=(-2, -1)))))
        return float(2 * np.arcsin(min(1.0, np.sqrt(worst) / 2)))


# ---------------------------------------------------------------------------
# curvature and gauge action


@dataclass(frozen=True, eq=False)
class Curvature:
    """Components ``(F_12, F_23, F_31)`` with norms in the normalized inner product."""

    f: np.ndarray
    l2: float
    sup: float


def _curvature_array(a, h):
    out = np.empty_like(a)
    for c, (i, j, _) in enumerate(CYCLIC):
        out[c] = diff(a[j], i, h) - diff(a[i], j, h) + lie.commutator(a[i], a[j])
    return out


def _norms(f, h):
    # clip rounding noise so an exactly flat field reports 0, not nan
    dens = np.maximum(np.sum(lie.inner(f, f), axis=0), 0.0)
    return float(np.sqrt(h**3 * np.sum(dens))), float(np.sqrt(np.max(dens)))


def curvature(conn):
    """``F_ij = D_i a_j - D_j a_i + [a_i, a_j]`` with its L^2 and sup norms."""
    f = _curvature_array(conn.a, conn.h)
    l2, sup = _norms(f, conn.h)
    return Curvature(f, l2, sup)


STENCIL_ANGLE = np.pi / 2


def gauge_apply(u, conn):
    """``u^* a = u^{-1} a u + u^{-1} du`` sitewise, with the central-difference ``du``."""
    if u.group_id != conn.group_id:
        raise GroupMismatchError(f"{u.group_id} vs {conn.group_id}")
    if u.n != conn.n:
        raise PreconditionError("gauge map and connection live on different grids")
    if u.max_neighbor_angle() > STENCIL_ANGLE:
        raise StencilError("gauge map varies too fast between neighboring sites")
    ui = lie.dagger(u.u)
    h = conn.h
    out = np.empty_like(conn.a)
    for i in range(3):
        m = lie.matmul(lie.matmul(ui, conn.a[i]), u.u) + lie.matmul(ui, diff(u.u, i, h))
        out[i] = lie.project_algebra(m, conn.group_id)
    return LatticeConnection(out, conn.group_id)


# ---------------------------------------------------------------------------
# Chern-Simons functional


def wedge_density(two_form, one_form):
    """Coefficient of ``dtheta_123`` in ``<F ^ w>`` at every site."""
    return sum(lie.inner(two_form[c], one_form[k]) for c, (_, _, k) in enumerate(CYCLIC))


def _su2_coords(m):
    """Real coordinates in the basis ``i sigma_a / 2``, stacked first: shape ``(3, ...)``."""
    m01, m10 = m[..., 0, 1], m[..., 1, 0]
    return np.stack([np.imag(m01 + m10), np.real(m01 - m10), np.imag(m[..., 0, 0] - m[..., 1, 1])])


def _cross(x, y):
    return np.stack([x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]])


def _dot(x, y):
    return x[0] * y[0] + x[1] * y[1] + x[2] * y[2]


def _cs_density_su2(a, a0, h):
    # in the basis i sigma / 2: [x, y] = -(x cross y) and <x, y> = x . y / (4 pi^2);
    # arrays are (coordinate, N, N, N), so spatial axis i sits at i + 1
    r = [_su2_coords(a0[i]) for i in range(3)] if a0 is not None else None
    v = [_su2_coords(a[i]) - (r[i] if r else 0.0) for i in range(3)]
    out = -_dot(_cross(v[0], v[1]), v[2])
    for i, j, k in CYCLIC:
        dv = diff(v[j], i + 1, h) - diff(v[i], j + 1, h)
        if r is not None:
            dv -= _cross(r[i], v[j]) - _cross(r[j], v[i])
            dv += 2 * (diff(r[j], i + 1, h) - diff(r[i], j + 1, h) - _cross(r[i], r[j]))
        out += 0.5 * _dot(dv, v[k])
    return out / (4 * np.pi**2)


def cs_density(a, a0, h):
    """Integrand of ``CS_{a0}(a)``: ``<F_0 ^ v> + 1/2 <d_{a0} v ^ v> + 1/6 <[v ^ v] ^ v>``."""
    if a.shape[-1] == 2 and _is_traceless(a) and _is_traceless(a0):
        return _cs_density_su2(a, a0 if np.any(a0) else None, h)
    v = a - a0
    flat_ref = not np.any(a0)
    dv = np.empty_like(v)
    for c, (i, j, _) in enumerate(CYCLIC):
        dv[c] = diff(v[j], i, h) - diff(v[i], j, h)
        if not flat_ref:
            dv[c] += lie.commutator(a0[i], v[j]) - lie.commutator(a0[j], v[i])
    # 1/6 <[v ^ v] ^ v> reduces to <[v_1, v_2], v_3> by Ad-invariance
    out = 0.5 * wedge_density(dv, v) + lie.inner(lie.commutator(v[0], v[1]), v[2])
    if not flat_ref:
        out += wedge_density(_curvature_array(a0, h), v)
    return out


def _is_traceless(a):
    return not np.any(np.abs(a[..., 0, 0] + a[..., 1, 1]) > 1e-12)


def cs_value(conn, ref):
    conn._check(ref)
    return float(conn.h**3 * np.sum(cs_density(conn.a, ref.a, conn.h)))


@dataclass
class CSReport:
    value: float
    reference_id: str
    grid_n: int
    richardson_error: float
    coarse_value: float = float("nan")
    granularity_check: Optional[LatticeCheck] = None

    def to_json(self):
        return {
            "value": self.value,
            "reference_id": self.reference_id,
            "grid_n": self.grid_n,
            "richardson_error": self.richardson_error,
            "coarse_value": self.coarse_value,
            "granularity_check": None if self.granularity_check is None else self.granularity_check.to_json(),
        }


def cs_eval(conn, ref):
    """Chern-Simons functional ``CS_ref(conn)`` with a Richardson error estimate.

    The estimate compares the value on the grid with the value on every
    other site, assuming second-order convergence.
    """
    value = cs_value(conn, ref)
    coarse = float("nan")
    err = float("nan")
    if conn.n % 2 == 0 and conn.n >= 8:
        coarse = cs_value(conn.coarsen(), ref.coarsen())
        err = abs(value - coarse) / 3
    return CSReport(value, ref.identifier(), conn.n, err, coarse)


@dataclass
class JumpReport:
    value: float
    check: LatticeCheck
    grid_n: int

    def __float__(self):
        return self.value

    def to_json(self):
        return {"value": self.value, "grid_n": self.grid_n, "check": self.check.to_json()}


def cs_jump(u, conn, ref, group=None, tol_int=0.05, hypothesis1=False):
    """``CS_ref(u^* conn) - CS_ref(conn)``, checked against the granularity lattice.

    ``tol_int`` is an absolute distance.  If the value misses the lattice at
    the grid and at the coarsened grid, :class:`ResolutionError` is raised.
    """
    verdict = granularity(group or conn.group_id, hypothesis1)
    value = cs_value(gauge_apply(u, conn), ref) - cs_value(conn, ref)
    check = check_on_lattice(value, verdict, tol_int / float(verdict.granularity))
    if not check.passed:
        coarse_ok = False
        if u.n % 2 == 0 and u.n >= 8:
            try:
                cu, cc, cr = u.coarsen(), conn.coarsen(), ref.coarsen()
                cv = cs_value(gauge_apply(cu, cc), cr) - cs_value(cc, cr)
                coarse_ok = check_on_lattice(cv, verdict, check.tolerance / float(verdict.granularity)).passed
            except StencilError:
                pass
        if not coarse_ok:
            raise ResolutionError(f"jump {value:.4f} is off the lattice by {check.distance:.3g} at two resolutions")
    return JumpReport(value, check, conn.n)


# ---------------------------------------------------------------------------
# test-vector generators


@functools.lru_cache(maxsize=None)
def _bump_table(c=0.1, samples=200001):
    t = np.linspace(0.0, 1.0, samples)
    with np.errstate(divide="ignore"):
        w = np.where(t < 1, np.exp(-c / np.maximum(1 - t**2, 1e-300)), 0.0)
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (w[1:] + w[:-1]) * np.diff(t))])
    return t, cum / cum[-1]


def _bump_step(rho):
    """Odd C^infinity step: 0 at 0, 1 at 1, all derivatives vanishing at 1.

    Normalized integral of the flat-topped bump ``exp(-c / (1 - t^2))`` with
    ``c = 0.1``; the flat top keeps gradients low, which is what controls the
    stencil error of degree maps.
    """
    t, cum = _bump_table()
    return np.interp(np.clip(rho, 0.0, 1.0), t, cum)


def degree_map(d, n, radius=np.pi, center=(np.pi, np.pi, np.pi)):
    """Smooth map ``T^3 -> SU(2)`` of mapping degree ``d``, trivial outside a ball.

    Hedgehog ``u = cos f(r) + i sin f(r) (x/r) . sigma`` around ``center``
    with ``f(0) = d pi`` and ``f(radius) = 0``.  Negative ``d`` flips the
    sign of ``f``, i.e. composes with the antipodal reflection.  With the
    default radius the ball touches the faces of the fundamental cube, where
    ``f`` is flat to all orders.  The ball must span at least ``8 |d|``
    cells in radius.
    """
    d = int(d)
    if abs(d) > 8:
        raise PreconditionError("|d| <= 8 is supported")
    if not 0 < radius <= np.pi:
        raise PreconditionError("radius must lie in (0, pi]")
    need = 16 * max(abs(d), 1) * np.pi / radius
    if n < need - 1e-9:
        raise PreconditionError(f"degree {d} with radius {radius:.3g} needs N >= {int(np.ceil(need))}")
    if d == 0:
        return GaugeMapField.identity(n, "SU2")
    c = np.asarray(center, dtype=float)[:, None, None, None]
    # periodic offset from the center
    x = (np.stack(coordinates(n)) - c + np.pi) % (2 * np.pi) - np.pi
    r = np.sqrt(np.sum(x**2, axis=0))
    f = d * np.pi * (1 - _bump_step(r / radius))
    s = np.sin(f) / np.where(r > 0, r, 1.0)
    s[r == 0] = 0.0
    q = np.moveaxis(np.concatenate([np.cos(f)[None], s[None] * x], axis=0), 0, -1)
    q /= np.linalg.norm(q, axis=-1, keepdims=True)
    return GaugeMapField(lie.quaternion_to_su2(q), "SU2")


def random_smooth_algebra_field(n, group_id, rng, amplitude=1.0, kmax=2, components=()):
    """Band-limited random field: every wave vector with ``|k|_inf <= kmax``.

    Coefficients are complex Gaussians damped by ``exp(-|k|^2 / kmax^2)`` and
    scaled so each component has coefficient norm ``amplitude``.  The draw
    does not depend on ``n``, so equal seeds give the same continuum field on
    every grid.
    """
    basis = lie.algebra_basis(group_id)
    m = len(basis)
    count = int(np.prod(components)) if components else 1
    ks = np.arange(-kmax, kmax + 1)
    kk = np.stack(np.meshgrid(ks, ks, ks, indexing="ij"))
    damp = np.exp(-np.sum(kk**2, axis=0) / max(kmax, 1) ** 2)
    waves = np.exp(1j * np.outer(ks, 2 * np.pi * np.arange(n) / n))  # (2 kmax + 1, n)
    out = np.empty((count, n, n, n) + basis.shape[-2:], dtype=complex)
    for c in range(count):
        coef = (rng.standard_normal(damp.shape + (m,)) + 1j * rng.standard_normal(damp.shape + (m,))) * damp[..., None]
        coef *= amplitude / np.sqrt(np.sum(np.abs(coef) ** 2))
        vals = np.real(np.einsum("abcm,ax,by,cz->xyzm", coef, waves, waves, waves, optimize=True))
        out[c] = np.einsum("xyzm,mij->xyzij", vals.astype(complex), basis, optimize=True)
    return out.reshape(tuple(components) + out.shape[1:])


def random_smooth_connection(n, group_id, rng, amplitude=0.5, kmax=2):
    return LatticeConnection(random_smooth_algebra_field(n, group_id, rng, amplitude, kmax, (3,)), group_id)


def random_smooth_gauge(n, group_id, rng, amplitude=1.0, kmax=1):
    """``exp`` of a smooth algebra field: a degree-zero gauge map."""
    return GaugeMapField(lie.expm(random_smooth_algebra_field(n, group_id, rng, amplitude, kmax)), group_id)


def flat_from_holonomy(xis, n, group_id=None):
    """Constant connection ``sum xi_i dtheta_i`` from three commuting algebra elements."""
    mats = [x.matrix if isinstance(x, lie.AlgebraElement) else np.asarray(x, dtype=complex) for x in xis]
    if len(mats) != 3:
        raise PreconditionError("three algebra elements are required")
    for i in range(3):
        for j in range(i + 1, 3):
            if np.linalg.norm(lie.commutator(mats[i], mats[j])) > 1e-12:
                raise PreconditionError("holonomy generators must commute")
    return LatticeConnection.constant(mats, n, group_id or xis[0].group_id)


# ---------------------------------------------------------------------------
# paths and norms


def pairing(two_form, one_form, h):
    """``int <F ^ w>`` over the torus."""
    return float(h**3 * np.sum(wedge_density(two_form, one_form)))


def path_action(path, ref=None):
    """``int dtau int <F_a ^ d a / d tau>`` along a discrete path of connections.

    Each segment is treated as the straight line between consecutive
    entries and integrated by Simpson's rule with the centered difference
    ``a_{k+1} - a_k``.  The integrand is quadratic along a straight segment,
    so the rule is exact and the result equals the change of the discrete
    Chern-Simons functional up to rounding.
    """
    if len(path) < 2:
        raise PreconditionError("a path needs at least two connections")
    for c in path[1:]:
        path[0]._check(c)
    if ref is not None:
        path[0]._check(ref)
    h = path[0].h
    total = 0.0
    for a0, a1 in zip(path[:-1], path[1:]):
        da = a1.a - a0.a
        f0 = _curvature_array(a0.a, h)
        fm = _curvature_array(0.5 * (a0.a + a1.a), h)
        f1 = _curvature_array(a1.a, h)
        total += pairing(f0 + 4 * fm + f1, da, h) / 6
    return total


def l2_norm(conn):
    return float(np.sqrt(conn.h**3 * np.sum(lie.inner(conn.a, conn.a))))


def h1_norm(conn):
    """Discrete ``H^1`` norm: L^2 of the components and of all their central differences."""
    h = conn.h
    total = np.sum(lie.inner(conn.a, conn.a))
    for i in range(3):
        da = diff(conn.a, i + 1, h)
        total += np.sum(lie.inner(da, da))
    return float(np.sqrt(h**3 * total))


# ---------------------------------------------------------------------------
# quadrature convergence

ANALYTIC_FIELDS = ("abc-abelian", "abc-frame", "abc-mode2")


def analytic_test_field(kind, n):
    """Smooth SU(2) test connections with nonzero Chern-Simons value.

    ``abc-abelian``: an Arnold-Beltrami-Childress field times ``i sigma_3 / 2``
    (pure helicity, no cubic term).  ``abc-frame``: the ABC field along
    ``(i sigma_1 + i sigma_2 + i sigma_3) / (2 sqrt 3)`` plus the constant
    frame ``0.3 i sigma_k / 2 dtheta_k``.  ``abc-mode2``: wave numbers 1 and 2
    along two directions plus a constant frame.
    """
    t1, t2, t3 = coordinates(n)
    basis = lie.algebra_basis("SU2")
    A, B, C = 1.0, 0.7, 0.4
    abc = [A * np.sin(t3) + C * np.cos(t2), B * np.sin(t1) + A * np.cos(t3), C * np.sin(t2) + B * np.cos(t1)]
    if kind == "abc-abelian":
        comps = [0.5 * f[..., None, None] * basis[2] for f in abc]
    elif kind == "abc-frame":
        axis = basis.sum(axis=0) / np.sqrt(3)
        comps = [0.4 * abc[i][..., None, None] * axis + 0.3 * basis[i] for i in range(3)]
    elif kind == "abc-mode2":
        abc2 = [abc[0], B * np.sin(2 * t1) + A * np.cos(2 * t3), C * np.sin(2 * t2) + B * np.cos(2 * t1)]
        comps = [
            0.3 * abc2[i][..., None, None] * basis[1] + 0.2 * abc[i][..., None, None] * basis[0] + 0.2 * basis[i]
            for i in range(3)
        ]
    else:
        raise PreconditionError(f"unknown test field {kind!r}; choose from {ANALYTIC_FIELDS}")
    return LatticeConnection(np.stack(comps), "SU2", label=kind)


def cs_convergence(kind, ns=(8, 16, 32, 64)):
    """``|CS(N) - CS(N/2)|`` for an analytic test field against the zero reference.

    Returns ``(ns, differences, values)``; the log-log slope of the
    differences against ``N`` is minus the order of the scheme.
    """
    values = {}
    for n in sorted(set(ns) | {n // 2 for n in ns}):
        values[n] = cs_value(analytic_test_field(kind, n), LatticeConnection.zero(n, "SU2"))
    diffs = [abs(values[n] - values[n // 2]) for n in ns]
    return list(ns), diffs, [values[n] for n in ns]
