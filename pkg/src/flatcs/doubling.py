"""The torus as a double: half-pairs, diagonal connections, temporal gauge, quantization.

``T^3`` is the double of ``H = T^2 x [0, pi]`` along the interfaces
``theta_3 = 0`` and ``theta_3 = pi``.  The half-swap involution is
``R(theta_1, theta_2, theta_3) = (theta_1, theta_2, -theta_3)``; on the grid
site ``(i, j, k)`` goes to ``(i, j, N - k mod N)`` and ``dtheta_3`` components
change sign.  A connection splits into ``c = a|_H`` and ``b = R^* (a|_{H-bar})``,
both sampled on the half grid ``k = 0 .. N/2``.
"""
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import lie
from .errors import FlatnessError, LedgerError, PreconditionError, ResolutionError
from .groups import check_on_lattice, get_spec, granularity
from .lattice import (
    GaugeMapField,
    LatticeConnection,
    cs_value,
    curvature,
    degree_map,
    gauge_apply,
    random_smooth_connection,
)

MATCH_TOL = 1e-8
DEFAULT_EPSILON = np.pi / 4


def reflect(conn):
    """Pullback ``R^* a`` under the half-swap involution."""
    a = np.roll(conn.a[:, :, :, ::-1], 1, axis=3).copy()
    a[2] *= -1
    return LatticeConnection(a, conn.group_id)


def reflect_gauge(u):
    return GaugeMapField(np.roll(u.u[:, :, ::-1], 1, axis=2), u.group_id)


def symmetry_residual(conn):
    """Sup-norm of ``a - R^* a``."""
    return float(np.max(np.abs(conn.a - reflect(conn).a)))


@dataclass
class DoubleDecomposition:
    """Half-pair ``(b, c)`` on ``theta_3 in [0, pi]``, arrays of shape ``(3, N, N, N/2 + 1, d, d)``."""

    b: np.ndarray
    c: np.ndarray
    group_id: str
    matching_residuals: dict = field(default_factory=dict)

    @property
    def grid_n(self):
        return self.b.shape[1]

    def to_json(self):
        return {
            "group": self.group_id,
            "grid_n": self.grid_n,
            "matching_residuals": dict(self.matching_residuals),
        }


def _matching(b, c):
    out = {}
    for name, k in (("theta3=0", 0), ("theta3=pi", -1)):
        tang = np.max(np.abs(b[:2, :, :, k] - c[:2, :, :, k]))
        normal = np.max(np.abs(-b[2, :, :, k] - c[2, :, :, k]))
        out[f"tangential@{name}"] = float(tang)
        out[f"normal@{name}"] = float(normal)
    return out


def split(conn):
    """Restrict to the two halves; ``b`` is pulled back to ``H`` by the involution."""
    n = conn.n
    if n % 2:
        raise PreconditionError("splitting needs an even grid")
    half = n // 2
    c = conn.a[:, :, :, : half + 1].copy()
    b = reflect(conn).a[:, :, :, : half + 1].copy()
    return DoubleDecomposition(b, c, conn.group_id, _matching(b, c))


def assemble(dec, tol=MATCH_TOL):
    """Glue a half-pair back into a grid connection; inverse of :func:`split`."""
    res = _matching(dec.b, dec.c)
    if max(res.values()) > tol:
        raise PreconditionError(f"half-pair violates the matching conditions: {res}")
    half = dec.c.shape[3] - 1
    n = 2 * half
    a = np.empty(dec.c.shape[:3] + (n,) + dec.c.shape[4:], dtype=complex)
    a[:, :, :, : half + 1] = dec.c
    # a on (pi, 2 pi) is the pullback of b: a(2 pi - t) = R b(t)
    tail = dec.b[:, :, :, 1:half].copy()
    tail[2] *= -1
    a[:, :, :, half + 1 :] = tail[:, :, :, ::-1]
    return LatticeConnection(a, dec.group_id)


@dataclass
class DiagonalVerdict:
    diagonal: bool
    swap_residual: float
    normal_residual: float

    def __bool__(self):
        return self.diagonal


def is_diagonal(conn, tol=MATCH_TOL):
    """``b = c`` on the half grid and ``iota_nu a = 0`` on both interfaces."""
    dec = split(conn)
    swap = float(np.max(np.abs(dec.b - dec.c)))
    normal = float(max(np.max(np.abs(dec.c[2, :, :, 0])), np.max(np.abs(dec.c[2, :, :, -1]))))
    return DiagonalVerdict(swap <= tol and normal <= tol, swap, normal)


# ---------------------------------------------------------------------------
# temporal gauge


def _smooth_step(t):
    """C^infinity step: 0 for ``t <= 0``, 1 for ``t >= 1``."""
    t = np.clip(t, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        f = np.where(t > 0, np.exp(-1.0 / np.where(t > 0, t, 1.0)), 0.0)
        g = np.where(t < 1, np.exp(-1.0 / np.where(t < 1, 1 - t, 1.0)), 0.0)
    return f / (f + g)


def interface_distance(n):
    """Signed distance in ``theta_3`` from each site to the nearest interface, and which interface."""
    h = 2 * np.pi / n
    k = np.arange(n)
    s0 = np.where(k <= n // 2, k, k - n) * h  # relative to theta_3 = 0
    s1 = (k - n // 2) * h  # relative to theta_3 = pi
    near0 = np.abs(s0) <= np.abs(s1)
    return np.where(near0, s0, s1), np.where(near0, 0, n // 2)


BUMP_FRACTION = 1 / 3


def bump(n, epsilon=DEFAULT_EPSILON):
    """``beta(theta_3)``: 1 on the interfaces, supported in ``|s| < epsilon / 3``."""
    s, _ = interface_distance(n)
    return 1 - _smooth_step(np.abs(s) / (BUMP_FRACTION * epsilon))


def temporal_gauge(conn, epsilon=DEFAULT_EPSILON):
    """Gauge map killing ``iota_{beta nu}`` of the connection, ``nu = d/dtheta_3``.

    Near each interface ``u`` solves ``d_3 u = -a_3 u`` outward with ``u = I``
    on the interface, so ``(u^* a)_3 = 0`` and hence ``iota_{beta nu}(u^* a) = 0``.
    This is the formula ``u = exp(-int iota_{beta nu} a)`` written in the
    flow time of ``beta nu``; the path-ordered composite is the product of
    ``exp(-h * trapezoid)`` steps.  The transport runs two cells past the
    support of ``beta`` (the reach of the stencil); beyond that the map is
    tapered to the identity along ``exp(chi log u_edge)``, so ``u = I`` for
    ``|s| >= epsilon``.
    """
    n = conn.n
    h = conn.h
    if not 0 < epsilon < np.pi / 2:
        raise PreconditionError("bicollar width must lie in (0, pi/2)")
    reach = int(np.floor(epsilon / h + 1e-9))
    if reach < 4:
        raise ResolutionError(f"bicollar of width {epsilon:.3g} spans fewer than 4 cells at N={n}")
    transport = min(int(np.ceil(BUMP_FRACTION * epsilon / h - 1e-9)) + 1, reach - 2)
    d = conn.a.shape[-1]
    eye = np.eye(d, dtype=complex)
    u = np.broadcast_to(eye, (n, n, n, d, d)).copy()
    a3 = conn.a[2]
    for k0 in (0, n // 2):
        for direction in (1, -1):
            g = np.broadcast_to(eye, (n, n, d, d)).copy()
            for step in range(1, transport + 1):
                k_prev, k = (k0 + direction * (step - 1)) % n, (k0 + direction * step) % n
                gen = -direction * h * 0.5 * (a3[:, :, k_prev] + a3[:, :, k])
                g = lie.expm(lie.project_algebra(gen, conn.group_id)) @ g
                u[:, :, k] = g
            log_edge = lie.logm(g)
            for step in range(transport + 1, reach):
                chi = 1 - _smooth_step((step - transport) / (reach - transport))
                u[:, :, (k0 + direction * step) % n] = lie.expm(chi * log_edge)
    if conn.group_id == "SO3":
        u = np.real(u).astype(complex)
    return GaugeMapField(lie.retract(u, conn.group_id), conn.group_id)


def temporal_residual(conn, epsilon=DEFAULT_EPSILON):
    """Sup-norm of ``iota_{beta nu} a = beta * a_3``."""
    beta = bump(conn.n, epsilon)
    return float(np.max(beta[None, None, :, None, None] * np.abs(conn.a[2])))


# ---------------------------------------------------------------------------
# symmetric references and quantization


def symmetric_reference_check(a0, a1, trials=10, seed=0, amplitude=0.5, tol=MATCH_TOL):
    """Max over random ``a`` of ``|CS_{a0}(a) - CS_{a1}(a)|`` for involution-fixed references."""
    for name, ref in (("a0", a0), ("a1", a1)):
        r = symmetry_residual(ref)
        if r > tol:
            raise PreconditionError(f"{name} is not fixed by the half-swap involution (residual {r:.3g})")
    a0._check(a1)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        a = random_smooth_connection(a0.n, a0.group_id, rng, amplitude)
        worst = max(worst, abs(cs_value(a, a0) - cs_value(a, a1)))
    return worst


def symmetrize(conn):
    """``(a + R^* a) / 2``: the nearest involution-fixed connection."""
    return LatticeConnection(0.5 * (conn.a + reflect(conn).a), conn.group_id)


@dataclass
class QuantizationVerdict:
    value: float
    nearest: float
    distance: float
    granularity: Fraction
    tolerance: float
    hypothesis1: bool

    @property
    def passed(self):
        return self.distance <= self.tolerance

    def to_json(self):
        return {
            "value": self.value,
            "nearest": self.nearest,
            "distance": self.distance,
            "granularity": str(self.granularity),
            "tolerance": self.tolerance,
            "hypothesis1": self.hypothesis1,
            "passed": self.passed,
        }


FLAT_TOL = 1e-6


def _flat_sample(obj, flat_tol):
    """Resolve a flat connection given directly or as ``(u, base)`` with ``base`` flat."""
    if isinstance(obj, tuple):
        u, base = obj
        _require_flat(base, flat_tol)
        return gauge_apply(u, base)
    _require_flat(obj, flat_tol)
    return obj


def _require_flat(conn, flat_tol):
    sup = curvature(conn).sup
    if sup > flat_tol:
        raise FlatnessError(f"sup |F| = {sup:.3g} exceeds {flat_tol:g}")


def quantization_tolerance(n):
    """Relative distance to the lattice accepted at grid ``n``."""
    return 0.01 if n >= 64 else 0.05


def quantization_check(flat_conn, ref_flat, spec=None, hypothesis1=False, flat_tol=FLAT_TOL):
    """``CS_ref(flat_conn)`` against the critical-value lattice.

    Either argument may be a pair ``(u, base)`` standing for ``u^* base``:
    flatness is then checked on ``base``, because the curvature of the
    sampled ``u^* base`` carries the stencil truncation of ``du``.
    """
    a = _flat_sample(flat_conn, flat_tol)
    a0 = _flat_sample(ref_flat, flat_tol)
    spec = get_spec(spec or a.group_id)
    verdict = granularity(spec, hypothesis1)
    value = cs_value(a, a0)
    rel = quantization_tolerance(a.n)
    check = check_on_lattice(value, verdict, rel)
    return QuantizationVerdict(value, check.nearest, check.distance, verdict.granularity, check.tolerance, hypothesis1)


# ---------------------------------------------------------------------------
# cyclic gluing


LEDGER_TOL = 0.02


@dataclass
class GluingLedger:
    n: int
    cs_a: float
    cs_a_prime: float
    kappa_u: float
    kappa_un: float
    k_n: float
    kappa_un_measured: float = None
    residual: float = 0.0

    def to_json(self):
        return {k: getattr(self, k) for k in ("n", "cs_a", "cs_a_prime", "kappa_u", "kappa_un", "k_n", "kappa_un_measured", "residual")}


def gluing_ledger(cs_a, cs_a_prime, kappa_u, n, kappa_un=None, tol=LEDGER_TOL):
    """Fill the n-fold gluing ledger ``n cs_a + kappa_un = n cs_a' + k_n``.

    ``k_n = n (n - 1) kappa_u / 2``.  The ledger solves for ``kappa_un``
    and requires ``cs_a - cs_a'`` to lie within ``tol`` of ``(1/n) Z``.  A
    measured ``kappa_un`` is checked against the identity as well.
    """
    n = int(n)
    if n < 1:
        raise PreconditionError("n must be at least 1")
    k_n = 0.5 * n * (n - 1) * kappa_u
    solved = n * (cs_a_prime - cs_a) + k_n
    diff = cs_a - cs_a_prime
    off = abs(diff * n - round(diff * n)) / n
    if off > tol:
        raise LedgerError(f"cs_a - cs_a' = {diff:.4f} is {off:.3g} away from (1/{n})Z")
    residual = 0.0
    if kappa_un is not None:
        residual = abs(n * cs_a + kappa_un - n * cs_a_prime - k_n)
        if residual > tol:
            raise LedgerError(f"ledger identity violated by {residual:.3g}")
    return GluingLedger(n, float(cs_a), float(cs_a_prime), float(kappa_u), float(solved), float(k_n),
                        None if kappa_un is None else float(kappa_un), float(residual))


def _half_bump(power, degree, n):
    """``u^power`` for the hedgehog ``u`` of degree ``degree`` inside ``H``, centered at ``theta_3 = pi/2``."""
    return degree_map(power * degree, n, radius=np.pi / 2, center=(np.pi, np.pi, np.pi / 2))


def doubled(u):
    """``(u o R, u)``: the gauge map equal to ``u`` on ``H`` and to its mirror on ``H-bar``.

    ``u`` must be the identity near both interfaces.
    """
    half = u.n // 2
    v = np.array(u.u)
    mirror = reflect_gauge(u).u
    v[:, :, half + 1 :] = mirror[:, :, half + 1 :]
    return GaugeMapField(v, u.group_id)


def gluing_experiment(n, degree=1, grid_n=64, base=None, tol=LEDGER_TOL):
    """End-to-end ledger for the ``n``-fold cyclic gluing of ``H = T^2 x [0, pi]``.

    ``a' = base`` is an involution-fixed flat connection (so ``a' = (b, b)``
    with ``b = a'|_H``), ``u`` is a hedgehog of the given degree supported in
    the interior of ``H`` and ``a = (b, c)`` with ``u^* c = b``.  The
    ``Y^(n)`` values are assembled from ``T^3`` measurements by additivity:
    the pullback of ``a^(n)`` by ``u^(n)`` consists of the pairs
    ``(u^{k-1})^* (b, b)``, i.e. the doubled powers ``v_{k-1}`` applied to
    ``a'``.  Hence

        kappa_un = sum_k CS(v_{k-1}^* a') - n CS(a),   kappa_u = CS(v_1^* a') - CS(a').

    Returns the :class:`GluingLedger` built from these measurements.
    """
    if n < 1 or n > 3:
        raise PreconditionError("n must lie in 1..3 at desk scale")
    b = lie.algebra_basis("SU2")
    if base is None:
        base = LatticeConnection.constant([0.3 * b[2], -0.2 * b[2], 0 * b[2]], grid_n, "SU2")
    if symmetry_residual(base) > MATCH_TOL:
        raise PreconditionError("base must be fixed by the half-swap involution")
    _require_flat(base, FLAT_TOL)
    ref = LatticeConnection.zero(base.n, base.group_id)
    u = _half_bump(1, degree, base.n)
    w = GaugeMapField(lie.dagger(u.u), u.group_id)  # (e, u^{-1}) on the double
    a = gauge_apply(w, base)
    cs_a, cs_ap = cs_value(a, ref), cs_value(base, ref)
    kappa_u = cs_value(gauge_apply(doubled(u), base), ref) - cs_ap
    total = n * cs_ap  # k = 1 term: v_0 = e
    for k in range(2, n + 1):
        v = doubled(_half_bump(k - 1, degree, base.n))
        total += cs_value(gauge_apply(v, base), ref) - cs_ap
    kappa_un = total - n * cs_a
    return gluing_ledger(cs_a, cs_ap, kappa_u, n, kappa_un=kappa_un, tol=tol)
