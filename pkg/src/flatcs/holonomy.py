"""Holonomy of lattice connections and its lift to the universal cover.

Parallel transport along an edge from ``x`` to ``x + s e_i`` (``s = +-1``) is
``exp(-h * s * a_i^edge)`` where ``a_i^edge`` is ``a_i`` at the edge midpoint,
from cubic interpolation of the four collinear samples.  Transports compose on the left, ``g <- exp(-h a) g``, so
for the constant connection ``xi dtheta_1`` the ``theta_1`` loop gives
``exp(-2 pi xi)`` and ``hol_{u^* a} = u(p)^{-1} hol_a u(p)``.

All loops share the fixed trivialization frame of the lattice bundle.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import lie
from .errors import FlatnessError, PreconditionError, ResolutionError
from .lattice import curvature

FLATNESS_TOL = 1e-6
# largest admissible distance between consecutive partial holonomies when lifting
LIFT_STEP = np.pi / 4
MAX_SUBDIVISION = 1024


@dataclass(frozen=True, eq=False)
class LatticeLoop:
    """Closed path of unit axis steps; vertices are integer site coordinates (not reduced mod ``N``)."""

    vertices: np.ndarray
    grid_n: int

    def __post_init__(self):
        v = np.array(self.vertices, dtype=int)
        if v.ndim != 2 or v.shape[1] != 3 or len(v) < 2:
            raise PreconditionError("a loop needs at least two vertices in Z^3")
        steps = np.diff(v, axis=0)
        if not np.all(np.sum(np.abs(steps), axis=1) == 1):
            raise PreconditionError("consecutive vertices must differ by one axis step")
        if np.any((v[-1] - v[0]) % self.grid_n):
            raise PreconditionError("loop is not closed on the torus")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @property
    def basepoint(self):
        return tuple(int(x) % self.grid_n for x in self.vertices[0])

    def __len__(self):
        return len(self.vertices) - 1

    @classmethod
    def axis(cls, axis, grid_n, base=(0, 0, 0), winding=1):
        """Coordinate loop winding ``winding`` times around the ``axis`` circle."""
        m = abs(winding) * grid_n
        v = np.tile(np.asarray(base, dtype=int), (m + 1, 1))
        v[:, axis] += np.sign(winding) * np.arange(m + 1)
        return cls(v, grid_n)

    @classmethod
    def rectangle(cls, grid_n, base=(0, 0, 0), axes=(0, 1), lengths=(1, 1)):
        """Contractible rectangle: ``lengths[0]`` steps along ``axes[0]``, then ``axes[1]``, then back."""
        (i, j), (li, lj) = axes, lengths
        path = [np.asarray(base, dtype=int)]
        for ax, count, sign in ((i, li, 1), (j, lj, 1), (i, li, -1), (j, lj, -1)):
            for _ in range(abs(count)):
                nxt = path[-1].copy()
                nxt[ax] += sign * np.sign(count)
                path.append(nxt)
        return cls(np.array(path), grid_n)

    def concat(self, other):
        """``self`` followed by ``other``; both must share the basepoint."""
        if self.grid_n != other.grid_n or self.basepoint != other.basepoint:
            raise PreconditionError("loops must share grid and basepoint")
        shift = self.vertices[-1] - other.vertices[0]
        return LatticeLoop(np.concatenate([self.vertices, other.vertices[1:] + shift]), self.grid_n)

    def reversed(self):
        return LatticeLoop(self.vertices[::-1], self.grid_n)

    def to_json(self):
        return {"grid_n": self.grid_n, "vertices": self.vertices.tolist()}


def _edge_generators(conn, loop):
    """``-h * s * a_edge`` for every edge, shape ``(len(loop), d, d)``."""
    if loop.grid_n != conn.n:
        raise PreconditionError(f"loop lives on N={loop.grid_n}, connection on N={conn.n}")
    v = loop.vertices
    steps = np.diff(v, axis=0)
    axis = np.argmax(np.abs(steps), axis=1)
    sign = steps[np.arange(len(steps)), axis]
    lo = np.minimum(v[:-1], v[1:])
    unit = np.eye(3, dtype=int)[axis]

    def sample(offset):
        return conn.a[(axis,) + tuple(((lo + offset * unit) % conn.n).T)]

    mid = (9 * (sample(0) + sample(1)) - (sample(-1) + sample(2))) / 16
    return -conn.h * sign[:, None, None] * mid


def _partial_products(gens):
    steps = lie.expm(gens)
    out = np.empty_like(steps)
    g = np.eye(steps.shape[-1], dtype=complex)
    for k, s in enumerate(steps):
        g = s @ g
        out[k] = g
    return out


def holonomy(conn, loop):
    """Ordered product of edge transports around ``loop``; a :class:`GroupElement`."""
    gens = _edge_generators(conn, loop)
    g = _partial_products(gens)[-1]
    return lie.GroupElement(lie.retract(g, conn.group_id), conn.group_id)


@dataclass(frozen=True, eq=False)
class CoverGroupElement:
    """Element of the universal cover.

    ``SU2`` and ``SO3``: ``matrix`` in SU(2).  ``U1``: ``angle`` in R.
    ``U2``: ``(angle, matrix)`` in ``R x SU(2)`` covering ``e^{i angle} matrix``.
    """

    group_id: str
    matrix: Optional[np.ndarray] = None
    angle: Optional[float] = None

    @property
    def cover_name(self):
        return {"U1": "R", "SU2": "SU2", "SO3": "SU2", "U2": "R x SU2"}[self.group_id]

    def project(self):
        """Image under the covering map, as a :class:`GroupElement` of the base group."""
        if self.group_id == "U1":
            m = np.array([[np.exp(1j * self.angle)]])
        elif self.group_id == "SU2":
            m = self.matrix
        elif self.group_id == "SO3":
            m = lie.su2_to_so3(self.matrix)
        else:
            m = np.exp(1j * self.angle) * self.matrix
        return lie.GroupElement(m, self.group_id)

    def to_json(self):
        out = {"group": self.group_id, "cover": self.cover_name}
        if self.matrix is not None:
            out["matrix"] = [[[float(z.real), float(z.imag)] for z in row] for row in self.matrix]
        if self.angle is not None:
            out["angle"] = float(self.angle)
        return out


def _lift_path(path, group_id):
    """Continuous lift of a discrete path in G starting at the identity.

    Returns ``None`` when consecutive points are too far apart for the
    nearest-preimage rule to be unambiguous.
    """
    d = path.shape[-1]
    if group_id == "SU2":
        return CoverGroupElement("SU2", matrix=path[-1])
    prev = np.eye(d, dtype=complex)
    steps = [np.linalg.norm(g - p) for g, p in zip(path, np.concatenate([prev[None], path[:-1]]))]
    if max(steps) > 2 * np.sin(LIFT_STEP / 2) * np.sqrt(d):
        return None
    if group_id in ("U1", "U2"):
        # R-factor: unwrap the phase of the determinant; U(2) splits it evenly
        ph = np.angle(np.linalg.det(path))
        inc = (np.diff(np.concatenate([[0.0], ph])) + np.pi) % (2 * np.pi) - np.pi
        t = float(np.sum(inc))
        if group_id == "U1":
            return CoverGroupElement("U1", angle=t)
        return CoverGroupElement("U2", matrix=np.exp(-0.5j * t) * path[-1], angle=t / 2)
    # SO3: follow the sign of the SU(2) preimage
    cands = lie.so3_to_su2(np.real(path))
    lift = np.eye(2, dtype=complex)
    for cand in cands:
        # Re Tr(c^dagger l) > 0 picks the preimage nearer the previous lift
        lift = cand if np.real(np.vdot(cand, lift)) >= 0 else -cand
    return CoverGroupElement("SO3", matrix=lift)


def tilde_holonomy(conn, loop, flatness_tol=FLATNESS_TOL):
    """Holonomy lifted continuously to the universal cover, starting at the identity.

    Edges whose transport rotates by more than ``LIFT_STEP`` are subdivided;
    this is exact because each edge transport is a single exponential.
    """
    curv = curvature(conn)
    if curv.sup > flatness_tol:
        raise FlatnessError(f"sup |F| = {curv.sup:.3g} exceeds {flatness_tol:g}")
    gens = _edge_generators(conn, loop)
    sizes = np.sqrt(np.maximum(np.sum(np.abs(gens) ** 2, axis=(-2, -1)), 0.0))
    sub = np.maximum(1, np.ceil(sizes / (LIFT_STEP / 2))).astype(int)
    if np.max(sub) > MAX_SUBDIVISION:
        raise ResolutionError("edge transport too large to lift; refine the grid")
    fine = np.concatenate([np.repeat(g[None] / m, m, axis=0) for g, m in zip(gens, sub)])
    path = _partial_products(fine)
    out = _lift_path(path, conn.group_id)
    if out is None:
        raise ResolutionError("lift ambiguous: consecutive partial holonomies too far apart")
    return out


def holonomy_equivariance_check(conn, loop, u):
    """``|hol(u^* a) - u(p)^{-1} hol(a) u(p)|_F``; second order in ``h`` for smooth data."""
    from .lattice import gauge_apply

    g = holonomy(conn, loop).matrix
    gu = holonomy(gauge_apply(u, conn), loop).matrix
    up = u.u[loop.basepoint]
    return float(np.linalg.norm(gu - lie.dagger(up) @ g @ up))


def multiplicativity_check(conn, loop1, loop2):
    """``|hol(loop1 . loop2) - hol(loop2) hol(loop1)|_F`` (transport composes on the left)."""
    g12 = holonomy(conn, loop1.concat(loop2)).matrix
    return float(np.linalg.norm(g12 - holonomy(conn, loop2).matrix @ holonomy(conn, loop1).matrix))
