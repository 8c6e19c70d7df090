"""Global numerical tolerances and discretization settings.

Values can be changed at runtime, e.g. ``flatcs.config.tolerances.eps_log = 1e-6``
or ``flatcs.config.numerics.stencil_order = 2``.
"""
from dataclasses import dataclass


@dataclass
class Tolerances:
    tau_unitary: float = 1e-12
    eps_log: float = 1e-8


@dataclass
class Numerics:
    """Discretization choices for the lattice field calculus.

    ``stencil_order`` is 4 (default) or 2; both stencils are skew-adjoint.
    """

    stencil_order: int = 4


tolerances = Tolerances()
numerics = Numerics()
