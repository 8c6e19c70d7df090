"""Gradient flow of the Yang-Mills energy back onto the flat locus.

Start from an abelian flat connection, push it off the flat locus by a
small perturbation transverse to the gauge orbit, and let explicit Euler
steps of the energy gradient pull it back.
"""

import numpy as np

from flatcs import heatflow, lattice, lie


def main():
    n = 16
    rng = np.random.default_rng(3)
    h = lie.random_algebra("SU2", rng)
    h /= np.sqrt(lie.inner(h, h)) * 2 * np.pi
    flat = lattice.flat_from_holonomy([c * h for c in (0.3, -0.5, 0.8)], n, "SU2")
    start = flat + heatflow.transverse_perturbation(flat, rng, size=1e-3)
    print(f"initial |F| = {lattice.curvature(start).l2:.3e}")

    res = heatflow.flow(start, heatflow.FlowConfig(tol_flat=1e-8))
    for k in np.unique(np.geomspace(1, len(res.residuals), 8).astype(int)) - 1:
        print(f"  step {k:>5}  |F| {res.residuals[k]:.3e}  energy {res.energies[k]:.3e}")
    print(f"converged in {res.steps} steps, |F| = {res.residuals[-1]:.2e}")
    print(f"distance to the starting flat: {lattice.l2_norm(res.conn - flat):.2e}")


if __name__ == "__main__":
    main()
