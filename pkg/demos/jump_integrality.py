"""Chern-Simons jumps under large gauge transformations of the 3-torus.

A map ``T^3 -> SU(2)`` of degree ``d`` shifts the Chern-Simons functional
of the trivial connection by ``-2d`` in the normalization used here.  The
script sweeps degrees and grid sizes and prints how fast the sampled jump
approaches the integer.
"""

import numpy as np

from flatcs import lattice
from flatcs.lattice import LatticeConnection


def main():
    print(f"{'N':>4} {'d':>3} {'jump':>12} {'error':>10}")
    for n in (32, 64):
        zero = LatticeConnection.zero(n, "SU2")
        for d in (1, -1, 2):
            if n < 16 * abs(d):
                continue
            u = lattice.degree_map(d, n)
            value = lattice.cs_jump(u, zero, zero, tol_int=0.1).value
            print(f"{n:>4} {d:>3} {value:>12.6f} {abs(value + 2 * d):>10.2e}")

    # small gauge maps move nothing
    rng = np.random.default_rng(0)
    n = 32
    zero = LatticeConnection.zero(n, "SU2")
    u = lattice.random_smooth_gauge(n, "SU2", rng)
    print(f"random null-homotopic map at N={n}: jump {lattice.cs_jump(u, zero, zero).value:+.2e}")


if __name__ == "__main__":
    main()
