"""Surface group representations with prescribed boundary holonomy.

Solve ``prod [A_i, B_i] = delta`` on closed surfaces of small genus, for
``delta = I`` and ``delta = -I`` (spelled ``minusI``) in SU(2), then join two solutions by a
path that stays on the relation.
"""

from flatcs import surface


def main():
    for genus in (1, 2, 3):
        for delta in ("I", "minusI"):
            data = surface.CompressionBodySignature.closed_surface(genus, delta, "SU2")
            p = surface.solve_commutator(data, seed=genus)
            print(f"genus {genus} delta {delta:>6}: defect {surface.commutator_defect(p, data):.1e}")

    data = surface.CompressionBodySignature.closed_surface(2, "minusI", "SU2")
    p0 = surface.solve_commutator(data, seed=1)
    p1 = surface.solve_commutator(data, seed=2)
    path = surface.connect(p0, p1, data, steps=16)
    worst = max(surface.commutator_defect(p, data) for p in path)
    print(f"path of {len(path)} points between two genus-2 solutions, max defect {worst:.1e}")


if __name__ == "__main__":
    main()
