#!/usr/bin/env python3
"""Eisenstein coefficients against actual representation numbers.

For a one-class genus the theta series has no cuspidal part, so the
coefficient formula must reproduce r(m) on the nose; that calibration
pinned the character convention for definite rank-5 lattices.  For a
multi-class lattice the difference r(m) - q(m) is a cusp form whose
coefficients grow strictly slower than m^(3/2).
"""

from froblat import (IntLattice, cusp_deviation, dirichlet_L2,
                     q_positive_definite, representation_counts)

D5 = IntLattice([[2, -1, 0, 0, 0], [-1, 2, -1, 0, 0], [0, -1, 2, -1, -1],
                 [0, 0, -1, 2, 0], [0, 0, -1, 0, 2]], "D5")
counts = representation_counts(D5, 12)
print("one-class genus (rank 5, det 4):")
for m in range(1, 13):
    q = q_positive_definite(D5, m)
    print(f"  m={m:2d}  r(m)={counts[m]:5d}  eisenstein={q.midpoint():10.4f}"
          f"  radius={q.radius():.1e}")

print("\nL(2, chi_-4) interval:", dirichlet_L2(-4))

# a lattice with 5 | det: the deviation is a weight-5/2 cusp form
L5 = IntLattice([[2, 0, 0, 0, 0], [0, 2, 0, 0, 0], [0, 0, 2, 0, 0],
                 [0, 0, 0, 10, 0], [0, 0, 0, 0, 10]], "pdet5")
records, slope = cusp_deviation(L5, 100, 800)
big = max(records, key=lambda r: abs(r["deviation"]))
print(f"\nrank-5 lattice with 5 | det over 100 <= m <= 800:")
print(f"  largest deviation {big['deviation']:.1f} at m = {big['m']}")
print(f"  fitted growth exponent of |r - q|: {slope:.3f}  (target < 1.5)")
