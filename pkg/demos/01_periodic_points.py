"""Counting and enumerating periodic points of constrained shifts.

Walks through the exact-arithmetic alphabet layer, the two constraint
families, transfer-matrix counting against brute enumeration, and orbit
structure under the shift.
"""
from fractions import Fraction

from zpindex import (
    circle_grid,
    cyclic_group,
    mismatch_shift,
    neighbor_gap_shift,
    orbit_decompose,
)

# ---------------------------------------------------------------------------
# Alphabets carry exact rational metrics: the discrete metric on a cyclic
# group, the arc metric on a grid circle of circumference 2.
# ---------------------------------------------------------------------------
z3 = cyclic_group(3)
s8 = circle_grid(8)
print("Z3: 2 + 2 =", z3.add(2, 2)[0], "   dist(0, 2) =", z3.metric(0, 2))
print("S:q=8 grid: dist(0, 5) =", s8.metric(0, 5), "(exactly 3/4, no floats)")

# ---------------------------------------------------------------------------
# The 3-letter mismatch shift: letters m! apart must differ.  Its period-L
# counts follow the proper-coloring law for cycles, 2^L + 2*(-1)^L.
# ---------------------------------------------------------------------------
sigma1 = mismatch_shift(1)
print("\nperiod-p counts for the m=1 mismatch shift:")
for p in (2, 3, 5, 7, 11):
    print(f"  p={p:2d}: {sigma1.count_periodic(p):5d}   (law: {2**p + 2 * (-1)**p})")

# ---------------------------------------------------------------------------
# For m >= 2 the constraint reaches m! steps ahead.  When gcd(m!, p) = 1 the
# index recoding k -> k*m! turns it into the nearest-neighbour constraint,
# so the period-p sets have the same size as for m = 1.
# ---------------------------------------------------------------------------
sigma2 = mismatch_shift(2)
for p in (5, 7):
    direct = sigma2.enumerate_periodic(p, method="direct")
    recoded = sigma2.enumerate_periodic(p, method="recoded")
    print(f"\nm=2, p={p}: direct search {len(direct)} words, "
          f"recoded search {len(recoded)} words, m=1 count {sigma1.count_periodic(p)}")
    assert direct == recoded

# When p divides m! the constraint collapses to x != x and nothing survives.
print("m=2, p=2:", sigma2.count_periodic(2), "periodic points (2 divides 2!)")

# ---------------------------------------------------------------------------
# Orbits under the shift: for a fixed-point-free family and prime p every
# orbit has full size p, i.e. the action on the period-p set is free.
# ---------------------------------------------------------------------------
words = sigma1.enumerate_periodic(5)
dec = orbit_decompose(words, 5)
print(f"\np=5: {len(words)} words in {dec.n_orbits} orbits, free = {dec.free}")
print("representatives:", ", ".join(o[0].text() for o in dec.orbits))

# ---------------------------------------------------------------------------
# The half-gap family on the grid circle: at every index, at least one of
# the two neighbouring gaps must be at least 1/2.
# ---------------------------------------------------------------------------
zq8 = neighbor_gap_shift(s8, Fraction(1, 2))
for p in (2, 3, 5):
    print(f"half-gap family, q=8: {len(zq8.enumerate_periodic(p)):6d} words of period {p}")
