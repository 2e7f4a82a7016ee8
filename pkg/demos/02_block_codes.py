"""The forward block-sum code and its anchored section, on finite windows.

The forward code sums m letters spaced (m-1)! apart and drops one
separation level; the section rebuilds a configuration from an anchor
sequence plus telescoping sums and is a bit-exact right inverse.  The
section is *not* equivariant, which is why it only exists on windows.
"""
import random
from fractions import Fraction

from zpindex import (
    AnchorSeq,
    Window,
    block_sum_step,
    cyclic_group,
    pair_embed,
    circle_grid,
    section_apply,
    section_input_range,
    separation_violations,
)
from zpindex.verify import _random_separated_window, section_shift_mismatch

z3 = cyclic_group(3)

# ---------------------------------------------------------------------------
# Forward code, m = 2: output k is x_k + x_{k+1}; the window shrinks by one.
# ---------------------------------------------------------------------------
w = Window(z3, 0, ((0,), (0,), (1,), (1,), (2,)))
out = block_sum_step(2, w)
print("input :", [x[0] for x in w.letters])
print("output:", [x[0] for x in out.letters], "(pairwise sums mod 3)")

# ---------------------------------------------------------------------------
# The section needs a precisely known input range.  Ask before evaluating.
# ---------------------------------------------------------------------------
for requested in ((0, 1), (2, 3), (-2, -1)):
    print(f"section m=2, outputs {requested} -> inputs {section_input_range(2, *requested)}")

# ---------------------------------------------------------------------------
# Round trip on random valid windows with a random anchor: forward after
# section is the identity, letter for letter.
# ---------------------------------------------------------------------------
rng = random.Random(0)
m = 3
half = Fraction(1, 2)
span = (m - 1) * 2  # (m-1) * (m-1)!
need = section_input_range(m, 0, 11 + span)
x = _random_separated_window(rng, z3, half, 2, need[0], need[1])
anchor = AnchorSeq.seeded(z3, 123)
y = section_apply(m, anchor, x, 0, 11 + span)
back = block_sum_step(m, y)
print("\nm=3 round trip on [0, 11]:",
      all(back[k] == x[k] for k in range(12)) and "identity, bit-exact")
print("section output satisfies the level-3 constraint:",
      separation_violations(y, 6, half) == [])

# ---------------------------------------------------------------------------
# Non-equivariance, witnessed: the section applied to a shifted window need
# not be the shifted section.
# ---------------------------------------------------------------------------
witness = section_shift_mismatch(2, z3, half, seed=5)
print("\nshift-commutation counterexample:",
      f"shift {witness['shift']}, index {witness['index']}: "
      f"{witness['left']} vs {witness['right']}")

# ---------------------------------------------------------------------------
# The pair embedding doubles the alphabet and is a plain sliding stencil,
# hence equivariant.
# ---------------------------------------------------------------------------
s8 = circle_grid(8)
v = Window(s8, 0, ((0,), (4,), (0,)))
print("\npair embedding of (0, 4, 0):", pair_embed(v).letters,
      "over", pair_embed(v).alphabet.token())
