"""
Twill and basket: one crossing sequence, two different weaves.

Both weaves are built from two sets of threads on the square grid with the
crossing sequence (+2,-2): each thread goes over two threads of the other set,
then under two. This demo shows that the sequence alone does not fix the
weave. The smallest torus motif holds 4 crossings and carries the twill; the
basket needs a motif twice as large, and no shift or rotation turns one
crossing matrix into the other.

Run:  python3 demos/01_twill_and_basket.py
"""

from pqweave import (MatrixSet, WeaveSpec, build_motif, enumerate_solutions, equivalent_sets,
                     gen_block, gen_diagonal, is_entangled, pairwise_crossing_number, rank)
from pqweave.render import render_text

spec = WeaveSpec.build([(1, 0), (0, 1)], {(0, 1): (2, 2)})
pc = pairwise_crossing_number(spec, 0, 1)
print(f"Square grid, sequence {spec.seq(0, 1)}: each thread must carry a multiple of "
      f"{pc.c} crossings with the other set.\n")

print("The two smallest motifs on the torus:")
first, second = enumerate_solutions(spec, limit=2)
for k, sol in enumerate((first, second)):
    print(f"  solution {k}: {sol.describe()}")

twill = MatrixSet.uniform(2, lambda i, j: gen_diagonal(2, 2, 1))
basket = MatrixSet.uniform(2, lambda i, j: gen_block(2))
print("\nTwill matrix (rows: threads of set 1, '+' = set 1 over):")
print(twill[(0, 1)])
print("Basket matrix:")
print(basket[(0, 1)])
print(f"\nRanks: twill {rank(twill[(0, 1)])}, basket {rank(basket[(0, 1)])}. Shifts and "
      "rotations only permute, transpose or negate a matrix, which never changes its rank, "
      "so the two weaves cannot be equivalent.")
print("equivalent_sets(twill, basket) ->", equivalent_sets(twill, basket))

for name, S, sol in (("twill", twill, first), ("basket", basket, second)):
    motif = build_motif(spec, sol, S)
    print(f"\n{name}: {len(motif.crossings)} crossings in the cell, "
          f"entangled={is_entangled(motif)}")
    print(render_text(motif), end="")
