"""
Crossing matrices: generators, validity, complements and equivalence.

A crossing matrix records, for one pair of sets, which thread is on top at
each crossing of the motif. Every row and every column must read the crossing
sequence cyclically. This demo builds matrices with the three generators,
checks them, and shows how equivalence treats shifts and rotations.

Run:  python3 demos/02_crossing_matrices.py
"""

from pqweave import (CrossingSequence, GcdViolation, MatrixSet, MatrixTransform,
                     apply_transform, complement_matrix, equivalent_sets, gen_diagonal,
                     gen_satin, validate_matrix)

print("Satin (+4,-1): the single 'under' moves a steps per column. a must be "
      "coprime to the module 5, otherwise two unders share a row.")
for a in (1, 2, 3, 4):
    M = gen_satin(4, a)
    print(f"\na={a}, valid={validate_matrix(M, CrossingSequence(4, 1))}")
    print(M)
try:
    gen_satin(5, 3)
except GcdViolation as e:
    print(f"\nsatin (+5,-1) with a=3 is rejected: {e}")

M = gen_diagonal(3, 1, 1)
C = complement_matrix(M)
print("\nThe same crossings read from the other set: negate and transpose.")
print(M)
print("->")
print(C)
print("valid for (+1,-3):", validate_matrix(C, CrossingSequence(1, 3)))

S = MatrixSet.uniform(2, lambda i, j: gen_diagonal(3, 2, 1))
moved = apply_transform(S, MatrixTransform(row_shift=2, col_shift=1))
print("\nShifting all rows and columns only moves the unit cell, so the weave is the same:")
print("equivalent_sets ->", equivalent_sets(S, moved))
mirror = MatrixSet.uniform(2, lambda i, j: gen_diagonal(3, 2, -1))
print("The mirror-image twill is a different weave (reflections are not allowed):")
print("equivalent_sets ->", equivalent_sets(S, mirror))
