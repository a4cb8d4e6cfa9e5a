"""
Three sets of threads on the kagome (trihexagonal) tiling.

With three directions, triangles appear between the threads. A triangle whose
three threads go over one another in a cycle is an alternating triangle; it
cannot be removed by sliding one thread across the crossing of the other
two. This demo finds the minimal motif of the alternating kagome weave,
counts its triangles, and compares it with a weave where one set always stays
on top.

Run:  python3 demos/03_kagome.py [output-dir]
"""

import sys
from pathlib import Path

from pqweave import (MatrixSet, RenderOptions, WeaveSpec, a_triangle_count, blocking_crossings,
                     build_motif, gen_diagonal, is_entangled, pairwise_crossing_number,
                     render_motif_svg, solve_min, validate_tiling)
from pqweave.analysis import triangular_faces
from pqweave.matrix import generate

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demo-output")
out.mkdir(exist_ok=True)

kagome = [(1, 0), (0, 1), (1, 1)]
alternating = WeaveSpec.build(kagome, {(0, 1): (1, 1), (0, 2): (1, 1), (1, 2): (1, 1)})
for i, j in alternating.pairs:
    print(f"pair {i + 1},{j + 1}: C = {pairwise_crossing_number(alternating, i, j).c}")

S = MatrixSet.uniform(3, lambda i, j: gen_diagonal(1, 1, 1))
sol = solve_min(alternating, matrices=S)
motif = build_motif(alternating, sol, S)
print(f"\nminimal motif: {sol.describe()}")
print(f"tiling diagnostics: {validate_tiling(motif) or 'none'}")
print(f"{len(motif.crossings)} crossings, {len(triangular_faces(motif))} triangular faces, "
      f"{a_triangle_count(motif)} alternating")
for s in motif.strands:
    left, right = blocking_crossings(motif, s.ref)
    print(f"  strand {s.set_index + 1}.{s.strand_index + 1}: {len(left)} blocking on the left, "
          f"{len(right)} on the right")
print("entangled:", is_entangled(motif))
(out / "kagome.svg").write_bytes(render_motif_svg(motif, RenderOptions(repeat=3)))

top = WeaveSpec.build(kagome, {(0, 1): (1, 0), (0, 2): (1, 0), (1, 2): (1, 1)})
T = MatrixSet.uniform(3, lambda i, j: generate("diagonal", top.seq(i, j)))
motif2 = build_motif(top, solve_min(top, matrices=T), T)
print(f"\nset 1 always on top: {a_triangle_count(motif2)} alternating triangles, "
      f"entangled: {is_entangled(motif2)}")
print(f"\nSVG written to {out / 'kagome.svg'}")
