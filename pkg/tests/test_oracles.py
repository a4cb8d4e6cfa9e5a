"""The reference implementations are checked on hand-worked cases before
they are trusted to judge the library."""

from math import lcm

import numpy as np

from pqweave.core import WeaveSpec
from pqweave.matrix import MatrixSet, gen_block

from corpus import KAGOME, SQUARE, formula_corpus, roundtrip_corpus, solver_corpus
from oracles import (brute_crossings, brute_min_total, np_transforms, oracle_equivalent,
                     simulate_pairwise, slope_box)


def test_simulator_by_hand():
    # (+2,-2) on a square: each thread reads 4 crossings per base vertex
    assert simulate_pairwise(WeaveSpec.build(SQUARE, {(0, 1): (2, 2)}), 0, 1) == 4
    # kagome with modules 2, 3, 4: set 1 needs lcm(2,3), set 2 lcm(2,4)
    spec = WeaveSpec.build(KAGOME, {(0, 1): (1, 1), (0, 2): (1, 2), (1, 2): (1, 3)})
    assert simulate_pairwise(spec, 0, 1) == lcm(6, 4)
    # det 3 base: three intersections per base loop
    spec = WeaveSpec.build([(1, 0), (2, 3)], {(0, 1): (1, 1)})
    assert simulate_pairwise(spec, 0, 1) == 6


def test_slope_box_size():
    # primitive vectors with b > 0 and |a|, b <= 1, plus (1, 0)
    assert sorted(map(tuple, slope_box(1))) == [(-1, 1), (0, 1), (1, 0), (1, 1)]


def test_brute_force_square_values():
    spec = WeaveSpec.build(SQUARE, {(0, 1): (2, 2)})
    assert brute_min_total(spec, 8, 4, 8) == 4
    plain = WeaveSpec.build(SQUARE, {(0, 1): (1, 1)})
    assert brute_min_total(plain, 4, 2, 4) == 2
    assert brute_min_total(spec, 1, 1, 1) is None


def test_np_transforms_count():
    E = np.array(gen_block(2).entries)
    images = list(np_transforms(E))
    assert len(images) == 4 * 4 * 4
    assert all(img.shape == (4, 4) for _, img in images)


def test_oracle_equivalent_basics():
    S = MatrixSet(2, {(0, 1): gen_block(2)})
    assert oracle_equivalent(S, S)


def test_line_oracle_on_twill(twill_motif):
    assert brute_crossings(twill_motif) == {(0, 1): 4}


def test_corpus_sizes():
    assert sum(1 for _ in formula_corpus()) >= 50000
    assert sum(1 for _ in solver_corpus()) > 1000
    assert sum(1 for _ in roundtrip_corpus()) > 500
