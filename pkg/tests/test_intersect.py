import pytest
from hypothesis import given, strategies as st

from pqweave.core import CrossingSequence, WeaveSpec, normalize_slope
from pqweave.intersect import geometric_intersection, pairwise_crossing_number

from corpus import KAGOME, SQUARE
from oracles import simulate_pairwise


def test_geometric_intersection():
    assert geometric_intersection(normalize_slope(1, 0), normalize_slope(0, 1)) == 1
    assert geometric_intersection(normalize_slope(2, 1), normalize_slope(-2, 1)) == 4
    assert geometric_intersection(normalize_slope(1, 1), normalize_slope(1, 1)) == 0


def test_square_pairwise(square_spec):
    pc = pairwise_crossing_number(square_spec, 0, 1)
    assert (pc.v, pc.zeta_i, pc.zeta_j, pc.c) == (1, 4, 4, 4)


def test_kagome_mixed_pairwise():
    spec = WeaveSpec.build(KAGOME, {(0, 1): (2, 2), (0, 2): (1, 2), (1, 2): (3, 1)})
    # set 1 sees modules 4 and 3, set 2 sees 4 and 4, set 3 sees 3 and 4
    assert pairwise_crossing_number(spec, 0, 1).c == 12
    assert pairwise_crossing_number(spec, 0, 2).c == 12
    assert pairwise_crossing_number(spec, 1, 2).c == 12


def test_parallel_pair_is_zero():
    spec = WeaveSpec.build([(1, 0), (1, 0), (0, 1)], {(0, 1): (1, 0), (0, 2): (1, 1), (1, 2): (2, 1)})
    assert pairwise_crossing_number(spec, 0, 1).c == 0
    assert pairwise_crossing_number(spec, 0, 2).c == 6


def test_same_set_rejected(square_spec):
    with pytest.raises(ValueError):
        pairwise_crossing_number(square_spec, 1, 1)


seqs = st.builds(lambda m, p: CrossingSequence(p % (m - 1) + 1, m - 1 - p % (m - 1)),
                 st.integers(2, 6), st.integers(0, 5))


@given(seqs, seqs, seqs)
def test_kagome_formula_matches_simulation(s01, s02, s12):
    spec = WeaveSpec.build(KAGOME, {(0, 1): s01, (0, 2): s02, (1, 2): s12})
    for i, j in spec.pairs:
        pc = pairwise_crossing_number(spec, i, j)
        assert pc.c == simulate_pairwise(spec, i, j)
        assert pc.c % pc.zeta_i == 0 and pc.c % pc.zeta_j == 0


@given(seqs)
def test_symmetric_in_pair_order(s):
    spec = WeaveSpec.build(SQUARE, {(0, 1): s})
    assert pairwise_crossing_number(spec, 0, 1).c == pairwise_crossing_number(spec, 1, 0).c
