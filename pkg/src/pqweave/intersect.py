"""Geometric intersection numbers and pairwise crossing numbers."""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm

from .core import Slope, WeaveSpec, det


@dataclass(frozen=True)
class PairwiseCrossing:
    i: int
    j: int
    v: int
    zeta_i: int
    zeta_j: int
    c: int


def geometric_intersection(s1: Slope, s2: Slope) -> int:
    return abs(det(s1, s2))


def _zeta(spec: WeaveSpec, i: int, v: int) -> int:
    # k == i has no sequence; non-crossing modules are 1 and drop out.
    mods = [spec.seq(i, k).module for k in range(spec.n_sets) if k != i]
    return v * lcm(*mods)


def pairwise_crossing_number(spec: WeaveSpec, i: int, j: int) -> PairwiseCrossing:
    """Minimal number of (i, j) crossings each thread must carry.

    Each base-slope intersection must show a full period of every sequence
    the thread takes part in, so ``zeta_i = v * lcm(modules of set i)``; both
    sets must agree, hence the outer lcm.
    """
    spec.check_index(i)
    spec.check_index(j)
    if i == j:
        raise ValueError("pairwise crossing number needs two distinct sets")
    v = geometric_intersection(spec.base_slopes[i], spec.base_slopes[j])
    zi, zj = _zeta(spec, i, v), _zeta(spec, j, v)
    c = lcm(zi, zj) if v > 0 else 0
    return PairwiseCrossing(i, j, v, zi, zj, c)


def pairwise_crossing_numbers(spec: WeaveSpec) -> dict[tuple[int, int], PairwiseCrossing]:
    return {(i, j): pairwise_crossing_number(spec, i, j) for i, j in spec.pairs}
