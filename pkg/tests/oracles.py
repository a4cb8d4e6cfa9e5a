"""
Independent reference implementations used to check the library.

Each oracle takes a different road from the code it checks:

* the pairwise crossing number is simulated by walking over/under words
  vertex by vertex instead of evaluating an lcm formula;
* the minimal total crossing number is found by brute force over a numpy
  table of all determinants in the slope box, not by solving Diophantine
  equations;
* matrix transforms are rebuilt from ``np.roll`` and ``np.rot90``;
* crossings and triangular faces are counted from lifted lines in the
  plane, without the torus graph.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import floor, gcd

import numpy as np

from pqweave.core import WeaveSpec


# -- pairwise crossing number ------------------------------------------------------

def _vertex_blocks_align(word_len: int, per_vertex: int, vertices: int) -> bool:
    """Read a cyclic word of length ``word_len`` in ``vertices`` consecutive
    blocks of ``per_vertex`` letters; do all blocks start at phase 0?"""
    phase = 0
    for _ in range(vertices):
        if phase != 0:
            return False
        for _ in range(per_vertex):
            phase = (phase + 1) % word_len
    return phase == 0


@lru_cache(maxsize=None)
def _window_for_modules(modules: tuple[int, ...]) -> int:
    L = 1
    while True:
        # the number of base vertices on the thread does not change the phase
        # argument; three consecutive vertices are walked
        if all(_vertex_blocks_align(m, L, 3) for m in modules):
            return L
        L += 1


def _thread_window(spec: WeaveSpec, i: int) -> int:
    """Smallest number of crossings every base vertex of set i must expand
    into, so that each vertex reads whole periods of all of i's sequences."""
    mods = tuple(sorted(spec.seq(i, k).module for k in range(spec.n_sets) if k != i))
    return _window_for_modules(mods)


def simulate_pairwise(spec: WeaveSpec, i: int, j: int) -> int:
    si, sj = spec.base_slopes[i], spec.base_slopes[j]
    v = abs(si.a * sj.b - sj.a * si.b)
    if v == 0:
        return 0
    zi = v * _thread_window(spec, i)
    zj = v * _thread_window(spec, j)
    n = 1
    while n % zi or n % zj:
        n += 1
    return n


# -- minimal total crossing number ----------------------------------------------

@lru_cache(maxsize=8)
def slope_box(h: int) -> np.ndarray:
    """All normalized primitive slopes (a, b) with max(|a|, |b|) <= h."""
    out = [(1, 0)]
    for b in range(1, h + 1):
        for a in range(-h, h + 1):
            if gcd(a, b) == 1:
                out.append((a, b))
    return np.array(out, dtype=np.int64)


@lru_cache(maxsize=8)
def det_table(h: int) -> np.ndarray:
    S = slope_box(h)
    return np.abs(np.outer(S[:, 0], S[:, 1]) - np.outer(S[:, 1], S[:, 0]))


def _realizable(h: int, n: int, dets: dict, memo: dict) -> bool:
    key = (h, n, tuple(sorted(dets.items())))
    if key in memo:
        return memo[key]
    D = det_table(h)
    if n == 2:
        ok = bool((D == dets[(0, 1)]).any())
    else:
        A = (D == dets[(0, 1)]).astype(np.float32)
        B = (D == dets[(0, 2)])
        Cm = (D == dets[(1, 2)]).astype(np.float32)
        ok = bool(((A @ Cm) > 0)[B].any())
    memo[key] = ok
    return ok


def brute_min_total(spec: WeaveSpec, max_slope: int, max_copies: int, max_multiplier: int,
                    memo: dict | None = None):
    """Smallest total crossing number for N = 2 or 3, or None.

    Constraints per pair: copies_i * copies_j * |det| = k * C with k = 1 or
    even, every thread carries whole C-periods, and pairs with C = 0 share a
    slope (|det| = 0).
    """
    n = spec.n_sets
    assert n in (2, 3)
    memo = {} if memo is None else memo
    pairs = list(combinations(range(n), 2))
    C = {p: simulate_pairwise(spec, *p) for p in pairs}
    ks = [1] + list(range(2, max_multiplier + 1, 2))
    best = None
    for copies in product(range(1, max_copies + 1), repeat=n):
        options = []
        for i, j in pairs:
            if C[(i, j)] == 0:
                options.append([(0, 0)])
                continue
            opts = []
            for k in ks:
                P = k * C[(i, j)]
                cc = copies[i] * copies[j]
                if P % cc:
                    continue
                d = P // cc
                if (copies[j] * d) % C[(i, j)] or (copies[i] * d) % C[(i, j)]:
                    continue
                opts.append((P, d))
            options.append(opts)
        for choice in sorted(product(*options), key=lambda ch: sum(P for P, _ in ch)):
            total = sum(P for P, _ in choice)
            if best is not None and total >= best:
                break
            dets = {p: d for p, (_, d) in zip(pairs, choice)}
            if _realizable(max_slope, n, dets, memo):
                best = total
                break
    return best


# -- matrix transforms -----------------------------------------------------------

def np_transforms(E: np.ndarray):
    """All (shift, rotation) images of one matrix, rotation applied after
    the shift, keyed by (r, c, rotation index)."""
    m = E.shape[0]
    for r in range(m):
        for c in range(m):
            shifted = np.roll(E, (-r, -c), axis=(0, 1))
            yield (r, c, 0), shifted
            yield (r, c, 1), np.rot90(shifted, 2)
            yield (r, c, 2), -np.rot90(shifted, -1)
            yield (r, c, 3), -np.rot90(shifted, 1)


def oracle_equivalent(S1, S2) -> bool:
    """Is some single uniform transform mapping every matrix of S1 onto S2?"""
    keys = sorted(S1.matrices)
    if keys != sorted(S2.matrices):
        return False
    images = {}
    for key in keys:
        E = np.array(S1[key].entries)
        for t, img in np_transforms(E):
            images.setdefault(t, {})[key] = img
    targets = {k: np.array(S2[k].entries) for k in keys}
    mods = {S1[k].m for k in keys}
    for t, imgs in images.items():
        if len(mods) > 1 and t[:2] != (0, 0):
            continue
        if len(imgs) == len(keys) and all(imgs[k].shape == targets[k].shape
                                          and (imgs[k] == targets[k]).all() for k in keys):
            return True
    return False


# -- lifted line geometry --------------------------------------------------------

def _lines(motif, lo: int = -1, hi: int = 2):
    """(set, strand ref, a, b, level) for lifted lines meeting [lo, hi]^2."""
    out = []
    for s in motif.strands:
        a, b = s.slope.a, s.slope.b
        corners = [a * y - b * x for x in (lo, hi) for y in (lo, hi)]
        for n in range(floor(min(corners) - s.offset) - 1, floor(max(corners) - s.offset) + 2):
            out.append((s.set_index, s.ref, a, b, s.offset + n))
    return out


def _meet(l1, l2):
    _, _, a1, b1, c1 = l1
    _, _, a2, b2, c2 = l2
    D = a1 * b2 - a2 * b1
    if D == 0:
        return None
    # -b x + a y = c
    x = Fraction(c1 * a2 - a1 * c2, D)
    y = Fraction(b2 * c1 - b1 * c2, D)
    return (x, y)


def brute_crossings(motif) -> dict[tuple[int, int], int]:
    """Crossings inside [0,1)^2 per set pair, from pairwise line meets."""
    lines = _lines(motif)
    count: dict[tuple[int, int], set] = {}
    for l1, l2 in combinations(lines, 2):
        if l1[0] == l2[0]:
            continue
        p = _meet(l1, l2)
        if p is None or not (0 <= p[0] < 1 and 0 <= p[1] < 1):
            continue
        key = tuple(sorted((l1[0], l2[0])))
        count.setdefault(key, set()).add(p)
    return {k: len(v) for k, v in count.items()}


def brute_triangles(motif):
    """Triangular faces with their lowest corner in [0,1)^2.

    Returns a list of (corner points, strand refs). A triangle of three
    pairwise crossing lines is a face exactly when no other line separates
    its corners.
    """
    lines = _lines(motif, -2, 3)
    faces = []
    for l1, l2, l3 in combinations(lines, 3):
        if len({l1[0], l2[0], l3[0]}) != 3:
            continue
        p12, p13, p23 = _meet(l1, l2), _meet(l1, l3), _meet(l2, l3)
        if None in (p12, p13, p23):
            continue
        corners = [p12, p13, p23]
        low = min(corners, key=lambda p: (p[1], p[0]))
        if not (0 <= low[0] < 1 and 0 <= low[1] < 1):
            continue
        empty = True
        for l in lines:
            if l in (l1, l2, l3):
                continue
            _, _, a, b, c = l
            signs = {(a * y - b * x > c) - (a * y - b * x < c) for x, y in corners}
            if 1 in signs and -1 in signs:
                empty = False
                break
        if empty:
            faces.append((tuple(corners), (l1[1], l2[1], l3[1])))
    return faces


def brute_a_triangle_count(motif) -> int:
    """Triangular faces on three sets whose over/under pattern is cyclic."""
    by_pos = {c.position: c for c in motif.crossings}
    count = 0
    for corners, refs in brute_triangles(motif):
        def over(p, r):
            return by_pos[(p[0] - floor(p[0]), p[1] - floor(p[1]))].upper == r
        # corners: l1^l2, l1^l3, l2^l3
        p12, p13, p23 = corners
        r1, r2, r3 = refs
        if (over(p12, r1) != over(p13, r1) and over(p12, r2) != over(p23, r2)
                and over(p13, r3) != over(p23, r3)):
            count += 1
    return count
