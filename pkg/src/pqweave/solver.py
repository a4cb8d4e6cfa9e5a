"""
Bounded exact search for minimal weaving motifs.

For every crossing pair (i, j) with pairwise crossing number C, a candidate
motif chooses a slope per set, a number of parallel copies per set and a
multiplier k (1 or even) such that

    copies_i * copies_j * |det(slope_i, slope_j)| == k * C

and every single thread still carries a whole number of C-periods
(``copies_j * |det| % C == 0`` and symmetrically). Non-crossing pairs share
one slope. Candidates are visited in ascending total crossing number; within
one total, one representative is kept per multiplier vector, the one with
the smallest slopes.
"""

from __future__ import annotations

import heapq
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterator, Mapping

from .core import Slope, WeaveError, WeaveSpec, det, normalize_slope, require_valid
from .intersect import pairwise_crossing_numbers


class NoSolutionWithinBounds(WeaveError):
    def __init__(self, bounds: SearchBounds, detail: str = ""):
        self.bounds = bounds
        msg = (f"no solution with max_slope={bounds.max_slope} "
               f"max_copies={bounds.max_copies} max_multiplier={bounds.max_multiplier}")
        super().__init__(msg + (f" ({detail})" if detail else ""))


@dataclass(frozen=True)
class SearchBounds:
    max_slope: int
    max_copies: int
    max_multiplier: int

    def __post_init__(self):
        for name in ("max_slope", "max_copies", "max_multiplier"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")


def default_bounds(spec: WeaveSpec) -> SearchBounds:
    cmax = max([pc.c for pc in pairwise_crossing_numbers(spec).values()] + [1])
    return SearchBounds(max_slope=2 * cmax, max_copies=cmax, max_multiplier=2 * cmax)


@dataclass(frozen=True)
class SolveResult:
    slopes: tuple[Slope, ...]
    copies: tuple[int, ...]
    multipliers: Mapping[tuple[int, int], int]
    totals: Mapping[tuple[int, int], int]
    total: int
    crossing_numbers: Mapping[tuple[int, int], int] = field(default_factory=dict)

    @property
    def key(self):
        return _solution_key(self.slopes, self.copies)

    def describe(self) -> str:
        slopes = "/".join(str(s) for s in self.slopes)
        copies = ",".join(str(c) for c in self.copies)
        ks = " ".join(f"k{i + 1}{j + 1}={k}" for (i, j), k in self.multipliers.items())
        return f"total={self.total}, slopes={slopes}, copies=({copies}), {ks}".rstrip(", ")

    def same_as(self, other: SolveResult) -> bool:
        return (self.slopes == other.slopes and self.copies == other.copies
                and dict(self.multipliers) == dict(other.multipliers))


def resolve_workers(workers: int | None = None) -> int:
    """Worker count: explicit value, else WEAVE_THREADS (0 = all cores), else 1."""
    if workers is None:
        env = os.environ.get("WEAVE_THREADS", "").strip()
        workers = int(env) if env else 1
    if workers <= 0:
        workers = os.cpu_count() or 1
    return workers


# -- slope enumeration -------------------------------------------------------

def angle_key(s: Slope):
    """Sorts slopes by direction angle in [0, pi)."""
    if s.b == 0:
        return (0, Fraction(0))
    return (1, Fraction(-s.a, s.b))


def _slope_tuple_key(slopes):
    return (max(s.height for s in slopes),
            sum(s.weight for s in slopes),
            tuple(angle_key(s) for s in slopes))


def _solution_key(slopes, copies):
    """Tie-break among equal totals: largest height, weight sum, copies sum,
    then slopes by direction angle."""
    h, w, angles = _slope_tuple_key(slopes)
    return (h, w, sum(copies), angles, tuple(copies))


@lru_cache(maxsize=64)
def slopes_in_box(h: int) -> tuple[Slope, ...]:
    out = [Slope(1, 0)]
    for b in range(1, h + 1):
        for a in range(-h, h + 1):
            if gcd(a, b) == 1:
                out.append(Slope(a, b))
    return tuple(sorted(out, key=lambda s: (s.height, s.weight, angle_key(s))))


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


@lru_cache(maxsize=65536)
def _line_solutions(s: Slope, d: int, h: int) -> tuple[Slope, ...]:
    """All slopes x in the box with |det(s, x)| == d (d >= 1)."""
    # det(s, x) = a*xb - b*xa; with a*u - b*w = 1 take x0 = (w, u).
    g, u, mw = _ext_gcd(s.a, -s.b)
    assert g == 1
    x0 = (mw, u)
    out = set()
    for sign in (1, -1):
        px, py = x0[0] * sign * d, x0[1] * sign * d
        # x = p + t*(a, b); keep |x| <= h componentwise
        lo, hi = -10**9, 10**9
        for p, step in ((px, s.a), (py, s.b)):
            if step == 0:
                if abs(p) > h:
                    lo, hi = 1, 0
                continue
            t1, t2 = (-h - p) / step, (h - p) / step
            lo, hi = max(lo, min(t1, t2)), min(hi, max(t1, t2))
        if lo > hi:
            continue
        for t in range(int(lo) - 1, int(hi) + 2):
            x, y = px + t * s.a, py + t * s.b
            if max(abs(x), abs(y)) <= h and (x, y) != (0, 0) and gcd(x, y) == 1:
                out.add(normalize_slope(x, y))
    return tuple(sorted(out, key=lambda sl: (sl.height, sl.weight, angle_key(sl))))


def _solve_two(s1: Slope, e1: int, s2: Slope, e2: int):
    """x with det(s1, x) == e1 and det(s2, x) == e2, or None."""
    D = det(s1, s2)
    xa_num = e1 * s2.a - s1.a * e2
    xb_num = e1 * s2.b - s1.b * e2
    if xa_num % D or xb_num % D:
        return None
    xa, xb = xa_num // D, xb_num // D
    if (xa, xb) == (0, 0) or gcd(xa, xb) != 1:
        return None
    return normalize_slope(xa, xb)


@lru_cache(maxsize=4096)
def _triple_realizable(d12: int, d13: int, d23: int) -> bool:
    """Do three primitive classes with these pairwise |det| exist (unbounded)?"""
    # s1 = (1, 0), s2 = (x, d12) with x mod d12, s3 = (y, e*d13).
    for x in range(d12):
        if gcd(x, d12) != 1:
            continue
        for e in (1, -1):
            for f in (1, -1):
                num = x * e * d13 - f * d23
                if num % d12 == 0 and gcd(num // d12, d13) == 1:
                    return True
    return False


def _prefilter(n: int, d: dict[tuple[int, int], int]) -> bool:
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                a, b, c = d[(i, j)], d[(i, k)], d[(j, k)]
                zeros = (a == 0) + (b == 0) + (c == 0)
                if zeros == 0:
                    if not _triple_realizable(a, b, c):
                        return False
                elif zeros == 1:
                    # two of the three share a slope: the other two dets agree
                    if (a == 0 and b != c) or (b == 0 and a != c) or (c == 0 and a != b):
                        return False
                elif zeros == 2:
                    return False
    return True


class _Realizer:
    """Finds the smallest slope tuple with prescribed pairwise |det|."""

    def __init__(self, n: int, d: dict[tuple[int, int], int], accept=None, workers: int = 1):
        self.n = n
        self.d = d
        self.accept = accept
        self.workers = workers

    def _dd(self, i, j):
        return self.d[(i, j) if i < j else (j, i)]

    def _extend(self, chosen: list[Slope], h: int, out: list):
        i = len(chosen)
        if i == self.n:
            out.append(tuple(chosen))
            return
        for cand in self._candidates(chosen, h):
            if all(abs(det(chosen[l], cand)) == self._dd(l, i) for l in range(i)) and (
                    self.accept is None
                    or all(self.accept(l, i, chosen[l], cand) for l in range(i))):
                chosen.append(cand)
                self._extend(chosen, h, out)
                chosen.pop()

    def _candidates(self, chosen: list[Slope], h: int):
        i = len(chosen)
        for l in range(i):
            if self._dd(l, i) == 0:
                return [chosen[l]]
        first = chosen[0]
        other = next((l for l in range(1, i) if det(first, chosen[l]) != 0), None)
        if other is None:
            return _line_solutions(first, self._dd(0, i), h)
        out = set()
        for e1 in (1, -1):
            for e2 in (1, -1):
                x = _solve_two(first, e1 * self._dd(0, i), chosen[other], e2 * self._dd(other, i))
                if x is not None and x.height <= h:
                    out.add(x)
        return sorted(out, key=lambda s: (s.height, s.weight, angle_key(s)))

    def _search_chunk(self, h: int, firsts) -> list:
        found: list = []
        for s in firsts:
            self._extend([s], h, found)
        return found

    def search(self, h: int):
        firsts = slopes_in_box(h)
        if self.workers > 1 and len(firsts) > 64:
            size = -(-len(firsts) // self.workers)
            chunks = [firsts[k:k + size] for k in range(0, len(firsts), size)]
            with ThreadPoolExecutor(self.workers) as ex:
                parts = list(ex.map(lambda c: self._search_chunk(h, c), chunks))
            found = [t for part in parts for t in part]
        else:
            found = self._search_chunk(h, firsts)
        if not found:
            return None
        return min(found, key=_slope_tuple_key)

    def best(self, max_h: int):
        # Boxes double in size. The key orders by largest height first, so the
        # minimum inside the first box holding any solution is the global one.
        h = 1
        while True:
            h = min(h, max_h)
            r = self.search(h)
            if r is not None or h == max_h:
                return r
            h *= 2


# -- arithmetic layer --------------------------------------------------------

def _allowed_multipliers(max_multiplier: int) -> list[int]:
    return [1] + list(range(2, max_multiplier + 1, 2))


def _multiplier_vectors(cvals: list[int], max_multiplier: int) -> Iterator[tuple[int, list[tuple[int, ...]]]]:
    """Yields (total, [k-vectors with that total]) in ascending total."""
    allowed = _allowed_multipliers(max_multiplier)
    n = len(cvals)
    start = (0,) * n
    heap = [(sum(cvals), start)]
    seen = {start}
    while heap:
        total, idx = heapq.heappop(heap)
        group = [idx]
        while heap and heap[0][0] == total:
            group.append(heapq.heappop(heap)[1])
        for g in group:
            for p in range(n):
                if g[p] + 1 < len(allowed):
                    nxt = g[:p] + (g[p] + 1,) + g[p + 1:]
                    if nxt not in seen:
                        seen.add(nxt)
                        t = sum(allowed[q] * c for q, c in zip(nxt, cvals))
                        heapq.heappush(heap, (t, nxt))
        yield total, sorted(tuple(allowed[q] for q in g) for g in group)


def _copies_vectors(n: int, pairs, P: dict, C: dict, max_copies: int):
    """Copies vectors with integral dets that pass the per-thread check."""
    out = []
    copies = [0] * n

    def rec(i):
        if i == n:
            out.append(tuple(copies))
            return
        for c in range(1, max_copies + 1):
            ok = True
            for j in range(i):
                key = (j, i)
                if C[key] == 0:
                    continue
                prod = c * copies[j]
                if P[key] % prod:
                    ok = False
                    break
                dd = P[key] // prod
                if (copies[j] * dd) % C[key] or (c * dd) % C[key]:
                    ok = False
                    break
            if ok:
                copies[i] = c
                rec(i + 1)
        copies[i] = 0

    rec(0)
    return out


# -- public API --------------------------------------------------------------

def _crossing_numbers(spec: WeaveSpec) -> dict[tuple[int, int], int]:
    return {k: pc.c for k, pc in pairwise_crossing_numbers(spec).items()}


def _compat_filter(spec: WeaveSpec, copies, matrices):
    if matrices is None:
        return None
    from .matrix import lattice_invariant

    @lru_cache(maxsize=None)
    def accept(i: int, j: int, si: Slope, sj: Slope) -> bool:
        """Can matrix (i, j) repeat on slopes si, sj with these copies?"""
        if det(si, sj) == 0:
            return True
        gens = ((-copies[i] * si.b, -copies[j] * sj.b), (copies[i] * si.a, copies[j] * sj.a))
        return lattice_invariant(matrices[(i, j)], gens)

    return accept


def iter_solutions(spec: WeaveSpec, bounds: SearchBounds | None = None, matrices=None,
                   workers: int | None = None) -> Iterator[SolveResult]:
    """All solutions in deterministic order, one per multiplier vector.

    With ``matrices`` (a MatrixSet), only motifs on which those crossing
    matrices can be laid out periodically are kept.
    """
    require_valid(spec)
    if bounds is None:
        bounds = default_bounds(spec)
    workers = resolve_workers(workers)
    if matrices is not None:
        from .matrix import check_matrix_set
        check_matrix_set(matrices, spec)
    C = _crossing_numbers(spec)
    pairs = spec.pairs
    crossing = [p for p in pairs if C[p] > 0]
    n = spec.n_sets
    cache: dict = {}

    for total, kvecs in _multiplier_vectors([C[p] for p in crossing], bounds.max_multiplier):
        results = []
        for kvec in kvecs:
            kmap = dict(zip(crossing, kvec))
            P = {p: kmap.get(p, 1) * C[p] for p in pairs}
            best = None
            for copies in _copies_vectors(n, pairs, P, C, bounds.max_copies):
                d = {p: (P[p] // (copies[p[0]] * copies[p[1]]) if C[p] else 0) for p in pairs}
                if not _prefilter(n, d):
                    continue
                ck = (tuple(sorted(d.items())), copies if matrices is not None else None)
                if ck not in cache:
                    accept = _compat_filter(spec, copies, matrices)
                    cache[ck] = _Realizer(n, d, accept, workers).best(bounds.max_slope)
                slopes = cache[ck]
                if slopes is None:
                    continue
                cand = (_solution_key(slopes, copies), slopes, copies)
                if best is None or cand[0] < best[0]:
                    best = cand
            if best is not None:
                _, slopes, copies = best
                mult = {p: kmap.get(p, 1) for p in pairs}
                totals = {p: mult[p] * C[p] for p in pairs}
                results.append(SolveResult(slopes, copies, mult, totals,
                                           sum(totals.values()), dict(C)))
        results.sort(key=lambda r: (r.key, tuple(r.multipliers.values())))
        yield from results


def solve_min(spec: WeaveSpec, bounds: SearchBounds | None = None, matrices=None,
              workers: int | None = None) -> SolveResult:
    bounds = bounds or default_bounds(spec)
    for r in iter_solutions(spec, bounds, matrices, workers):
        return r
    raise NoSolutionWithinBounds(bounds)


def solve_next(spec: WeaveSpec, prev: SolveResult, bounds: SearchBounds | None = None,
               matrices=None, workers: int | None = None) -> SolveResult:
    """The solution that follows ``prev`` in the enumeration order."""
    bounds = bounds or default_bounds(spec)
    found = False
    for r in iter_solutions(spec, bounds, matrices, workers):
        if found:
            return r
        if r.same_as(prev):
            found = True
        elif r.total > prev.total:
            # prev came from different bounds; continue from its total
            return r
    raise NoSolutionWithinBounds(bounds, "no further solution")


def enumerate_solutions(spec: WeaveSpec, bounds: SearchBounds | None = None, limit: int = 1,
                        matrices=None, workers: int | None = None) -> list[SolveResult]:
    if limit < 1:
        raise ValueError("limit must be >= 1")
    bounds = bounds or default_bounds(spec)
    out = []
    for r in iter_solutions(spec, bounds, matrices, workers):
        out.append(r)
        if len(out) == limit:
            break
    if not out:
        raise NoSolutionWithinBounds(bounds)
    return out


def solution_violations(spec: WeaveSpec, sol: SolveResult) -> list[str]:
    """Every SolveResult invariant that ``sol`` breaks (empty when sound)."""
    bad = []
    C = _crossing_numbers(spec)
    for i, j in spec.pairs:
        d = abs(det(sol.slopes[i], sol.slopes[j]))
        k = sol.multipliers[(i, j)]
        tag = f"pair {i + 1},{j + 1}"
        if C[(i, j)] == 0:
            if d != 0:
                bad.append(f"{tag}: non-crossing sets need equal slopes")
            if k != 1:
                bad.append(f"{tag}: non-crossing multiplier must be 1")
        else:
            if d == 0:
                bad.append(f"{tag}: crossing sets share a slope")
            if sol.copies[i] * sol.copies[j] * d != k * C[(i, j)]:
                bad.append(f"{tag}: copies*copies*|det| != k*C")
            if not (k == 1 or k % 2 == 0) or k < 1:
                bad.append(f"{tag}: multiplier {k} is neither 1 nor even")
            if (sol.copies[j] * d) % C[(i, j)] or (sol.copies[i] * d) % C[(i, j)]:
                bad.append(f"{tag}: a thread does not carry whole periods")
        if sol.totals[(i, j)] != k * C[(i, j)]:
            bad.append(f"{tag}: pair total is not k*C")
    if sol.total != sum(sol.totals.values()):
        bad.append("total is not the sum of pair totals")
    return bad
