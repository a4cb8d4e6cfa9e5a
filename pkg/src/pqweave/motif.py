"""
Weaving motifs on the unit torus, in exact rational arithmetic.

A strand of slope (a, b) and offset o is the closed curve
``a*y - b*x = o (mod 1)`` on the flat torus [0,1)^2. The copies of one set
are spread evenly, so in the universal cover the lines of set i are the
level sets of ``g_i = c_i * (a_i*y - b_i*x - o_i0)`` at the integers. That
integer is the strand's row (or column) index in every crossing matrix the
set takes part in, read modulo the module. Translations of the torus act on
these indices by a lattice, and a matrix can be laid out on a motif exactly
when it is invariant under that lattice.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import floor
from typing import Iterable

from .core import Diagnostic, Slope, WeaveError, WeaveSpec, det, normalize_slope
from .matrix import (CrossingMatrix, MatrixSet, ModuleMismatch, check_matrix_set,
                     lattice_invariant, validate_matrix)
from .solver import SolveResult

Point = tuple[Fraction, Fraction]
StrandRef = tuple[int, int]


class GeneralPositionFailure(WeaveError):
    pass


class IncompatibleMatrix(ModuleMismatch):
    """The matrix cannot repeat periodically on the chosen torus cell."""


class NonPeriodicPattern(WeaveError):
    pass


class MotifFormatError(WeaveError, ValueError):
    pass


@dataclass(frozen=True)
class Strand:
    set_index: int
    strand_index: int
    slope: Slope
    offset: Fraction

    @property
    def ref(self) -> StrandRef:
        return (self.set_index, self.strand_index)


@dataclass(frozen=True)
class Crossing:
    position: Point
    upper: StrandRef
    lower: StrandRef

    def strands(self) -> tuple[StrandRef, StrandRef]:
        return (self.upper, self.lower)

    def sign_for(self, set_index: int) -> int:
        """+1 if the strand of ``set_index`` is over at this crossing."""
        if self.upper[0] == set_index:
            return 1
        if self.lower[0] == set_index:
            return -1
        raise KeyError(set_index)

    def pair(self) -> tuple[int, int]:
        i, j = self.upper[0], self.lower[0]
        return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Motif:
    strands: tuple[Strand, ...]
    crossings: tuple[Crossing, ...]
    spec: WeaveSpec | None = field(default=None, compare=False)

    @property
    def n_sets(self) -> int:
        if self.spec is not None:
            return self.spec.n_sets
        return max(s.set_index for s in self.strands) + 1

    def strand(self, ref: StrandRef) -> Strand:
        for s in self.strands:
            if s.ref == ref:
                return s
        raise KeyError(ref)

    def set_strands(self, i: int) -> list[Strand]:
        return sorted((s for s in self.strands if s.set_index == i), key=lambda s: s.strand_index)

    def copies(self, i: int) -> int:
        return sum(1 for s in self.strands if s.set_index == i)

    def pair_crossings(self, i: int, j: int) -> list[Crossing]:
        key = (min(i, j), max(i, j))
        return [c for c in self.crossings if c.pair() == key]


# -- exact geometry ------------------------------------------------------------

def frac1(x: Fraction) -> Fraction:
    return x - floor(x)


def level(slope: Slope, p: Point) -> Fraction:
    """a*y - b*x, the quantity constant along lines of this slope."""
    return slope.a * p[1] - slope.b * p[0]


def intersections(s: Strand, t: Strand) -> list[Point]:
    """Torus points where two strands meet (|det| of them when not parallel).

    Walking once along s from its base point, the level of t changes by
    det(t, s), so s meets a line of t at the |det| parameters where that
    level passes through o_t + k.
    """
    D = det(t.slope, s.slope)
    if D == 0:
        return []
    base = strand_base(s)
    start = level(t.slope, base)
    pts = []
    for k in range(abs(D)):
        tau = frac1((t.offset + k - start) / D)
        pts.append((frac1(base[0] + tau * s.slope.a), frac1(base[1] + tau * s.slope.b)))
    return sorted(pts, key=lambda p: (p[1], p[0]))


def lift_index(strands_of_set: list[Strand], p: Point) -> int:
    """Row/column index of the lifted line of this set through p (p in [0,1)^2)."""
    c = len(strands_of_set)
    base = min(s.offset for s in strands_of_set)
    u = c * (level(strands_of_set[0].slope, p) - base)
    if u.denominator != 1:
        raise GeneralPositionFailure(f"point {p} is not on a strand of this set")
    return int(u)


def cell_lattice(slope_i: Slope, c_i: int, slope_j: Slope, c_j: int):
    """Index shifts (du, dv) produced by the two unit translations of the torus."""
    return ((-c_i * slope_i.b, -c_j * slope_j.b), (c_i * slope_i.a, c_j * slope_j.a))


def lattice_orbit(gens, m: int) -> set[tuple[int, int]]:
    orbit = {(0, 0)}
    frontier = [(0, 0)]
    while frontier:
        du, dv = frontier.pop()
        for gu, gv in gens:
            for sgn in (1, -1):
                nxt = ((du + sgn * gu) % m, (dv + sgn * gv) % m)
                if nxt not in orbit:
                    orbit.add(nxt)
                    frontier.append(nxt)
    return orbit


MAX_OFFSET_ATTEMPTS = 64


def strand_offsets(n_sets: int, copies: Iterable[int], attempt: int = 0) -> list[list[Fraction]]:
    """Offset (r + delta_i) / c_i for strand r of set i.

    delta_i = (i+1)/(7N) first. A delta linear in i fails whenever three
    solution slopes are in arithmetic progression (three strands then always
    meet), so attempt t >= 1 uses the quadratic
    delta_i = (i+1)(i+1+t) / ((N+1)(N+1+t) + t), still inside [0, 1).
    """
    n = n_sets
    if attempt == 0:
        deltas = [Fraction(i + 1, 7 * n) for i in range(n)]
    else:
        t = attempt
        deltas = [Fraction((i + 1) * (i + 1 + t), (n + 1) * (n + 1 + t) + t) for i in range(n)]
    return [[(r + deltas[i]) / c for r in range(c)] for i, c in enumerate(copies)]


def _check_general_position(crossings: list[Crossing]):
    seen = {}
    for c in crossings:
        if c.position in seen:
            other = seen[c.position]
            refs = sorted(set(other.strands()) | set(c.strands()))
            raise GeneralPositionFailure(
                "strands " + " ".join(f"{i + 1}.{r + 1}" for i, r in refs)
                + f" meet at {fmt_point(c.position)}")
        seen[c.position] = c


# -- construction ----------------------------------------------------------------

def arrange(strands: list[Strand], sign, general_position: bool = True) -> list[Crossing]:
    """All crossings between strands of different sets.

    ``sign(strand_i, strand_j, point)`` returns +1 when the first strand is
    over.
    """
    out = []
    for k, s in enumerate(strands):
        for t in strands[k + 1:]:
            if s.set_index == t.set_index:
                continue
            a, b = (s, t) if s.set_index < t.set_index else (t, s)
            for p in intersections(a, b):
                up, lo = (a, b) if sign(a, b, p) > 0 else (b, a)
                out.append(Crossing(p, up.ref, lo.ref))
    out.sort(key=lambda c: (c.position[1], c.position[0], c.upper, c.lower))
    if general_position:
        _check_general_position(out)
    return out


def build_motif(spec: WeaveSpec, sol: SolveResult, matrices: MatrixSet) -> Motif:
    """Lay the crossing matrices out on the torus cell described by ``sol``."""
    check_matrix_set(matrices, spec)
    n = spec.n_sets
    for i, j in spec.pairs:
        if det(sol.slopes[i], sol.slopes[j]) == 0:
            continue
        M = matrices[(i, j)]
        gens = cell_lattice(sol.slopes[i], sol.copies[i], sol.slopes[j], sol.copies[j])
        if not lattice_invariant(M, gens):
            raise IncompatibleMatrix(
                f"matrix for sets {i + 1},{j + 1} does not repeat on slopes "
                f"{sol.slopes[i]}/{sol.slopes[j]} with copies {sol.copies[i]},{sol.copies[j]}")

    strands = place_strands(n, sol.slopes, sol.copies)
    by_set = {i: [s for s in strands if s.set_index == i] for i in range(n)}

    def sign(a: Strand, b: Strand, p: Point) -> int:
        M = matrices[(a.set_index, b.set_index)]
        return M[lift_index(by_set[a.set_index], p), lift_index(by_set[b.set_index], p)]

    crossings = arrange(strands, sign)
    return Motif(tuple(strands), tuple(crossings), spec)


def place_strands(n_sets: int, slopes, copies) -> list[Strand]:
    """Strands at the first offsets (see strand_offsets) in general position."""
    last = None
    for attempt in range(MAX_OFFSET_ATTEMPTS):
        offsets = strand_offsets(n_sets, copies, attempt)
        strands = [Strand(i, r, slopes[i], offsets[i][r])
                   for i in range(n_sets) for r in range(copies[i])]
        try:
            arrange(strands, lambda a, b, p: 1)
        except GeneralPositionFailure as e:
            last = e
            continue
        return strands
    raise last


def extract_matrices(motif: Motif) -> MatrixSet:
    """Read one crossing matrix per pair back off the motif.

    Each crossing is placed at (row, column) = the lifted strand indices of
    its two strands, as in walking along the strands from the cell origin,
    and repeated over every cell translate modulo the module.
    """
    spec = motif.spec
    if spec is None:
        raise ValueError("extract_matrices needs a motif that carries its spec")
    n = spec.n_sets
    by_set = {i: motif.set_strands(i) for i in range(n)}
    mats = {}
    for i, j in spec.pairs:
        seq = spec.seq(i, j)
        m = seq.module
        pcs = motif.pair_crossings(i, j)
        if not pcs:
            mats[(i, j)] = CrossingMatrix((i, j), ((1 if seq.p else -1,),))
            continue
        gens = cell_lattice(by_set[i][0].slope, len(by_set[i]), by_set[j][0].slope, len(by_set[j]))
        orbit = lattice_orbit(gens, m)
        cells: dict[tuple[int, int], int] = {}
        for c in pcs:
            u, v = lift_index(by_set[i], c.position), lift_index(by_set[j], c.position)
            s = c.sign_for(i)
            for du, dv in orbit:
                key = ((u + du) % m, (v + dv) % m)
                if cells.setdefault(key, s) != s:
                    raise NonPeriodicPattern(
                        f"sets {i + 1},{j + 1}: crossing at {c.position} breaks the period")
        if len(cells) != m * m:
            raise NonPeriodicPattern(f"sets {i + 1},{j + 1}: crossings do not fill a {m}x{m} matrix")
        M = CrossingMatrix((i, j), tuple(tuple(cells[(x, y)] for y in range(m)) for x in range(m)))
        if not validate_matrix(M, seq):
            raise NonPeriodicPattern(f"sets {i + 1},{j + 1}: strands do not read {seq}")
        mats[(i, j)] = M
    return MatrixSet(n, mats)


def translate_cell(motif: Motif, dx, dy) -> Motif:
    """Same diagram seen through a unit cell moved by (dx, dy).

    Strands are re-indexed per set by increasing offset.
    """
    dx, dy = Fraction(dx), Fraction(dy)
    moved = []
    for s in motif.strands:
        shift = s.slope.a * dy - s.slope.b * dx
        moved.append((s, frac1(s.offset + shift)))
    remap = {}
    strands = []
    for i in sorted({s.set_index for s in motif.strands}):
        group = sorted((m for m in moved if m[0].set_index == i), key=lambda m: m[1])
        for r, (s, off) in enumerate(group):
            remap[s.ref] = (i, r)
            strands.append(Strand(i, r, s.slope, off))
    crossings = [Crossing((frac1(c.position[0] + dx), frac1(c.position[1] + dy)),
                          remap[c.upper], remap[c.lower]) for c in motif.crossings]
    crossings.sort(key=lambda c: (c.position[1], c.position[0], c.upper, c.lower))
    return Motif(tuple(strands), tuple(crossings), motif.spec)


def validate_tiling(motif: Motif) -> list[Diagnostic]:
    """Every vertex must have degree 4 with its two strands in different sets."""
    out = []
    at: dict[Point, set[StrandRef]] = {}
    for c in motif.crossings:
        at.setdefault(c.position, set()).update(c.strands())
        if c.upper[0] == c.lower[0]:
            out.append(Diagnostic("error", "same-set-crossing",
                                  f"strands of set {c.upper[0] + 1} cross at {fmt_point(c.position)}",
                                  (c.upper[0],)))
    for p in sorted(at, key=lambda q: (q[1], q[0])):
        deg = 2 * len(at[p])
        if deg != 4:
            sets = tuple(sorted({r[0] for r in at[p]}))
            out.append(Diagnostic("error", "vertex-degree",
                                  f"vertex degree {deg} at {fmt_point(p)}", sets))
    return out


# -- walking -------------------------------------------------------------------

def _inverse_pair(s: Slope) -> tuple[int, int]:
    """(alpha, beta) with alpha*a + beta*b == 1."""
    from .solver import _ext_gcd
    g, x, y = _ext_gcd(s.a, s.b)
    assert g == 1
    return x, y


def strand_base(s: Strand) -> Point:
    if s.slope.b == 0:
        return (Fraction(0), frac1(s.offset))
    return (frac1(-s.offset / s.slope.b), Fraction(0))


def strand_param(s: Strand, p: Point) -> Fraction:
    """Position of p along the strand, in [0, 1) of one full loop."""
    alpha, beta = _inverse_pair(s.slope)
    bx, by = strand_base(s)
    return frac1(alpha * (p[0] - bx) + beta * (p[1] - by))


def strand_walk(motif: Motif, ref: StrandRef) -> list[tuple[Fraction, int]]:
    """(parameter, crossing index) along a strand, increasing parameter,
    starting from the crossing with the smallest (y, x)."""
    s = motif.strand(ref)
    hits = [(strand_param(s, c.position), k)
            for k, c in enumerate(motif.crossings) if ref in c.strands()]
    if not hits:
        return []
    anchor = min(hits, key=lambda h: (motif.crossings[h[1]].position[1],
                                      motif.crossings[h[1]].position[0]))[0]
    return sorted(((frac1(t - anchor), k) for t, k in hits))


# -- text format -----------------------------------------------------------------

def fmt_frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def fmt_point(p: Point) -> str:
    return f"({fmt_frac(p[0])}, {fmt_frac(p[1])})"


def format_motif(motif: Motif) -> str:
    lines = [f"cell=1x1 N={motif.n_sets}"]
    for s in sorted(motif.strands, key=lambda s: s.ref):
        lines.append(f"S {s.set_index + 1} {s.strand_index + 1} {s.slope.a} {s.slope.b} "
                     f"{fmt_frac(s.offset)}")
    for c in motif.crossings:
        lines.append(f"X {fmt_frac(c.position[0])} {fmt_frac(c.position[1])} "
                     f"over={c.upper[0] + 1},{c.upper[1] + 1} under={c.lower[0] + 1},{c.lower[1] + 1}")
    return "\n".join(lines) + "\n"


def _ref(text: str, prefix: str) -> StrandRef:
    if not text.startswith(prefix):
        raise MotifFormatError(f"expected {prefix}<set>,<idx>, got {text!r}")
    a, b = text[len(prefix):].split(",")
    return (int(a) - 1, int(b) - 1)


def parse_motif(text: str, spec: WeaveSpec | None = None) -> Motif:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines or not lines[0].startswith("cell=1x1 N="):
        raise MotifFormatError("motif must start with 'cell=1x1 N=<n>'")
    strands, crossings = [], []
    try:
        n = int(lines[0].split("N=", 1)[1])
        for ln in lines[1:]:
            tok = ln.split()
            if tok[0] == "S" and len(tok) == 6:
                strands.append(Strand(int(tok[1]) - 1, int(tok[2]) - 1,
                                      normalize_slope(int(tok[3]), int(tok[4])), Fraction(tok[5])))
            elif tok[0] == "X" and len(tok) == 5:
                crossings.append(Crossing((Fraction(tok[1]), Fraction(tok[2])),
                                          _ref(tok[3], "over="), _ref(tok[4], "under=")))
            else:
                raise MotifFormatError(f"unrecognized motif line {ln!r}")
    except (ValueError, ZeroDivisionError, IndexError) as e:
        raise MotifFormatError(str(e)) from None
    if spec is not None and spec.n_sets != n:
        raise MotifFormatError(f"motif has N={n}, spec has N={spec.n_sets}")
    return Motif(tuple(strands), tuple(crossings), spec)


def with_sign_flipped(motif: Motif, k: int) -> Motif:
    """Copy of the motif with crossing k's over/under swapped."""
    c = motif.crossings[k]
    flipped = replace(c, upper=c.lower, lower=c.upper)
    return replace(motif, crossings=motif.crossings[:k] + (flipped,) + motif.crossings[k + 1:])
