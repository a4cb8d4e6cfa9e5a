"""
Crossing matrices.

A crossing matrix for a pair of sets (i, j) with sequence (+p, -q) is an
m x m array over {+1, -1}, m = p + q, read from the viewpoint of set i:
``entries[x][y]`` is +1 when strand x of set i passes over strand y of set j.
Every row and every column must be a cyclic rotation of ``+1^p -1^q``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from math import gcd, lcm
from typing import Iterable, Mapping

import numpy as np

from .core import CrossingSequence, WeaveError, WeaveSpec, complement


class ModuleMismatch(WeaveError, ValueError):
    pass


MatrixModuleMismatch = ModuleMismatch


class InvalidMatrix(WeaveError, ValueError):
    pass


class GcdViolation(WeaveError, ValueError):
    pass


class MixedModules(WeaveError, ValueError):
    pass


class ShapeMismatch(WeaveError, ValueError):
    pass


class MatrixFormatError(WeaveError, ValueError):
    pass


Entries = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class CrossingMatrix:
    pair: tuple[int, int]
    entries: Entries

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.entries)
        m = len(rows)
        if m == 0 or any(len(r) != m for r in rows):
            raise ShapeMismatch("crossing matrix must be square and non-empty")
        if any(v not in (1, -1) for r in rows for v in r):
            raise InvalidMatrix("entries must be +1 or -1")
        object.__setattr__(self, "entries", rows)

    @property
    def m(self) -> int:
        return len(self.entries)

    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int8)

    def __getitem__(self, xy):
        x, y = xy
        return self.entries[x % self.m][y % self.m]

    def __str__(self):
        return "\n".join("".join("+" if v > 0 else "-" for v in row) for row in self.entries)

    @classmethod
    def from_rows(cls, pair, rows: Iterable[str]) -> CrossingMatrix:
        return cls(tuple(pair), tuple(tuple(1 if ch == "+" else -1 for ch in r) for r in rows))


@dataclass(frozen=True)
class MatrixSet:
    n_sets: int
    matrices: Mapping[tuple[int, int], CrossingMatrix]

    def __post_init__(self):
        object.__setattr__(self, "matrices", dict(sorted(self.matrices.items())))

    def __getitem__(self, key):
        return self.matrices[key]

    def __eq__(self, other):
        return (isinstance(other, MatrixSet) and self.n_sets == other.n_sets
                and self.matrices == other.matrices)

    def __hash__(self):
        return hash((self.n_sets, tuple(self.matrices.items())))

    @property
    def modules(self) -> dict[tuple[int, int], int]:
        return {k: M.m for k, M in self.matrices.items()}

    @classmethod
    def uniform(cls, n_sets: int, make) -> MatrixSet:
        """Builds a set by calling ``make(i, j)`` for every pair i < j."""
        mats = {}
        for i in range(n_sets):
            for j in range(i + 1, n_sets):
                M = make(i, j)
                mats[(i, j)] = CrossingMatrix((i, j), M.entries)
        return cls(n_sets, mats)


class Rotation(str, Enum):
    IDENTITY = "identity"
    HALF = "half-turn"
    QUARTER = "quarter-turn-inverted"
    THREE_QUARTER = "three-quarter-turn-inverted"


ROTATIONS = (Rotation.IDENTITY, Rotation.HALF, Rotation.QUARTER, Rotation.THREE_QUARTER)


@dataclass(frozen=True)
class MatrixTransform:
    """A cyclic shift followed by one rotation, applied to every matrix.

    ``row_shift``/``col_shift`` move all matrices alike. ``set_shifts``, when
    given, instead re-indexes the strands of each set: matrix (i, j) is
    shifted by ``(set_shifts[i], set_shifts[j])``. This is what translating
    the unit cell does when N >= 3; for N = 2 the two forms coincide.
    """

    row_shift: int = 0
    col_shift: int = 0
    rotation: Rotation = Rotation.IDENTITY
    set_shifts: tuple[int, ...] | None = None

    def __str__(self):
        if self.set_shifts is not None:
            shift = "set_shifts=" + ",".join(str(s) for s in self.set_shifts)
        else:
            shift = f"row_shift={self.row_shift} col_shift={self.col_shift}"
        return f"{shift} rotation={self.rotation.value}"


IDENTITY = MatrixTransform()


# -- validation ----------------------------------------------------------------

def is_rotation_of(line: tuple[int, ...], word: tuple[int, ...]) -> bool:
    if len(line) != len(word):
        return False
    doubled = word + word
    n = len(word)
    return any(doubled[k:k + n] == line for k in range(n))


def validate_matrix(M: CrossingMatrix, seq: CrossingSequence) -> bool:
    if M.m != seq.module:
        raise ModuleMismatch(f"matrix is {M.m}x{M.m} but {seq} has module {seq.module}")
    word = seq.word()
    rows = M.entries
    cols = tuple(zip(*rows))
    return all(is_rotation_of(r, word) for r in rows) and all(is_rotation_of(c, word) for c in cols)


def complement_matrix(M: CrossingMatrix) -> CrossingMatrix:
    """The same crossings seen from the other set: negated transpose."""
    i, j = M.pair
    return CrossingMatrix((j, i), tuple(tuple(-v for v in col) for col in zip(*M.entries)))


def check_matrix_set(S: MatrixSet, spec: WeaveSpec):
    """Raise unless S holds one valid matrix per pair of ``spec``."""
    if S.n_sets != spec.n_sets:
        raise ModuleMismatch(f"matrix set has N={S.n_sets}, spec has N={spec.n_sets}")
    for i, j in spec.pairs:
        if (i, j) not in S.matrices:
            raise ModuleMismatch(f"no crossing matrix for sets {i + 1},{j + 1}")
        seq = spec.seq(i, j)
        if not validate_matrix(S[(i, j)], seq):
            raise InvalidMatrix(f"matrix for sets {i + 1},{j + 1} does not realize {seq}")


# -- generators --------------------------------------------------------------

def gen_satin(p: int, a: int, pair=(0, 1)) -> CrossingMatrix:
    """Regular satin for (+p, -1): -1 at column k, row a*k mod m."""
    m = p + 1
    if p < 1:
        raise ValueError("satin needs p >= 1")
    if not 1 <= a < m:
        raise ValueError(f"satin step a={a} must satisfy 1 <= a < m={m}")
    if gcd(a, m) != 1:
        raise GcdViolation(f"gcd({a},{m}) = {gcd(a, m)}")
    rows = [[1] * m for _ in range(m)]
    for k in range(m):
        rows[(a * k) % m][k] = -1
    return CrossingMatrix(tuple(pair), tuple(map(tuple, rows)))


def gen_block(p: int, pair=(0, 1)) -> CrossingMatrix:
    """Basket-style (+p, -p) matrix built from two p x p blocks per row band."""
    if p < 1:
        raise ValueError("block needs p >= 1")
    top = (1,) * p + (-1,) * p
    bottom = tuple(-v for v in top)
    return CrossingMatrix(tuple(pair), (top,) * p + (bottom,) * p)


def gen_diagonal(p: int, q: int, direction: int = 1, pair=(0, 1)) -> CrossingMatrix:
    """Twill-style matrix: row k is row 0 shifted cyclically by direction*k."""
    if p < 1 or q < 1:
        raise ValueError("diagonal needs p, q >= 1")
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    m = p + q
    row0 = (1,) * p + (-1,) * q
    rows = tuple(tuple(row0[(y - direction * k) % m] for y in range(m)) for k in range(m))
    if len(set(rows)) != m:
        raise InvalidMatrix("diagonal construction produced equal rows")
    return CrossingMatrix(tuple(pair), rows)


GENERATORS = ("satin", "block", "diagonal")


def generate(name: str, seq: CrossingSequence, pair=(0, 1), **params) -> CrossingMatrix:
    """Dispatch to a generator by name; non-crossing sequences give 1x1."""
    if not seq.is_crossing:
        return CrossingMatrix(tuple(pair), ((1 if seq.p else -1,),))
    if name == "satin":
        if seq.q == 1:
            return gen_satin(seq.p, params.get("a", 1), pair)
        if seq.p == 1:
            # satin for (+1, -q): complement of the (+q, -1) satin
            M = complement_matrix(gen_satin(seq.q, params.get("a", 1)))
            return CrossingMatrix(tuple(pair), M.entries)
        raise ValueError(f"satin needs p = 1 or q = 1, got {seq}")
    if name == "block":
        if seq.p != seq.q:
            raise ValueError(f"block needs p = q, got {seq}")
        return gen_block(seq.p, pair)
    if name == "diagonal":
        return gen_diagonal(seq.p, seq.q, params.get("direction", 1), pair)
    raise ValueError(f"unknown generator {name!r}")


def generator_applies(name: str, seq: CrossingSequence) -> bool:
    if not seq.is_crossing:
        return True
    if name == "satin":
        return seq.q == 1 or seq.p == 1
    if name == "block":
        return seq.p == seq.q
    return name == "diagonal"


# -- transforms --------------------------------------------------------------

def _shift(E: Entries, r: int, c: int) -> Entries:
    m = len(E)
    return tuple(tuple(E[(x + r) % m][(y + c) % m] for y in range(m)) for x in range(m))


def _rotate(E: Entries, rot: Rotation) -> Entries:
    m = len(E)
    rng = range(m)
    if rot is Rotation.IDENTITY:
        return E
    if rot is Rotation.HALF:
        return tuple(tuple(E[m - 1 - x][m - 1 - y] for y in rng) for x in rng)
    if rot is Rotation.QUARTER:
        return tuple(tuple(-E[m - 1 - y][x] for y in rng) for x in rng)
    return tuple(tuple(-E[y][m - 1 - x] for y in rng) for x in rng)


def transform_matrix(M: CrossingMatrix, r: int, c: int, rot: Rotation) -> CrossingMatrix:
    return CrossingMatrix(M.pair, _rotate(_shift(M.entries, r, c), Rotation(rot)))


def apply_transform(S: MatrixSet, t: MatrixTransform) -> MatrixSet:
    """Shift then rotate every matrix of S.

    A quarter turn inverts the symbols, so it maps a (+p,-q) matrix to a
    valid matrix for the complementary sequence; only for p == q does it stay
    valid for the original one.
    """
    if t.set_shifts is not None:
        if len(t.set_shifts) != S.n_sets:
            raise ShapeMismatch("set_shifts needs one entry per set")
        return MatrixSet(S.n_sets, {
            (i, j): transform_matrix(M, t.set_shifts[i], t.set_shifts[j], t.rotation)
            for (i, j), M in S.matrices.items()})
    if (t.row_shift or t.col_shift) and len(set(S.modules.values())) > 1:
        raise MixedModules(f"uniform shift across modules {sorted(set(S.modules.values()))}")
    return MatrixSet(S.n_sets, {
        k: transform_matrix(M, t.row_shift, t.col_shift, t.rotation)
        for k, M in S.matrices.items()})


def invert_transform(t: MatrixTransform, S: MatrixSet) -> MatrixTransform:
    """A transform undoing ``t`` on sets shaped like S (found by search)."""
    target = apply_transform(S, t)
    back = equivalent_sets(target, S, per_set=t.set_shifts is not None)
    assert back is not None
    return back


def _shape(S: MatrixSet):
    return S.n_sets, tuple(sorted(S.modules.items()))


def iter_transforms(S: MatrixSet, per_set: bool = False):
    """Every transform in search order: rotation (identity first), then
    shifts lexicographically, so pure shifts are preferred as witnesses."""
    if per_set:
        periods = []
        for s in range(S.n_sets):
            mods = [M.m for (i, j), M in S.matrices.items() if s in (i, j)]
            periods.append(lcm(*mods) if mods else 1)
        for rot in ROTATIONS:
            for shifts in product(*(range(p) for p in periods)):
                yield MatrixTransform(rotation=rot, set_shifts=shifts)
        return
    mods = set(S.modules.values())
    m = mods.pop() if len(mods) == 1 else 1
    for rot in ROTATIONS:
        for r in range(m):
            for c in range(m):
                yield MatrixTransform(r, c, rot)


def equivalent_sets(S1: MatrixSet, S2: MatrixSet, per_set: bool = False) -> MatrixTransform | None:
    """First transform mapping S1 onto S2 entrywise, or None.

    The same transform must act on every matrix at once; fixing one matrix
    differently from the others never counts. With ``per_set`` the shift part
    ranges over independent strand re-indexings per set (cell translations).
    When modules differ the uniform search only tries pure rotations.
    """
    if _shape(S1) != _shape(S2):
        raise ShapeMismatch("matrix sets differ in N or in per-pair modules")
    for t in iter_transforms(S1, per_set):
        if apply_transform(S1, t) == S2:
            return t
    return None


# -- invariants ----------------------------------------------------------------

def rank(M: CrossingMatrix) -> int:
    """Exact rank over the rationals."""
    A = [[Fraction(v) for v in r] for r in M.entries]
    n = len(A)
    rk = 0
    for col in range(n):
        piv = next((r for r in range(rk, n) if A[r][col] != 0), None)
        if piv is None:
            continue
        A[rk], A[piv] = A[piv], A[rk]
        for r in range(rk + 1, n):
            f = A[r][col] / A[rk][col]
            if f:
                A[r] = [a - f * b for a, b in zip(A[r], A[rk])]
        rk += 1
    return rk


def lattice_invariant(M: CrossingMatrix, gens) -> bool:
    """Is M unchanged by every cyclic shift in ``gens`` (pairs (du, dv))?"""
    E, m = M.entries, M.m
    for du, dv in gens:
        du, dv = du % m, dv % m
        if (du, dv) == (0, 0):
            continue
        for x in range(m):
            row, src = E[x], E[(x + du) % m]
            for y in range(m):
                if src[(y + dv) % m] != row[y]:
                    return False
    return True


# -- text format ---------------------------------------------------------------

def format_matrix(M: CrossingMatrix, seq: CrossingSequence) -> str:
    i, j = M.pair
    return f"m={M.m} pair={i + 1},{j + 1} seq=+{seq.p},-{seq.q}\n{M}\n"


def format_matrix_set(S: MatrixSet, spec: WeaveSpec) -> str:
    return "".join(format_matrix(S[(i, j)], spec.seq(i, j)) for i, j in spec.pairs)


def parse_matrices(text: str) -> list[tuple[CrossingMatrix, CrossingSequence]]:
    """Reads one or more matrix blocks (header line, then m rows of +/-)."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    out = []
    k = 0
    while k < len(lines):
        head = lines[k]
        try:
            fields = dict(part.split("=", 1) for part in head.split())
            if set(fields) != {"m", "pair", "seq"}:
                raise ValueError(f"expected keys m, pair, seq; got {sorted(fields)}")
            m = int(fields["m"])
            i, j = (int(v) - 1 for v in fields["pair"].split(","))
            sp, sq = fields["seq"].split(",")
            if not sp.startswith("+") or not sq.startswith("-"):
                raise ValueError("seq must look like +p,-q")
            seq = CrossingSequence(int(sp[1:]), int(sq[1:]))
        except ValueError as e:
            raise MatrixFormatError(f"bad matrix header {head!r}: {e}") from None
        rows = lines[k + 1:k + 1 + m]
        if m < 1 or i < 0 or j < 0 or i == j or len(rows) != m or any(
                len(r) != m or set(r) - set("+-") for r in rows):
            raise MatrixFormatError(f"malformed {m}x{m} matrix after {head!r}")
        M = CrossingMatrix.from_rows((i, j), rows)
        if M.m != seq.module:
            raise MatrixFormatError(f"m={m} does not match {seq}")
        out.append((M, seq))
        k += 1 + m
    if not out:
        raise MatrixFormatError("no matrix found")
    return out


def matrix_set_from_blocks(blocks, n_sets: int | None = None) -> MatrixSet:
    """Assembles parsed blocks into a MatrixSet keyed by i < j."""
    mats = {}
    for M, _ in blocks:
        i, j = M.pair
        if i > j:
            M = complement_matrix(M)
            i, j = j, i
        if (i, j) in mats:
            raise MatrixFormatError(f"two matrices for sets {i + 1},{j + 1}")
        mats[(i, j)] = M
    n = n_sets or (max(max(k) for k in mats) + 1)
    return MatrixSet(n, mats)


def oriented_sequence(blocks, i: int, j: int) -> CrossingSequence:
    for M, seq in blocks:
        if M.pair == (i, j):
            return seq
        if M.pair == (j, i):
            return complement(seq)
    raise KeyError((i, j))
