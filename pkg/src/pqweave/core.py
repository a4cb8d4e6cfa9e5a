"""
Domain types shared by every other module: crossing sequences, torus slopes
and weave specifications.

Set indices are 0-based in code and 1-based in every user-facing string.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import gcd
from typing import Mapping


class WeaveError(Exception):
    """Base class for all errors raised by pqweave."""


class NotCoprime(WeaveError, ValueError):
    pass


class ZeroSlope(WeaveError, ValueError):
    pass


class InvalidSpec(WeaveError, ValueError):
    pass


class IndexOutOfRange(WeaveError, IndexError):
    pass


@dataclass(frozen=True, order=True)
class CrossingSequence:
    """The pair ``(+p, -q)``: p consecutive overcrossings then q under.

    ``(1, 0)`` and ``(0, 1)`` are the two non-crossing sequences (always
    over / always under); both have module 1.
    """

    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise ValueError(f"negative crossing count in {self!r}")
        if self.p + self.q < 1:
            raise ValueError("a crossing sequence needs p + q >= 1")
        if (self.p == 0 or self.q == 0) and (self.p, self.q) not in ((1, 0), (0, 1)):
            raise ValueError(f"({self.p},{self.q}) is not a valid sequence; use (1,0) or (0,1)")

    @property
    def module(self) -> int:
        return self.p + self.q

    @property
    def is_crossing(self) -> bool:
        return self.p > 0 and self.q > 0

    def word(self) -> tuple[int, ...]:
        """One period: p times +1 followed by q times -1."""
        return (1,) * self.p + (-1,) * self.q

    def __str__(self):
        return f"(+{self.p},-{self.q})"


def module(seq: CrossingSequence) -> int:
    return seq.module


def complement(seq: CrossingSequence) -> CrossingSequence:
    """The same sequence read from the other set of threads."""
    return CrossingSequence(seq.q, seq.p)


@dataclass(frozen=True, order=True)
class Slope:
    """Free homotopy class ``(a, b)`` of an essential simple closed curve.

    Always stored normalized: ``b > 0``, or ``(a, b) == (1, 0)``.
    Use :func:`normalize_slope` to build one from arbitrary input.
    """

    a: int
    b: int

    def __post_init__(self):
        if (self.a, self.b) == (0, 0):
            raise ZeroSlope("(0,0) is not a slope")
        if gcd(self.a, self.b) != 1:
            raise NotCoprime(f"({self.a},{self.b}) is not primitive")
        if not (self.b > 0 or (self.b == 0 and self.a == 1)):
            raise ValueError(f"({self.a},{self.b}) is not normalized")

    @property
    def height(self) -> int:
        return max(abs(self.a), abs(self.b))

    @property
    def weight(self) -> int:
        """Number of parallel segments the curve leaves in a square cell."""
        return abs(self.a) + abs(self.b)

    def __str__(self):
        return f"({self.a},{self.b})"


def normalize_slope(a: int, b: int) -> Slope:
    if (a, b) == (0, 0):
        raise ZeroSlope("(0,0) is not a slope")
    if gcd(a, b) != 1:
        raise NotCoprime(f"gcd(|{a}|,|{b}|) = {gcd(a, b)}")
    if b < 0 or (b == 0 and a < 0):
        a, b = -a, -b
    return Slope(a, b)


def det(s: Slope, t: Slope) -> int:
    return s.a * t.b - t.a * s.b


def pair_key(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" or "warning"
    code: str
    message: str
    sets: tuple[int, ...] = ()

    def __str__(self):
        return f"{self.severity}: {self.message}"


@dataclass(frozen=True)
class WeaveSpec:
    """N sets of threads, their base slopes and one sequence per pair.

    ``sequences`` is keyed by ``(i, j)`` with ``i < j`` and read from the
    viewpoint of set ``i``. Construction does not validate; call
    :func:`validate_spec`.
    """

    n_sets: int
    base_slopes: tuple[Slope, ...]
    sequences: Mapping[tuple[int, int], CrossingSequence] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "base_slopes", tuple(self.base_slopes))
        object.__setattr__(self, "sequences", dict(sorted(self.sequences.items())))

    def __hash__(self):
        return hash((self.n_sets, self.base_slopes, tuple(self.sequences.items())))

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return list(combinations(range(self.n_sets), 2))

    def check_index(self, i: int):
        if not 0 <= i < self.n_sets:
            raise IndexOutOfRange(f"set {i + 1} outside 1..{self.n_sets}")

    def seq(self, i: int, j: int) -> CrossingSequence:
        """Sequence of set ``i`` against set ``j`` (complemented if i > j)."""
        self.check_index(i)
        self.check_index(j)
        if i == j:
            raise IndexOutOfRange("a set has no crossing sequence with itself")
        s = self.sequences[pair_key(i, j)]
        return s if i < j else complement(s)

    @classmethod
    def build(cls, slopes, sequences) -> WeaveSpec:
        """Convenience constructor from plain tuples.

        ``slopes`` is a list of ``(a, b)``; ``sequences`` maps 0-based pairs to
        ``(p, q)`` (a pair given as ``(j, i)`` with j > i is complemented).
        """
        sl = tuple(normalize_slope(a, b) for a, b in slopes)
        seqs = {}
        for (i, j), pq in sequences.items():
            s = pq if isinstance(pq, CrossingSequence) else CrossingSequence(*pq)
            if i > j:
                i, j, s = j, i, complement(s)
            seqs[(i, j)] = s
        return cls(len(sl), sl, seqs)


def validate_spec(spec: WeaveSpec) -> list[Diagnostic]:
    """Check a spec against the WeaveSpec invariants.

    Errors make the spec unusable. A non-crossing sequence between sets whose
    base slopes intersect is only a warning: a single crossing can be enough
    when it blocks a third set.
    """
    out: list[Diagnostic] = []
    if spec.n_sets < 2:
        out.append(Diagnostic("error", "too-few-sets", f"need N >= 2 sets, got {spec.n_sets}"))
    if len(spec.base_slopes) != spec.n_sets:
        out.append(Diagnostic(
            "error", "slope-count",
            f"{len(spec.base_slopes)} base slopes for N={spec.n_sets}"))
        return out
    expected = set(spec.pairs)
    for key in spec.sequences:
        if key not in expected:
            out.append(Diagnostic(
                "error", "bad-pair",
                f"sequence for invalid pair {key[0] + 1},{key[1] + 1}", tuple(key)))
    for i, j in spec.pairs:
        if (i, j) not in spec.sequences:
            out.append(Diagnostic(
                "error", "missing-sequence",
                f"no crossing sequence for sets {i + 1},{j + 1}", (i, j)))
            continue
        s = spec.sequences[(i, j)]
        v = abs(det(spec.base_slopes[i], spec.base_slopes[j]))
        if v == 0 and s.is_crossing:
            out.append(Diagnostic(
                "error", "parallel-crossing",
                f"crossing sequence on parallel sets {i + 1},{j + 1} "
                f"(both slope {spec.base_slopes[i]})", (i, j)))
        elif v > 0 and not s.is_crossing:
            out.append(Diagnostic(
                "warning", "single-crossing",
                f"sets {i + 1},{j + 1} intersect but have non-crossing sequence {s}; "
                "only valid if the crossing blocks another set", (i, j)))
    return out


def errors(diags: list[Diagnostic]) -> list[Diagnostic]:
    return [d for d in diags if d.severity == "error"]


def require_valid(spec: WeaveSpec):
    errs = errors(validate_spec(spec))
    if errs:
        raise InvalidSpec("; ".join(e.message for e in errs))
