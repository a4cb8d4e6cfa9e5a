"""
Entanglement and triangle analysis of weaving motifs.

The motif is turned into a graph on the torus: vertices are crossings, and
consecutive crossings along a strand are joined by an edge that remembers
its exact displacement in the universal cover. A closed walk of three edges
on three different strands whose displacements sum to zero bounds a genuine
triangle of lines; since each edge has no crossing inside it, no other line
can enter that triangle, so it is a face.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import WeaveError, det
from .motif import Crossing, Motif, Point, StrandRef, frac1, level, strand_walk

Vec = tuple[Fraction, Fraction]


class UnknownStrand(WeaveError, KeyError):
    pass


@dataclass(frozen=True)
class Edge:
    strand: StrandRef
    index: int  # position along the strand walk
    start: int  # crossing index
    end: int
    disp: Vec


@dataclass(frozen=True)
class TriangleFace:
    crossings: tuple[int, int, int]
    strands: tuple[StrandRef, StrandRef, StrandRef]
    edges: tuple[Edge, Edge, Edge]
    # displacement from crossings[0] to each vertex, in the universal cover
    offsets: tuple[Vec, Vec, Vec]


@dataclass(frozen=True)
class ATriangle:
    crossings: tuple[Crossing, Crossing, Crossing]
    strands: tuple[StrandRef, StrandRef, StrandRef]


def _add(u: Vec, v: Vec) -> Vec:
    return (u[0] + v[0], u[1] + v[1])


def _neg(u: Vec) -> Vec:
    return (-u[0], -u[1])


def strand_edges(motif: Motif) -> dict[StrandRef, list[Edge]]:
    """Edges between consecutive crossings along every strand."""
    out = {}
    for s in motif.strands:
        walk = strand_walk(motif, s.ref)
        edges = []
        n = len(walk)
        for k in range(n):
            t0, c0 = walk[k]
            t1, c1 = walk[(k + 1) % n]
            dt = t1 - t0 if k + 1 < n else 1 + t1 - t0
            edges.append(Edge(s.ref, k, c0, c1, (dt * s.slope.a, dt * s.slope.b)))
        out[s.ref] = edges
    return out


def _incidence(motif: Motif, edges: dict[StrandRef, list[Edge]]):
    """crossing -> strand -> list of (neighbor, displacement, edge)."""
    inc: dict[int, dict[StrandRef, list]] = {k: {} for k in range(len(motif.crossings))}
    for ref, es in edges.items():
        for e in es:
            inc[e.start].setdefault(ref, []).append((e.end, e.disp, e))
            inc[e.end].setdefault(ref, []).append((e.start, _neg(e.disp), e))
    return inc


def triangular_faces(motif: Motif) -> list[TriangleFace]:
    edges = strand_edges(motif)
    inc = _incidence(motif, edges)
    zero = (Fraction(0), Fraction(0))
    seen = set()
    faces = []
    for x, c in enumerate(motif.crossings):
        u, w = c.upper, c.lower
        for first, last in ((u, w), (w, u)):
            for y, d1, e1 in inc[x].get(first, []):
                v = next(r for r in motif.crossings[y].strands() if r != first)
                if v in (u, w):
                    continue
                for z, d2, e2 in inc[y].get(v, []):
                    if last not in motif.crossings[z].strands():
                        continue
                    for x2, d3, e3 in inc[z].get(last, []):
                        if x2 != x or _add(_add(d1, d2), d3) != zero:
                            continue
                        key = frozenset((e.strand, e.index) for e in (e1, e2, e3))
                        if key in seen:
                            continue
                        seen.add(key)
                        faces.append(TriangleFace((x, y, z), (first, v, last), (e1, e2, e3),
                                                  (zero, d1, _add(d1, d2))))
    return faces


def _over(c: Crossing, a: StrandRef) -> bool:
    return c.upper == a


def is_alternating(motif: Motif, face: TriangleFace) -> bool:
    """Each strand is over at exactly one of its two triangle corners."""
    x, y, z = (motif.crossings[k] for k in face.crossings)
    u, v, w = face.strands
    # u runs x-y, v runs y-z, w runs z-x
    return _over(x, u) != _over(y, u) and _over(y, v) != _over(z, v) and _over(z, w) != _over(x, w)


def _position_key(c: Crossing):
    return (c.position[1], c.position[0])


def find_a_triangles(motif: Motif) -> list[ATriangle]:
    out = []
    for f in triangular_faces(motif):
        if len({r[0] for r in f.strands}) != 3 or not is_alternating(motif, f):
            continue
        cs = tuple(motif.crossings[k] for k in f.crossings)
        out.append(ATriangle(cs, f.strands))
    out.sort(key=lambda t: (sorted(_position_key(c) for c in t.crossings), t.strands))
    return out


def a_triangle_count(motif: Motif) -> int:
    return len(find_a_triangles(motif))


# -- blocking crossings ---------------------------------------------------------

def _check_strand(motif: Motif, ref: StrandRef):
    if not any(s.ref == ref for s in motif.strands):
        raise UnknownStrand(f"no strand {ref[0] + 1},{ref[1] + 1} in motif")


def _sandwich_blocks(motif: Motif, ref: StrandRef, faces) -> tuple[list, list]:
    """Clause (a): a triangle face with one side on the strand, the strand
    over one of the other two and under the other. The apex crossing blocks
    on the side where it lies."""
    slope = motif.strand(ref).slope
    left, right = [], []
    for f in faces:
        if ref not in f.strands:
            continue
        k = f.strands.index(ref)
        # strand k runs between corners k and k+1; the apex is corner k+2
        a, b, apex = k, (k + 1) % 3, (k + 2) % 3
        ca, cb = motif.crossings[f.crossings[a]], motif.crossings[f.crossings[b]]
        if _over(ca, ref) == _over(cb, ref):
            continue
        rel = (f.offsets[apex][0] - f.offsets[a][0], f.offsets[apex][1] - f.offsets[a][1])
        side = slope.a * rel[1] - slope.b * rel[0]
        (left if side > 0 else right).append(motif.crossings[f.crossings[apex]])
    return left, right


def _crossing_at(motif: Motif, p: Point, ref_a: StrandRef, ref_b: StrandRef) -> Crossing | None:
    p = (frac1(p[0]), frac1(p[1]))
    for c in motif.crossings:
        if c.position == p and set(c.strands()) == {ref_a, ref_b}:
            return c
    return None


def parallel_blocks(motif: Motif, ref: StrandRef, c: Crossing, side: int, reach: int = 1) -> bool:
    """Clause (b): ``c`` lies on the parallel strand t_j that is ``reach``
    spacings away on ``side`` (+1 left, -1 right) and crosses t_k there. It
    blocks when t_j and the strand meet that lift of t_k with different
    signs. With one copy per set t_j is the strand's own translate."""
    i, r = ref
    copies = motif.copies(i)
    nb = (i, (r + side * reach) % copies)
    if nb not in c.strands():
        return False
    tk = next(x for x in c.strands() if x != nb)
    if tk[0] == i:
        return False
    si, sk = motif.strand(ref).slope, motif.strand(tk).slope
    step = Fraction(-side * reach, copies * det(si, sk))
    q = (c.position[0] + step * sk.a, c.position[1] + step * sk.b)
    home = _crossing_at(motif, q, ref, tk)
    if home is None:
        raise WeaveError(f"inconsistent motif: no crossing of {ref} with {tk} near {c.position}")
    return _over(home, ref) != _over(c, nb)


def _parallel_side(motif: Motif, ref: StrandRef, side: int) -> list[Crossing]:
    """Clause (b) on one side. Parallel strands that meet every crossing
    exactly like the strand move with it as one thick thread, so the window
    widens past them to the first parallel strand that differs."""
    for reach in range(1, motif.copies(ref[0]) + 1):
        found = [c for c in motif.crossings if parallel_blocks(motif, ref, c, side, reach)]
        if found:
            return found
    return []


def blocking_crossings(motif: Motif, strand: StrandRef) -> tuple[list[Crossing], list[Crossing]]:
    """Blocking crossings on the (left, right) of a strand.

    Left is the side of increasing ``a*y - b*x``, i.e. to the left of the
    direction (a, b). The window on each side reaches the nearest parallel
    strand, which itself belongs to the window.
    """
    _check_strand(motif, strand)
    faces = triangular_faces(motif)
    left, right = _sandwich_blocks(motif, strand, faces)
    left += _parallel_side(motif, strand, +1)
    right += _parallel_side(motif, strand, -1)

    def tidy(cs):
        return sorted(set(cs), key=lambda c: (_position_key(c), c.upper, c.lower))

    return tidy(left), tidy(right)


def is_entangled(motif: Motif) -> bool:
    if not motif.strands:
        return False
    for s in motif.strands:
        left, right = blocking_crossings(motif, s.ref)
        if not left or not right:
            return False
    return True


def crossing_level(motif: Motif, ref: StrandRef, c: Crossing) -> Fraction:
    """Level of a crossing relative to a strand, in units of strand spacing."""
    s = motif.strand(ref)
    return (level(s.slope, c.position) - s.offset) * motif.copies(ref[0])
