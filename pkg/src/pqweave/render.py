"""
SVG and text renderings of motifs and crossing matrices.

Output is plain SVG 1.1 built from ``line``, ``path``, ``rect`` and ``g``
elements. Coordinates are exact rationals converted with a fixed number of
decimals, so the same input always produces the same bytes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor

from .core import WeaveError
from .matrix import CrossingMatrix
from .motif import Motif, fmt_frac, strand_base, strand_param, strand_walk

DEFAULT_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                   "#9467bd", "#8c564b", "#e377c2", "#17becf")


class PaletteTooSmall(WeaveError, ValueError):
    pass


@dataclass(frozen=True)
class RenderOptions:
    cell_pixels: int = 512
    gap_fraction: Fraction = Fraction(1, 10)
    palette: tuple[str, ...] = field(default=DEFAULT_PALETTE)
    repeat: int = 1
    stroke_width: int = 4

    def __post_init__(self):
        object.__setattr__(self, "gap_fraction", Fraction(self.gap_fraction))
        object.__setattr__(self, "palette", tuple(self.palette))
        if self.cell_pixels < 1:
            raise ValueError("cell_pixels must be positive")
        if not 0 < self.gap_fraction < Fraction(1, 4):
            raise ValueError("gap_fraction must lie in (0, 1/4)")
        if self.repeat < 1:
            raise ValueError("repeat must be positive")


def _num(x) -> str:
    s = f"{float(x):.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _header(width, height) -> list[str]:
    return ['<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">']


def _segments(motif: Motif, ref, gap: Fraction):
    """Pieces of one loop of the strand, as parameter intervals in [0,1],
    with the under-crossings cut out (t +- gap)."""
    s = motif.strand(ref)
    cuts = []
    for _, k in strand_walk(motif, ref):
        if motif.crossings[k].lower != ref:
            continue
        t = strand_param(s, motif.crossings[k].position)
        lo, hi = t - gap, t + gap
        if lo < 0:
            cuts += [(Fraction(0), hi), (1 + lo, Fraction(1))]
        elif hi > 1:
            cuts += [(lo, Fraction(1)), (Fraction(0), hi - 1)]
        else:
            cuts.append((lo, hi))
    pieces = []
    start = Fraction(0)
    for lo, hi in sorted(cuts):
        if lo > start:
            pieces.append((start, lo))
        start = max(start, hi)
    if start < 1:
        pieces.append((start, Fraction(1)))
    return strand_base(s), s.slope, pieces


def _lift_path(base, slope, t0: Fraction, t1: Fraction):
    """Split the segment base + t*(a,b), t in [t0,t1], at cell boundaries and
    fold each piece back into [0,1]^2."""
    a, b = slope.a, slope.b
    ts = {t0, t1}
    for k in range(-abs(a) - 2, abs(a) + 3):
        if a:
            t = (k - base[0]) / a
            if t0 < t < t1:
                ts.add(t)
    for k in range(-abs(b) - 2, abs(b) + 3):
        if b:
            t = (k - base[1]) / b
            if t0 < t < t1:
                ts.add(t)
    ts = sorted(ts)
    out = []
    for u, v in zip(ts, ts[1:]):
        mid = (u + v) / 2
        mx, my = base[0] + mid * a, base[1] + mid * b
        fx, fy = floor(mx), floor(my)
        out.append(((base[0] + u * a - fx, base[1] + u * b - fy),
                    (base[0] + v * a - fx, base[1] + v * b - fy)))
    return out


def render_motif_svg(motif: Motif, opts: RenderOptions | None = None) -> bytes:
    """Strands coloured by set with gaps at under-crossings, cell tiled
    ``repeat`` times. Each drawn crossing gets an empty ``g.crossing`` marker
    so tools can count them."""
    opts = opts or RenderOptions()
    n = motif.n_sets
    if len(opts.palette) < n:
        raise PaletteTooSmall(f"{len(opts.palette)} colours for {n} sets")
    px = opts.cell_pixels
    size = px * opts.repeat
    lines = _header(size, size)
    lines.append(f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>')
    tiles = [(tx, ty) for ty in range(opts.repeat) for tx in range(opts.repeat)]

    def xy(p, tx, ty):
        # y grows upward in the cell, downward in SVG
        return _num((tx + p[0]) * px), _num((opts.repeat - ty - 1 + 1 - p[1]) * px)

    for s in sorted(motif.strands, key=lambda s: s.ref):
        copies = motif.copies(s.set_index)
        # the spacing between parallel strands, as a step of the parameter t
        # (t runs over the length |(a,b)|, the spacing is 1/(copies*|(a,b)|))
        spacing = Fraction(1, copies * (s.slope.a ** 2 + s.slope.b ** 2))
        gap = opts.gap_fraction * spacing
        base, slope, pieces = _segments(motif, s.ref, gap)
        colour = opts.palette[s.set_index]
        lines.append(f'<g class="strand" id="strand-{s.set_index + 1}-{s.strand_index + 1}" '
                     f'stroke="{colour}" stroke-width="{opts.stroke_width}" fill="none">')
        for tx, ty in tiles:
            for t0, t1 in pieces:
                for p, q in _lift_path(base, slope, t0, t1):
                    x1, y1 = xy(p, tx, ty)
                    x2, y2 = xy(q, tx, ty)
                    lines.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
        lines.append("</g>")
    for tx, ty in tiles:
        for c in motif.crossings:
            x, y = xy(c.position, tx, ty)
            lines.append(f'<g class="crossing" data-over="{c.upper[0] + 1},{c.upper[1] + 1}" '
                         f'data-under="{c.lower[0] + 1},{c.lower[1] + 1}" '
                         f'transform="translate({x},{y})"/>')
    lines.append('<g class="cell" stroke="black" stroke-width="1" fill="none">')
    for tx, ty in tiles:
        lines.append(f'<rect x="{tx * px}" y="{(opts.repeat - ty - 1) * px}" '
                     f'width="{px}" height="{px}"/>')
    lines.append("</g>")
    lines.append("</svg>")
    return ("\n".join(lines) + "\n").encode()


def gap_count(motif: Motif, repeat: int = 1) -> dict[int, int]:
    """Number of under-strand breaks drawn per set (0-based)."""
    out = {i: 0 for i in range(motif.n_sets)}
    for c in motif.crossings:
        out[c.lower[0]] += repeat * repeat
    return out


def render_design(M: CrossingMatrix, square: int = 32) -> bytes:
    """Black square for +1 (row strand over), gray for -1. Row x is drawn as
    the x-th row from the top, column y as the y-th column from the left."""
    m = M.m
    size = square * m
    lines = _header(size, size)
    lines.append('<g class="design" stroke="white" stroke-width="1">')
    for x in range(m):
        for y in range(m):
            fill = "black" if M.entries[x][y] > 0 else "gray"
            lines.append(f'<rect x="{y * square}" y="{x * square}" width="{square}" '
                         f'height="{square}" fill="{fill}"/>')
    lines.append("</g>")
    lines.append("</svg>")
    return ("\n".join(lines) + "\n").encode()


def render_text(motif: Motif) -> str:
    """Crossings one per line, ordered by y then x, with o/u markers per set.

    ``o`` marks the set that is over at the crossing, ``u`` the one under.
    """
    n = motif.n_sets
    lines = [f"# motif N={n} strands={len(motif.strands)} crossings={len(motif.crossings)}",
             "# x y " + " ".join(f"T{i + 1}" for i in range(n))]
    for c in sorted(motif.crossings, key=lambda c: (c.position[1], c.position[0])):
        marks = ["."] * n
        marks[c.upper[0]] = "o"
        marks[c.lower[0]] = "u"
        lines.append(f"{fmt_frac(c.position[0])} {fmt_frac(c.position[1])} " + " ".join(marks)
                     + f"  {c.upper[0] + 1}.{c.upper[1] + 1}/{c.lower[0] + 1}.{c.lower[1] + 1}")
    return "\n".join(lines) + "\n"
