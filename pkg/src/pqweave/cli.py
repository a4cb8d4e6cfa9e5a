"""
The ``weave`` command line.

Spec files are line oriented; ``#`` starts a comment::

    N 2
    slope 1 1 0
    slope 2 0 1
    seq 1 2 +2 -2
    matrix 1 2 diagonal direction=1      # or: satin a=2 / block
    matrix 1 2 rows ++-- -++- --++ +--+  # explicit entries, row by row
    bounds max_slope=8 max_copies=4 max_multiplier=8

Exit codes: 0 success, 1 negative verdict, 2 usage or parse error,
3 no solution within bounds, 4 matrices inconsistent with the spec.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from math import gcd
from pathlib import Path

from .analysis import a_triangle_count, is_entangled
from .core import (CrossingSequence, InvalidSpec, WeaveError, WeaveSpec, errors,
                   validate_spec)
from .intersect import pairwise_crossing_numbers
from .matrix import (CrossingMatrix, GcdViolation, InvalidMatrix, MatrixFormatError, MatrixSet,
                     ModuleMismatch, equivalent_sets, format_matrix,
                     gen_block, gen_diagonal, gen_satin, generate, generator_applies,
                     matrix_set_from_blocks, parse_matrices, rank, validate_matrix)
from .motif import GeneralPositionFailure, build_motif, format_motif, validate_tiling
from .render import RenderOptions, render_motif_svg, render_text
from .solver import (NoSolutionWithinBounds, SearchBounds, default_bounds,
                     enumerate_solutions, resolve_workers)

EXIT_OK, EXIT_NEGATIVE, EXIT_PARSE, EXIT_BOUNDS, EXIT_MISMATCH = 0, 1, 2, 3, 4


class SpecParseError(WeaveError, ValueError):
    pass


@dataclass
class SpecDocument:
    spec: WeaveSpec
    matrices: MatrixSet | None = None
    bounds: SearchBounds | None = None


# -- spec files ------------------------------------------------------------------

def _params(tokens) -> dict[str, int]:
    out = {}
    for t in tokens:
        if "=" not in t:
            raise SpecParseError(f"expected key=value, got {t!r}")
        k, v = t.split("=", 1)
        out[k] = int(v)
    return out


def _set_index(tok: str, n: int) -> int:
    i = int(tok) - 1
    if not 0 <= i < n:
        raise SpecParseError(f"set {tok} outside 1..{n}")
    return i


def parse_spec(text: str) -> SpecDocument:
    """Parse a spec file; raises SpecParseError on anything malformed."""
    n = None
    slopes: dict[int, tuple[int, int]] = {}
    seqs: dict[tuple[int, int], tuple[int, int]] = {}
    mats: list[tuple[int, int, list[str]]] = []
    bounds = None
    try:
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tok = line.split()
            key = tok[0]
            if key == "N":
                if n is not None or len(tok) != 2:
                    raise SpecParseError(f"line {lineno}: expected a single 'N <n>'")
                n = int(tok[1])
                if n < 2:
                    raise SpecParseError(f"line {lineno}: need N >= 2")
                continue
            if n is None:
                raise SpecParseError(f"line {lineno}: 'N' must come first")
            if key == "slope" and len(tok) == 4:
                i = _set_index(tok[1], n)
                if i in slopes:
                    raise SpecParseError(f"line {lineno}: slope {tok[1]} given twice")
                slopes[i] = (int(tok[2]), int(tok[3]))
            elif key == "seq" and len(tok) == 5:
                i, j = _set_index(tok[1], n), _set_index(tok[2], n)
                if i == j:
                    raise SpecParseError(f"line {lineno}: a set has no sequence with itself")
                if not tok[3].startswith("+") or not tok[4].startswith("-"):
                    raise SpecParseError(f"line {lineno}: sequence must read '+p -q'")
                pq = (int(tok[3][1:]), int(tok[4][1:]))
                if i > j:
                    i, j, pq = j, i, (pq[1], pq[0])
                if (i, j) in seqs:
                    raise SpecParseError(f"line {lineno}: sequence {i + 1},{j + 1} given twice")
                seqs[(i, j)] = pq
            elif key == "matrix" and len(tok) >= 4:
                mats.append((_set_index(tok[1], n), _set_index(tok[2], n), tok[3:]))
            elif key == "bounds" and len(tok) >= 2:
                p = _params(tok[1:])
                if set(p) - {"max_slope", "max_copies", "max_multiplier"}:
                    raise SpecParseError(f"line {lineno}: unknown bound in {sorted(p)}")
                bounds = p
            else:
                raise SpecParseError(f"line {lineno}: unrecognized line {raw.strip()!r}")
        if n is None:
            raise SpecParseError("missing 'N <n>'")
        if sorted(slopes) != list(range(n)):
            raise SpecParseError(f"need one slope line per set 1..{n}")
        spec = WeaveSpec.build([slopes[i] for i in range(n)], seqs)
    except SpecParseError:
        raise
    except (ValueError, WeaveError) as e:
        raise SpecParseError(str(e)) from None
    errs = errors(validate_spec(spec))
    if errs:
        raise SpecParseError("; ".join(e.message for e in errs))
    doc = SpecDocument(spec)
    if bounds is not None:
        base = default_bounds(spec)
        doc.bounds = SearchBounds(bounds.get("max_slope", base.max_slope),
                                  bounds.get("max_copies", base.max_copies),
                                  bounds.get("max_multiplier", base.max_multiplier))
    if mats:
        doc.matrices = _spec_matrices(spec, mats)
    return doc


def _spec_matrices(spec: WeaveSpec, lines) -> MatrixSet:
    out = {}
    for i, j, args in lines:
        seq = spec.seq(i, j)
        try:
            if args[0] == "rows":
                M = CrossingMatrix.from_rows((i, j), args[1:])
            else:
                M = generate(args[0], seq, (i, j), **_params(args[1:]))
        except (ValueError, WeaveError) as e:
            raise SpecParseError(f"matrix {i + 1},{j + 1}: {e}") from None
        if i > j:
            M = CrossingMatrix((j, i), tuple(zip(*[[-v for v in row] for row in M.entries])))
            i, j = j, i
        out[(i, j)] = M
    if set(out) != set(spec.pairs):
        missing = sorted(set(spec.pairs) - set(out))
        raise SpecParseError("matrices missing for pairs "
                             + ", ".join(f"{i + 1},{j + 1}" for i, j in missing))
    return MatrixSet(spec.n_sets, out)


def default_matrices(spec: WeaveSpec) -> MatrixSet:
    """Diagonal where it applies, else satin, else block."""
    def make(i, j):
        seq = spec.seq(i, j)
        for name in ("diagonal", "satin", "block"):
            if generator_applies(name, seq):
                return generate(name, seq, (i, j))
        raise ModuleMismatch(f"no generator fits {seq}")
    return MatrixSet.uniform(spec.n_sets, make)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise SpecParseError(f"cannot read {path}: {e.strerror}") from None


def _bounds(args, doc: SpecDocument) -> SearchBounds:
    b = doc.bounds or default_bounds(doc.spec)
    return SearchBounds(args.max_slope or b.max_slope, args.max_copies or b.max_copies,
                        args.max_multiplier or b.max_multiplier)


# -- solve -----------------------------------------------------------------------

def cmd_solve(args) -> int:
    doc = parse_spec(_read(args.spec))
    spec = doc.spec
    bounds = _bounds(args, doc)
    print(f"spec: N={spec.n_sets} slopes=" + "/".join(str(s) for s in spec.base_slopes))
    for (i, j), pc in pairwise_crossing_numbers(spec).items():
        print(f"pair {i + 1},{j + 1}: seq={spec.seq(i, j)} v={pc.v} "
              f"zeta_{i + 1}={pc.zeta_i} zeta_{j + 1}={pc.zeta_j} C={pc.c}")
    matrices = doc.matrices if args.with_matrices else None
    if args.with_matrices and matrices is None:
        raise SpecParseError("--with-matrices needs matrix lines in the spec")
    try:
        sols = enumerate_solutions(spec, bounds, args.next + 1, matrices)
    except NoSolutionWithinBounds as e:
        print(f"no solution: {e}", file=sys.stderr)
        return EXIT_BOUNDS
    print(f"solution 0: {sols[0].describe()}")
    if args.next:
        if len(sols) <= args.next:
            print(f"no solution {args.next}: only {len(sols)} within max_slope={bounds.max_slope} "
                  f"max_copies={bounds.max_copies} max_multiplier={bounds.max_multiplier}",
                  file=sys.stderr)
            return EXIT_BOUNDS
        print(f"solution {args.next}: {sols[args.next].describe()}")
    return EXIT_OK


# -- matrix ----------------------------------------------------------------------

def _matrix_file(path: str):
    try:
        return parse_matrices(_read(path))
    except SpecParseError as e:
        raise MatrixFormatError(str(e)) from None


def cmd_matrix(args) -> int:
    if args.action == "gen":
        pair = tuple(int(v) - 1 for v in args.pair.split(","))
        if args.name == "satin":
            M = gen_satin(args.p, args.a, pair)
            seq = CrossingSequence(args.p, 1)
        elif args.name == "block":
            M = gen_block(args.p, pair)
            seq = CrossingSequence(args.p, args.p)
        else:
            q = args.q if args.q is not None else args.p
            M = gen_diagonal(args.p, q, args.direction, pair)
            seq = CrossingSequence(args.p, q)
        text = format_matrix(M, seq)
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    if args.action == "validate":
        bad = 0
        for M, seq in _matrix_file(args.file):
            ok = validate_matrix(M, seq)
            bad += not ok
            print(f"pair {M.pair[0] + 1},{M.pair[1] + 1} seq={seq}: {'VALID' if ok else 'INVALID'}")
        return EXIT_NEGATIVE if bad else EXIT_OK
    if args.action == "rank":
        for M, seq in _matrix_file(args.file):
            print(rank(M))
        return EXIT_OK
    # equiv
    a, b = _matrix_file(args.first), _matrix_file(args.second)
    n = max(max(max(M.pair) for M, _ in blocks) for blocks in (a, b)) + 1
    S1, S2 = matrix_set_from_blocks(a, n), matrix_set_from_blocks(b, n)
    try:
        t = equivalent_sets(S1, S2, per_set=args.per_set)
    except WeaveError as e:
        print(f"NOT EQUIVALENT ({e})")
        return EXIT_NEGATIVE
    if t is None:
        print("NOT EQUIVALENT")
        return EXIT_NEGATIVE
    print(f"EQUIVALENT {t}")
    return EXIT_OK


# -- motif -----------------------------------------------------------------------

def cmd_motif(args) -> int:
    doc = parse_spec(_read(args.spec))
    spec = doc.spec
    if args.matrices:
        blocks = _matrix_file(args.matrices)
        S = matrix_set_from_blocks(blocks, spec.n_sets)
    else:
        S = doc.matrices or default_matrices(spec)
    try:
        sols = enumerate_solutions(spec, _bounds(args, doc), args.next + 1, S)
        if len(sols) <= args.next:
            raise NoSolutionWithinBounds(_bounds(args, doc), f"only {len(sols)} solutions")
    except NoSolutionWithinBounds as e:
        print(f"no solution: {e}", file=sys.stderr)
        return EXIT_BOUNDS
    sol = sols[args.next]
    motif = build_motif(spec, sol, S)
    diags = validate_tiling(motif)
    for d in diags:
        print(d, file=sys.stderr)
    print(f"solution: {sol.describe()}")
    ent = "true" if is_entangled(motif) else "false"
    print(f"crossings={len(motif.crossings)} entangled={ent} "
          f"a_triangles={a_triangle_count(motif)}")
    if args.out:
        Path(args.out).write_text(format_motif(motif))
    if args.text:
        Path(args.text).write_text(render_text(motif))
    if args.svg:
        Path(args.svg).write_bytes(render_motif_svg(motif, RenderOptions(repeat=args.repeat)))
    return EXIT_OK if not diags else EXIT_MISMATCH


# -- classify --------------------------------------------------------------------

FAMILIES = {
    "square": [(1, 0), (0, 1)],
    "kagome": [(1, 0), (0, 1), (1, 1)],
}

COLUMNS = ["family", "sequences", "pair_crossing_numbers", "generator", "solution",
           "slopes", "copies", "multipliers", "total", "class", "a_triangles",
           "entangled", "status"]


def _generator_variants(max_module: int):
    yield "block", {}
    yield "diagonal", {"direction": 1}
    yield "diagonal", {"direction": -1}
    for a in range(1, max_module):
        yield "satin", {"a": a}


def _variant_name(name, params):
    return name + "".join(f" {k}={v}" for k, v in sorted(params.items()))


def _try_matrices(spec: WeaveSpec, name, params) -> MatrixSet | None:
    def make(i, j):
        return generate(name, spec.seq(i, j), (i, j), **params)
    for i, j in spec.pairs:
        seq = spec.seq(i, j)
        if not generator_applies(name, seq):
            return None
        if name == "satin" and seq.is_crossing and (params["a"] >= seq.module
                                                    or gcd(params["a"], seq.module) != 1):
            return None
    try:
        return MatrixSet.uniform(spec.n_sets, make)
    except (ValueError, GcdViolation):
        return None


def _classify_rows(family: str, max_module: int):
    base = FAMILIES[family]
    n = len(base)
    seqs = [CrossingSequence(p, m - p) for m in range(2, max_module + 1) for p in range(1, m)]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    jobs = []
    for combo in product(seqs, repeat=len(pairs)):
        spec = WeaveSpec.build(base, dict(zip(pairs, combo)))
        seen = []
        for name, params in _generator_variants(max_module):
            S = _try_matrices(spec, name, params)
            if S is None or S in seen:
                continue
            seen.append(S)
            jobs.append((spec, _variant_name(name, params), S))
    return jobs


def _solve_job(job, n_solutions, bounds_flags):
    spec, gen, S = job
    b = default_bounds(spec)
    bounds = SearchBounds(bounds_flags[0] or b.max_slope, bounds_flags[1] or b.max_copies,
                          bounds_flags[2] or b.max_multiplier)
    try:
        sols = enumerate_solutions(spec, bounds, n_solutions, S, workers=1)
    except NoSolutionWithinBounds:
        return []
    out = []
    for sol in sols:
        m = build_motif(spec, sol, S)
        out.append((sol, a_triangle_count(m), is_entangled(m)))
    return out


def _seq_text(spec: WeaveSpec) -> str:
    return " ".join(f"{i + 1}-{j + 1}:+{s.p},-{s.q}" for (i, j), s in spec.sequences.items())


def cmd_classify(args) -> int:
    if args.max_module < 2 or args.solutions < 1:
        print("need --max-module >= 2 and --solutions >= 1", file=sys.stderr)
        return EXIT_PARSE
    jobs = _classify_rows(args.family, args.max_module)
    flags = (args.max_slope, args.max_copies, args.max_multiplier)
    workers = resolve_workers(None)
    with ThreadPoolExecutor(max_workers=workers) as ex:
        results = list(ex.map(lambda j: _solve_job(j, args.solutions, flags), jobs))
    rows = []
    classes: list[tuple[tuple, MatrixSet, str]] = []
    solved_any = False
    for (spec, gen, S), sols in zip(jobs, results):
        pcn = " ".join(f"{i + 1}-{j + 1}:{pc.c}" for (i, j), pc in
                       pairwise_crossing_numbers(spec).items())
        common = {"family": args.family, "sequences": _seq_text(spec),
                  "pair_crossing_numbers": pcn, "generator": gen}
        if not sols:
            rows.append({**common, "solution": "", "slopes": "", "copies": "",
                         "multipliers": "", "total": "", "class": "", "a_triangles": "",
                         "entangled": "", "status": "UNSOLVED"})
            continue
        solved_any = True
        for k, (sol, tri, ent) in enumerate(sols):
            key = (args.family, _seq_text(spec), sol.total)
            cid = None
            for ckey, CS, name in classes:
                if ckey == key and equivalent_sets(CS, S) is not None:
                    cid = name
                    break
            if cid is None:
                cid = f"E{len(classes) + 1}"
                classes.append((key, S, cid))
            rows.append({**common, "solution": str(k),
                         "slopes": "/".join(str(s) for s in sol.slopes),
                         "copies": ",".join(str(c) for c in sol.copies),
                         "multipliers": " ".join(f"k{i + 1}{j + 1}={v}" for (i, j), v
                                                 in sol.multipliers.items()),
                         "total": str(sol.total), "class": cid, "a_triangles": str(tri),
                         "entangled": "true" if ent else "false", "status": "OK"})
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = f"{args.family}_m{args.max_module}_k{args.solutions}"
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\r\n")
    w.writeheader()
    w.writerows(rows)
    (out_dir / f"{stem}.csv").write_bytes(buf.getvalue().encode())
    md = ["| " + " | ".join(COLUMNS) + " |", "|" + "---|" * len(COLUMNS)]
    for r in rows:
        md.append("| " + " | ".join(r[c].replace("|", "\\|") for c in COLUMNS) + " |")
    (out_dir / f"{stem}.md").write_text("\n".join(md) + "\n")
    ok = sum(r["status"] == "OK" for r in rows)
    print(f"rows={len(rows)} solved={ok} unsolved={len(rows) - ok} classes={len(classes)}")
    print(f"wrote {out_dir / (stem + '.csv')} and {out_dir / (stem + '.md')}")
    return EXIT_OK if solved_any or not rows else EXIT_BOUNDS


# -- entry point -----------------------------------------------------------------

def _add_bounds(p):
    p.add_argument("--max-slope", type=int, default=None, help="largest |a|, |b| searched")
    p.add_argument("--max-copies", type=int, default=None, help="largest copies per set")
    p.add_argument("--max-multiplier", type=int, default=None, help="largest multiplier k")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="weave", description="Classify doubly periodic untwisted weaves.",
        epilog="WEAVE_THREADS sets the worker count (0 = one per CPU, default 1).")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="crossing numbers and minimal motifs")
    p.add_argument("spec")
    p.add_argument("--next", type=int, default=0, metavar="K",
                   help="also print the K-th solution after the minimum")
    p.add_argument("--with-matrices", action="store_true",
                   help="only keep motifs on which the spec's matrices repeat")
    _add_bounds(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("matrix", help="crossing matrix tools")
    msub = p.add_subparsers(dest="action", required=True)
    g = msub.add_parser("gen", help="generate a matrix")
    g.add_argument("name", choices=["satin", "block", "diagonal"])
    g.add_argument("--p", type=int, required=True)
    g.add_argument("--q", type=int, default=None, help="diagonal only (default p)")
    g.add_argument("--a", type=int, default=1, help="satin step")
    g.add_argument("--direction", type=int, default=1, choices=[1, -1])
    g.add_argument("--pair", default="1,2")
    g.add_argument("--out")
    v = msub.add_parser("validate", help="check matrices against their sequences")
    v.add_argument("file")
    r = msub.add_parser("rank", help="exact rank of each matrix")
    r.add_argument("file")
    e = msub.add_parser("equiv", help="are two matrix sets equivalent")
    e.add_argument("first")
    e.add_argument("second")
    e.add_argument("--per-set", action="store_true",
                   help="shift the strands of each set independently")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("motif", help="build a minimal motif and analyze it")
    p.add_argument("spec")
    p.add_argument("--matrices", help="matrix file (default: spec matrix lines or generators)")
    p.add_argument("--next", type=int, default=0, metavar="K", help="use the K-th solution")
    p.add_argument("--out", help="write the motif text file here")
    p.add_argument("--svg", help="write an SVG drawing here")
    p.add_argument("--text", help="write a text listing here")
    p.add_argument("--repeat", type=int, default=1, help="SVG tiles per side")
    _add_bounds(p)
    p.set_defaults(func=cmd_motif)

    p = sub.add_parser("classify", help="classification tables for a base tiling")
    p.add_argument("--family", choices=sorted(FAMILIES), required=True)
    p.add_argument("--max-module", type=int, default=2)
    p.add_argument("--solutions", type=int, default=1)
    p.add_argument("--out", default=".")
    _add_bounds(p)
    p.set_defaults(func=cmd_classify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SpecParseError, MatrixFormatError, InvalidSpec) as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (ModuleMismatch, InvalidMatrix, GeneralPositionFailure) as e:
        print(f"mismatch: {e}", file=sys.stderr)
        return EXIT_MISMATCH
    except (ValueError, WeaveError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
