"""Command-line interface.

Meshes are JSON files (see :mod:`splitsplines.meshio`) or builtin names:
``T3`` is the standard simplex in R^3, and ``alfeld:T2``, ``facet:T3``,
``double-alfeld:T2``, ``pyramid:T3`` are the constructions on it.

Exit status is 0 on success, 1 when a mathematical check fails and 2 on
bad input.
"""
from __future__ import annotations

import argparse
import csv
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import formulas as formulas_mod
from .algebra import euler_dim, homology_graded_dims
from .fixtures import builtin
from .formulas import SCHEMES, scheme_dim
from .mesh import MeshError, SimplicialComplex
from .meshio import MeshFormatError, dump_mesh, load_mesh, mesh_to_dict, parse_rational, record_to_dict
from .oracle import METHODS, spline_basis, spline_dim
from .refine import alfeld, double_alfeld, facet_split, is_simple, is_split, replace_cell
from .verify import CRITERIA, formulas_namespace, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
COLUMNS = ("k", "r", "d", "oracle", "euler", "formula")


class InputError(Exception):
    pass


_BUILTIN = re.compile(r"^(?:(simplex|alfeld|facet|double-alfeld|pyramid):)?T(\d+)$")


def read_mesh(spec: str, validate: bool = True) -> SimplicialComplex:
    m = _BUILTIN.match(spec)
    if m and not Path(spec).exists():
        return builtin(m.group(1) or "simplex", int(m.group(2)))
    try:
        return load_mesh(spec, validate)
    except OSError as exc:
        raise InputError(f"cannot read {spec}: {exc.strerror or exc}") from None


def degree_list(args) -> list[int]:
    if args.d is not None and args.d_range is not None:
        raise InputError("give --d or --d-range, not both")
    if args.d is not None:
        if args.d < 0:
            raise InputError("--d must be nonnegative")
        return [args.d]
    if args.d_range is None:
        raise InputError("one of --d or --d-range is required")
    m = re.fullmatch(r"(\d+)(?::|-|\.\.)(\d+)", args.d_range)
    if not m:
        raise InputError(f"bad --d-range {args.d_range!r}; use LO:HI")
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo > hi:
        raise InputError("empty degree range")
    return list(range(lo, hi + 1))


def parse_point(text: str | None):
    if text is None:
        return None
    try:
        return tuple(parse_rational(x) for x in text.split(","))
    except MeshFormatError as exc:
        raise InputError(str(exc)) from None


def parse_subset(text: str | None):
    if text is None:
        return None
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"bad --subset {text!r}; use comma-separated facet indices") from None


def emit(rows: list[dict], fmt: str, columns=COLUMNS, out=None):
    out = out or sys.stdout
    if fmt == "json":
        json.dump(rows, out, indent=1)
        out.write("\n")
        return
    w = csv.DictWriter(out, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({c: "" if row.get(c) is None else row[c] for c in columns})


# commands

def cmd_validate(args) -> int:
    delta = read_mesh(args.mesh, validate=False)
    rep = delta.validate()
    print(f"{delta!r}")
    print(rep)
    return EXIT_OK if rep.valid else EXIT_FAIL


def _dim_row(job):
    delta, r, d, method, oracle_method, scheme = job
    row = {"k": delta.k, "r": r, "d": d, "oracle": None, "euler": None, "formula": None}
    if method in ("oracle", "all"):
        row["oracle"] = spline_dim(delta, r, d, method=oracle_method)
    if method in ("euler", "all"):
        row["euler"] = euler_dim(delta, r, d)
    if scheme and method in ("formula", "all"):
        row["formula"] = scheme_dim(scheme, delta.k, d, r)
    return row


def cmd_dim(args) -> int:
    if args.method == "formula" and not args.scheme:
        raise InputError(f"--method formula needs --scheme ({', '.join(SCHEMES)})")
    delta = read_mesh(args.mesh)
    jobs = [(delta, r, d, args.method, args.oracle, args.scheme) for r in args.r for d in degree_list(args)]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_dim_row, jobs))
    else:
        rows = [_dim_row(j) for j in jobs]
    emit(rows, args.format)
    bad = []
    for row in rows:
        vals = {row[c] for c in ("oracle", "euler", "formula") if row[c] is not None}
        if len(vals) > 1:
            bad.append(row)
    for row in bad:
        print(f"error: routes disagree at r={row['r']} d={row['d']}: oracle={row['oracle']} "
              f"euler={row['euler']} formula={row['formula']}", file=sys.stderr)
    return EXIT_FAIL if bad else EXIT_OK


def cmd_homology(args) -> int:
    delta = read_mesh(args.mesh)
    k = delta.k
    cols = ["k", "r", "d"] + [f"H{i}" for i in range(k + 1)]
    rows = []
    for r in args.r:
        for d in degree_list(args):
            h = homology_graded_dims(delta, r, d, method=args.realization)
            rows.append(dict(k=k, r=r, d=d, **{f"H{i}": x for i, x in enumerate(h)}))
    emit(rows, args.format, cols)
    free = all(not any(row[f"H{i}"] for i in range(k)) for row in rows)
    return EXIT_OK if free else EXIT_FAIL


def cmd_basis(args) -> int:
    delta = read_mesh(args.mesh)
    if len(args.r) != 1 or args.d is None:
        raise InputError("basis needs a single --r and --d")
    basis = spline_basis(delta, args.r[0], args.d, args.mode)
    if args.format == "json":
        out = [[str(p) for p in f.pieces] for f in basis]
        json.dump({"dimension": len(basis), "basis": out}, sys.stdout, indent=1)
        print()
    else:
        print(f"dimension {len(basis)}")
        for i, f in enumerate(basis):
            print(f"[{i}]")
            for c, p in enumerate(f.pieces):
                print(f"  cell {c}: {p}")
    return EXIT_OK


def cmd_subdivide(args) -> int:
    delta = read_mesh(args.mesh)
    point = parse_point(args.point)
    subset = parse_subset(args.subset)
    if args.scheme == "alfeld":
        if subset is not None:
            raise InputError("--subset applies to facet and double-alfeld")
        steps = [alfeld(delta, args.cell, point)]
    else:
        if len(delta.cells) != 1:
            raise InputError(f"{args.scheme} acts on a single simplex; the mesh has {len(delta.cells)} cells")
        build = facet_split if args.scheme == "facet" else double_alfeld
        steps = build(delta, point, subset)
    fine = steps[-1].fine
    if args.output:
        dump_mesh(fine, args.output)
        side = Path(str(args.output) + ".record.json") if not args.record else Path(args.record)
        side.write_text(json.dumps({"scheme": args.scheme, "steps": [record_to_dict(s) for s in steps]},
                                   indent=1) + "\n")
        print(f"wrote {args.output} ({len(fine.cells)} cells) and {side}")
    else:
        json.dump(mesh_to_dict(fine), sys.stdout, indent=1)
        print()
    return EXIT_OK


def cmd_check_split(args) -> int:
    coarse = read_mesh(args.coarse)
    piece = read_mesh(args.piece)
    if not 0 <= args.cell < len(coarse.cells):
        raise InputError(f"cell {args.cell} out of range 0..{len(coarse.cells) - 1}")
    sigma = coarse.cells[args.cell]
    if not is_simple(coarse, sigma, piece):
        print("not simple: the piece changes a facet shared with another cell")
        return EXIT_FAIL
    rec = replace_cell(coarse, sigma, piece)
    code = EXIT_OK
    for r in args.r:
        ok, wit = is_split(rec, r)
        print(f"r={r}: {'split' if ok else 'not split'}")
        for g in wit:
            pts = ", ".join("(" + ",".join(str(x) for x in p) + ")" for p in rec.fine.points(g))
            print(f"  witness face: {pts}")
        if not ok:
            code = EXIT_FAIL
    return code


def cmd_verify(args) -> int:
    ks = [int(k) for k in args.k.split(",")] if args.k else None
    only = [int(c) for c in args.criteria.split(",")] if args.criteria else None
    overrides = {}
    for name in args.perturb or []:
        if name not in formulas_mod.__all__:
            raise InputError(f"unknown formula {name!r}")
        orig = getattr(formulas_mod, name)
        overrides[name] = lambda *a, _f=orig: _f(*a) + 1
    echo = print if args.format == "text" else None
    results = run_suite(ks, only, formulas_namespace(**overrides), echo=echo)
    ok = all(r.passed for r in results)
    if args.format == "json":
        json.dump({"passed": ok, "criteria": [r.as_dict() for r in results]}, sys.stdout, indent=1)
        print()
    else:
        print(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
    return EXIT_OK if ok else EXIT_FAIL


def _r_list(text: str) -> list[int]:
    try:
        vals = [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad smoothness list {text!r}") from None
    if any(v < 0 for v in vals):
        raise argparse.ArgumentTypeError("smoothness must be nonnegative")
    return vals


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="splitsplines", description="Exact spline dimensions on split meshes.")
    sub = p.add_subparsers(dest="command", required=True)

    def degrees(sp):
        sp.add_argument("--r", type=_r_list, required=True, help="smoothness, or a comma list")
        sp.add_argument("--d", type=int, help="single degree")
        sp.add_argument("--d-range", help="degrees LO:HI inclusive")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")

    sp = sub.add_parser("validate", help="check that a mesh is a proper simplicial complex")
    sp.add_argument("mesh")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("dim", help="spline space dimensions by oracle, Euler characteristic or formula")
    sp.add_argument("mesh")
    degrees(sp)
    sp.add_argument("--method", choices=("oracle", "euler", "formula", "all"), default="all")
    sp.add_argument("--scheme", choices=sorted(SCHEMES), help="closed form to compare against")
    sp.add_argument("--oracle", choices=METHODS, default="auto", help="linear system used by the oracle")
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_dim)

    sp = sub.add_parser("homology", help="graded homology of the R/J complex")
    sp.add_argument("mesh")
    degrees(sp)
    sp.add_argument("--realization", choices=("frame", "monomial"), default="frame")
    sp.set_defaults(func=cmd_homology)

    sp = sub.add_parser("basis", help="print a basis of the spline space")
    sp.add_argument("mesh")
    degrees(sp)
    sp.add_argument("--mode", choices=("affine", "cone"), default="affine")
    sp.set_defaults(func=cmd_basis)

    sp = sub.add_parser("subdivide", help="refine a mesh")
    sp.add_argument("mesh")
    sp.add_argument("--scheme", choices=("alfeld", "facet", "double-alfeld"), required=True)
    sp.add_argument("--cell", type=int, default=0, help="cell to Alfeld-split")
    sp.add_argument("--point", help="interior point, comma separated")
    sp.add_argument("--subset", help="facet indices to split, comma separated")
    sp.add_argument("-o", "--output", help="mesh file to write (stdout if omitted)")
    sp.add_argument("--record", help="sidecar path (default OUTPUT.record.json)")
    sp.set_defaults(func=cmd_subdivide)

    sp = sub.add_parser("check-split", help="decide whether replacing a cell is a split subdivision")
    sp.add_argument("coarse")
    sp.add_argument("--cell", type=int, required=True)
    sp.add_argument("piece")
    sp.add_argument("--r", type=_r_list, required=True)
    sp.set_defaults(func=cmd_check_split)

    sp = sub.add_parser("verify", help="run the reproduction suite")
    sp.add_argument("suite", nargs="?", choices=("paper",), default="paper")
    sp.add_argument("--k", help="restrict to these dimensions, comma separated")
    sp.add_argument("--criteria", help="criterion numbers, comma separated "
                                      f"(1..{len(CRITERIA)})")
    sp.add_argument("--perturb", action="append", help="add 1 to a formula (harness self-test)")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (InputError, MeshFormatError, MeshError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
