"""Command-line front end.

Exit status: 0 on success, 2 on usage or domain errors, 3 when a
theorem-backed verification suite reports violations.
"""
from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import analytic, constructions, cube, fitting
from .analytic import BoundConfig
from .errors import CubeError, ViolationFound
from .explorer import scans
from .explorer.report import ScanReport, jsonable

EXIT_USAGE = 2
EXIT_VIOLATION = 3


class UsageError(CubeError):
    pass


# ---------------------------------------------------------------- input

def _int_list(text: str) -> list[int]:
    text = text.strip()
    return [int(x) for x in text.split(",") if x.strip()] if text else []


def _fraction_list(text: str) -> list[Fraction]:
    return [Fraction(x.strip()) for x in text.split(",") if x.strip()]


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _read_set(args) -> cube.CubeSet:
    given = [x for x in (args.points, args.hex, args.file) if x is not None]
    if len(given) != 1:
        raise UsageError("give exactly one of --points, --hex, --file")
    if args.n is None:
        raise UsageError("--n is required")
    if args.hex is not None:
        return cube.from_hex(args.n, args.hex)
    if args.points is not None:
        return cube.make_set(args.n, _int_list(args.points))
    with open(args.file) as fh:
        verts = [int(line) for line in (l.strip() for l in fh) if line and not line.startswith("#")]
    return cube.make_set(args.n, verts)


def _config(args) -> BoundConfig:
    kw = {}
    if getattr(args, "epsilon_c", None) is not None:
        kw["epsilon_c"] = args.epsilon_c
    if getattr(args, "root_tol", None) is not None:
        kw["root_tol"] = args.root_tol
    return BoundConfig(**kw)


# ---------------------------------------------------------------- payloads

def _subcube_payload(S: cube.Subcube) -> dict:
    return {"n": S.n, "codim": S.codim, "fixed": [list(p) for p in S.fixed],
            "hex": cube.to_hex(cube.realize_subcube(S))}


def _set_payload(A: cube.CubeSet) -> dict:
    out = {"n": A.n, "hex": cube.to_hex(A), "size": A.size,
           "boundary": cube.edge_boundary(A), "internal_edges": cube.internal_edges(A)}
    out["excess"] = cube.excess(A) if A.size else None
    return out


def cmd_boundary(args) -> dict:
    A = _read_set(args)
    out = _set_payload(A)
    out["iso_lower_bound"] = analytic.iso_lower_bound(A.n, A.size) if A.size else 0.0
    return out


def cmd_profile(args) -> dict:
    A = _read_set(args)
    prof = cube.influences(A)
    tal = analytic.talagrand_functional(prof)
    out = {"n": A.n, "hex": cube.to_hex(A), "size": A.size, "p": prof.p,
           "boundary": prof.boundary, "total_influence": prof.total_influence,
           "dir_boundary": list(prof.dir_boundary), "beta": list(prof.beta),
           "gamma": list(prof.gamma) if A.size else None,
           "epsilon0": prof.epsilon0 if A.size else None,
           "talagrand": {"lhs": tal.lhs, "rhs_over_K": tal.rhs_over_constant}}
    if A.n >= 2:
        kkl = analytic.kkl_functional(prof)
        out["kkl"] = {"lhs": kkl.lhs, "rhs_over_C": kkl.rhs_over_constant}
    return out


def cmd_fit(args) -> dict:
    A = _read_set(args)
    if args.method == "exact":
        res = fitting.fit_exact(A)
    else:
        res = fitting.fit_greedy(A, _config(args), heuristic=args.heuristic)
    dec = fitting.decompose(A, res.cube)
    return {
        "n": A.n, "hex": cube.to_hex(A), "size": A.size, "method": res.method,
        "codim": res.cube.codim, "cube": _subcube_payload(res.cube),
        "symdiff": res.symdiff, "delta": res.delta,
        "trace": [{"coordinate": s.coordinate, "value": s.value, "gamma": s.gamma,
                   "dimension": s.dimension} for s in res.trace],
        "decomposition": {"N": dec.N, "B_size": dec.B_size, "D_size": dec.D_size,
                          "phi": dec.phi, "psi": dec.psi, "bound": dec.bound},
    }


def _parse_fixed(n: int, text: str) -> cube.Subcube:
    pairs = {}
    for item in (x for x in text.split(",") if x.strip()):
        i, _, a = item.partition("=")
        pairs[int(i)] = int(a)
    return cube.Subcube.from_dict(n, pairs)


def cmd_gen(args) -> dict:
    kind = args.kind
    out: dict = {"kind": kind}
    if kind == "harper":
        _need(args, "n", "k")
        A = constructions.harper_set(args.n, args.k)
    elif kind == "tribes":
        _need(args, "k", "l")
        A = constructions.tribes(args.k, args.l)
        st = constructions.tribes_stats(args.k, args.l)
        out["stats"] = {"k": st.k, "l": st.l, "n": st.n, "size": st.size,
                        "boundary": st.boundary, "beta": st.beta}
    elif kind == "extremal":
        _need(args, "n", "N", "M")
        A, C = constructions.extremal_near_cube(args.n, args.N, args.M)
        out["cube"] = _subcube_payload(C)
        out["delta"] = Fraction(cube.subcube_distance(A, C), A.size)
    else:
        _need(args, "n")
        S = _parse_fixed(args.n, args.fixed or "")
        A = cube.realize_subcube(S)
        out["cube"] = _subcube_payload(S)
    out.update(_set_payload(A))
    return out


def _need(args, *names) -> None:
    missing = [f"--{x}" for x in names if getattr(args, x) is None]
    if missing:
        raise UsageError(f"gen {args.kind} requires {', '.join(missing)}")


def cmd_junta(args) -> dict:
    A = _read_set(args)
    J = _int_list(args.coords)
    return {"n": A.n, "hex": cube.to_hex(A), "coords": J,
            "distance": fitting.junta_distance(A, J)}


def cmd_dense(args) -> dict:
    A = _read_set(args)
    S, density = fitting.dense_subcube(A, args.max_codim)
    return {"n": A.n, "hex": cube.to_hex(A), "max_codim": args.max_codim,
            "cube": _subcube_payload(S), "density": density,
            "p": Fraction(A.size, 1 << A.n)}


def cmd_verify(args) -> list:
    suites = []
    for s in args.suite:
        suites += [x for x in s.split(",") if x]
    return [scans.verify_suite(args.n, s, workers=args.workers) for s in suites]


def cmd_scan(args) -> ScanReport:
    if args.which == "f-table":
        grid = _fraction_list(args.grid) if args.grid else scans.DEFAULT_GRID
        return scans.f_table(args.n, grid, workers=args.workers)
    return scans.constant_scan(args.n, args.which, workers=args.workers)


def cmd_probe(args) -> ScanReport:
    return scans.conjecture_probe(args.n, args.which, _float_list(args.l_prime),
                                  workers=args.workers)


# ---------------------------------------------------------------- output

def _flatten(prefix: str, x, out: list) -> None:
    if isinstance(x, dict) and not set(x) == {"num", "den"}:
        for k, v in x.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, out)
    elif isinstance(x, dict):
        out.append((prefix, str(x["num"]) if x["den"] == 1 else f"{x['num']}/{x['den']}"))
    elif isinstance(x, list):
        out.append((prefix, json.dumps(x)))
    else:
        out.append((prefix, x))


def _emit(result, mode: str, stream) -> None:
    reports = result if isinstance(result, list) else [result] if isinstance(result, ScanReport) else None
    if mode == "json":
        payload = ({"reports": [r.to_dict() for r in reports]}
                   if isinstance(result, list) else
                   result.to_dict() if isinstance(result, ScanReport) else jsonable(result))
        stream.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        return
    if reports is not None:
        for r in reports:
            if mode == "csv":
                stream.write(r.to_csv())
            else:
                _human_report(r, stream)
        return
    pairs: list = []
    _flatten("", jsonable(result), pairs)
    if mode == "csv":
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(["field", "value"])
        w.writerows(pairs)
    else:
        stream.write(f"# generated {_dt.datetime.now().isoformat(timespec='seconds')}\n")
        width = max(len(k) for k, _ in pairs)
        for k, v in pairs:
            stream.write(f"{k:<{width}}  {'' if v is None else v}\n")


def _human_report(r: ScanReport, stream) -> None:
    stream.write(f"# {r.scan_id}  n={r.n}  generated "
                 f"{_dt.datetime.now().isoformat(timespec='seconds')}\n")
    for k, v in r.summary.items():
        stream.write(f"{k}: {v}\n")
    for k, v in r.constants.items():
        stream.write(f"{k}: {v}\n")
    table = list(csv.reader(io.StringIO(r.to_csv())))
    if len(table) > 1:
        widths = [max(len(row[c]) for row in table) for c in range(len(table[0]))]
        for row in table:
            stream.write("  ".join(cell.rjust(w) for cell, w in zip(row, widths)) + "\n")
    for v in r.violations[:20]:
        stream.write(f"VIOLATION {v.check} set={v.set_hex} expected={v.expected} actual={v.actual}\n")
    if len(r.violations) > 20:
        stream.write(f"... {len(r.violations) - 20} more\n")


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="mode", action="store_const", const="json")
    fmt.add_argument("--csv", dest="mode", action="store_const", const="csv")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--n", type=int)

    set_in = argparse.ArgumentParser(add_help=False)
    set_in.add_argument("--points", help="comma-separated vertex indices")
    set_in.add_argument("--hex", help="membership vector, most significant nibble first")
    set_in.add_argument("--file", help="file with one vertex index per line")

    bounds = argparse.ArgumentParser(add_help=False)
    bounds.add_argument("--epsilon-c", type=float)
    bounds.add_argument("--root-tol", type=float)
    bounds.add_argument("--heuristic", action="store_true")

    p = argparse.ArgumentParser(prog="cubeiso", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("boundary", parents=[common, set_in], help="edge boundary of a set")
    s.set_defaults(func=cmd_boundary)
    s = sub.add_parser("profile", parents=[common, set_in], help="influence profile")
    s.set_defaults(func=cmd_profile)
    s = sub.add_parser("fit", parents=[common, set_in, bounds], help="closest subcube")
    s.add_argument("--method", choices=("exact", "greedy"), default="exact")
    s.set_defaults(func=cmd_fit)
    s = sub.add_parser("gen", parents=[common], help="generate a construction")
    s.add_argument("kind", choices=("harper", "tribes", "extremal", "subcube"))
    s.add_argument("--k", type=int)
    s.add_argument("--l", type=int)
    s.add_argument("--N", type=int)
    s.add_argument("--M", type=int)
    s.add_argument("--fixed", help="subcube assignment, e.g. 1=0,3=1")
    s.set_defaults(func=cmd_gen)
    s = sub.add_parser("junta", parents=[common, set_in], help="distance to J-juntas")
    s.add_argument("--coords", required=True)
    s.set_defaults(func=cmd_junta)
    s = sub.add_parser("dense", parents=[common, set_in], help="densest low-codimension subcube")
    s.add_argument("--max-codim", type=int, required=True)
    s.set_defaults(func=cmd_dense)
    s = sub.add_parser("verify", parents=[common], help="exhaustive theorem suites")
    s.add_argument("--suite", action="append", required=True,
                   help=f"one of {', '.join(scans.SUITES)} (repeatable)")
    s.set_defaults(func=cmd_verify)
    s = sub.add_parser("scan", parents=[common], help="f-table and constant scans")
    s.add_argument("which", choices=("f-table", "talagrand", "kkl"))
    s.add_argument("--grid", help="comma-separated δ* values, e.g. 1/2,1/4")
    s.set_defaults(func=cmd_scan)
    s = sub.add_parser("probe", parents=[common], help="conjecture probes")
    s.add_argument("which", choices=("allj", "density"))
    s.add_argument("--l-prime", default="1,2,3")
    s.set_defaults(func=cmd_probe)
    return p


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if getattr(args, "workers", 1) < 1:
            raise UsageError("--workers must be >= 1")
        if args.command in ("verify", "scan", "probe") and args.n is None:
            raise UsageError("--n is required")
        result = args.func(args)
        _emit(result, args.mode or "human", stdout)
        reports = result if isinstance(result, list) else [result]
        bad = [r for r in reports if isinstance(r, ScanReport)
               and r.scan_id.startswith("verify/") and r.violations]
        if bad:
            raise ViolationFound(bad[0])
    except ViolationFound as exc:
        print(f"cubeiso: {exc}", file=stderr)
        return EXIT_VIOLATION
    except (CubeError, OSError, ZeroDivisionError) as exc:
        print(f"cubeiso: error: {exc}", file=stderr)
        return EXIT_USAGE
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
