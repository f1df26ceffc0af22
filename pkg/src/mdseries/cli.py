"""Command-line front end.

Every subcommand reads a JSON system descriptor (and/or a constraint text
file), writes machine-readable JSON to stdout, and keeps human diagnostics
on stderr.  Exit codes are a stable contract: 0 success, 1 error, 2 a
witness/counterexample was found.  MDS_WORK_CAP in the environment
overrides enumeration caps.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import momentlab, series, system as system_mod, variety
from .descriptor import load_descriptor, serialize_descriptor
from .errors import MDSeriesError

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_WITNESS = 2


def _warn(msg: str) -> None:
    print(f"mds: {msg}", file=sys.stderr)


def _emit(doc: dict) -> None:
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _load_system(args, *, need_s=False):
    system, families, s, extras = load_descriptor(args.system)
    for field in extras:
        _warn(f"descriptor field {field!r} is not used by this command; ignored")
    if need_s and s is None:
        raise MDSeriesError("descriptor has no 's' field; this command evaluates the series")
    return system, families, s


def _threads(args) -> int:
    if getattr(args, "deterministic", False):
        return 1
    n = getattr(args, "threads", None)
    if n is None:
        return os.cpu_count() or 1
    return max(1, n)


def _cx(z: complex) -> list:
    return [z.real, z.imag]


def cmd_eval(args) -> int:
    system, families, s = _load_system(args, need_s=True)
    t0 = time.perf_counter()
    value = series.direct_sum(system, families, s, args.N,
                              override_convergence=args.override_convergence)
    tail = None
    if args.N >= 2:
        half = series.direct_sum(system, families, s, args.N // 2,
                                 override_convergence=args.override_convergence)
        tail = abs(value - half)
    warnings = []
    if system.empty_variety_flag:
        warnings.append("empty variety: a zero row has omega != omega'")
        _warn(warnings[-1])
    _emit({
        "direct": _cx(value),
        "tail_estimate": tail,
        "N": args.N,
        "warnings": warnings,
        "wall_time": time.perf_counter() - t0,
    })
    return EXIT_OK


def cmd_compare(args) -> int:
    system, families, s = _load_system(args, need_s=True)
    params = series.EvalParams(N=args.N, P=args.P, B=args.B)
    report = series.compare(system, families, s, params,
                            override_convergence=args.override_convergence,
                            threads=_threads(args))
    for w in report.warnings:
        _warn(w)
    _emit(report.to_dict())
    return EXIT_OK


def cmd_normalize(args) -> int:
    system, families, s = _load_system(args)
    canonical, ops = system_mod.normalize(system)
    doc = serialize_descriptor(canonical, families=None, s=s)
    _emit({
        "system": doc,
        "operations": [_op_to_json(op) for op in ops],
        "dropped_rows": system.m - canonical.m,
        "empty_variety": canonical.empty_variety_flag,
    })
    return EXIT_OK


def _op_to_json(op) -> dict:
    if isinstance(op, system_mod.Swap):
        return {"op": "swap", "i": op.i, "j": op.j}
    if isinstance(op, system_mod.Negate):
        return {"op": "negate", "i": op.i}
    return {"op": "add", "i": op.i, "j": op.j, "b": op.b}


def _load_variety(args):
    if args.constraints:
        if args.t is None:
            raise MDSeriesError("--t is required with --constraints")
        with open(args.constraints) as fh:
            text = fh.read()
        return variety.parse_constraints(text, args.t)
    if args.system:
        return load_descriptor(args.system)[0]
    raise MDSeriesError("give either --constraints (with --t) or --system")


def cmd_check_s(args) -> int:
    V = _load_variety(args)
    witness = variety.check_property_S(V, args.N)
    if witness is None:
        _emit({"result": "no_counterexample", "N": args.N})
        return EXIT_OK
    _warn("Property (S) violated; witness follows on stdout")
    _emit({
        "result": "witness",
        "x": list(witness.x.coords),
        "y": list(witness.y.coords),
        "choice": {str(p): side for p, side in witness.choice},
        "point": list(witness.point.coords),
    })
    return EXIT_WITNESS


def cmd_reduce_support(args) -> int:
    system, _, _ = _load_system(args)
    result = system_mod.support_reducible(system.A, args.bound)
    if result.reducible:
        _emit({
            "result": "reducible",
            "basis": [list(row) for row in result.basis],
            "coeff_bound": result.coeff_bound,
        })
    else:
        _emit({
            "result": "irreducible_within_bound",
            "coeff_bound": result.coeff_bound,
        })
    return EXIT_OK


def cmd_moment(args) -> int:
    system, families, s = _load_system(args, need_s=True)
    q_list = [int(x) for x in args.q.split(",") if x.strip()]
    experiment = momentlab.decay_experiment(system, families, s, q_list, args.N)
    for w in experiment.warnings:
        _warn(w)
    if args.csv:
        with open(args.csv, "w") as fh:
            for row in experiment.csv_rows():
                fh.write(",".join(str(x) for x in row) + "\n")
        _warn(f"wrote {args.csv}")
    _emit(experiment.to_dict())
    return EXIT_OK


def cmd_enumerate(args) -> int:
    V = _load_variety(args)
    points = variety.enumerate_box(V, args.N)
    _emit({
        "N": args.N,
        "count": len(points),
        "points": [list(pt.coords) for pt in points],
    })
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mds",
        description="Evaluate multiple Dirichlet series restricted to Laurent "
                    "monomial varieties, verify their Euler products, and probe "
                    "Property (S).")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, *, system=True, constraints=False, N=None):
        if system:
            p.add_argument("--system", metavar="FILE",
                           required=not constraints,
                           help="JSON system descriptor")
        if constraints:
            p.add_argument("--constraints", metavar="FILE",
                           help="constraint expression file (with --t)")
            p.add_argument("--t", type=int, help="variable count for --constraints")
        if N is not None:
            p.add_argument("--N", type=int, default=N, help="box bound")
        p.add_argument("--threads", type=int, default=None,
                       help="worker processes (default: available cores)")
        p.add_argument("--deterministic", action="store_true",
                       help="single-threaded ordered reduction")

    p = sub.add_parser("eval", help="direct truncated sum")
    add_common(p, N=1000)
    p.add_argument("--override-convergence", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("compare", help="direct sum vs Euler product")
    add_common(p, N=1000)
    p.add_argument("--P", type=int, default=1000, help="prime bound")
    p.add_argument("--B", type=int, default=None, help="local exponent bound")
    p.add_argument("--override-convergence", action="store_true")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("normalize", help="canonical form under the row operations")
    add_common(p)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("check-s", help="search for a Property (S) counterexample")
    add_common(p, system=False, constraints=True, N=20)
    p.add_argument("--system", metavar="FILE", help="JSON system descriptor")
    p.set_defaults(func=cmd_check_s)

    p = sub.add_parser("reduce-support", help="small-support row-lattice basis search")
    add_common(p)
    p.add_argument("--bound", type=int, default=10, help="coefficient bound")
    p.set_defaults(func=cmd_reduce_support)

    p = sub.add_parser("moment", help="character-moment error decay experiment")
    add_common(p, N=1000)
    p.add_argument("--q", required=True, help="comma list of prime moduli")
    p.add_argument("--csv", metavar="FILE", help="write (q, error) rows as CSV")
    p.set_defaults(func=cmd_moment)

    p = sub.add_parser("enumerate", help="list box solutions")
    add_common(p, system=False, constraints=True, N=20)
    p.add_argument("--system", metavar="FILE", help="JSON system descriptor")
    p.set_defaults(func=cmd_enumerate)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MDSeriesError as exc:
        _warn(str(exc))
        return EXIT_ERROR
    except (ValueError, OSError) as exc:
        _warn(str(exc))
        return EXIT_ERROR


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
