"""Command-line interface.  JSON in, JSON out.

Exit codes: 0 success or membership, 1 well-formed non-membership (the
certificate is printed), 2 malformed input or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import io
from .chisel import ChiselSchedule, default_schedule, verify_bary
from .defcone import (
    check_membership,
    check_nested_b,
    check_submodular,
    defcone_inequalities,
    is_deformation,
    is_rank_function,
    min_monotone_shift,
    monotone_shift,
    reduce_system,
)
from .errors import BraidFanError
from .exactgeom import coarsens, normal_fan, rat
from .fans import (
    braid_fan,
    fan_from_hpolytope,
    nested_braid_fan,
    partition_labeler,
)
from .permutohedra import (
    AlphaBeta,
    is_appropriate,
    nested_facet_b,
    nested_vertices,
    perm_vertices,
    usual_facet_b,
)


class InputError(Exception):
    pass


def _emit(obj) -> None:
    sys.stdout.write(io.dumps(obj) + "\n")


def _fan_for(kind: str, d: int):
    if kind == "braid":
        return braid_fan(d)
    if kind == "nested":
        return nested_braid_fan(d)
    raise InputError(f"unknown fan kind {kind!r}")


def cmd_fan(args) -> int:
    _emit(io.fan_to_json(_fan_for(args.kind, args.d)))
    return 0


def cmd_defcone(args) -> int:
    if args.kind == "custom":
        if args.fan:
            fan = io.fan_from_json(io.load(args.fan), simplicial=True)
        elif args.p0:
            fan = fan_from_hpolytope(io.hpolytope_from_json(io.load(args.p0)))
        else:
            raise InputError("--kind custom needs --fan or --p0")
    else:
        if args.d is None:
            raise InputError("--d is required")
        fan = _fan_for(args.kind, args.d)
    ineqs = defcone_inequalities(fan)
    if args.reduce:
        ineqs = reduce_system(ineqs, farkas=(args.reduce == "farkas"))
    meta = {"kind": args.kind}
    if args.d is not None:
        meta["d"] = args.d
    _emit(io.system_to_json(ineqs, **meta))
    return 0


def _verdict_exit(verdict) -> int:
    _emit(io.verdict_to_json(verdict))
    return 0 if verdict.member else 1


def cmd_check(args) -> int:
    b = io.bvector_from_json(io.load(args.b))
    if args.system:
        return _verdict_exit(check_membership(io.system_from_json(io.load(args.system)), b))
    if not args.kind:
        raise InputError("give --system or --kind")
    d = args.d if args.d is not None else b.d
    if b.d != d:
        raise InputError(f"b is for d={b.d}, --d is {d}")
    if args.generic:
        return _verdict_exit(check_membership(defcone_inequalities(_fan_for(args.kind, d)), b))
    if args.kind == "braid":
        if b.domain != "subsets":
            raise InputError("--kind braid needs a b-vector over subsets")
        return _verdict_exit(check_submodular(b))
    if args.kind == "nested":
        if b.domain != "partitions":
            raise InputError("--kind nested needs a b-vector over partitions")
        return _verdict_exit(check_nested_b(b))
    raise InputError(f"unknown kind {args.kind!r}")


def cmd_perm(args) -> int:
    alpha = io.parse_ratvec(args.alpha)
    nested = args.beta is not None
    if nested:
        if args.M is None or args.N is None:
            raise InputError("--beta needs --M and --N")
        ab = AlphaBeta(alpha, io.parse_ratvec(args.beta), rat(args.M), rat(args.N))
        if args.check_appropriate:
            res = is_appropriate(ab)
            _emit({"appropriate": res.ok,
                   "witness": None if res.ok else {
                       "tau": list(res.tau), "i": res.position,
                       "coefficients": io.qvec(res.coefficients)}})
            return 0 if res.ok else 1
        if args.facets:
            _emit(io.bvector_to_json(nested_facet_b(ab)))
        else:
            _emit(io.vpolytope_to_json(nested_vertices(ab)))
    else:
        if args.facets:
            _emit(io.bvector_to_json(usual_facet_b(alpha)))
        else:
            _emit(io.vpolytope_to_json(perm_vertices(alpha)))
    return 0


def cmd_is_deformation(args) -> int:
    P0 = io.hpolytope_from_json(io.load(args.p0))
    Q = io.hpolytope_from_json(io.load(args.q))
    return _verdict_exit(is_deformation(P0, Q))


def cmd_normal_fan(args) -> int:
    V = io.vpolytope_from_json(io.load(args.vertices))
    labeler = partition_labeler if args.labels == "partitions" else None
    _emit(io.fan_to_json(normal_fan(V, labeler)))
    return 0


def cmd_coarsens(args) -> int:
    fine = io.fan_from_json(io.load(args.fine), simplicial=False)
    coarse = io.fan_from_json(io.load(args.coarse), simplicial=False)
    res = coarsens(fine, coarse)
    _emit({"coarsens": res.ok, "witness": res.witness})
    return 0 if res.ok else 1


def cmd_chisel_verify(args) -> int:
    if args.eps:
        sched = ChiselSchedule(io.parse_ratvec(args.eps), args.level)
    else:
        sched = default_schedule(args.d, args.level)
    report = verify_bary(args.level, args.d, sched)
    _emit(report)
    return 0 if report["pass"] else 1


def cmd_rank_check(args) -> int:
    b = io.bvector_from_json(io.load(args.b))
    verdict = is_rank_function(b)
    out = io.verdict_to_json(verdict)
    if args.shift:
        k = min_monotone_shift(b)
        shifted = monotone_shift(b, k)
        out["shift"] = {"k": k, "rank_function": is_rank_function(shifted).member,
                        "b": io.bvector_to_json(shifted)}
    _emit(out)
    return 0 if verdict.member else 1


def cmd_equivalence(args) -> int:
    from .sampling import equivalence_samples
    fan = _fan_for(args.kind, args.d)
    ineqs = defcone_inequalities(fan)
    char = check_submodular if args.kind == "braid" else check_nested_b
    samples = equivalence_samples(args.kind, args.d, args.count, args.seed)
    disagreements = []
    members = 0
    for i, b in enumerate(samples):
        g = check_membership(ineqs, b).member
        c = char(b).member
        members += g
        if g != c:
            disagreements.append({"index": i, "generic": g, "characterization": c})
    _emit({"kind": args.kind, "d": args.d, "seed": args.seed, "count": args.count,
           "members": members, "agree": not disagreements, "disagreements": disagreements})
    return 0 if not disagreements else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="braidfan", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("fan", help="emit Br_d or the nested Braid fan")
    s.add_argument("--kind", choices=["braid", "nested"], required=True)
    s.add_argument("--d", type=int, required=True)
    s.set_defaults(func=cmd_fan)

    s = sub.add_parser("defcone", help="emit the wall inequality system of a fan")
    s.add_argument("--kind", choices=["braid", "nested", "custom"], required=True)
    s.add_argument("--d", type=int)
    s.add_argument("--fan", help="fan JSON (custom)")
    s.add_argument("--p0", help="H-polytope JSON whose normal fan is used (custom)")
    s.add_argument("--reduce", choices=["pairwise", "farkas"],
                   help="drop duplicate (pairwise) or implied (farkas) inequalities")
    s.set_defaults(func=cmd_defcone)

    s = sub.add_parser("check", help="membership of b in a deformation cone")
    s.add_argument("--system", help="inequality system JSON")
    s.add_argument("--kind", choices=["braid", "nested"])
    s.add_argument("--d", type=int)
    s.add_argument("--b", required=True, help="b-vector JSON")
    s.add_argument("--generic", action="store_true",
                   help="use the wall system of the fan instead of the characterization")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("perm", help="usual or nested permutohedron")
    s.add_argument("--alpha", required=True, help="comma separated, e.g. 1,2,3,4")
    s.add_argument("--beta")
    s.add_argument("--M")
    s.add_argument("--N")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--facets", action="store_true", help="emit the facet b-vector")
    g.add_argument("--vertices", action="store_true", help="emit the vertices (default)")
    g.add_argument("--check-appropriate", action="store_true",
                   help="only test whether (M, N) is appropriate")
    s.set_defaults(func=cmd_perm)

    s = sub.add_parser("is-deformation", help="is Q a deformation of P0")
    s.add_argument("--p0", required=True)
    s.add_argument("--q", required=True)
    s.set_defaults(func=cmd_is_deformation)

    s = sub.add_parser("normal-fan", help="normal fan of a V-polytope")
    s.add_argument("--vertices", required=True)
    s.add_argument("--labels", choices=["auto", "partitions"], default="auto")
    s.set_defaults(func=cmd_normal_fan)

    s = sub.add_parser("coarsens", help="does every fine cone lie in a coarse cone")
    s.add_argument("--fine", required=True)
    s.add_argument("--coarse", required=True)
    s.set_defaults(func=cmd_coarsens)

    s = sub.add_parser("chisel-verify", help="barycentric subdivision by chiseling")
    s.add_argument("--level", type=int, choices=[1, 2], required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--eps", help="comma separated eps_1,...,eps_d (default 5^-i)")
    s.set_defaults(func=cmd_chisel_verify)

    s = sub.add_parser("rank-check", help="polymatroid rank function test")
    s.add_argument("--b", required=True)
    s.add_argument("--shift", action="store_true",
                   help="also report the smallest monotone shift")
    s.set_defaults(func=cmd_rank_check)

    s = sub.add_parser("equivalence", help="generic engine vs characterization on random b")
    s.add_argument("--kind", choices=["braid", "nested"], required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--count", type=int, default=200)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_equivalence)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except (InputError, BraidFanError, ValueError, KeyError, TypeError, OSError,
            json.JSONDecodeError, ZeroDivisionError) as exc:
        sys.stderr.write(f"braidfan: error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
