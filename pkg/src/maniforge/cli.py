"""Command line entry point ``forge``.

Exit codes: 0 ok, 1 the property asked about does not hold, 2 bad input.
Results go to stdout as JSON with sorted keys; wall time is left out unless
``--time`` is given so that repeated runs print identical bytes.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import acceptance
from .amalgamation import flat_amalgamate, is_flat
from .automorphisms import automorphism_group, is_isomorphic, num_orbits, symmetry_type_graph
from .caps import CapExceeded
from .constructions import (
    CATALOG,
    SEEDS,
    color_coded,
    ditope,
    flat_extension,
    seed,
    toroid_44,
    toroid_cubic,
    two_hat,
    two_hat_s_minus1,
)
from .extender import ExtenderError, derived_maniplex, is_polytopal
from .friendly import (
    friendly_group,
    has_unique_universal_extension,
    heart_oracle,
    predicted_stg_universal,
    universal_extensions_isomorphic,
)
from .groups import GroupSpecError
from .io import ParseError, RunReport, Timer, export_dot, load_extender, load_mpx, save_extender, save_mpx
from .premaniplex import StructureError, faces, facet_labels, is_maniplex, validate_premaniplex
from .universal import ball_local_checks, rn_order_universal, universal_ball

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _stg_json(stg) -> dict:
    return {"nodes": stg.num_nodes, "labels": list(stg.labels),
            "adjacency": [list(r) for r in stg.graph.adjacency]}


def _summary(P) -> dict:
    ok, reason = is_maniplex(P)
    return {"rank": P.rank, "flags": P.num_flags, "maniplex": ok, "maniplex_reason": reason,
            "faces": [len(faces(P, i)) for i in range(P.rank)] if ok else None}


def _write_outputs(P, args, report) -> None:
    if getattr(args, "output", None):
        save_mpx(P, args.output)
        report.results["written"] = str(args.output)
    if getattr(args, "dot", None):
        Path(args.dot).write_text(export_dot(P))


# subcommands -------------------------------------------------------------

def cmd_validate(args, report):
    report.add_input(args.file)
    P = load_mpx(args.file)
    v = validate_premaniplex(P)
    res = {"premaniplex": v.ok, "involution_failures": v.involution_failures,
           "commutation_failures": v.commutation_failures[:20], "semiedges": len(v.semiedges)}
    ok = v.ok
    if ok and args.level in ("maniplex", "polytope"):
        ok, reason = is_maniplex(P)
        res.update(maniplex=ok, maniplex_reason=reason)
    if ok and args.level == "polytope":
        pr = is_polytopal(P)
        res.update(polytopal=pr.ok, polytopal_witness=pr.witness)
        ok = pr.ok
    report.results.update(res)
    return EXIT_OK if ok else EXIT_VIOLATION


def _build_extender(args):
    name, params = args.name, args.params
    try:
        ints = [int(p) for p in params]
    except ValueError:
        raise InputError(f"numeric parameters expected, got {params}") from None
    if name in ("toroid44", "toroid"):
        if name == "toroid44":
            if len(ints) != 2:
                raise InputError("toroid44 takes a b")
            return toroid_44(*ints)
        if len(ints) < 2 or len(ints) != ints[0] + 1:
            raise InputError("toroid takes n a1 .. an")
        return toroid_cubic(ints[0], *ints[1:])
    if args.seed is None:
        raise InputError(f"{name} needs --seed")
    K = seed(args.seed)
    if name == "ditope":
        return ditope(K)
    if name == "two-hat":
        return two_hat(K)
    if name == "two-hat-s":
        if len(ints) != 1:
            raise InputError("two-hat-s takes s")
        return two_hat_s_minus1(K, ints[0])
    if name == "flat":
        if len(ints) != 1:
            raise InputError("flat takes 2m")
        return flat_extension(K, ints[0])
    if name == "color-coded":
        if not args.colors:
            raise InputError("color-coded needs --colors")
        colors = [int(c) for c in args.colors.split(",")]
        labels = sorted(set(facet_labels(K)))
        if len(colors) != len(labels):
            raise InputError(f"--colors needs {len(labels)} entries, one per facet")
        return color_coded(K, dict(zip(labels, colors)))
    raise InputError(f"unknown construction {name!r}")


def cmd_build(args, report):
    if args.name == "seed":
        if len(args.params) != 1:
            raise InputError("build seed takes a seed name")
        P = seed(args.params[0])
        report.results.update(_summary(P))
        _write_outputs(P, args, report)
        return EXIT_OK
    ext = _build_extender(args)
    D = derived_maniplex(ext)
    report.results.update(_summary(D.premaniplex))
    report.results["extender"] = ext.name
    _write_outputs(D.premaniplex, args, report)
    if args.ext:
        save_extender(ext, args.ext)
    return EXIT_OK


def cmd_extend(args, report):
    report.add_input(args.file)
    ef = load_extender(args.file)
    D = derived_maniplex(ef.extender())
    report.results.update(_summary(D.premaniplex))
    report.results["diagnostics"] = D.diagnostics
    if args.polytopal and D.maniplex:
        pr = is_polytopal(D.premaniplex)
        report.results.update(polytopal=pr.ok, polytopal_witness=pr.witness)
    _write_outputs(D.premaniplex, args, report)
    return EXIT_OK if D.maniplex else EXIT_VIOLATION


def cmd_universal(args, report):
    report.add_input(args.pre)
    pre = load_extender(args.pre).pre()
    ball = universal_ball(pre, args.radius)
    census = ball.census()
    res = {"radius": args.radius, "census": census, "flags": ball.num_flags,
           "rn_order": rn_order_universal(pre)}
    if args.stats:
        checks = ball_local_checks(ball)
        res.update(interior_ok=checks.ok, interior_flags=checks.interior_flags,
                   failures=checks.failures[:20], walk_returns=checks.walk_returns)
    report.results.update(res)
    return EXIT_OK


def cmd_friendly(args, report):
    report.add_input(args.pre)
    pre = load_extender(args.pre).pre()
    aut = automorphism_group(pre.base)
    h = friendly_group(pre.base, pre.rn, aut)
    report.results.update(aut_order=aut.order, friendly_order=h.order,
                          members=sorted(tuple(int(x) for x in aut.perms[t]) for t in h.members))
    if args.oracle:
        o = heart_oracle(pre.base, pre.rn, aut)
        report.results["oracle_order"] = o.order
        report.results["oracle_agrees"] = o.as_set() == h.as_set()
        return EXIT_OK if o.as_set() == h.as_set() else EXIT_VIOLATION
    return EXIT_OK


def cmd_stg(args, report):
    report.add_input(args.file)
    P = load_mpx(args.file)
    aut = automorphism_group(P)
    report.results.update(aut_order=aut.order, orbits=num_orbits(P, aut),
                          stg=_stg_json(symmetry_type_graph(P, aut)))
    return EXIT_OK


def cmd_stg_universal(args, report):
    report.add_input(args.pre)
    pre = load_extender(args.pre).pre()
    report.results["stg"] = _stg_json(predicted_stg_universal(pre.base, pre.rn))
    return EXIT_OK


def cmd_unique_universal(args, report):
    report.add_input(args.file)
    r = has_unique_universal_extension(load_mpx(args.file))
    report.results["unique"] = r.unique
    if r.witness is not None:
        F, F2, pairs = r.witness
        report.results["witness"] = {"facet": F, "other_facet": F2, "map": [list(p) for p in pairs]}
    return EXIT_OK if r.unique else EXIT_VIOLATION


def cmd_univ_iso(args, report):
    report.add_input(args.pre1)
    report.add_input(args.pre2)
    a, b = load_extender(args.pre1).pre(), load_extender(args.pre2).pre()
    if a.base.adjacency != b.base.adjacency:
        raise InputError("both pre-extenders must share one base maniplex")
    r = universal_extensions_isomorphic(a.base, a.rn, b.rn)
    report.results.update(isomorphic=r.isomorphic, tau=r.tau)
    return EXIT_OK if r.isomorphic else EXIT_VIOLATION


def cmd_amalgamate(args, report):
    report.add_input(args.coext)
    report.add_input(args.ext)
    co = load_extender(args.coext)
    if co.kind != "coextender":
        raise InputError(f"{args.coext} is not a coextender file")
    ext = load_extender(args.ext).extender()
    try:
        A = flat_amalgamate(co.extender(), ext)
    except ExtenderError as err:
        if err.witness is None:
            raise
        report.results.update(rejected=str(err), witness=err.witness)
        return EXIT_VIOLATION
    P = A.premaniplex
    report.results.update(_summary(P))
    report.results["flat"] = is_flat(P)
    _write_outputs(P, args, report)
    return EXIT_OK if A.maniplex else EXIT_VIOLATION


def cmd_iso(args, report):
    report.add_input(args.a)
    report.add_input(args.b)
    w = is_isomorphic(load_mpx(args.a), load_mpx(args.b))
    report.results.update(isomorphic=w is not None, map=list(w) if w is not None else None)
    return EXIT_OK if w is not None else EXIT_VIOLATION


def cmd_accept(args, report):
    numbers = None
    if args.criteria:
        try:
            numbers = [int(x) for x in args.criteria.split(",")]
        except ValueError:
            raise InputError("--criteria takes comma separated numbers") from None
        if any(not 1 <= n <= len(acceptance.CRITERIA) for n in numbers):
            raise InputError(f"criteria are numbered 1..{len(acceptance.CRITERIA)}")
    suite, results = acceptance.acceptance_suite(numbers)
    for r in results:
        print(r.line(), file=sys.stderr)
    report.params.update(suite.params)
    report.results.update(suite.results)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VIOLATION


def cmd_catalog(args, report):
    report.results["constructions"] = [
        {"name": e.name, "params": e.params, "flags": e.flags, "description": e.description} for e in CATALOG
    ]
    report.results["seeds"] = sorted(SEEDS) + ["polygonK", "cubeN", "simplexN"]
    return EXIT_OK


# parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--time", action="store_true", help="include wall time in the JSON report")
    common.add_argument("--report", metavar="PATH", help="also write the JSON report to PATH")
    p = argparse.ArgumentParser(prog="forge", description="Cayley extensions of maniplexes.")
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    s = cmd("validate", help="check premaniplex, maniplex and polytope axioms")
    s.add_argument("file")
    s.add_argument("--level", choices=["premaniplex", "maniplex", "polytope"], default="polytope")
    s.set_defaults(fn=cmd_validate)

    s = cmd("build", help="build a seed or a catalog extension")
    s.add_argument("name", help="seed, or a construction from 'forge catalog list'")
    s.add_argument("params", nargs="*")
    s.add_argument("--seed")
    s.add_argument("--colors", help="facet colors in facet-label order, e.g. 0,1,0,1")
    s.add_argument("-o", "--output")
    s.add_argument("--ext", help="also write the extender file (and its base) here")
    s.add_argument("--dot")
    s.set_defaults(fn=cmd_build)

    s = cmd("extend", help="derive the maniplex of an extender file")
    s.add_argument("file")
    s.add_argument("-o", "--output")
    s.add_argument("--dot")
    s.add_argument("--polytopal", action="store_true")
    s.set_defaults(fn=cmd_extend)

    s = cmd("universal", help="ball of the universal extension")
    s.add_argument("--pre", required=True)
    s.add_argument("--radius", type=int, default=3)
    s.add_argument("--stats", action="store_true")
    s.set_defaults(fn=cmd_universal)

    s = cmd("friendly", help="greatest rn-friendly subgroup")
    s.add_argument("--pre", required=True)
    s.add_argument("--oracle", action="store_true")
    s.set_defaults(fn=cmd_friendly)

    s = cmd("stg", help="symmetry type graph of a flag graph")
    s.add_argument("file")
    s.set_defaults(fn=cmd_stg)

    s = cmd("stg-universal", help="symmetry type graph of the universal extension")
    s.add_argument("--pre", required=True)
    s.set_defaults(fn=cmd_stg_universal)

    s = cmd("unique-universal", help="does the maniplex have exactly one universal extension")
    s.add_argument("file")
    s.set_defaults(fn=cmd_unique_universal)

    s = cmd("univ-iso", help="compare the universal extensions of two pre-extenders")
    s.add_argument("--pre1", required=True)
    s.add_argument("--pre2", required=True)
    s.set_defaults(fn=cmd_univ_iso)

    s = cmd("amalgamate", help="flat amalgamation of a coextender and an extender")
    s.add_argument("--coext", required=True)
    s.add_argument("--ext", required=True)
    s.add_argument("-o", "--output")
    s.add_argument("--dot")
    s.set_defaults(fn=cmd_amalgamate)

    s = cmd("iso", help="isomorphism test for two flag graphs")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(fn=cmd_iso)

    s = cmd("accept", help="run the acceptance suite")
    s.add_argument("--criteria", help="comma separated subset, e.g. 1,5,9")
    s.set_defaults(fn=cmd_accept)

    s = cmd("catalog", help="named seeds and constructions")
    s.add_argument("action", choices=["list"])
    s.set_defaults(fn=cmd_catalog)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    report = RunReport(args.command, {k: v for k, v in vars(args).items()
                                      if k not in ("fn", "command", "time", "report")})
    try:
        with Timer() as t:
            code = args.fn(args, report)
    except (InputError, ParseError, StructureError, ExtenderError, GroupSpecError, KeyError, OSError) as err:
        msg = err.args[0] if isinstance(err, KeyError) and err.args else err
        print(f"forge: error: {msg}", file=sys.stderr)
        return EXIT_INPUT
    except CapExceeded as err:
        print(f"forge: error: {err} (raise it with FORGE_CAPS)", file=sys.stderr)
        return EXIT_INPUT
    report.wall_time = t.elapsed
    text = report.to_json(include_time=args.time)
    sys.stdout.write(text)
    if args.report:
        Path(args.report).write_text(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
