"""Command-line front end: validation, telescoping, orbits, group reports,
quotient fibres, rendering, function-system checks, extension checks, and the
exact finite-model verifications.  Output is line-oriented ``key: value``;
exit code 0 means success, 1 a failed check, 2 a usage or parse error."""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import io
from .diagram import has_full_edge_connections, incidence_matrix, telescope, validate
from .dimgroup import (
    Positivity,
    dg_equal,
    element,
    identify_group,
    is_positive,
    order_unit,
    pairing,
    trace,
)
from .dps import regularity_witness_dps, fibre, phi_tilde, ext_point, validate_assignment
from .embedding import check_conditions, classify_fibre
from .finmodel import hadamard_verify
from .geometry import render_scene, render_schematic
from .ifs import Overlapping, Separated, strong_separation
from .kreport import dps_invariants, factor_invariants, measure_vanishing
from .pathspace import UndecidableTail
from .vershik import OrderedSystem, orbit


class CheckFailed(Exception):
    pass


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    if not hasattr(args, "run"):
        parser.print_help()
        return 2
    try:
        args.run(args)
        return 0
    except CheckFailed as e:
        print(f"check failed: {e}", file=sys.stderr)
        return 1
    except (OSError, ValueError, KeyError, UndecidableTail) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def build_parser():
    p = argparse.ArgumentParser(
        prog="bratteli",
        description="diagram dynamics, path-space quotients, fibred extensions, and their invariants",
    )
    sub = p.add_subparsers()

    v = sub.add_parser("validate", help="check diagram axioms or embedding conditions")
    v.add_argument("--diagram", help="diagram file or catalog:NAME")
    v.add_argument("--embedding", help="embedding file or catalog:NAME")
    v.set_defaults(run=cmd_validate)

    t = sub.add_parser("telescope", help="contract a diagram to cut levels")
    t.add_argument("--diagram", required=True)
    t.add_argument("--cuts", default="", help="comma-separated cut levels")
    t.add_argument("--stride", type=int, help="repeat stride for stationary diagrams")
    t.add_argument("--out", required=True)
    t.set_defaults(run=cmd_telescope)

    ver = sub.add_parser("vershik", help="print an orbit of the adic map")
    ver.add_argument("--diagram", required=True)
    ver.add_argument("--path", required=True, help="path literal")
    ver.add_argument("--steps", type=int, default=1)
    ver.set_defaults(run=cmd_vershik)

    dg = sub.add_parser("dimgroup", help="limit-group operations")
    dg.add_argument("--diagram", required=True)
    dg.add_argument("--element", required=True, help="level:v1,v2,...")
    dg.add_argument("--op", choices=["positive", "equal", "pair"], required=True)
    dg.add_argument("--other", help="second element for --op equal")
    dg.add_argument("--depth-cap", type=int, default=32)
    dg.set_defaults(run=cmd_dimgroup)

    tr = sub.add_parser("trace", help="invariant vertex weights")
    tr.add_argument("--diagram", required=True)
    tr.add_argument("--depth", type=int, help="finite-depth mode")
    tr.add_argument("--levels", type=int, default=6)
    tr.set_defaults(run=cmd_trace)

    q = sub.add_parser("quotient", help="fibre classification under a double embedding")
    q.add_argument("--embedding", required=True)
    q.add_argument("--path", required=True)
    q.set_defaults(run=cmd_quotient)

    r = sub.add_parser("render", help="emit an SVG scene")
    r.add_argument("--example", choices=["3.2", "3.4", "3.5"], help="stock scene")
    r.add_argument("--diagram", help="schematic of a diagram")
    r.add_argument("--stage", type=int, default=4)
    r.add_argument("--out", required=True)
    r.set_defaults(run=cmd_render)

    i = sub.add_parser("ifs", help="function-system cells and separation")
    i.add_argument("--spec", required=True, help="system file or catalog:NAME")
    i.add_argument("--cells", type=int, default=0)
    i.add_argument("--check-separation", action="store_true")
    i.set_defaults(run=cmd_ifs)

    d = sub.add_parser("dps", help="extension assignment operations")
    d.add_argument("action", choices=["validate", "fibre", "step", "regularity"])
    d.add_argument("--assignment", required=True, help="assignment file or catalog:NAME")
    d.add_argument("--depth", type=int, default=8, help="materialized depth for catalog assignments")
    d.add_argument("--path", help="path literal")
    d.add_argument("--coord", help="comma-separated rationals")
    d.add_argument("--eps", default="1/16")
    d.add_argument("--samples", type=int, default=100)
    d.add_argument("--seed", type=int, default=0)
    d.set_defaults(run=cmd_dps)

    k = sub.add_parser("ktheory", help="invariant reports")
    k.add_argument("what", choices=["report"])
    k.add_argument("--embedding")
    k.add_argument("--dps")
    k.add_argument("--depth", type=int, default=4)
    k.add_argument("--shape", choices=["cube", "code", "gasket", "carpet-cube"])
    k.add_argument("--measure-level", type=int, help="also check the vanishing bound at this level")
    k.set_defaults(run=cmd_ktheory)

    w = sub.add_parser("verify", help="exact finite-model verifications")
    w.add_argument("what", choices=["hadamard"])
    w.add_argument("--n", type=int, default=2)
    w.set_defaults(run=cmd_verify)
    return p


def _emit(key, value):
    print(f"{key}: {value}")


def cmd_validate(args):
    if not args.diagram and not args.embedding:
        raise ValueError("give --diagram or --embedding")
    ok = True
    if args.diagram:
        d = io.load_diagram(args.diagram)
        issues = validate(d)
        _emit("diagram", args.diagram)
        _emit("violations", len(issues))
        for v in issues:
            _emit("violation", v)
        _emit("full-edge-connections", has_full_edge_connections(d, 12))
        ok = ok and not issues
    if args.embedding:
        pair = io.load_embedding(args.embedding)
        report = check_conditions(pair)
        for r in report:
            _emit("condition", f"{r.condition} {'ok' if r.ok else 'FAIL ' + r.witness}")
        ok = ok and all(r.ok for r in report)
    if not ok:
        raise CheckFailed("validation reported problems")


def cmd_telescope(args):
    d = io.load_diagram(args.diagram)
    cuts = [int(c) for c in args.cuts.split(",") if c] or None
    t = telescope(d, cuts=cuts, stride=args.stride)
    io.save_diagram(args.out, t)
    _emit("levels", list(t.levels))
    _emit("edges-per-level", [t.edge_count(n) for n in range(1, t.materialized_depth + 1)])
    _emit("out", args.out)


def cmd_vershik(args):
    d = io.load_diagram(args.diagram)
    sys_ = OrderedSystem(d)
    x = io.parse_path(args.path, d)
    for i, y in enumerate(orbit(sys_, x, args.steps)):
        _emit(f"step {i}", io.format_path(y))


def _parse_element(text):
    level, vec = text.split(":", 1)
    return element(int(level), [int(v) for v in vec.split(",")])


def cmd_dimgroup(args):
    d = io.load_diagram(args.diagram)
    e = _parse_element(args.element)
    _emit("group", identify_group(d))
    if args.op == "positive":
        verdict = is_positive(d, e, args.depth_cap)
        _emit("positivity", verdict.value)
        if verdict == Positivity.UNKNOWN:
            raise CheckFailed("positivity undecided at the depth cap")
    elif args.op == "equal":
        if not args.other:
            raise ValueError("--op equal needs --other")
        out = dg_equal(d, e, _parse_element(args.other), args.depth_cap)
        _emit("equal", out)
        if out == "unknown":
            raise CheckFailed("equality undecided at the depth cap")
    else:
        t = trace(d)
        _emit("pairing", pairing(t, e))


def cmd_trace(args):
    d = io.load_diagram(args.diagram)
    t = trace(d, depth=args.depth)
    _emit("mode", "finite-depth" if args.depth else "perron")
    _emit("exact", t.is_exact)
    top = args.depth if args.depth is not None else args.levels
    for n in range(0, min(args.levels, top) + 1):
        _emit(f"level {n}", tuple(str(v) for v in t.values(n)))
    u = order_unit(d, min(args.levels, top))
    _emit("unit-pairing", pairing(t, u))


def cmd_quotient(args):
    pair = io.load_embedding(args.embedding)
    x = io.parse_path(args.path, pair.big, pair=pair)
    fc = classify_fibre(pair, x)
    _emit("kind", fc.kind)
    if fc.kind == "pair":
        _emit("partner", io.format_path(fc.partner))
        _emit("splitting-level", fc.splitting_level)
        _emit("side", fc.side)
        _emit("threshold", fc.n0)


def cmd_render(args):
    if args.example:
        scene = {"3.5": "stages", "3.2": "cantor-rings", "3.4": "shrinking"}[args.example]
        svg = render_scene(scene, args.stage)
    elif args.diagram:
        svg = render_schematic(io.load_diagram(args.diagram), args.stage)
    else:
        raise ValueError("give --example or --diagram")
    with open(args.out, "w") as fh:
        fh.write(svg)
    _emit("circles", svg.count("<circle"))
    _emit("out", args.out)


def cmd_ifs(args):
    s = io.load_system(args.spec)
    _emit("maps", s.map_count)
    _emit("contraction-bound", s.lam)
    if args.cells:
        cells = s.attractor_cells(args.cells)
        _emit("cells", len(cells.cells))
        _emit("max-diameter", cells.max_diameter())
    if args.check_separation:
        verdict = strong_separation(s)
        if isinstance(verdict, Separated):
            _emit("separation", f"separated gap {verdict.gap}")
        elif isinstance(verdict, Overlapping):
            _emit("separation", f"overlapping at {verdict.point}")
            raise CheckFailed("system is not strongly separated")
        else:
            _emit("separation", "unknown")
            raise CheckFailed("separation undecided")


def cmd_dps(args):
    a = io.load_assignment(args.assignment, depth=args.depth)
    if args.action == "validate":
        issues = validate_assignment(a)
        _emit("issues", len(issues))
        for i in issues:
            _emit("issue", i)
        if issues:
            raise CheckFailed("assignment violates the edge-function properties")
        return
    x = io.parse_path(args.path, a.diagram, assignment=a)
    if args.action == "fibre":
        f = fibre(a, x, depth=args.depth)
        _emit("fibre", f)
    elif args.action == "step":
        coord = tuple(Fraction(c) for c in args.coord.split(",")) if args.coord else None
        p = ext_point(a, x, coord=coord, depth=args.depth)
        q = phi_tilde(a, p, depth=args.depth)
        _emit("path", io.format_path(q.x))
        _emit("coord", q.coord if q.kind == "incell" else q.approx)
    else:
        report = regularity_witness_dps(a, x, Fraction(args.eps), samples=args.samples, seed=args.seed)
        _emit("case", report.case)
        _emit("k", report.k)
        _emit("samples", report.samples)
        _emit("diameter-cases", report.diameter_cases)
        _emit("hausdorff-cases", report.hausdorff_cases)
        _emit("ok", report.ok)
        if not report.ok:
            raise CheckFailed(report.detail)


def cmd_ktheory(args):
    if args.embedding:
        pair = io.load_embedding(args.embedding)
        rep = factor_invariants(pair)
        for line in rep.lines():
            _emit("report", line)
        if args.measure_level:
            out = measure_vanishing(pair, args.measure_level)
            _emit("measure-mass", out["mass"])
            _emit("measure-bound", out["bound"])
            if not out["ok"]:
                raise CheckFailed("vanishing bound violated")
    elif args.dps:
        if not args.shape:
            raise ValueError("--dps needs --shape")
        a = io.load_assignment(args.dps, depth=args.depth)
        rep = dps_invariants(a, args.shape)
        for line in rep.lines():
            _emit("report", line)
    else:
        raise ValueError("give --embedding or --dps")


def cmd_verify(args):
    report = hadamard_verify(args.n)
    _emit("n", report.n)
    _emit("range-projection", report.range_projection_ok)
    _emit("support-projection", report.support_projection_ok)
    _emit("conjugation", report.conjugation_ok)
    _emit("unitary", report.unitary_ok)
    _emit("residual", report.residual)
    if not report.all_ok:
        raise CheckFailed("finite-model identities failed")


if __name__ == "__main__":
    sys.exit(main())
