"""Command line front end.

Every subcommand produces a Report; the exit code is a pure function of the
report's decision field:

    0  yes, or a value was computed
    1  no
    2  malformed input or an undefined quantity
    3  inconclusive at the bounds in force (truncation order, search box)

Reports serialize to JSON with --json; parsing that JSON back gives the same
report, so downstream tooling can rely on the file alone.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import bundles, foliations, jets, leafcomplex, monoids, semistability
from .foliations import InconclusiveAtOrderError
from .monoids import SaturationBoundError
from .scene import Scene, SceneError, load_scene

EXIT_BY_DECISION = {"yes": 0, "value": 0, "no": 1, "error": 2, "inconclusive": 3}


@dataclass
class Report:
    tool: str
    decision: str
    summary: str
    details: dict
    lines: tuple = ()
    scene: str = None
    order: int = None

    def exit_code(self):
        return EXIT_BY_DECISION[self.decision]

    def to_dict(self):
        return {
            "tool": self.tool,
            "decision": self.decision,
            "summary": self.summary,
            "details": self.details,
            "lines": list(self.lines),
            "scene": self.scene,
            "order": self.order,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            tool=d["tool"],
            decision=d["decision"],
            summary=d["summary"],
            details=d["details"],
            lines=tuple(d.get("lines", ())),
            scene=d.get("scene"),
            order=d.get("order"),
        )


def _fstr(x):
    return str(Fraction(x))


def _vec_strs(v):
    return [_fstr(x) for x in v]


def _nested_strs(rows):
    return [_vec_strs(row) for row in rows]


# --- handlers; each takes (args, scene-or-None) and returns a Report ---


def _cmd_monoid_saturate(args, scn: Scene):
    m = scn.monoid()
    sat = monoids.saturate(m)
    gens = [list(g) for g in sat.generators]
    return Report(
        tool="monoid-saturate",
        decision="value",
        summary="saturation generated by %d vectors" % len(gens),
        details={"ambient_rank": m.ambient_rank, "generators": gens},
        lines=tuple(str(tuple(g)) for g in gens),
    )


def _cmd_monoid_group(args, scn: Scene):
    m = scn.monoid()
    basis = monoids.grothendieck_group(m)
    return Report(
        tool="monoid-group",
        decision="value",
        summary="difference group of rank %d" % len(basis),
        details={"ambient_rank": m.ambient_rank, "basis": [list(b) for b in basis]},
        lines=tuple(str(tuple(b)) for b in basis),
    )


def _cmd_monoid_check(args, scn: Scene):
    m = scn.monoid()
    element = scn.monoid_element()
    if element is not None:
        witness = monoids.contains(m, element)
        found = witness is not None
        return Report(
            tool="monoid-check",
            decision="yes" if found else "no",
            summary="%r %s the monoid" % (element, "lies in" if found else "is not found in"),
            details={
                "element": list(element),
                "witness": list(witness) if found else None,
            },
        )
    sat = monoids.is_saturated(m)
    return Report(
        tool="monoid-check",
        decision="yes" if sat else "no",
        summary="monoid is %ssaturated" % ("" if sat else "not "),
        details={"saturated": sat},
    )


def _cmd_semistable_check(args, scn: Scene):
    fol = scn.foliation()
    ctx, names = scn.germ()
    res = semistability.find_flat_unit(fol)
    if res.ok:
        unit_str = jets.format_jet(res.unit, names=names)
        qualifier = "the unique one" if res.unique else "one of several"
        return Report(
            tool="semistable-check",
            decision="yes",
            summary="flat unit exists at order %d (%s)" % (res.order, qualifier),
            details={"unit": unit_str, "unique": bool(res.unique), "order": res.order},
            lines=("unit = %s" % unit_str,),
            order=res.order,
        )
    return Report(
        tool="semistable-check",
        decision="no",
        summary="no flat unit; the degree-%d system is inconsistent" % res.failing_degree,
        details={"failing_degree": res.failing_degree, "order": res.order},
        order=res.order,
    )


def _cmd_cs_log(args, scn: Scene):
    form = scn.one_form()
    pair = tuple(args.pair) if args.pair else scn.index_pair()
    if pair is None:
        if form.ctx.r == 2:
            pair = (1, 2)
        else:
            raise SceneError("give --pair I J or an index_pair entry in the scene")
    i, j = pair
    value = semistability.cs_index_log(form, i - 1, j - 1)
    return Report(
        tool="cs-log",
        decision="value",
        summary="index %s along the stratum of components %d and %d" % (_fstr(value), i, j),
        details={"index": _fstr(value), "pair": [i, j]},
    )


def _cmd_cs_surface(args, scn: Scene):
    form = scn.surface_form()
    value = semistability.cs_index_surface(form)
    return Report(
        tool="cs-surface",
        decision="value",
        summary="index %s along the invariant curve" % _fstr(value),
        details={"index": _fstr(value)},
    )


def _cmd_pushout_check(args, scn: Scene):
    glue = scn.glue_data()
    res = foliations.check_gluing_cocycle(glue)
    failures = [
        {
            "triple": [glue.components[i] for i in (a, b, c)],
            "product": _fstr(product),
        }
        for (a, b, c, product) in res.failures
    ]
    if res.ok:
        summary = "cocycle condition holds on all %d triple strata" % len(glue.triples)
    else:
        worst = failures[0]
        summary = "cocycle fails on %s with product %s" % (
            "|".join(worst["triple"]),
            worst["product"],
        )
    return Report(
        tool="pushout-check",
        decision="yes" if res.ok else "no",
        summary=summary,
        details={"failures": failures, "triples": len(glue.triples)},
        lines=tuple(
            "%s: product %s" % ("|".join(f["triple"]), f["product"]) for f in failures
        ),
    )


def _cmd_pushout_member(args, scn: Scene):
    ctx, candidate, fols = scn.pushout_inputs()
    names = scn.component_names()
    res = foliations.pushout_membership(candidate, fols, germ_ctx=ctx)
    if res.ok:
        return Report(
            tool="pushout-member",
            decision="yes",
            summary="candidate restricts into every component foliation (order %d)" % res.order,
            details={"order": res.order},
            order=res.order,
        )
    failing = names[res.failing_component]
    return Report(
        tool="pushout-member",
        decision="no",
        summary="candidate leaves the foliation on component %s (order %d)" % (failing, res.order),
        details={"failing_component": failing, "order": res.order},
        order=res.order,
    )


def _cmd_cohomology_p1(args, scn):
    h0, h1 = bundles.h_p1(args.deg)
    return Report(
        tool="cohomology-p1",
        decision="value",
        summary="degree %d: h0 = %d, h1 = %d" % (args.deg, h0, h1),
        details={"deg": args.deg, "h0": h0, "h1": h1},
    )


def _cmd_cohomology_snc(args, scn: Scene):
    bundle = scn.bundle()
    h0, h1 = bundles.cohomology_snc_curve(bundle)
    return Report(
        tool="cohomology-snc-curve",
        decision="value",
        summary="h0 = %d, h1 = %d" % (h0, h1),
        details={
            "left": list(bundle.left.degrees),
            "right": list(bundle.right.degrees),
            "h0": h0,
            "h1": h1,
        },
    )


def _cmd_leaf_complex(args, scn: Scene):
    data = scn.leaf_data()
    dims = leafcomplex.leaf_complex_hypercohomology(data)
    return Report(
        tool="leaf-complex",
        decision="value",
        summary="hypercohomology dimensions %s" % (tuple(dims),),
        details={
            "dims": list(dims),
            "opens": list(data.opens),
            "rows": data.n_rows,
        },
    )


def _cmd_obstruction_verify(args, scn: Scene):
    data = scn.leaf_data()
    theta, gbar, bbar = scn.cochains()
    rep = leafcomplex.verify_obstruction_cocycle(data, theta, gbar, bbar)
    names = ("triple overlaps", "rows vs pairs", "pairs vs opens", "top row")
    lines = tuple(
        "equation %d (%s): %s" % (k + 1, names[k], "holds" if ok else "fails")
        for k, ok in enumerate(rep.equations)
    )
    details = {
        "equations": list(rep.equations),
        "is_cocycle": rep.is_cocycle,
        "is_coboundary": rep.is_coboundary,
        "corrector": None,
    }
    if rep.corrector is not None:
        rho, hbar = rep.corrector
        details["corrector"] = {"rho": _nested_strs(rho), "hbar": _nested_strs(hbar)}
    summary = (
        "obstruction triple satisfies all four equations"
        if rep.is_cocycle
        else "obstruction triple violates the compatibility equations"
    )
    if rep.is_cocycle and rep.is_coboundary:
        summary += " and is a total coboundary"
    return Report(
        tool="obstruction-verify",
        decision="yes" if rep.is_cocycle else "no",
        summary=summary,
        details=details,
        lines=lines,
    )


def _cmd_obstruction_lie(args, scn: Scene):
    data = scn.lie_data()
    res = leafcomplex.lie_subalgebra_obstruction(data)
    details = {
        "quotient_dim": res.quotient_dim,
        "cocycle": _nested_strs(res.cocycle),
        "is_cocycle": res.is_cocycle,
        "vanishes": res.vanishes,
        "corrector": _nested_strs(res.corrector) if res.corrector is not None else None,
    }
    summary = (
        "obstruction class vanishes; a corrector exists"
        if res.vanishes
        else "obstruction class does not vanish"
    )
    return Report(
        tool="obstruction-lie",
        decision="yes" if res.vanishes else "no",
        summary=summary,
        details=details,
    )


def _cmd_holonomy(args, scn: Scene):
    h1, h2 = scn.holonomy()
    compatible = semistability.check_holonomy_compatibility(h1, h2)
    details = {
        "inner": _vec_strs(h1.values),
        "outer": _vec_strs(h2.values),
        "compatible": compatible,
    }
    ok = compatible
    degrees = scn.normal_degrees()
    if degrees is not None:
        degrees_ok = semistability.check_normal_degrees(*degrees)
        details["normal_degrees"] = list(degrees)
        details["normal_degrees_opposite"] = degrees_ok
        ok = ok and degrees_ok
    summary = "gluing data is %scompatible" % ("" if ok else "not ")
    return Report(
        tool="holonomy",
        decision="yes" if ok else "no",
        summary=summary,
        details=details,
    )


def _cmd_selftest(args, scn):
    from . import selfcheck

    seed = getattr(args, "seed", None)
    if seed is None:
        seed = 0
    results = selfcheck.run_all(seed=seed, trials=args.trials)
    ok = all(r.ok for r in results)
    lines = tuple(
        "%-38s %s (%d trials)" % (r.name, "ok" if r.ok else "FAILED", r.trials)
        for r in results
    )
    return Report(
        tool="selftest",
        decision="yes" if ok else "no",
        summary="%d/%d randomized identity checks passed" % (
            sum(1 for r in results if r.ok),
            len(results),
        ),
        details={
            "seed": seed,
            "checks": [{"name": r.name, "ok": r.ok, "trials": r.trials} for r in results],
        },
        lines=lines,
    )


# --- wiring ---


def _error_report(tool, message, decision="error", scene_path=None):
    return Report(
        tool=tool,
        decision=decision,
        summary=message,
        details={},
        scene=scene_path,
    )


def _run_one(args, scene_path):
    tool = args.tool
    try:
        scn = None
        if args.needs_scene:
            scn = load_scene(scene_path, order=getattr(args, "order", None))
        report = args.handler(args, scn)
    except SceneError as e:
        return _error_report(tool, str(e), scene_path=str(scene_path) if scene_path else None)
    except (InconclusiveAtOrderError, SaturationBoundError) as e:
        return _error_report(
            tool, str(e), decision="inconclusive",
            scene_path=str(scene_path) if scene_path else None,
        )
    except (ValueError, KeyError) as e:
        message = str(e) or type(e).__name__
        return _error_report(tool, message, scene_path=str(scene_path) if scene_path else None)
    if scene_path is not None and report.scene is None:
        report.scene = str(scene_path)
    if report.order is None:
        order = getattr(args, "order", None)
        if order is None and scn is not None:
            order = scn.order
        report.order = order
    return report


def _print_report(report, prefix=""):
    print("%s%s: %s" % (prefix, report.decision, report.summary))
    for line in report.lines:
        print("%s  %s" % (prefix, line))


def _write_json(path, payload):
    text = json.dumps(payload, indent=2, sort_keys=True)
    if path == "-":
        print(text)
    else:
        Path(path).write_text(text + "\n")


def _add_common(parser, needs_scene):
    parser.add_argument(
        "--order",
        type=int,
        default=argparse.SUPPRESS,
        help="truncation order override (default: scene value, else 6)",
    )
    parser.add_argument(
        "--json",
        dest="json_path",
        default=argparse.SUPPRESS,
        metavar="PATH",
        help='write the report as JSON to PATH ("-" for stdout)',
    )
    if needs_scene:
        parser.add_argument("scene", nargs="?", help="scene file to read")
        parser.add_argument(
            "--all",
            dest="all_dir",
            default=argparse.SUPPRESS,
            metavar="DIR",
            help="run on every *.json scene in DIR; exit with the worst code",
        )


def _leaf(subparsers, name, handler, needs_scene=True, aliases=(), help=None, tool=None):
    p = subparsers.add_parser(name, aliases=list(aliases), help=help)
    p.set_defaults(handler=handler, needs_scene=needs_scene, tool=tool or name)
    _add_common(p, needs_scene)
    return p


def build_parser():
    parser = argparse.ArgumentParser(
        prog="logfol",
        description="exact checks for foliations on crossing germs: "
        "flat units, indices, gluing cocycles, cover obstructions",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    monoid = sub.add_parser("monoid", help="saturation and group of a lattice monoid")
    monoid_sub = monoid.add_subparsers(dest="subcommand", metavar="WHAT")
    _leaf(monoid_sub, "saturate", _cmd_monoid_saturate, tool="monoid-saturate",
          help="generators of the saturation")
    _leaf(monoid_sub, "group", _cmd_monoid_group, tool="monoid-group",
          help="Hermite basis of the difference group")
    _leaf(
        monoid_sub, "check", _cmd_monoid_check, tool="monoid-check",
        help="is the scene's element a member; without an element, is the monoid saturated",
    )

    semi = sub.add_parser("semistable", help="flat-unit criterion on a crossing germ")
    semi_sub = semi.add_subparsers(dest="subcommand", metavar="WHAT")
    _leaf(semi_sub, "check", _cmd_semistable_check, tool="semistable-check",
          help="decide existence of a flat unit")

    cs = sub.add_parser("cs", help="residue indices along strata")
    cs_sub = cs.add_subparsers(dest="subcommand", metavar="WHAT")
    cs_log = _leaf(
        cs_sub, "log", _cmd_cs_log, aliases=("paper",), tool="cs-log",
        help="index of a log one-form along a double stratum",
    )
    cs_log.add_argument(
        "--pair", type=int, nargs=2, metavar=("I", "J"), default=None,
        help="1-based crossing component indices (default: scene, or 1 2 when r = 2)",
    )
    _leaf(cs_sub, "surface", _cmd_cs_surface, tool="cs-surface",
          help="index of a dy + b dz along {y = 0}")

    push = sub.add_parser("pushout", help="gluing checks across components")
    push_sub = push.add_subparsers(dest="subcommand", metavar="WHAT")
    _leaf(push_sub, "check", _cmd_pushout_check, tool="pushout-check",
          help="scalar cocycle condition on triples")
    _leaf(
        push_sub, "member", _cmd_pushout_member, tool="pushout-member",
        help="does a candidate field restrict into every component foliation",
    )

    coh = sub.add_parser("cohomology", help="exact cohomology of small bundles")
    coh_sub = coh.add_subparsers(dest="subcommand", metavar="WHAT")
    p1 = _leaf(coh_sub, "p1", _cmd_cohomology_p1, needs_scene=False, tool="cohomology-p1",
               help="line bundle on the projective line")
    p1.add_argument("--deg", type=int, required=True, help="bundle degree")
    _leaf(coh_sub, "snc-curve", _cmd_cohomology_snc, tool="cohomology-snc-curve",
          help="bundle on two projective lines glued at a node")

    _leaf(sub, "leaf-complex", _cmd_leaf_complex,
          help="hypercohomology dimensions of cover data")

    obs = sub.add_parser("obstruction", help="obstruction cocycles and classes")
    obs_sub = obs.add_subparsers(dest="subcommand", metavar="WHAT")
    _leaf(obs_sub, "verify", _cmd_obstruction_verify, tool="obstruction-verify",
          help="four compatibility equations of a triple over a cover")
    _leaf(obs_sub, "lie", _cmd_obstruction_lie, tool="obstruction-lie",
          help="obstruction class of a perturbed subalgebra inclusion")

    _leaf(sub, "holonomy", _cmd_holonomy,
          help="holonomy and normal degree compatibility of a stratum")

    selftest = _leaf(sub, "selftest", _cmd_selftest, needs_scene=False,
                     help="randomized identity checks of the core algebra")
    selftest.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    selftest.add_argument("--trials", type=int, default=40,
                          help="trials per identity (default 40)")

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "handler", None) is None:
        parser.print_help()
        return 2

    json_path = getattr(args, "json_path", None)

    if getattr(args, "all_dir", None):
        directory = Path(args.all_dir)
        files = sorted(directory.glob("*.json"))
        if not files:
            print("no scene files in %s" % directory, file=sys.stderr)
            return 2
        reports = []
        worst = 0
        for f in files:
            report = _run_one(args, f)
            reports.append(report)
            _print_report(report, prefix="%s: " % f.name)
            worst = max(worst, report.exit_code())
        if json_path:
            _write_json(json_path, [r.to_dict() for r in reports])
        return worst

    scene_path = getattr(args, "scene", None)
    if args.needs_scene and scene_path is None:
        print("a scene file (or --all DIR) is required", file=sys.stderr)
        return 2
    report = _run_one(args, scene_path)
    _print_report(report)
    if json_path:
        _write_json(json_path, report.to_dict())
    return report.exit_code()


if __name__ == "__main__":
    sys.exit(main())
