"""The ``shiftlab`` command.

Exit codes: 0 when the command produced a certified answer, 1 on errors,
2 when the answer is inconclusive (budget exhausted, no convergence, no
verdict within the tried range).
"""
from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
import time

from . import coding, config, entropy, geometry, shifts, spacetime
from .engine import DEFAULT_BUDGET
from .errors import BudgetExceeded, Divergence, Inconclusive, ShiftlabError, TrivialNorm

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2

_POINT = re.compile(r"\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)")


class UsageError(ShiftlabError):
    pass


def parse_points(text):
    pts = [(int(a), int(b)) for a, b in _POINT.findall(text)]
    if not pts or _POINT.sub("", text).strip(" ,;") != "":
        raise UsageError(f"cannot read point list {text!r}; expected e.g. \"(0,0),(1,0)\"")
    return pts


def parse_vector(text):
    parts = text.replace("(", "").replace(")", "").split(",")
    try:
        x, y = (int(p) for p in parts)
    except ValueError:
        raise UsageError(f"cannot read vector {text!r}; expected e.g. 1,0") from None
    return (x, y)


def parse_rect(text):
    m = re.fullmatch(r"\s*(\d+)\s*[xX]\s*(\d+)\s*", text)
    if not m:
        raise UsageError(f"cannot read rectangle {text!r}; expected e.g. 3x2")
    return int(m.group(1)), int(m.group(2))


def _pts(points):
    return [list(p) for p in points]


def _pattern(pat):
    return [[x, y, v] for (x, y), v in sorted(pat.as_dict().items())]


def resolve_budget(arg):
    if arg is not None:
        return arg
    env = os.environ.get("SHIFTLAB_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"SHIFTLAB_BUDGET must be an integer, got {env!r}") from None
    return DEFAULT_BUDGET


def load_specs(args):
    specs = [config.parse_file(p) for p in args.spec]
    specs += [config.builtin(n) for n in (args.builtin or [])]
    return specs


def _one(args, kind=shifts.ShiftSpec):
    specs = load_specs(args)
    if len(specs) != 1:
        raise UsageError(f"{args.command} takes exactly one spec (file or --builtin)")
    if not isinstance(specs[0], kind):
        raise UsageError(f"{args.command} needs a {kind.__name__} config, got {type(specs[0]).__name__}")
    return specs[0]


def _region(args):
    if args.rect:
        w, h = parse_rect(args.rect)
        return shifts.rectangle(w, h)
    if args.points:
        return parse_points(args.points)
    raise UsageError("give a region with --rect or --points")


def _polygon(args):
    if not args.vertices:
        raise UsageError("give the polygon with --vertices")
    return geometry.ConvexLatticePolygon(tuple(geometry.convex_hull(parse_points(args.vertices))))


# ---------------------------------------------------------------------------
# commands; each returns (status, exit code, result payload, human lines)


def cmd_count(args, budget):
    spec = _one(args)
    pts = _region(args)
    res = shifts.legal_colorings(spec, pts, enumerate=args.enumerate, budget=budget)
    out = {"cells": len(set(pts)), "count": str(res.count)}
    if res.patterns is not None:
        out["patterns"] = [_pattern(p) for p in res.patterns]
    return "Counted", EXIT_OK, out, [f"legal colorings: {res.count}"]


def _codes_payload(spec, A, b, radius, center, budget, minimize):
    v = coding.codes(spec, A, b, radius, center, budget)
    out = {"status": v.status, "forced": v.forced, "radius": radius, "target": list(b),
           "center": list(center)}
    lines = [f"{v.status}: A ({len(A)} points) {'codes' if v.forced else 'does not code'} {b} "
             f"within radius {radius}"]
    cert = None
    if v.forced:
        coder = coding.find_finite_coder(spec, A, b, radius, center, budget) if minimize else sorted(set(A))
        out["coder"] = _pts(coder)
        cert = {"spec": config.to_obj(spec), "coder": _pts(coder), "target": list(b),
                "radius": radius, "center": list(center)}
        lines.append(f"coder: {coder}")
    elif v.witness is not None:
        out["witness"] = [_pattern(p) for p in v.witness]
        lines.append("witness: two legal colorings agree on A and differ at the target")
    return v, out, cert, lines


def cmd_codes(args, budget):
    if args.replay:
        with open(args.replay, encoding="utf-8") as fh:
            cert = json.load(fh)
        if not isinstance(cert, dict):
            raise UsageError("certificate must be a JSON object")
        missing = {"spec", "coder", "target", "radius", "center"} - set(cert)
        if missing:
            raise UsageError(f"certificate lacks {sorted(missing)}")
        spec = config.parse_obj(cert["spec"], "/spec")
        A = [tuple(p) for p in cert["coder"]]
        v, out, _, lines = _codes_payload(spec, A, tuple(cert["target"]), cert["radius"],
                                          tuple(cert["center"]), budget, False)
        out["replayed"] = True
        status = "CertificateVerified" if v.forced else "CertificateRejected"
        return status, EXIT_OK if v.forced else EXIT_ERROR, out, [status] + lines
    spec = _one(args)
    if args.target is None:
        raise UsageError("codes needs --target")
    b = parse_vector(args.target)
    center = parse_vector(args.center) if args.center else b
    if args.A:
        A = parse_points(args.A)
    elif args.half_plane:
        ray = geometry.RationalRay(parse_vector(args.half_plane))
        A = [p for p in geometry.ball(args.radius, center) if ray.in_half_plane(p) and p != b]
    else:
        raise UsageError("codes needs --A or --half-plane")
    v, out, cert, lines = _codes_payload(spec, A, b, args.radius, center, budget, args.minimize)
    if cert is not None and args.certificate:
        with open(args.certificate, "w", encoding="utf-8") as fh:
            json.dump(cert, fh, indent=2, sort_keys=True)
            fh.write("\n")
        out["certificate_file"] = args.certificate
    return v.status, EXIT_OK, out, lines


def cmd_rays(args, budget):
    spec = _one(args)
    found = coding.enumerate_nonexpansive_candidates(spec, args.height, args.radius, budget)
    cands = [list(r.direction) for r in found]
    return ("Candidates", EXIT_OK, {"candidates": cands},
            [f"nonexpansive candidates (height {args.height}, radius {args.radius}): "
             + ", ".join(f"({x},{y})" for x, y in cands)])


def cmd_closing(args, budget):
    spec = _one(args)
    if not args.ray:
        raise UsageError("closing needs --ray")
    res = coding.is_closing(spec, parse_vector(args.ray), args.n_max, args.radius, budget)
    code = EXIT_OK if res.closing else EXIT_INCONCLUSIVE
    line = (f"Closing({res.n})" if res.closing else f"not closed up to N={res.n}") + f" at radius {res.radius}"
    return res.status, code, {"status": res.status, "n": res.n, "radius": res.radius}, [line]


def cmd_polygon(args, budget):
    spec = _one(args)
    poly = _polygon(args)
    v = coding.verify_coding_polygon(spec, poly, args.radius, budget)
    out = {"coding_polygon": v.ok, "vertices": _pts(poly.vertices), "radius": v.radius,
           "per_vertex": [{"vertex": list(p), "status": vd.status} for p, vd in v.per_vertex]}
    lines = [f"coding polygon: {str(v.ok).lower()}"]
    lines += [f"  vertex {p}: {vd.status}" for p, vd in v.per_vertex]
    return ("CodingPolygon" if v.ok else "NotCodingPolygon"), EXIT_OK, out, lines


def cmd_polygon_from_rays(args, budget):
    if not args.rays:
        raise UsageError("polygon-from-rays needs --rays")
    rays = [geometry.RationalRay(d) for d in parse_points(args.rays)]
    poly = geometry.polygon_from_rays(rays)
    out = {"vertices": _pts(poly.vertices), "edges": _pts(poly.edges)}
    lines = [f"polygon: {list(poly.vertices)}"]
    specs = load_specs(args)
    if not specs:
        return "Polygon", EXIT_OK, out, lines
    if len(specs) != 1:
        raise UsageError("polygon-from-rays takes at most one spec")
    built = coding.build_coding_polygon(specs[0], rays, args.n_max, budget)
    if built is None:
        out["built"] = None
        return "NoPolygonUpTo", EXIT_INCONCLUSIVE, out, lines + [f"no verified multiple up to n={args.n_max}"]
    P, n = built
    out["built"] = {"vertices": _pts(P.vertices), "n": n}
    return "CodingPolygon", EXIT_OK, out, lines + [f"coding polygon {list(P.vertices)} (n={n})"]


def _write(args, spec):
    text = config.serialize(spec)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return json.loads(text)


def cmd_recode(args, budget):
    spec = _one(args)
    if not args.window:
        raise UsageError("recode needs --window")
    rec = coding.canonical_recode(spec, parse_points(args.window))
    out = {"alphabet_size": len(rec.symbols), "window": _pts(rec.window), "config": _write(args, rec)}
    return "Recoded", EXIT_OK, out, [f"recoded alphabet size: {len(rec.symbols)}"]


def cmd_scale_down(args, budget):
    spec = _one(args)
    poly = _polygon(args)
    rec, p0 = coding.scale_down_recode(spec, poly, args.n)
    v = coding.verify_coding_polygon(rec, p0, budget=budget)
    out = {"base_polygon": _pts(p0.vertices), "coding_polygon": v.ok, "config": _write(args, rec)}
    return ("Recoded", EXIT_OK, out,
            [f"base polygon {list(p0.vertices)}", f"coding polygon: {str(v.ok).lower()}"])


def cmd_product(args, budget):
    specs = load_specs(args)
    if len(specs) != 2 or not all(isinstance(s, shifts.ShiftSpec) for s in specs):
        raise UsageError("product takes exactly two shift specs")
    prod = shifts.product_shift(*specs)
    out = {"alphabet_size": prod.alphabet_size, "config": _write(args, prod)}
    return "Product", EXIT_OK, out, [f"product alphabet size: {prod.alphabet_size}"]


def cmd_lightcone(args, budget):
    st = _one(args, spacetime.Spacetime)
    table = spacetime.width_table(st, args.k_max, budget)
    out = table.to_json()
    lines = [f"k={k}: W+={p} W-={m}" for k, (p, m) in enumerate(zip(table.plus, table.minus))]
    lines += [f"alpha+: {table.alpha_plus}", f"alpha-: {table.alpha_minus}"]
    if args.levels is not None:
        levels = spacetime.light_cone_levels(st, range(-args.levels, args.levels + 1), budget)
        out["levels"] = [{"n": n, "low": lo, "high": hi} for n, (lo, hi) in sorted(levels.items())]
    return "WidthTable", EXIT_OK, out, lines


def cmd_normalize(args, budget):
    st = _one(args, spacetime.Spacetime)
    res = spacetime.normalize_spacetime(st, args.k_max, budget, args.max_height)
    if res is None:
        return ("NotNormalizedUpTo", EXIT_INCONCLUSIVE, {"max_height": args.max_height},
                [f"no normalizing recoding up to strip height {args.max_height}"])
    out = {"strip_height": res.strip_height, "alphabet_size": res.spacetime.size, "widths": res.table.to_json()}
    return ("Normalized", EXIT_OK, out,
            [f"normalized with strip height {res.strip_height}, alphabet size {res.spacetime.size}"])


def _estimate_kwargs(args, budget):
    return {"n_max": args.n_max, "tolerance": args.tolerance, "budget": budget}


def cmd_entropy(args, budget):
    spec = _one(args)
    kw = _estimate_kwargs(args, budget)
    if args.dir:
        est = entropy.directional_entropy(spec, parse_vector(args.dir), **kw)
    else:
        est = entropy.polygonal_entropy(spec, _polygon(args), **kw)
    out = est.to_json()
    tag = "converged" if est.converged else "not converged"
    return (("Converged" if est.converged else "NotConverged"),
            EXIT_OK if est.converged else EXIT_INCONCLUSIVE, out,
            [f"entropy: {est.value:.6f} ({tag}, {est.method})"])


def cmd_sphere(args, budget):
    spec = _one(args)
    try:
        sph = entropy.entropy_sphere(spec, _polygon(args), **_estimate_kwargs(args, budget))
    except TrivialNorm:
        return "TrivialNorm", EXIT_OK, {"trivial": True}, ["entropy norm is trivial"]
    out = sph.to_json()
    out["trivial"] = False
    lines = [f"unit sphere: {sph.scale:.6f} * conv{list(sph.polygon.vertices)}"]
    if sph.conjectural:
        lines.append("(conjectural: polygon is not a triangle)")
    return "Sphere", EXIT_OK, out, lines


def cmd_girth_check(args, budget):
    spec = _one(args)
    if not args.dir:
        raise UsageError("girth-check needs --dir")
    res = entropy.girth_formula_check(spec, _polygon(args), parse_vector(args.dir),
                                      **_estimate_kwargs(args, budget))
    out = {"status": res.status, "delta": res.delta, "directional": res.directional,
           "predicted": res.predicted}
    return (res.status, EXIT_OK, out,
            [f"{res.status}: h_v={res.directional:.6f} predicted={res.predicted:.6f}"])


def cmd_nivat(args, budget):
    spec = _one(args)
    res = shifts.nivat_bound_check(spec, _region(args), budget)
    status = "BoundHolds" if res.holds else "BoundFails"
    return (status, EXIT_OK, {"status": status, "count": str(res.count), "bound": res.bound},
            [f"{status}: count {res.count} vs bound {res.bound}"])


COMMANDS = {
    "count": cmd_count, "codes": cmd_codes, "rays": cmd_rays, "closing": cmd_closing,
    "polygon": cmd_polygon, "polygon-from-rays": cmd_polygon_from_rays, "recode": cmd_recode,
    "scale-down": cmd_scale_down, "product": cmd_product, "lightcone": cmd_lightcone,
    "normalize": cmd_normalize, "entropy": cmd_entropy, "sphere": cmd_sphere,
    "girth-check": cmd_girth_check, "nivat": cmd_nivat,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("spec", nargs="*", help="JSON config file(s)")
    common.add_argument("--builtin", action="append", metavar="NAME",
                        help=f"built-in config ({', '.join(sorted(config.BUILTINS))})")
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--no-timing", action="store_true", help="omit wall-clock timing from JSON")
    common.add_argument("--budget", type=int, default=None,
                        help="search state budget (default: $SHIFTLAB_BUDGET or %d)" % DEFAULT_BUDGET)

    p = argparse.ArgumentParser(prog="shiftlab", description="Coding, entropy and light cones of planar shifts.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    s = add("count", "count legal colorings of a region")
    s.add_argument("--rect", help="WxH rectangle at the origin")
    s.add_argument("--points", help='point list "(0,0),(1,0)"')
    s.add_argument("--enumerate", action="store_true", help="also list the colorings")

    s = add("codes", "decide whether a region codes a point")
    s.add_argument("--A", help="coding region as a point list")
    s.add_argument("--half-plane", help="use the half plane left of this direction (inside the ball)")
    s.add_argument("--target", help="target point x,y")
    s.add_argument("--radius", type=float, default=4.0)
    s.add_argument("--center", help="window center (default: the target)")
    s.add_argument("--minimize", action="store_true", help="shrink the coder greedily")
    s.add_argument("--certificate", help="write a replayable certificate here when forced")
    s.add_argument("--replay", help="re-verify a stored certificate")

    s = add("rays", "list rays not certified expansive")
    s.add_argument("--height", type=int, default=3)
    s.add_argument("--radius", type=float, default=8.0)

    s = add("closing", "closing test for a nonexpansive ray")
    s.add_argument("--ray", help="direction x,y")
    s.add_argument("--n-max", type=int, default=4)
    s.add_argument("--radius", type=float, default=6.0)

    s = add("polygon", "verify a coding polygon")
    s.add_argument("--vertices", help='vertex list "(0,0),(1,0),(0,1)"')
    s.add_argument("--radius", type=float, default=None)

    s = add("polygon-from-rays", "polygon with the given edge directions")
    s.add_argument("--rays", help='directions "(1,0),(-1,1),(0,-1)"')
    s.add_argument("--n-max", type=int, default=3, help="largest multiple tried when a spec is given")

    s = add("recode", "higher-block recoding over a window")
    s.add_argument("--window", help="window point list")
    s.add_argument("--output", help="write the recoded config here")

    s = add("scale-down", "recode n*P so that P is a coding polygon")
    s.add_argument("--vertices")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--output")

    s = add("product", "Cartesian product of two shifts")
    s.add_argument("--output")

    s = add("lightcone", "width functions and slopes of a spacetime")
    s.add_argument("--k-max", type=int, default=8)
    s.add_argument("--levels", type=int, default=None, help="also report cone levels -L..L")

    s = add("normalize", "recode a spacetime to normalized widths")
    s.add_argument("--k-max", type=int, default=8)
    s.add_argument("--max-height", type=int, default=3)

    for name, help_ in (("entropy", "directional or polygonal entropy"),
                        ("sphere", "unit sphere of the entropy norm"),
                        ("girth-check", "compare directional entropy with the girth formula")):
        s = add(name, help_)
        s.add_argument("--dir", help="direction x,y")
        s.add_argument("--vertices")
        s.add_argument("--n-max", type=int, default=64)
        s.add_argument("--tolerance", type=float, default=entropy.DEFAULT_TOLERANCE)

    s = add("nivat", "compare a pattern count with |S| + |A| - 2")
    s.add_argument("--rect")
    s.add_argument("--points")
    return p


def _params(args):
    skip = {"json", "no_timing", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _clean(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else str(obj)
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def emit_report(doc, fmt="human", lines=()):
    if fmt == "json":
        return json.dumps(_clean(doc), sort_keys=True) + "\n"
    return "\n".join(lines) + "\n"


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    doc = {"command": args.command, "parameters": _params(args)}
    lines = []
    try:
        budget = resolve_budget(args.budget)
        doc["parameters"]["budget"] = budget
        status, code, result, lines = COMMANDS[args.command](args, budget)
        doc.update(status=status, result=result)
    except (BudgetExceeded, Divergence, Inconclusive) as exc:
        code = EXIT_INCONCLUSIVE
        doc.update(status=type(exc).__name__, error=str(exc))
        trace = getattr(exc, "trace", None)
        if trace:
            doc["partial_trace"] = [{"n": n, "r": r, "count": str(c), "log_count_per_n": v}
                                    for n, r, c, v in trace]
        lines = [f"inconclusive: {exc}"]
    except (ShiftlabError, ValueError, OSError) as exc:
        code = EXIT_ERROR
        doc.update(status="Error", error=f"{type(exc).__name__}: {exc}")
        if getattr(exc, "location", None):
            doc["location"] = exc.location
        lines = [f"error: {exc}"]
    doc["exit_code"] = code
    if not args.no_timing:
        doc["timing"] = {"wall_seconds": round(time.perf_counter() - t0, 6)}
    stream = sys.stderr if code == EXIT_ERROR and not args.json else sys.stdout
    stream.write(emit_report(doc, "json" if args.json else "human", lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
