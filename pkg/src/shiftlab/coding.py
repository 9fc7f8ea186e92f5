"""Coding relation on finite windows and what is built on top of it.

``A`` codes ``b`` inside a window W when any two locally legal colorings
of W that agree on A also agree at b. A positive answer on a finite window
is a certificate for the infinite shift, since a legal configuration
restricts to a locally legal coloring of W. A negative answer is only
local and comes with two witness colorings.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import engine
from .engine import Constraint
from .errors import NotApplicable, NotDivisible, WindowTooSmall
from .geometry import ConvexLatticePolygon, RationalRay, add, ball, det, dot, polygon_from_rays, sub
from .linalg import RowSpace
from .shifts import (LinearRule, Pattern, ProductSpec, RecodedSpec, cell_order,
                     enumerate_colorings, region)


@dataclass(frozen=True)
class CodingVerdict:
    forced: bool
    radius: float
    witness: tuple = None

    @property
    def status(self):
        return "Forced" if self.forced else "NotForcedLocally"

    def __bool__(self):
        return self.forced


# ---------------------------------------------------------------------------
# core forcing queries, dispatched on the spec kind


def _linear_space(spec, cells, homogeneous=False):
    rs, idx = spec.row_space(cells)
    if homogeneous:
        hom = RowSpace(spec.modulus)
        for top, (row, _) in rs.pivots.items():
            hom.pivots[top] = (row, 0)
        return hom, idx, rs.inconsistent
    return rs, idx, rs.inconsistent


def _unit(i, p):
    return (1 << i) if p == 2 else {i: 1}


def forced_map(spec, window, A, targets, budget=None):
    """Map each target to True when A forces its value inside ``window``."""
    window = region(window)
    A = [a for a in region(A)]
    targets = list(dict.fromkeys(tuple(t) for t in targets))
    if isinstance(spec, LinearRule):
        cells = cell_order(window)
        rs, idx, bad = _linear_space(spec, cells, homogeneous=True)
        if bad:
            return {t: True for t in targets}
        p = spec.modulus
        for a in A:
            rs.add(_unit(idx[a], p))
        return {t: rs.contains(_unit(idx[t], p)) for t in targets}
    if isinstance(spec, ProductSpec):
        left = forced_map(spec.left, window, A, targets, budget)
        right = forced_map(spec.right, window, A, targets, budget)
        return {t: left[t] and right[t] for t in targets}
    if isinstance(spec, RecodedSpec):
        feet = {t: [add(o, t) for o in spec.window] for t in targets}
        inner = forced_map(spec.source, spec.footprint(window), spec.footprint(A),
                           [c for cs in feet.values() for c in cs], budget)
        return {t: all(inner[c] for c in feet[t]) for t in targets}
    out = {}
    for t in targets:
        if t in out:
            continue
        pair = _explicit_pair(spec, window, A, t, budget)
        if pair is None:
            out[t] = True
            continue
        # the same witness settles every target it separates
        x, y = pair[0].as_dict(), pair[1].as_dict()
        for u in targets:
            if u not in out and x.get(u) != y.get(u):
                out[u] = False
    return out


def _lift(check, q):
    def lifted(vals):
        return check(tuple(v // q for v in vals)) and check(tuple(v % q for v in vals))
    return lifted


def _explicit_pair(spec, window, A, b, budget):
    """Two legal colorings agreeing on A and differing at b, or None.

    Searches colorings of the pair alphabet, restricted to the constraint
    component of b. An unsatisfiable window yields None (vacuously forced).
    """
    q = spec.alphabet_size
    A = set(A)
    if b in A:
        return None
    cells = cell_order(window)
    cons = spec.constraint_instances(set(cells))
    single = engine.solve(cells, {c: range(q) for c in cells}, cons, budget)
    if single is None:
        return None
    group = next(g for g in engine.components(cells, cons) if b in g[0])
    gcells, gcons = group
    domains = {}
    for c in gcells:
        if c in A:
            domains[c] = [v * q + v for v in range(q)]
        elif c == b:
            domains[c] = [u * q + v for u in range(q) for v in range(q) if u != v]
        else:
            domains[c] = range(q * q)
    lifted = [Constraint(con.cells, _lift(con.check, q)) for con in gcons]
    prio = {c: dot(sub(c, b), sub(c, b)) for c in gcells}
    pair = engine.solve(gcells, domains, lifted, budget, prio)
    if pair is None:
        return None
    x, y = dict(single), dict(single)
    for c, v in pair.items():
        x[c], y[c] = divmod(v, q)
    return Pattern.from_dict(x), Pattern.from_dict(y)


def _witness(spec, window, A, b, budget=None):
    window = region(window)
    if isinstance(spec, LinearRule):
        cells = cell_order(window)
        p = spec.modulus
        rs, idx, bad = _linear_space(spec, cells)
        if bad:
            return None
        x0 = rs.solution(len(cells))
        hom, _, _ = _linear_space(spec, cells, homogeneous=True)
        for a in A:
            hom.add(_unit(idx[a], p), 0)
        hom.add(_unit(idx[b], p), 1)
        z = hom.solution(len(cells))
        if z is None:
            return None
        x1 = [(u + v) % p for u, v in zip(x0, z)]
        return (Pattern.from_dict(dict(zip(cells, x0))), Pattern.from_dict(dict(zip(cells, x1))))
    if isinstance(spec, ProductSpec):
        for side in ("left", "right"):
            sub_spec = getattr(spec, side)
            w = _witness(sub_spec, window, A, b, budget)
            if w is None:
                continue
            other = spec.right if side == "left" else spec.left
            base = _any_coloring(other, window, budget)
            if base is None:
                return None
            pats = []
            for pat in w:
                d = pat.as_dict()
                if side == "left":
                    pats.append({c: spec.join(d[c], base[c]) for c in d})
                else:
                    pats.append({c: spec.join(base[c], d[c]) for c in d})
            return tuple(Pattern.from_dict(d) for d in pats)
        return None
    if isinstance(spec, RecodedSpec):
        U = spec.footprint(window)
        A2 = spec.footprint(A)
        for o in spec.window:
            w = _witness(spec.source, U, A2, add(o, b), budget)
            if w is not None:
                return tuple(Pattern.from_dict(spec.encode(pat.as_dict(), window)) for pat in w)
        return None
    return _explicit_pair(spec, window, set(A), b, budget)


def _any_coloring(spec, window, budget=None):
    window = region(window)
    if isinstance(spec, LinearRule):
        cells = cell_order(window)
        rs, _, bad = _linear_space(spec, cells)
        return None if bad else dict(zip(cells, rs.solution(len(cells))))
    if isinstance(spec, ProductSpec):
        a = _any_coloring(spec.left, window, budget)
        b = _any_coloring(spec.right, window, budget)
        if a is None or b is None:
            return None
        return {c: spec.join(a[c], b[c]) for c in window}
    if isinstance(spec, RecodedSpec):
        src = _any_coloring(spec.source, spec.footprint(window), budget)
        return None if src is None else spec.encode(src, window)
    cells = cell_order(window)
    q = spec.alphabet_size
    return engine.solve(cells, {c: range(q) for c in cells},
                        spec.constraint_instances(set(cells)), budget)


def codes(spec, A, b, radius, center=(0, 0), budget=None, witness=True):
    """Decide whether A codes b inside the lattice ball of ``radius``."""
    b = tuple(b)
    A = region(A)
    window = region(ball(radius, center))
    if b not in window or not A <= window:
        raise WindowTooSmall(f"ball of radius {radius} around {center} misses A or b")
    forced = forced_map(spec, window, A, [b], budget)[b]
    wit = None
    if not forced and witness:
        wit = _witness(spec, window, A, b, budget)
    return CodingVerdict(forced, radius, wit)


# ---------------------------------------------------------------------------
# rays


@dataclass(frozen=True)
class RayClassification:
    status: str  # "ExpansiveCertified" or "NotCertified"
    radius: float
    point: tuple = None

    @property
    def certified(self):
        return self.status == "ExpansiveCertified"


def _radii(radius):
    rs = list(range(2, int(radius), 2))
    return rs + [radius]


def as_ray(r):
    return r if isinstance(r, RationalRay) else RationalRay(tuple(r))


def classify_ray(spec, ray, radius, budget=None):
    """Certify expansiveness of a ray: its half plane codes a point outside it."""
    ray = as_ray(ray)
    for r in _radii(radius):
        window = ball(r)
        H = [p for p in window if ray.in_half_plane(p)]
        out = sorted((p for p in window if not ray.in_half_plane(p)),
                     key=lambda p: (-ray.side(p), dot(p, p), p))
        forced = forced_map(spec, window, H, out, budget)
        hit = next((p for p in out if forced[p]), None)
        if hit is not None:
            return RayClassification("ExpansiveCertified", r, hit)
    return RayClassification("NotCertified", radius)


def enumerate_nonexpansive_candidates(spec, h, radius, budget=None):
    """Rays with entries bounded by ``h`` that could not be certified expansive."""
    from .geometry import primitive_directions
    return [RationalRay(d) for d in primitive_directions(h)
            if not classify_ray(spec, RationalRay(d), radius, budget).certified]


@dataclass(frozen=True)
class ClosingResult:
    status: str  # "Closing" or "NotClosedUpTo"
    n: int
    radius: float

    @property
    def closing(self):
        return self.status == "Closing"


def adjacent_line(ray, window):
    """Points of the first lattice line outside the half plane, in ray order."""
    d = ray.direction
    line = [p for p in window if ray.side(p) == -1]
    return sorted(line, key=lambda p: dot(p, d))


def is_closing(spec, ray, n_max, radius, budget=None):
    """Smallest block length N for which the half plane plus any N consecutive
    points of the adjacent line determine that line.

    The line is checked on its part inside the ball of half the radius,
    while the half plane is taken over the full ball.
    """
    ray = as_ray(ray)
    if classify_ray(spec, ray, radius, budget).certified:
        raise NotApplicable(f"ray {ray} is certified expansive; closing is for nonexpansive rays")
    window = ball(radius)
    H = [p for p in window if ray.in_half_plane(p)]
    # blocks and targets stay in the inner half so propagation never
    # needs cells beyond the window edge
    line = adjacent_line(ray, ball(radius / 2))
    if not line:
        raise NotApplicable("window too small to contain the adjacent line")
    for n in range(1, n_max + 1):
        ok = True
        for s in range(0, len(line) - n + 1):
            block = line[s:s + n]
            forced = forced_map(spec, window, H + block, line, budget)
            if not all(forced.values()):
                ok = False
                break
        if ok:
            return ClosingResult("Closing", n, radius)
    return ClosingResult("NotClosedUpTo", n_max, radius)


def is_corner_coding(spec, sector, radius, budget=None):
    """Does the sector minus its apex code the apex?"""
    window = ball(radius, sector.base)
    A = [p for p in window if sector.contains(p) and p != sector.base]
    return codes(spec, A, sector.base, radius, sector.base, budget)


# ---------------------------------------------------------------------------
# polygons


@dataclass(frozen=True)
class PolygonVerdict:
    ok: bool
    per_vertex: tuple  # ((vertex, CodingVerdict), ...)
    radius: float

    def __bool__(self):
        return self.ok


def default_radius(polygon):
    return math.ceil(polygon.diameter()) + 2


def verify_coding_polygon(spec, polygon, radius=None, budget=None):
    """Every vertex must be coded by the rest of the polygon."""
    r = default_radius(polygon) if radius is None else radius
    pts = polygon.lattice_points()
    out = []
    for v in polygon.vertices:
        rest = [p for p in pts if p != v]
        out.append((v, codes(spec, rest, v, r, v, budget, witness=False)))
    return PolygonVerdict(all(vd.forced for _, vd in out), tuple(out), r)


def build_coding_polygon(spec, rays, n_max, budget=None):
    """Smallest multiple of the ray polygon that verifies, with its factor."""
    base = polygon_from_rays([as_ray(r) for r in rays])
    for n in range(1, n_max + 1):
        poly = base.scaled(n)
        if verify_coding_polygon(spec, poly, budget=budget):
            return poly, n
    return None


def find_finite_coder(spec, A, b, radius, center=(0, 0), budget=None):
    """Greedy minimal subset of A that still codes b."""
    b = tuple(b)
    keep = set(region(A))
    window = ball(radius, center)
    if b not in window or not keep <= set(window):
        raise WindowTooSmall(f"ball of radius {radius} around {center} misses A or b")
    if not forced_map(spec, window, keep, [b], budget)[b]:
        return None
    for a in sorted(keep):
        trial = keep - {a}
        if forced_map(spec, window, trial, [b], budget)[b]:
            keep = trial
    return sorted(keep)


def _equal_forced(spec, window, pairs, budget=None):
    window = region(window)
    if isinstance(spec, LinearRule):
        cells = cell_order(window)
        rs, idx, bad = _linear_space(spec, cells)
        p = spec.modulus
        out = {}
        for u, v in pairs:
            row = (1 << idx[u]) ^ (1 << idx[v]) if p == 2 else {idx[u]: 1, idx[v]: p - 1}
            # x_u - x_v must be determined and equal to zero
            rest, rhs = rs.reduce(row, 0)
            out[(u, v)] = bad or (not rest and rhs == 0)
        return out
    if isinstance(spec, ProductSpec):
        a = _equal_forced(spec.left, window, pairs, budget)
        b = _equal_forced(spec.right, window, pairs, budget)
        return {k: a[k] and b[k] for k in pairs}
    if isinstance(spec, RecodedSpec):
        sub_pairs = {k: [(add(o, k[0]), add(o, k[1])) for o in spec.window] for k in pairs}
        inner = _equal_forced(spec.source, spec.footprint(window),
                              [s for ss in sub_pairs.values() for s in ss], budget)
        return {k: all(inner[s] for s in sub_pairs[k]) for k in pairs}
    cells = cell_order(window)
    q = spec.alphabet_size
    cons = spec.constraint_instances(set(cells))
    out = {}
    for u, v in pairs:
        extra = Constraint((u, v), lambda vals: vals[0] != vals[1])
        sol = engine.solve(cells, {c: range(q) for c in cells}, cons + [extra], budget)
        out[(u, v)] = sol is None
    return out


def detect_periodic_direction(spec, direction, radius, budget=None):
    """Smallest ``k*direction`` (k <= radius) that is a forced period, or None."""
    d = tuple(direction)
    inner = ball(max(1, radius // 2))
    norm = math.sqrt(dot(d, d))
    for k in range(1, int(radius) + 1):
        step = (d[0] * k, d[1] * k)
        window = ball(radius + k * norm)
        pairs = [(v, add(v, step)) for v in inner]
        if all(_equal_forced(spec, window, pairs, budget).values()):
            return step
    return None


# ---------------------------------------------------------------------------
# recoding


def canonical_recode(spec, window, name=None):
    """Higher-block recoding of ``spec`` over a finite window."""
    return RecodedSpec(spec, tuple(region(window)), name or f"{spec.name}[recoded]")


def scale_down_recode(spec, polygon, n):
    """Recode by ``(n-1)*P0`` where ``polygon = n*P0`` up to translation.

    Returns the recoded spec and ``P0``.
    """
    if n < 1:
        raise ValueError("scale must be positive")
    v0 = polygon.vertices[0]
    rel = [sub(v, v0) for v in polygon.vertices]
    if any(c % n for p in rel for c in p):
        raise NotDivisible(f"{polygon} is not {n} times a lattice polygon")
    p0 = ConvexLatticePolygon(tuple((x // n, y // n) for x, y in rel))
    if n == 1:
        return spec, p0
    p1 = p0.scaled(n - 1)
    return canonical_recode(spec, p1.lattice_points()), p0
