"""Growth rates of pattern counts over scaled, thickened polygons.

For a polygon P the count of legal colorings of ``(nP)_r``, the lattice
points within distance ``r`` of ``nP``, grows like ``exp(n * H)``. The
estimate reported here is the increment slope
``(ln C(n2) - ln C(n1)) / (n2 - n1)`` between the last two scales, which
removes the boundary term that makes ``ln C(n) / n`` converge slowly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BudgetExceeded, Divergence, Inconclusive, InfiniteDilatation, ShiftlabError, TrivialNorm
from .geometry import ConvexLatticePolygon, dot, girth, neg, segment, sort_by_angle
from .shifts import LinearRule, ProductSpec, RecodedSpec, count_colorings

DEFAULT_R_SCHEDULE = (1, 2, 4)
DEFAULT_TOLERANCE = 0.02


def thickened(polygon, r):
    """Lattice points at distance below ``r`` from the polygon (r = 0: inside)."""
    if r == 0:
        return polygon.lattice_points()
    k = math.ceil(r)
    x0, y0, x1, y1 = polygon.bounding_box()
    r2 = Fraction(r) ** 2
    return [(x, y) for x in range(x0 - k, x1 + k + 1) for y in range(y0 - k, y1 + k + 1)
            if polygon.distance_sq((x, y)) < r2]


def count_region_scaled(spec, polygon, n, r, budget=None):
    return count_colorings(spec, thickened(polygon.scaled(n), r), budget)


def is_linear(spec):
    if isinstance(spec, LinearRule):
        return True
    if isinstance(spec, ProductSpec):
        return is_linear(spec.left) and is_linear(spec.right)
    if isinstance(spec, RecodedSpec):
        return is_linear(spec.source)
    return False


@dataclass
class EntropyEstimate:
    value: float
    trace: list                     # (n, r, count, ln(count)/n)
    slopes: list = field(default_factory=list)  # (r, n, slope ending at n)
    method: str = "ExactLinear"
    converged: bool = False
    tolerance: float = DEFAULT_TOLERANCE

    def to_json(self):
        return {"value": self.value, "method": self.method, "converged": self.converged,
                "tolerance": self.tolerance,
                "trace": [{"n": n, "r": r, "count": str(c), "log_count_per_n": v}
                          for n, r, c, v in self.trace],
                "slopes": [{"r": r, "n": n, "slope": s} for r, n, s in self.slopes]}


def n_schedule(n_max):
    ns = [n_max]
    while ns[-1] // 2 >= 2 and len(ns) < 4:
        ns.append(ns[-1] // 2)
    return sorted(ns)


def polygonal_entropy(spec, polygon, n_max=64, r_schedule=DEFAULT_R_SCHEDULE,
                      tolerance=DEFAULT_TOLERANCE, budget=None):
    method = "ExactLinear" if is_linear(spec) else "Enumerated"
    trace, slopes = [], []
    per_r = []
    for r in r_schedule:
        logs = []
        for n in n_schedule(n_max):
            try:
                c = count_region_scaled(spec, polygon, n, r, budget)
            except BudgetExceeded as exc:
                exc.trace = trace
                if len(logs) >= 2:
                    break
                raise
            if c == 0:
                raise ShiftlabError("no legal colorings of the scaled polygon")
            lc = math.log(c)
            trace.append((n, r, c, lc / n))
            if logs:
                n0, l0 = logs[-1]
                slopes.append((r, n, (lc - l0) / (n - n0)))
            logs.append((n, lc))
        rs = [s for rr, _, s in slopes if rr == r]
        if len(rs) >= 3 and all(b > 1.5 * a + tolerance for a, b in zip(rs, rs[1:])):
            raise Divergence("log-count grows faster than linearly in n", trace)
        if not rs:
            raise Inconclusive("not enough scales for a slope estimate")
        per_r.append((rs[-1], len(rs) >= 2 and abs(rs[-1] - rs[-2]) < tolerance))
    value, ok = per_r[-1]
    if len(per_r) >= 2:
        ok = ok and abs(per_r[-1][0] - per_r[-2][0]) < tolerance
    return EntropyEstimate(value, trace, slopes, method, ok, tolerance)


def directional_entropy(spec, v, n_max=64, r_schedule=DEFAULT_R_SCHEDULE,
                        tolerance=DEFAULT_TOLERANCE, budget=None):
    v = tuple(v)
    if v == (0, 0):
        raise ValueError("direction must be nonzero")
    return polygonal_entropy(spec, segment(v), n_max, r_schedule, tolerance, budget)


@dataclass(frozen=True)
class GirthCheck:
    consistent: bool
    delta: float
    directional: float
    predicted: float

    @property
    def status(self):
        return "Consistent" if self.consistent else "Inconsistent"


def girth_formula_check(spec, triangle, v, n_max=64, r_schedule=DEFAULT_R_SCHEDULE,
                        tolerance=DEFAULT_TOLERANCE, threshold=0.05, budget=None):
    """Compare the directional entropy with H(T) * |v| / girth(T, v)."""
    hv = directional_entropy(spec, v, n_max, r_schedule, tolerance, budget)
    hT = polygonal_entropy(spec, triangle, n_max, r_schedule, tolerance, budget)
    if not (hv.converged and hT.converged):
        raise Inconclusive("entropy estimates did not converge")
    g = float(girth(triangle, tuple(v)))
    predicted = hT.value * math.sqrt(dot(v, v)) / g
    delta = abs(hv.value - predicted)
    return GirthCheck(delta < threshold, delta, hv.value, predicted)


@dataclass(frozen=True)
class EntropySphere:
    polygon: ConvexLatticePolygon
    scale: float
    entropy: float
    spot_checks: tuple  # (edge, directional entropy, within tolerance)
    conjectural: bool = False

    def to_json(self):
        return {"vertices": [list(v) for v in self.polygon.vertices], "scale": self.scale,
                "entropy": self.entropy, "conjectural": self.conjectural,
                "spot_checks": [{"edge": list(e), "h": h, "ok": ok} for e, h, ok in self.spot_checks]}


def entropy_sphere(spec, polygon, n_max=64, r_schedule=DEFAULT_R_SCHEDULE,
                   tolerance=DEFAULT_TOLERANCE, rel_check=0.03, budget=None):
    """Unit sphere of the entropy norm: ``(1/H)`` times the hull of the +-edges."""
    H = polygonal_entropy(spec, polygon, n_max, r_schedule, tolerance, budget)
    if H.value < tolerance:
        raise TrivialNorm("entropy norm is trivial")
    edges = polygon.edges
    hexagon = ConvexLatticePolygon(tuple(edges) + tuple(neg(e) for e in edges))
    checks = []
    for e in sort_by_angle(edges):
        h = directional_entropy(spec, e, n_max, r_schedule, tolerance, budget).value
        checks.append((e, h, abs(h - H.value) <= rel_check * H.value))
    return EntropySphere(hexagon, 1.0 / H.value, H.value, tuple(checks), len(polygon.vertices) != 3)


@dataclass(frozen=True)
class Dilatation:
    ratio: float
    normalized: tuple  # (direction, h_v / |v|)


def dilatation_ratio(spec, directions, n_max=64, r_schedule=DEFAULT_R_SCHEDULE,
                     tolerance=DEFAULT_TOLERANCE, budget=None):
    vals = []
    for v in directions:
        est = directional_entropy(spec, v, n_max, r_schedule, tolerance, budget)
        if not est.converged:
            raise Inconclusive(f"entropy in direction {v} did not converge")
        vals.append((tuple(v), est.value / math.sqrt(dot(v, v))))
    zero = [abs(h) < tolerance for _, h in vals]
    if all(zero):
        raise TrivialNorm("all directional entropies vanish; the seminorm is trivial")
    if any(zero):
        raise InfiniteDilatation("some directional entropies vanish and others do not")
    hs = [h for _, h in vals]
    return Dilatation(max(hs) / min(hs), tuple(vals))
