"""Exact integer geometry on the plane lattice.

Points and vectors are plain ``(x, y)`` tuples of Python ints. Every
predicate here is exact; floats only appear in reported lengths.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key

from .errors import EmptyCone, NoPolygon

Point = tuple


def det(a, b):
    return a[0] * b[1] - a[1] * b[0]


def dot(a, b):
    return a[0] * b[0] + a[1] * b[1]


def add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def neg(a):
    return (-a[0], -a[1])


def scale(a, k):
    return (a[0] * k, a[1] * k)


def is_primitive(v):
    return v != (0, 0) and math.gcd(v[0], v[1]) == 1


def primitive(v):
    g = math.gcd(v[0], v[1])
    if g == 0:
        raise ValueError("zero vector has no primitive direction")
    return (v[0] // g, v[1] // g)


def _half(v):
    # 0 for angles in [0, pi), 1 for [pi, 2pi)
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def angle_cmp(a, b):
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return ha - hb
    c = det(a, b)
    return -1 if c > 0 else (1 if c < 0 else 0)


angle_key = cmp_to_key(angle_cmp)


def sort_by_angle(vectors):
    """Sort nonzero vectors by polar angle in ``[0, 2*pi)``."""
    return sorted(vectors, key=angle_key)


class Parallel(enum.Enum):
    POSITIVE = "positively_parallel"
    NEGATIVE = "negatively_parallel"
    NONE = "not_parallel"


def parallel_class(a, b):
    if a == (0, 0) or b == (0, 0):
        raise ValueError("zero vector")
    if det(a, b) != 0:
        return Parallel.NONE
    return Parallel.POSITIVE if dot(a, b) > 0 else Parallel.NEGATIVE


@dataclass(frozen=True)
class RationalRay:
    """Ray ``{base + t*direction : t >= 0}`` with a primitive direction."""

    direction: Point
    base: Point = (0, 0)

    def __post_init__(self):
        d = tuple(int(c) for c in self.direction)
        object.__setattr__(self, "direction", d)
        object.__setattr__(self, "base", tuple(int(c) for c in self.base))
        if not is_primitive(d):
            raise ValueError(f"ray direction {d} is not primitive")

    @classmethod
    def through(cls, v, base=(0, 0)):
        return cls(primitive(v), base)

    def in_half_plane(self, p):
        """True when ``p`` lies in the closed half plane left of the ray."""
        return det(self.direction, sub(p, self.base)) >= 0

    def side(self, p):
        return det(self.direction, sub(p, self.base))

    def __str__(self):
        return f"({self.direction[0]},{self.direction[1]})"


def ball(radius, center=(0, 0)):
    """Lattice points at Euclidean distance at most ``radius`` from ``center``."""
    r2 = radius * radius
    k = int(math.floor(radius))
    cx, cy = center
    return [(cx + i, cy + j)
            for i in range(-k, k + 1) for j in range(-k, k + 1)
            if i * i + j * j <= r2]


def convex_hull(points):
    """Counterclockwise hull vertices without collinear points."""
    pts = sorted(set((int(p[0]), int(p[1])) for p in points))
    if len(pts) <= 2:
        return pts

    def chain(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and det(sub(out[-1], out[-2]), sub(p, out[-2])) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        hull = hull[:1]
    return hull


@dataclass(frozen=True, eq=True)
class Surd:
    """Exact value ``coeff * sqrt(radicand)`` with squarefree radicand."""

    coeff: Fraction
    radicand: int = 1

    def __float__(self):
        return float(self.coeff) * math.sqrt(self.radicand)

    def __str__(self):
        c = self.coeff
        if c == 0:
            return "0"
        root = "" if self.radicand == 1 else f"sqrt({self.radicand})"
        num = c.numerator
        head = (str(num) if root == "" or abs(num) != 1 else ("-" if num < 0 else "")) + root
        return head if c.denominator == 1 else f"{head}/{c.denominator}"


def _squarefree_split(n):
    outer, rad, f = 1, 1, 2
    while f * f <= n:
        while n % (f * f) == 0:
            outer *= f
            n //= f * f
        if n % f == 0:
            rad *= f
            n //= f
        f += 1
    return outer, rad * n


@dataclass(frozen=True)
class ConvexLatticePolygon:
    """Convex hull of finitely many lattice points.

    Vertices are stored counterclockwise starting from the lowest,
    then leftmost, vertex. Segments and points are allowed.
    """

    vertices: tuple

    def __post_init__(self):
        hull = convex_hull(self.vertices)
        if not hull:
            raise ValueError("polygon needs at least one point")
        start = min(range(len(hull)), key=lambda i: (hull[i][1], hull[i][0]))
        object.__setattr__(self, "vertices", tuple(hull[start:] + hull[:start]))

    @classmethod
    def from_edges(cls, edges, start=(0, 0)):
        verts, p = [start], start
        for e in edges:
            p = add(p, e)
            verts.append(p)
        return cls(tuple(verts))

    @property
    def is_degenerate(self):
        return len(self.vertices) <= 2

    @property
    def edges(self):
        vs = self.vertices
        if len(vs) == 1:
            return []
        return [sub(vs[(i + 1) % len(vs)], vs[i]) for i in range(len(vs))]

    def contains(self, p):
        vs = self.vertices
        if len(vs) == 1:
            return tuple(p) == vs[0]
        if len(vs) == 2:
            a, b = vs
            return det(sub(b, a), sub(p, a)) == 0 and 0 <= dot(sub(p, a), sub(b, a)) <= dot(sub(b, a), sub(b, a))
        return all(det(e, sub(p, v)) >= 0 for v, e in zip(vs, self.edges))

    def bounding_box(self):
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def lattice_points(self):
        x0, y0, x1, y1 = self.bounding_box()
        return [(x, y) for x in range(x0, x1 + 1) for y in range(y0, y1 + 1)
                if self.contains((x, y))]

    def translate(self, v):
        return ConvexLatticePolygon(tuple(add(p, v) for p in self.vertices))

    def scaled(self, n):
        return ConvexLatticePolygon(tuple(scale(p, n) for p in self.vertices))

    def diameter_sq(self):
        return max(dot(sub(a, b), sub(a, b))
                   for a in self.vertices for b in self.vertices)

    def diameter(self):
        return math.sqrt(self.diameter_sq())

    def distance_sq(self, p):
        """Exact squared Euclidean distance from ``p`` to the polygon."""
        if self.contains(p):
            return Fraction(0)
        vs = self.vertices
        if len(vs) == 1:
            return Fraction(dot(sub(p, vs[0]), sub(p, vs[0])))
        best = None
        for i in range(len(vs)):
            a, b = vs[i], vs[(i + 1) % len(vs)]
            d = _segment_distance_sq(p, a, b)
            if best is None or d < best:
                best = d
        return best

    def __str__(self):
        return "conv{" + ", ".join(f"({x},{y})" for x, y in self.vertices) + "}"


def _segment_distance_sq(p, a, b):
    ab, ap = sub(b, a), sub(p, a)
    L = dot(ab, ab)
    t = Fraction(dot(ap, ab), L)
    t = min(max(t, Fraction(0)), Fraction(1))
    dx = ap[0] - t * ab[0]
    dy = ap[1] - t * ab[1]
    return dx * dx + dy * dy


def unit_triangle():
    return ConvexLatticePolygon(((0, 0), (1, 0), (0, 1)))


def segment(v, start=(0, 0)):
    return ConvexLatticePolygon((start, add(start, v)))


def girth(polygon, v):
    """Longest chord of ``polygon`` parallel to ``v``, as an exact surd."""
    if v == (0, 0):
        raise ValueError("zero direction")
    vs = polygon.vertices
    if len(vs) == 1:
        span = Fraction(0)
    elif len(vs) == 2:
        d = sub(vs[1], vs[0])
        span = Fraction(0) if det(d, v) != 0 else Fraction(abs(dot(d, v)), dot(v, v))
    else:
        span = Fraction(0)
        edges = polygon.edges
        for p in vs:
            lo, hi = None, None
            for q, e in zip(vs, edges):
                # det(e, p - q) + t * det(e, v) >= 0
                c0, c1 = det(e, sub(p, q)), det(e, v)
                if c1 > 0:
                    b = Fraction(-c0, c1)
                    lo = b if lo is None else max(lo, b)
                elif c1 < 0:
                    b = Fraction(-c0, c1)
                    hi = b if hi is None else min(hi, b)
            span = max(span, hi - lo)
    outer, rad = _squarefree_split(dot(v, v))
    return Surd(span * outer, rad)


def merge_edge_vectors(p1, p2):
    """Minkowski sum of two convex lattice polygons, built from their edges."""
    sums = {}
    for e in itertools.chain(p1.edges, p2.edges):
        d = primitive(e)
        sums[d] = add(sums.get(d, (0, 0)), e)
    start = add(p1.vertices[0], p2.vertices[0])
    if not sums:
        return ConvexLatticePolygon((start,))
    edges = sort_by_angle(sums.values())
    return ConvexLatticePolygon.from_edges(edges, start)


def minkowski_sum(p1, p2):
    return ConvexLatticePolygon(tuple(add(a, b) for a in p1.vertices for b in p2.vertices))


def _solve_rational(rows, rhs):
    """Unique solution of a small rational system, or None."""
    m = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    ncols = len(rows[0])
    r = 0
    pivots = []
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            return None
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    if any(row[-1] != 0 for row in m[r:]):
        return None
    return [m[i][-1] for i in range(ncols)]


def _ray_weights(dirs):
    """Strictly positive rational weights t with sum(t*u) = 0, sum(t) = 1."""
    n = len(dirs)
    vertices = []
    for k in (2, 3):
        for S in itertools.combinations(range(n), k):
            rows = [[dirs[i][0] for i in S], [dirs[i][1] for i in S], [1] * k]
            sol = _solve_rational(rows, [0, 0, 1])
            if sol is not None and all(t >= 0 for t in sol):
                t = [Fraction(0)] * n
                for i, val in zip(S, sol):
                    t[i] = val
                vertices.append(t)
    if not vertices:
        return None
    avg = [sum(v[i] for v in vertices) / len(vertices) for i in range(n)]
    return avg if all(t > 0 for t in avg) else None


def _integer_multipliers(dirs, weights, cap=200000):
    lcm = 1
    for t in weights:
        lcm = lcm * t.denominator // math.gcd(lcm, t.denominator)
    base = [int(t * lcm) for t in weights]
    g = 0
    for m in base:
        g = math.gcd(g, m)
    best = [m // g for m in base]
    n = len(dirs)
    if n <= 3:
        return best
    # search for a smaller total among positive integer solutions
    i0 = 0
    i1 = next(j for j in range(1, n) if det(dirs[0], dirs[j]) != 0)
    free = [k for k in range(n) if k not in (i0, i1)]
    bound = sum(best)
    if bound ** len(free) > cap:
        return best
    D = det(dirs[i0], dirs[i1])
    best_key = (sum(best), tuple(best))
    for combo in itertools.product(range(1, bound + 1), repeat=len(free)):
        if sum(combo) + 2 > best_key[0]:
            continue
        rx = -sum(c * dirs[k][0] for c, k in zip(combo, free))
        ry = -sum(c * dirs[k][1] for c, k in zip(combo, free))
        a_num = det((rx, ry), dirs[i1])
        b_num = det(dirs[i0], (rx, ry))
        if a_num % D or b_num % D:
            continue
        a, b = a_num // D, b_num // D
        if a <= 0 or b <= 0:
            continue
        m = [0] * n
        m[i0], m[i1] = a, b
        for c, k in zip(combo, free):
            m[k] = c
        key = (sum(m), tuple(m))
        if key < best_key:
            best_key, best = key, m
    return list(best)


def polygon_from_rays(rays):
    """Lattice polygon whose edges are positive multiples of the ray directions.

    Returns the solution with the smallest total edge multiplier.
    """
    dirs = [r.direction if isinstance(r, RationalRay) else primitive(tuple(r)) for r in rays]
    for a, b in itertools.combinations(dirs, 2):
        if parallel_class(a, b) is Parallel.POSITIVE:
            raise ValueError(f"rays {a} and {b} are positively parallel")
    if len(dirs) < 2:
        raise NoPolygon("need at least two rays")
    if len(dirs) == 2:
        if parallel_class(*dirs) is not Parallel.NEGATIVE:
            raise NoPolygon("two rays must be antiparallel")
        first = sort_by_angle(dirs)[0]
        return ConvexLatticePolygon(((0, 0), first))
    weights = _ray_weights(dirs)
    if weights is None:
        raise NoPolygon("origin is not strictly inside the hull of the directions")
    mult = _integer_multipliers(dirs, weights)
    edges = sort_by_angle([scale(d, m) for d, m in zip(dirs, mult)])
    return ConvexLatticePolygon.from_edges(edges)


def _strictly_inside(d1, d2, v):
    return det(d1, v) > 0 and det(v, d2) > 0


def basis_in_cone(ray1, ray2):
    """Positively oriented unimodular basis strictly inside the open cone.

    The cone runs counterclockwise from ``ray1`` to ``ray2`` and must have
    opening angle below pi.
    """
    d1 = ray1.direction if isinstance(ray1, RationalRay) else tuple(ray1)
    d2 = ray2.direction if isinstance(ray2, RationalRay) else tuple(ray2)
    if det(d1, d2) <= 0:
        raise EmptyCone(f"cone from {d1} to {d2} has angle >= pi or is degenerate")
    c = add(d1, d2)
    quads = [((1, 0), (0, 1)), ((0, 1), (-1, 0)), ((-1, 0), (0, -1)), ((0, -1), (1, 0))]
    a, b = next((a, b) for a, b in quads if det(a, c) >= 0 and det(c, b) > 0)
    # Stern-Brocot descent towards the cone
    while True:
        m = add(a, b)
        if _strictly_inside(d1, d2, m):
            break
        # m is within a right angle of c, so its side of c says which
        # boundary ray it has crossed
        if det(c, m) > 0:
            b = m
        else:
            a = m
    k = 1
    while not _strictly_inside(d1, d2, add(scale(m, k), b)):
        k += 1
    return m, add(scale(m, k), b)


@dataclass(frozen=True)
class Sector:
    """Closed region between two rays from ``base`` (angle below pi)."""

    ray1: Point
    ray2: Point
    base: Point = (0, 0)

    def __post_init__(self):
        for name in ("ray1", "ray2", "base"):
            object.__setattr__(self, name, tuple(int(c) for c in getattr(self, name)))

    @property
    def is_valid(self):
        return det(self.ray1, self.ray2) > 0

    def contains(self, p):
        q = sub(p, self.base)
        return det(self.ray1, q) >= 0 and det(q, self.ray2) >= 0

    def supplementary(self):
        return Sector(self.ray2, neg(self.ray1), self.base)


def embedding_translate(small, big, search=None):
    """Some lattice vector ``t`` with ``small + t`` inside ``big``, or None."""
    x0, y0, x1, y1 = big.bounding_box()
    sx0, sy0, sx1, sy1 = small.bounding_box()
    for tx in range(x0 - sx0, x1 - sx1 + 1):
        for ty in range(y0 - sy0, y1 - sy1 + 1):
            if all(big.contains(add(v, (tx, ty))) for v in small.vertices):
                return (tx, ty)
    return None


def primitive_directions(h):
    """Primitive vectors with both coordinates bounded by ``h``, by angle."""
    out = [(a, b) for a in range(-h, h + 1) for b in range(-h, h + 1)
           if (a, b) != (0, 0) and math.gcd(a, b) == 1]
    return sort_by_angle(out)
