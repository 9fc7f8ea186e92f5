import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from shiftlab.errors import EmptyCone, NoPolygon
from shiftlab.geometry import (ConvexLatticePolygon, Parallel, RationalRay, Sector, Surd, add, ball,
                               basis_in_cone, convex_hull, det, embedding_translate, girth,
                               merge_edge_vectors, minkowski_sum, neg, parallel_class,
                               polygon_from_rays, primitive, segment, sort_by_angle, unit_triangle)

coord = st.integers(-6, 6)
point = st.tuples(coord, coord)
point_sets = st.lists(point, min_size=1, max_size=8)
nonzero = point.filter(lambda v: v != (0, 0))


def angles_increase(edges):
    return all(det(a, b) > 0 for a, b in zip(edges, edges[1:])) if len(edges) > 2 else True


# --- oracles


def test_triangle_edges():
    T = unit_triangle()
    assert T.vertices == ((0, 0), (1, 0), (0, 1))
    assert list(T.edges) == [(1, 0), (-1, 1), (0, -1)]
    assert sorted(T.lattice_points()) == [(0, 0), (0, 1), (1, 0)]


def test_sort_by_angle_starts_at_positive_axis():
    vs = [(0, -1), (-1, 1), (1, 0), (-1, 0), (1, 1)]
    assert sort_by_angle(vs) == [(1, 0), (1, 1), (-1, 1), (-1, 0), (0, -1)]


def test_parallel_classes():
    assert parallel_class((1, 2), (2, 4)) is Parallel.POSITIVE
    assert parallel_class((1, 2), (-1, -2)) is Parallel.NEGATIVE
    assert parallel_class((1, 2), (2, 1)) is Parallel.NONE


def test_ray_rejects_non_primitive():
    with pytest.raises(ValueError):
        RationalRay((2, 2))
    assert RationalRay.through((2, 4)).direction == (1, 2)


def test_half_plane_orientation_fixture():
    # closed half plane on the left when walking along the ray
    up = RationalRay((1, 0))
    assert up.in_half_plane((5, 0)) and up.in_half_plane((0, 3)) and not up.in_half_plane((0, -1))
    down = RationalRay((0, -1))
    assert down.in_half_plane((2, 7)) and not down.in_half_plane((-1, 0))
    diag = RationalRay((-1, 1))
    assert all(diag.in_half_plane(p) == (p[1] <= -p[0]) for p in ball(4))


def test_ball_counts():
    assert len(ball(1)) == 5
    assert len(ball(math.sqrt(2))) == 9


def test_polygon_from_rays_triangle_and_square():
    rays = [RationalRay(d) for d in [(1, 0), (-1, 1), (0, -1)]]
    assert polygon_from_rays(rays) == unit_triangle()
    sq = polygon_from_rays([RationalRay(d) for d in [(1, 0), (0, 1), (-1, 0), (0, -1)]])
    assert sq.vertices == ((0, 0), (1, 0), (1, 1), (0, 1))


def test_polygon_from_rays_errors():
    with pytest.raises(NoPolygon):
        polygon_from_rays([RationalRay((1, 0)), RationalRay((0, 1))])
    with pytest.raises(NoPolygon):
        polygon_from_rays([RationalRay((1, 0)), RationalRay((0, 1)), RationalRay((1, 1))])
    with pytest.raises(ValueError):
        polygon_from_rays([(1, 0), (2, 0), (-1, 1), (0, -1)])


def test_two_antiparallel_rays_give_segment():
    P = polygon_from_rays([RationalRay((1, 1)), RationalRay((-1, -1))])
    assert P.vertices == ((0, 0), (1, 1))


def test_merge_example():
    sq = ConvexLatticePolygon(((0, 0), (1, 0), (1, 1), (0, 1)))
    P = merge_edge_vectors(sq, unit_triangle())
    assert P.vertices == ((0, 0), (2, 0), (2, 1), (1, 2), (0, 2))


def test_girth_examples():
    T = unit_triangle()
    assert girth(T, (1, 1)) == Surd(Fraction(1, 2), 2)
    assert str(girth(T, (1, 1))) == "sqrt(2)/2"
    assert girth(T, (1, 0)) == Surd(Fraction(1), 1)
    assert girth(segment((2, 0)), (1, 0)) == Surd(Fraction(2), 1)
    assert girth(segment((2, 0)), (0, 1)) == Surd(Fraction(0), 1)


def test_basis_in_cone_example():
    assert basis_in_cone((1, 0), (0, 1)) == ((1, 1), (1, 2))
    with pytest.raises(EmptyCone):
        basis_in_cone((1, 0), (-1, 0))


def test_sector():
    s = Sector((1, 0), (0, 1))
    assert s.is_valid and s.contains((3, 2)) and not s.contains((-1, 1))
    assert s.supplementary() == Sector((0, 1), (-1, 0))


# --- invariants


@given(point_sets)
def test_polygon_invariants(pts):
    P = ConvexLatticePolygon(tuple(pts))
    edges = P.edges
    if len(P.vertices) > 1:
        assert tuple(map(sum, zip(*edges))) == (0, 0)
    assert angles_increase(list(edges)) or len(P.vertices) <= 2
    assert ConvexLatticePolygon(P.vertices) == P
    assert set(convex_hull(list(P.vertices))) == set(P.vertices)
    assert all(P.contains(p) for p in pts)


@given(st.lists(nonzero, min_size=3, max_size=6))
def test_polygon_from_rays_properties(dirs):
    dirs = list({primitive(d) for d in dirs})
    try:
        P = polygon_from_rays(dirs)
    except (NoPolygon, ValueError):
        return
    edges = P.edges
    assert tuple(map(sum, zip(*edges))) == (0, 0)
    mults = []
    for e in edges:
        d = primitive(e)
        assert d in dirs  # positively parallel to a source ray
        mults.append(math.gcd(*e))
    assert len(edges) == len(dirs)
    assert math.gcd(*mults) == 1


@given(point_sets, point_sets)
def test_merge_matches_minkowski(a, b):
    P1, P2 = ConvexLatticePolygon(tuple(a)), ConvexLatticePolygon(tuple(b))
    M = merge_edge_vectors(P1, P2)
    assert M == minkowski_sum(P1, P2)
    if len(M.vertices) > 1:
        assert tuple(map(sum, zip(*M.edges))) == (0, 0)
    assert embedding_translate(P1, M) is not None
    assert embedding_translate(P2, M) is not None


@given(point_sets, nonzero, st.integers(1, 3))
def test_girth_scaling_and_symmetry(pts, v, n):
    P = ConvexLatticePolygon(tuple(pts))
    g = girth(P, v)
    assert girth(P.scaled(n), v) == Surd(g.coeff * n, g.radicand)
    assert girth(P, neg(v)) == g


@given(point_sets, nonzero)
def test_girth_against_sampling(pts, v):
    P = ConvexLatticePolygon(tuple(pts))
    # lattice chord lengths never exceed the girth
    lp = P.lattice_points()
    for p in lp:
        k = 0
        while P.contains(add(p, ((k + 1) * v[0], (k + 1) * v[1]))):
            k += 1
        assert k * math.sqrt(v[0] ** 2 + v[1] ** 2) <= float(girth(P, v)) + 1e-9


@given(nonzero, nonzero)
def test_basis_in_cone_property(a, b):
    a, b = primitive(a), primitive(b)
    assume(det(a, b) > 0)
    u1, u2 = basis_in_cone(a, b)
    assert abs(det(u1, u2)) == 1
    for u in (u1, u2):
        assert det(a, u) > 0 and det(u, b) > 0
