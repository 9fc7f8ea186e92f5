import itertools

import pytest
from hypothesis import given, strategies as st

from shiftlab import engine
from shiftlab.errors import BudgetExceeded, ConfigError, NotConvex
from shiftlab.linalg import RowSpace, is_prime
from shiftlab.shifts import (ForbiddenPatterns, GroupRule, LinearRule, Pattern, compile_group_rule,
                             constant_shift, count_colorings, count_explicit, count_words_1d,
                             einsiedler_restriction, enumerate_colorings, full_shift, horizontal_stripes,
                             is_convex_region, is_legal, ledrappier, legal_colorings, nivat_bound_check,
                             one_letter_shift, product_shift, rectangle, region, sft_language, translate)

small = st.tuples(st.integers(-2, 2), st.integers(-2, 2))
regions = st.lists(small, min_size=1, max_size=10).map(region)
shift_vec = st.tuples(st.integers(-20, 20), st.integers(-20, 20))


def brute_count(spec, pts):
    """Oracle: try every coloring and keep the locally legal ones."""
    pts = sorted(pts)
    q = spec.alphabet_size
    return sum(is_legal(spec, dict(zip(pts, vals))) for vals in itertools.product(range(q), repeat=len(pts)))


def cyclic_group(p):
    return GroupRule(tuple(tuple((a + b) % p for b in range(p)) for a in range(p)),
                     ((0, 0), (1, 0), (0, 1)), 0, "cyclic")


# --- oracles


def test_is_prime():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]


def test_rowspace_gf2_and_gf3():
    rs = RowSpace(2)
    assert rs.add(0b011, 1) and rs.add(0b110, 0)
    assert not rs.add(0b101, 1)  # sum of the first two
    assert rs.rank == 2 and rs.contains(0b101)
    x = rs.solution(3)
    assert (x[0] + x[1]) % 2 == 1 and (x[1] + x[2]) % 2 == 0
    rs.add(0b101, 0)
    assert rs.inconsistent
    r3 = RowSpace(3)
    r3.add({0: 1, 1: 2}, 1)
    x = r3.solution(2)
    assert (x[0] + 2 * x[1]) % 3 == 1


def test_ledrappier_small_counts(led):
    assert count_colorings(led, rectangle(2, 2)) == 8
    assert count_colorings(led, rectangle(3, 2)) == 16
    assert brute_count(led, rectangle(2, 2)) == 8


def test_enumerated_patterns_are_legal(led):
    pats = enumerate_colorings(led, rectangle(2, 2))
    assert len(pats) == 8 == len(set(pats))
    assert all(is_legal(led, p) for p in pats)


def test_composite_modulus_rejected():
    with pytest.raises(ConfigError, match="modulus must be prime"):
        LinearRule.single(4, (((0, 0), 1),))


def test_builtin_counts():
    assert count_colorings(full_shift(3), rectangle(2, 2)) == 81
    assert count_colorings(one_letter_shift(), rectangle(3, 3)) == 1
    assert count_colorings(constant_shift(3), rectangle(3, 3)) == 3
    assert count_colorings(horizontal_stripes(), rectangle(4, 3)) == 2


def test_forbidden_pattern_spec():
    # no two horizontally adjacent ones
    spec = ForbiddenPatterns(2, ((0, 0), (1, 0)), frozenset({(1, 1)}))
    assert count_colorings(spec, rectangle(3, 1)) == 5
    assert count_colorings(spec, rectangle(3, 2)) == 25


def test_nivat_directions(led):
    assert not nivat_bound_check(led, rectangle(2, 2)).holds
    assert nivat_bound_check(led, rectangle(2, 2)).count == 8
    assert nivat_bound_check(one_letter_shift(), rectangle(2, 2)).holds
    with pytest.raises(NotConvex):
        nivat_bound_check(led, [(0, 0), (2, 0)])


def test_convex_region():
    assert is_convex_region(rectangle(3, 2))
    assert not is_convex_region([(0, 0), (2, 0)])


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        enumerate_colorings(full_shift(2), rectangle(4, 4), budget=100)


def test_einsiedler_counts_small():
    R = einsiedler_restriction()
    # every word of length 2 occurs
    assert count_words_1d(R, 2) == 4
    for n in range(1, 6):
        assert count_words_1d(R, 2 * n) == 5 * 2 ** n - 6


def test_sft_language():
    golden = sft_language(2, 2, [(1, 1)])
    assert [count_words_1d(golden, n) for n in range(1, 7)] == [2, 3, 5, 8, 13, 21]


def test_engine_components_split():
    cons = [engine.Constraint(((0, 0), (1, 0)), lambda v: v[0] == v[1])]
    cells = [(0, 0), (1, 0), (5, 5)]
    dom = {c: range(2) for c in cells}
    assert engine.count_dp(cells, dom, cons) == 4
    assert len(engine.enumerate_all(cells, dom, cons)) == 4
    sol = engine.solve(cells, dom, cons)
    assert sol[(0, 0)] == sol[(1, 0)]


# --- invariants


@given(regions, shift_vec)
def test_translation_invariance(R, v):
    led = ledrappier()
    assert count_colorings(led, R) == count_colorings(led, translate(R, v))
    g = cyclic_group(3)
    assert count_explicit(g, R) == count_explicit(g, translate(R, v))


@given(regions)
def test_rank_formula_matches_enumeration(R):
    for spec in (ledrappier(), LinearRule.single(3, (((0, 0), 1), ((1, 0), 2), ((0, 1), 1)), 1)):
        rank_count = count_colorings(spec, R)
        assert rank_count == len(enumerate_colorings_explicit(spec, R))
        if len(R) <= 8 or spec.modulus == 2:
            assert rank_count == brute_count(spec, R)


def enumerate_colorings_explicit(spec, R):
    pts = sorted(R)
    return engine.enumerate_all(pts, {c: range(spec.alphabet_size) for c in pts},
                                spec.constraint_instances(set(pts)))


@given(regions, st.data())
def test_restriction_consistency(B, data):
    led = ledrappier()
    A = region(data.draw(st.lists(st.sampled_from(sorted(B)), min_size=1)))
    legal_A = set(enumerate_colorings(led, A))
    for pat in enumerate_colorings(led, B):
        assert pat.restrict(A) in legal_A


@given(regions)
def test_product_law(R):
    a, b = ledrappier(), cyclic_group(3)
    prod = product_shift(a, b)
    assert count_colorings(prod, R) == count_colorings(a, R) * count_colorings(b, R)
    if len(R) <= 6:
        assert len(enumerate_colorings(prod, R)) == count_colorings(prod, R)


@given(regions, st.sampled_from([2, 3]))
def test_group_compile_agrees_with_linear(R, p):
    g = cyclic_group(p)
    lin = LinearRule.single(p, (((0, 0), 1), ((1, 0), 1), ((0, 1), 1)), 0)
    compiled = compile_group_rule(g)
    n = count_colorings(lin, R)
    assert count_explicit(g, R) == n
    assert count_explicit(compiled, R) == n


def test_legal_colorings_pattern_list(led):
    res = legal_colorings(led, rectangle(2, 1), enumerate=True)
    assert res.count == 4 and all(isinstance(p, Pattern) for p in res.patterns)


def test_recoded_enumeration_is_sorted():
    from shiftlab.coding import canonical_recode
    R = canonical_recode(ledrappier(), [(0, 0), (1, 0)])
    pats = enumerate_colorings(R, rectangle(2, 1))
    assert pats == sorted(pats) and len(pats) == count_colorings(R, rectangle(2, 1)) == 8
