"""Spacetimes of one-dimensional cellular automata.

A spacetime stacks the orbit ``y, phi(y), phi^2(y), ...`` of a row ``y``
as consecutive rows of a planar configuration. Width functions measure how
far a half line of the bottom row determines the rows above it.

Words are handled as integer numpy arrays of shape ``(count, length)``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BudgetExceeded, NotApplicable, ShiftlabError
from .engine import DEFAULT_BUDGET
from .shifts import ForbiddenPatterns, Language1D, LinearRule, full_language

STANDARD_BASIS = ((1, 0), (0, 1))


def _encode(words, q):
    """Integer code of each row, most significant symbol first."""
    L = words.shape[1]
    if L and q ** L >= 2 ** 62:
        raise BudgetExceeded(q ** L, "word encoding")
    code = np.zeros(words.shape[0], dtype=np.int64)
    for t in range(L):
        code = code * q + words[:, t]
    return code


def unique_rows(words, q):
    """Distinct rows in lexicographic order."""
    L = words.shape[1]
    if L == 0 or q ** L >= 2 ** 62:
        return np.unique(words, axis=0)
    _, first = np.unique(_encode(words, q), return_index=True)
    return words[first]


def all_words(q, L, budget=None):
    limit = DEFAULT_BUDGET if budget is None else budget
    if q ** L > limit:
        raise BudgetExceeded(limit, f"{q}^{L} words")
    idx = np.arange(q ** L, dtype=np.int64)
    powers = q ** np.arange(L - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // powers[None, :]) % q


@dataclass(frozen=True)
class LocalRule:
    """``phi(y)_0 = table[y_lo .. y_hi]``.

    ``table`` is either a tuple indexed by the window word read as a
    base-``size`` number, or a dict from such codes for rules defined only
    on legal words. ``linear`` optionally records coefficients for the
    offsets ``lo..hi`` when the rule is linear over a prime field.
    """

    size: int
    lo: int
    hi: int
    table: object
    linear: tuple = None

    def __post_init__(self):
        if self.hi < self.lo:
            raise ValueError("empty rule window")
        if isinstance(self.table, dict):
            object.__setattr__(self, "table", dict(sorted(self.table.items())))
        else:
            t = tuple(int(v) for v in self.table)
            if len(t) != self.size ** self.width:
                raise ValueError(f"table needs {self.size ** self.width} entries, got {len(t)}")
            object.__setattr__(self, "table", t)

    def __hash__(self):
        tab = tuple(self.table.items()) if isinstance(self.table, dict) else self.table
        return hash((self.size, self.lo, self.hi, tab))

    @property
    def width(self):
        return self.hi - self.lo + 1

    @property
    def sparse(self):
        return isinstance(self.table, dict)

    def apply(self, words):
        """Image of each word; output length shrinks by ``width - 1``."""
        w, q = self.width, self.size
        n_out = words.shape[1] - w + 1
        if n_out <= 0:
            return np.zeros((words.shape[0], 0), dtype=np.int64)
        out = np.empty((words.shape[0], n_out), dtype=np.int64)
        if self.sparse:
            keys = np.fromiter(self.table.keys(), dtype=np.int64, count=len(self.table))
            vals = np.fromiter(self.table.values(), dtype=np.int64, count=len(self.table))
        else:
            tab = np.asarray(self.table, dtype=np.int64)
        for s in range(n_out):
            code = _encode(words[:, s:s + w], q)
            if self.sparse:
                pos = np.searchsorted(keys, code)
                pos = np.minimum(pos, len(keys) - 1)
                if not np.all(keys[pos] == code):
                    raise ShiftlabError("rule applied to a word outside its domain")
                out[:, s] = vals[pos]
            else:
                out[:, s] = tab[code]
        return out

    def __call__(self, window):
        code = 0
        for v in window:
            code = code * self.size + int(v)
        return self.table[code]

    def shifted(self, p):
        return LocalRule(self.size, self.lo + p, self.hi + p, self.table, self.linear)


def linear_rule(coeffs, p, lo=None):
    """Rule ``sum(c_t * y_t) mod p`` from ``{offset: coefficient}``."""
    offs = sorted(coeffs)
    lo = offs[0] if lo is None else lo
    hi = offs[-1]
    cs = tuple(coeffs.get(t, 0) % p for t in range(lo, hi + 1))
    table = tuple(sum(c * v for c, v in zip(cs, w)) % p
                  for w in itertools.product(range(p), repeat=hi - lo + 1))
    return LocalRule(p, lo, hi, table, cs)


def table_rule(q, lo, hi, fn):
    """Rule from a Python function of the window tuple."""
    table = tuple(int(fn(w)) for w in itertools.product(range(q), repeat=hi - lo + 1))
    return LocalRule(q, lo, hi, table)


@dataclass(frozen=True)
class Spacetime:
    rule: LocalRule
    base: object = None  # Language1D or RowImage; None means the full shift
    basis: tuple = STANDARD_BASIS
    name: str = "spacetime"

    def __post_init__(self):
        if self.base is None:
            object.__setattr__(self, "base", full_language(self.rule.size))

    @property
    def size(self):
        return self.rule.size

    def words(self, L, budget=None):
        """Legal base words of length L as an array."""
        base = self.base
        if isinstance(base, Language1D) and base.is_full:
            return all_words(base.size, L, budget)
        if isinstance(base, Language1D):
            ws = sorted(base.words(L, budget))
            return np.array(ws, dtype=np.int64).reshape(len(ws), L)
        return base.words(L, budget)

    def iterate(self, words, k):
        for _ in range(k):
            words = self.rule.apply(words)
        return words

    def validate(self, L=6, budget=None):
        """Check that images of legal words are legal words."""
        w = self.rule.width
        img = self.rule.apply(self.words(L + w - 1, budget))
        legal = set(map(tuple, self.words(L, budget).tolist()))
        return all(tuple(r) in legal for r in img.tolist())


def ledrappier_spacetime():
    return Spacetime(linear_rule({0: 1, 1: 1}, 2), name="ledrappier")


def identity_spacetime(q=2):
    return Spacetime(LocalRule(q, 0, 0, tuple(range(q))), name="identity")


def twist(st, p):
    """Spacetime of ``phi o sigma^p`` with ``sigma`` the left shift."""
    if p == 0:
        return st
    return Spacetime(st.rule.shifted(p), st.base, st.basis, f"{st.name}*s^{p}")


# ---------------------------------------------------------------------------
# width functions


def _determined(keys, out, size):
    """Is ``out`` a function of ``keys``?"""
    return len(np.unique(keys)) == len(np.unique(keys * size + out))


def widths(st, k, budget=None):
    """``(W+(k), W-(k))`` by exact enumeration of base words."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return 0, 0
    lo, hi = k * st.rule.lo, k * st.rule.hi
    L = hi - lo + 1
    words = st.words(L, budget)
    out = st.iterate(words, k)[:, 0]
    q = st.size
    code = _encode(words, q)
    # W+: drop s leading (negative) places, see whether the rest decides
    s_plus = 0
    for s in range(1, L + 1):
        if not _determined(code % (q ** (L - s)), out, q):
            break
        s_plus = s
    # W-: drop s trailing (positive) places
    s_minus = 0
    for s in range(1, L + 1):
        if not _determined(code // (q ** s), out, q):
            break
        s_minus = s
    if s_plus == L or s_minus == L:
        raise ShiftlabError("iterate is constant on the base language; widths are infinite")
    return -lo - s_plus, -hi + s_minus


def iterate_coefficients(rule, k):
    """Coefficients of the k-th iterate of a linear rule, offsets k*lo..k*hi."""
    if rule.linear is None:
        raise NotApplicable("rule has no linear form")
    p = rule.size
    poly = np.array([1], dtype=np.int64)
    base = np.array(rule.linear, dtype=np.int64)
    for _ in range(k):
        poly = np.convolve(poly, base) % p
    return poly


def linear_widths(st, k):
    """Widths of a linear rule on the full base, read off the iterate's support."""
    if not (isinstance(st.base, Language1D) and st.base.is_full):
        raise NotApplicable("dependency analysis needs the full base language")
    if k == 0:
        return 0, 0
    support = np.nonzero(iterate_coefficients(st.rule, k))[0]
    if len(support) == 0:
        raise ShiftlabError("iterate is constant on the base language; widths are infinite")
    lo = k * st.rule.lo
    return -(lo + int(support[0])), -(lo + int(support[-1]))


def w_plus(st, k, budget=None):
    return widths(st, k, budget)[0]


def w_minus(st, k, budget=None):
    return widths(st, k, budget)[1]


@dataclass(frozen=True)
class AlphaEstimate:
    """Asymptotic slope: the certified Fekete bound, plus a heuristic exact value.

    ``value`` is the eventual slope of the width table when ``exact`` is
    set, otherwise it repeats the bound.
    """

    bound: Fraction
    exact: bool
    kind: str  # "upper" for alpha+, "lower" for alpha-
    value: Fraction = None

    def __post_init__(self):
        if self.value is None:
            object.__setattr__(self, "value", self.bound)

    def __str__(self):
        if self.exact:
            return f"{self.value} (exact; Fekete bound {self.bound})"
        return f"{self.bound} ({self.kind} bound)"


@dataclass(frozen=True)
class WidthTable:
    plus: tuple   # W+(0..k_max)
    minus: tuple  # W-(0..k_max)
    alpha_plus: AlphaEstimate = None
    alpha_minus: AlphaEstimate = None

    @property
    def k_max(self):
        return len(self.plus) - 1

    def to_json(self):
        return {"k": list(range(len(self.plus))), "w_plus": list(self.plus),
                "w_minus": list(self.minus),
                "alpha_plus": {"value": str(self.alpha_plus.value), "bound": str(self.alpha_plus.bound),
                               "exact": self.alpha_plus.exact},
                "alpha_minus": {"value": str(self.alpha_minus.value), "bound": str(self.alpha_minus.bound),
                                "exact": self.alpha_minus.exact}}


def eventual_slope(values):
    """Slope ``c/d`` when ``W(k) - W(k-d) = c`` over the last two periods, else None.

    The smallest such period is used; at least three periods must fit.
    """
    k_max = len(values) - 1
    for d in range(1, (k_max + 1) // 3 + 1):
        ks = range(k_max - 2 * d + 1, k_max + 1)
        diffs = {values[k] - values[k - d] for k in ks}
        if len(diffs) == 1:
            return Fraction(diffs.pop(), d)
    return None


def width_table(st, k_max, budget=None):
    plus, minus = [0], [0]
    for k in range(1, k_max + 1):
        wp, wm = widths(st, k, budget)
        plus.append(wp)
        minus.append(wm)
    ap = min(Fraction(plus[k], k) for k in range(1, k_max + 1))
    am = max(Fraction(minus[k], k) for k in range(1, k_max + 1))
    sp, sm = eventual_slope(plus), eventual_slope(minus)
    # an eventual slope must respect the one-sided Fekete bound
    ep = sp is not None and sp <= ap
    em = sm is not None and sm >= am
    return WidthTable(tuple(plus), tuple(minus),
                      AlphaEstimate(ap, ep, "upper", sp if ep else ap),
                      AlphaEstimate(am, em, "lower", sm if em else am))


def alpha_bounds(st, k_max, budget=None):
    t = width_table(st, k_max, budget)
    return t.alpha_plus, t.alpha_minus


def light_cone_levels(st, n_range, budget=None):
    """``n -> (low, high)`` interval of the light cone at level n."""
    out = {}
    for n in n_range:
        if n >= 0:
            wp, wm = widths(st, n, budget)
            out[n] = (wm, wp)
        else:
            wp, wm = widths(st, -n, budget)
            out[n] = (-wp, -wm)
    return out


# ---------------------------------------------------------------------------
# the planar shift


def induced_spec(st):
    """Planar shift spec whose configurations are the spacetime's orbits."""
    e1, e2 = st.basis
    r = st.rule

    def at(t, level):
        return (t * e1[0] + level * e2[0], t * e1[1] + level * e2[1])

    base = st.base
    if not isinstance(base, Language1D):
        raise NotApplicable("planar spec needs a base given by local constraints")
    if not base.is_full and (len(base.components) != 1 or base.components[0].period != 1):
        raise NotApplicable("planar spec needs a period-one base language")
    name = f"{st.name}-planar"
    if r.linear is not None and base.is_full:
        terms = [(at(t, 0), c) for t, c in zip(range(r.lo, r.hi + 1), r.linear) if c]
        terms.append((at(0, 1), r.size - 1))
        return LinearRule.single(r.size, terms, 0, name)
    window = [at(t, 0) for t in range(r.lo, r.hi + 1)] + [at(0, 1)]
    base_cons = [] if base.is_full else list(base.components[0].constraints)
    for _, offs, _ in base_cons:
        for o in offs:
            if at(o, 0) not in window:
                window.append(at(o, 0))
    pos = {c: i for i, c in enumerate(window)}
    n_rule = r.width
    bad = set()
    for vals in itertools.product(range(r.size), repeat=len(window)):
        ok = r(vals[:n_rule]) == vals[n_rule]
        for _, offs, allowed in base_cons:
            if tuple(vals[pos[at(o, 0)]] for o in offs) not in allowed:
                ok = False
        if not ok:
            bad.add(vals)
    return ForbiddenPatterns(r.size, tuple(window), frozenset(bad), name)


# ---------------------------------------------------------------------------
# recoding and normalization


@dataclass(frozen=True, eq=False)
class RowImage:
    """Rows of a recoded spacetime: letters are patterns on ``cells``.

    ``cells`` are ``(x, t)`` with ``-depth <= t <= 0``; the letter at
    position i of a row stores the source values at ``(i + x, t)``.
    """

    source: Spacetime
    cells: tuple
    symbols: tuple = field(default=None)

    @property
    def depth(self):
        return -min(t for _, t in self.cells)

    @property
    def size(self):
        return len(self.symbols)

    def raw(self, L, level_shift=0, extra=(), budget=None):
        """Source patterns over recoded positions 0..L-1.

        Returns an array of shape (words, L, len(cells)) and, for each
        ``(x, t)`` in ``extra``, the source value at that place.
        """
        src = self.source
        lo, hi = src.rule.lo, src.rule.hi
        N = self.depth + level_shift
        pts = [(i + x, N + t) for i in range(L) for x, t in self.cells]
        pts += [(x, N + t) for x, t in extra]
        s_lo = min(x + lev * lo for x, lev in pts)
        s_hi = max(x + lev * hi for x, lev in pts)
        levels = max(lev for _, lev in pts)
        rows = [src.words(s_hi - s_lo + 1, budget)]
        for _ in range(levels):
            rows.append(src.rule.apply(rows[-1]))

        def val(x, lev):
            return rows[lev][:, x - (s_lo - lev * lo)]

        pats = np.stack([np.stack([val(i + x, N + t) for x, t in self.cells], axis=1)
                         for i in range(L)], axis=1)
        ext = [val(x, N + t) for x, t in extra]
        return pats, ext

    def to_symbols(self, pats):
        q = self.source.size
        codes = np.zeros(pats.shape[:2], dtype=np.int64)
        for c in range(pats.shape[2]):
            codes = codes * q + pats[:, :, c]
        table = np.asarray(self.symbols, dtype=np.int64)
        idx = np.searchsorted(table, codes)
        return idx

    def words(self, L, budget=None):
        pats, _ = self.raw(L, budget=budget)
        return unique_rows(self.to_symbols(pats), self.size)


def recode_spacetime(st, cells, budget=None, max_radius=None):
    """Canonical recoding of a spacetime by a finite set of past cells."""
    cells = tuple(sorted(set(cells)))
    if any(t > 0 for _, t in cells) or (0, 0) not in cells:
        raise ValueError("recoding cells must lie at or below level 0 and contain the origin")
    img = RowImage(st, cells, ())
    pats, _ = img.raw(1, budget=budget)
    q = st.size
    codes = np.zeros(pats.shape[0], dtype=np.int64)
    for c in range(pats.shape[2]):
        codes = codes * q + pats[:, 0, c]
    symbols = tuple(int(v) for v in np.unique(codes))
    img = RowImage(st, cells, symbols)
    xs = [x for x, _ in cells]
    reach = max(abs(st.rule.lo), abs(st.rule.hi))
    limit = max_radius if max_radius is not None else max(map(abs, xs)) + reach
    for R in range(0, limit + 1):
        L = 2 * R + 1
        target = [(x + R, t + 1) for x, t in cells]
        pats, ext = img.raw(L, extra=target, budget=budget)
        word = img.to_symbols(pats)
        tgt = np.stack(ext, axis=1)[:, None, :]
        tsym = img.to_symbols(tgt)[:, 0]
        keys = _encode(word, img.size)
        if _determined(keys, tsym, img.size):
            table = dict(zip(keys.tolist(), tsym.tolist()))
            rule = LocalRule(img.size, -R, R, table)
            return Spacetime(rule, img, st.basis, f"{st.name}[recoded]")
    raise ShiftlabError("recoded rule not determined within the search radius")


def slope_triangle(alpha, N):
    """Lattice points between the vertical axis and ``i = alpha*j``, ``-N <= j <= 0``."""
    out = []
    for j in range(-N, 1):
        a = alpha * j
        lo, hi = min(0, math.ceil(a)), max(0, math.floor(a))
        out.extend((i, j) for i in range(lo, hi + 1))
    return out


def is_normalized(table):
    ap, am = table.alpha_plus.value, table.alpha_minus.value
    return all(table.plus[n] == math.ceil(ap * n) and table.minus[n] == math.floor(am * n)
               for n in range(table.k_max + 1))


@dataclass(frozen=True)
class Normalization:
    spacetime: Spacetime
    table: WidthTable
    strip_height: int  # 0 when the input was already normalized


def normalize_spacetime(st, k_max, budget=None, max_height=3, closing_radius=4, check_closing=True):
    """Recode so that the width functions are ceilings and floors of linear ones.

    Returns a Normalization, or None when no tried strip height verifies.
    """
    from .coding import is_closing

    table = width_table(st, k_max, budget)
    ap, am = table.alpha_plus, table.alpha_minus
    if not (ap.exact and am.exact):
        raise NotApplicable("asymptotic slopes are not certified exact at this k_max")
    if check_closing:
        spec = induced_spec(st)
        for ray in ((am.value.numerator, am.value.denominator),
                    (-ap.value.numerator, -ap.value.denominator)):
            try:
                res = is_closing(spec, ray, 2, closing_radius, budget)
            except NotApplicable as exc:
                raise NotApplicable(f"edge ray {ray} is not a closing candidate: {exc}")
            if not res.closing:
                raise NotApplicable(f"edge ray {ray} has no closing certificate")
    if is_normalized(table):
        return Normalization(st, table, 0)
    for N in range(1, max_height + 1):
        try:
            mid = recode_spacetime(st, slope_triangle(ap.value, N), budget)
            out = recode_spacetime(mid, slope_triangle(am.value, N), budget)
            t2 = width_table(out, k_max, budget)
        except (BudgetExceeded, ShiftlabError):
            continue
        fixed = WidthTable(t2.plus, t2.minus, ap, am)
        if is_normalized(fixed):
            return Normalization(out, fixed, N)
    return None
