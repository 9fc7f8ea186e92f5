"""Two-dimensional shift specifications and pattern counting.

A spec describes a subshift of ``A^(Z^2)`` by local rules. A coloring of
a finite region is *legal* when every rule instance lying entirely in the
region is satisfied.
"""
from __future__ import annotations

import itertools
from collections import namedtuple
from dataclasses import dataclass, field
from functools import cached_property

from . import engine
from .engine import Constraint
from .errors import ConfigError, NotConvex
from .geometry import ConvexLatticePolygon, add, sub
from .linalg import RowSpace, is_prime


def region(points):
    return frozenset((int(p[0]), int(p[1])) for p in points)


def rectangle(width, height, origin=(0, 0)):
    x0, y0 = origin
    return region((x0 + i, y0 + j) for i in range(width) for j in range(height))


def translate(points, v):
    return frozenset(add(p, v) for p in points)


def cell_order(points):
    """Column-major order used by elimination and the frontier sweep."""
    return sorted(points)


@dataclass(frozen=True, order=True)
class Pattern:
    """Coloring of a finite region; compares point-wise."""

    colors: tuple  # sorted ((point, symbol), ...)

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(sorted((tuple(p), int(v)) for p, v in d.items())))

    @property
    def region(self):
        return frozenset(p for p, _ in self.colors)

    def as_dict(self):
        return dict(self.colors)

    def __getitem__(self, p):
        return self.as_dict()[tuple(p)]

    def restrict(self, points):
        pts = set(points)
        return Pattern(tuple((p, v) for p, v in self.colors if p in pts))

    def __len__(self):
        return len(self.colors)


# ---------------------------------------------------------------------------
# spec kinds


class ShiftSpec:
    """Common interface of all spec kinds."""

    name: str
    kind: str

    @property
    def alphabet_size(self):
        raise NotImplementedError

    def templates(self):
        """Local rules as ``(offsets, check)`` pairs."""
        raise NotImplementedError

    def constraint_instances(self, points):
        pts = points if isinstance(points, (set, frozenset)) else set(points)
        out = []
        for offsets, check in self.templates():
            o0 = offsets[0]
            for p in pts:
                v = sub(p, o0)
                cells = tuple(add(o, v) for o in offsets)
                if all(c in pts for c in cells):
                    out.append(Constraint(cells, check))
        return out


Equation = namedtuple("Equation", "terms constant")


def _linear_check(coeffs, constant, p):
    def check(vals):
        return sum(c * v for c, v in zip(coeffs, vals)) % p == constant
    return check


@dataclass(frozen=True)
class LinearRule(ShiftSpec):
    """Sum of ``coeff * x(v + offset)`` equals ``constant`` mod p, at every v.

    Several equations may be imposed at once.
    """

    modulus: int
    equations: tuple
    name: str = "linear"
    kind = "linear"

    def __post_init__(self):
        if not is_prime(self.modulus):
            raise ConfigError("modulus must be prime", "/alphabet/modulus")
        eqs = []
        for eq in self.equations:
            terms = tuple((tuple(int(c) for c in o), int(k) % self.modulus) for o, k in eq[0])
            offsets = [o for o, _ in terms]
            if len(set(offsets)) != len(offsets):
                raise ConfigError("repeated offset in linear rule", "/rule/terms")
            eqs.append(Equation(terms, int(eq[1]) % self.modulus))
        object.__setattr__(self, "equations", tuple(eqs))

    @classmethod
    def single(cls, modulus, terms, constant=0, name="linear"):
        return cls(modulus, ((tuple(terms), constant),), name)

    @property
    def alphabet_size(self):
        return self.modulus

    def templates(self):
        out = []
        for eq in self.equations:
            offsets = tuple(o for o, _ in eq.terms)
            coeffs = tuple(k for _, k in eq.terms)
            out.append((offsets, _linear_check(coeffs, eq.constant, self.modulus)))
        return out

    def row_space(self, cells):
        """Elimination state for the constraint system on ``cells``."""
        p = self.modulus
        idx = {c: i for i, c in enumerate(cells)}
        rs = RowSpace(p)
        for eq in self.equations:
            o0 = eq.terms[0][0]
            for c in cells:
                v = sub(c, o0)
                cols = [(idx.get(add(o, v)), k) for o, k in eq.terms]
                if any(i is None for i, _ in cols):
                    continue
                if p == 2:
                    row = 0
                    for i, k in cols:
                        if k:
                            row ^= 1 << i
                else:
                    row = {i: k for i, k in cols if k}
                rs.add(row, eq.constant)
        return rs, idx


def _forbid_check(forbidden):
    def check(vals):
        return vals not in forbidden
    return check


@dataclass(frozen=True)
class ForbiddenPatterns(ShiftSpec):
    """Patterns on ``window`` listed in ``patterns`` may not occur anywhere."""

    size: int
    window: tuple
    patterns: frozenset
    name: str = "forbidden"
    kind = "forbidden_patterns"

    def __post_init__(self):
        object.__setattr__(self, "window", tuple(tuple(int(c) for c in o) for o in self.window))
        object.__setattr__(self, "patterns", frozenset(tuple(int(v) for v in p) for p in self.patterns))
        if self.size < 1:
            raise ConfigError("alphabet must be nonempty", "/alphabet/size")
        for p in self.patterns:
            if len(p) != len(self.window) or any(not 0 <= v < self.size for v in p):
                raise ConfigError("pattern does not fit window/alphabet", "/rule/patterns")

    @property
    def alphabet_size(self):
        return self.size

    def templates(self):
        if not self.window or not self.patterns:
            return []
        return [(self.window, _forbid_check(self.patterns))]


def full_shift(q=2, name=None):
    return ForbiddenPatterns(q, (), frozenset(), name or f"full-shift-{q}")


def _group_check(table, target):
    def check(vals):
        acc = vals[0]
        for v in vals[1:]:
            acc = table[acc][v]
        return acc == target
    return check


@dataclass(frozen=True)
class GroupRule(ShiftSpec):
    """Ordered product of the colors over ``shape`` equals ``target``.

    ``table[g][h]`` is the product ``g*h``; ``shape`` lists the offsets in
    the order they are multiplied.
    """

    table: tuple
    shape: tuple
    target: int = 0
    name: str = "group"
    kind = "group"

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(tuple(int(v) for v in row) for row in self.table))
        object.__setattr__(self, "shape", tuple(tuple(int(c) for c in o) for o in self.shape))
        n = len(self.table)
        if n < 1 or any(len(r) != n or any(not 0 <= v < n for v in r) for r in self.table):
            raise ConfigError("group table must be square over 0..n-1", "/rule/table")
        if len(set(self.shape)) != len(self.shape) or not self.shape:
            raise ConfigError("shape offsets must be distinct and nonempty", "/rule/shape")
        if not 0 <= self.target < n:
            raise ConfigError("target outside the group", "/rule/target")

    @property
    def alphabet_size(self):
        return len(self.table)

    def templates(self):
        return [(self.shape, _group_check(self.table, self.target))]


@dataclass(frozen=True)
class ProductSpec(ShiftSpec):
    """Cartesian product; symbol ``a * right.alphabet_size + b`` encodes (a, b)."""

    left: ShiftSpec
    right: ShiftSpec
    name: str = "product"
    kind = "product"

    @property
    def alphabet_size(self):
        return self.left.alphabet_size * self.right.alphabet_size

    def split(self, symbol):
        return divmod(symbol, self.right.alphabet_size)

    def join(self, a, b):
        return a * self.right.alphabet_size + b

    def templates(self):
        qr = self.right.alphabet_size
        out = []
        for offsets, chk in self.left.templates():
            out.append((offsets, (lambda c: lambda vals: c(tuple(v // qr for v in vals)))(chk)))
        for offsets, chk in self.right.templates():
            out.append((offsets, (lambda c: lambda vals: c(tuple(v % qr for v in vals)))(chk)))
        return out


@dataclass(frozen=True)
class RecodedSpec(ShiftSpec):
    """Higher-block presentation of ``source`` over the window ``window``.

    A symbol at g stands for a legal ``source`` pattern on ``window + g``.
    A recoded coloring of R is legal when it comes from a legal ``source``
    coloring of the union of ``window + g`` over g in R.
    """

    source: ShiftSpec
    window: tuple
    name: str = "recoded"
    kind = "recoded"

    def __post_init__(self):
        w = tuple(sorted(set(tuple(int(c) for c in o) for o in self.window)))
        if not w:
            raise ConfigError("recoding window must be nonempty", "/rule/window")
        object.__setattr__(self, "window", w)

    @cached_property
    def symbols(self):
        """Legal source patterns on the window, as value tuples in window order."""
        pats = enumerate_colorings(self.source, self.window)
        return sorted(tuple(p.as_dict()[c] for c in self.window) for p in pats)

    @cached_property
    def _index(self):
        return {s: i for i, s in enumerate(self.symbols)}

    @property
    def alphabet_size(self):
        return len(self.symbols)

    def footprint(self, points):
        return frozenset(add(o, g) for g in points for o in self.window)

    def encode(self, source_colors, points):
        """Recoded pattern of ``points`` read off a source coloring."""
        return {g: self._index[tuple(source_colors[add(o, g)] for o in self.window)]
                for g in points}

    def templates(self):
        raise NotImplementedError("recoded legality is region dependent")

    def constraint_instances(self, points):
        """Explicit constraints on recoded symbols over ``points``.

        Overlapping windows must agree, and every source rule instance in
        the footprint must hold.
        """
        pts = sorted(points)
        W = self.window
        syms = self.symbols
        pos = {o: i for i, o in enumerate(W)}
        out = []
        agree = {}
        pset = set(pts)
        for g in pts:
            for o in W:
                for o2 in W:
                    h = add(g, sub(o, o2))
                    if h in pset and h > g:
                        d = sub(h, g)
                        if d not in agree:
                            pairs = tuple((pos[a], pos[b]) for a in W for b in W if sub(a, b) == d)
                            agree[d] = (lambda prs: lambda vals: all(
                                syms[vals[0]][i] == syms[vals[1]][j] for i, j in prs))(pairs)
                        out.append(Constraint((g, h), agree[d]))
        out = list({(c.cells): c for c in out}.values())
        owner = {}
        for g in pts:
            for o in W:
                owner.setdefault(add(o, g), (g, pos[o]))
        for con in self.source.constraint_instances(set(owner)):
            refs = [owner[c] for c in con.cells]
            gs = tuple(sorted(set(g for g, _ in refs)))
            if len(gs) == 1:
                continue
            gi = {g: i for i, g in enumerate(gs)}
            where = tuple((gi[g], k) for g, k in refs)
            out.append(Constraint(gs, (lambda wh, chk: lambda vals: chk(
                tuple(syms[vals[a]][k] for a, k in wh)))(where, con.check)))
        return out


def ledrappier():
    return LinearRule.single(2, (((0, 0), 1), ((1, 0), 1), ((0, 1), 1)), 0, "ledrappier")


def one_letter_shift():
    return full_shift(1, "one-letter")


def constant_shift(q=2):
    eqs = ((((0, 0), 1), ((1, 0), q - 1)), 0), ((((0, 0), 1), ((0, 1), q - 1)), 0)
    return LinearRule(q, eqs, "constant")


def horizontal_stripes():
    """Rows are constant and consecutive rows differ (two configurations)."""
    eqs = ((((0, 0), 1), ((1, 0), 1)), 0), ((((0, 0), 1), ((0, 1), 1)), 1)
    return LinearRule(2, eqs, "horizontal-stripes")


# ---------------------------------------------------------------------------
# counting


Colorings = namedtuple("Colorings", "count patterns")


def count_colorings(spec, points, budget=None):
    """Exact number of legal colorings of ``points``."""
    pts = region(points)
    if isinstance(spec, LinearRule):
        cells = cell_order(pts)
        rs, _ = spec.row_space(cells)
        if rs.inconsistent:
            return 0
        return spec.modulus ** (len(cells) - rs.rank)
    if isinstance(spec, ProductSpec):
        return count_colorings(spec.left, pts, budget) * count_colorings(spec.right, pts, budget)
    if isinstance(spec, RecodedSpec):
        return count_colorings(spec.source, spec.footprint(pts), budget)
    return count_explicit(spec, pts, budget)


def count_explicit(spec, points, budget=None):
    """Count by the frontier sweep over explicit constraint instances."""
    pts = cell_order(region(points))
    q = spec.alphabet_size
    domains = {c: range(q) for c in pts}
    return engine.count_dp(pts, domains, spec.constraint_instances(set(pts)), budget)


def enumerate_colorings(spec, points, budget=None):
    """All legal colorings of ``points`` as Patterns."""
    pts = cell_order(region(points))
    if isinstance(spec, ProductSpec):
        left = enumerate_colorings(spec.left, pts, budget)
        right = enumerate_colorings(spec.right, pts, budget)
        return [Pattern.from_dict({c: spec.join(a.as_dict()[c], b.as_dict()[c]) for c in pts})
                for a in left for b in right]
    if isinstance(spec, RecodedSpec):
        src = enumerate_colorings(spec.source, spec.footprint(pts), budget)
        return sorted(Pattern.from_dict(spec.encode(p.as_dict(), pts)) for p in src)
    q = spec.alphabet_size
    domains = {c: range(q) for c in pts}
    sols = engine.enumerate_all(pts, domains, spec.constraint_instances(set(pts)), budget)
    return [Pattern.from_dict(s) for s in sols]


def legal_colorings(spec, points, enumerate=False, budget=None):
    if enumerate:
        pats = enumerate_colorings(spec, points, budget)
        return Colorings(len(pats), pats)
    return Colorings(count_colorings(spec, points, budget), None)


def is_legal(spec, pattern):
    """Local legality of a single pattern."""
    d = pattern.as_dict() if isinstance(pattern, Pattern) else dict(pattern)
    if isinstance(spec, ProductSpec):
        return (is_legal(spec.left, {p: spec.split(v)[0] for p, v in d.items()})
                and is_legal(spec.right, {p: spec.split(v)[1] for p, v in d.items()}))
    return all(c.check(tuple(d[x] for x in c.cells)) for c in spec.constraint_instances(set(d)))


def compile_group_rule(spec):
    """Equivalent forbidden-pattern spec over the lattice hull of the shape."""
    hull = ConvexLatticePolygon(spec.shape)
    window = tuple(sorted(set(hull.lattice_points()) | set(spec.shape)))
    pos = [window.index(o) for o in spec.shape]
    check = _group_check(spec.table, spec.target)
    n = len(spec.table)
    bad = frozenset(vals for vals in itertools.product(range(n), repeat=len(window))
                    if not check(tuple(vals[i] for i in pos)))
    return ForbiddenPatterns(n, window, bad, spec.name)


def product_shift(a, b, name=None):
    return ProductSpec(a, b, name or f"{a.name}x{b.name}")


def is_convex_region(points):
    pts = region(points)
    if not pts:
        return True
    hull = ConvexLatticePolygon(tuple(pts))
    return set(hull.lattice_points()) == set(pts)


NivatResult = namedtuple("NivatResult", "holds count bound")


def nivat_bound_check(spec, points, budget=None):
    """Compare the pattern count of a convex region with ``|S| + |A| - 2``."""
    pts = region(points)
    if not is_convex_region(pts):
        raise NotConvex("region is not the lattice points of a convex set")
    count = count_colorings(spec, pts, budget)
    bound = len(pts) + spec.alphabet_size - 2
    return NivatResult(count <= bound, count, bound)


# ---------------------------------------------------------------------------
# one-dimensional languages


@dataclass(frozen=True)
class PeriodicComponent:
    """Words ``y`` with ``y[k + offsets] in allowed`` for all k = phase mod period."""

    period: int
    constraints: tuple  # ((phase, offsets, allowed), ...)

    def __post_init__(self):
        cons = tuple((int(ph) % self.period, tuple(int(o) for o in offs),
                      frozenset(tuple(int(v) for v in a) for a in allowed))
                     for ph, offs, allowed in self.constraints)
        object.__setattr__(self, "constraints", cons)


@dataclass(frozen=True)
class Language1D:
    """Union of periodic constraint families on ``Z`` over ``{0..size-1}``."""

    size: int
    components: tuple = field(default_factory=tuple)
    name: str = "language"

    @property
    def is_full(self):
        return all(not comp.constraints for comp in self.components) or not self.components

    def words(self, n, budget=None):
        """Set of length-n words occurring in some member, any phase."""
        meter = engine._Budget(budget)
        q = self.size
        comps = self.components or (PeriodicComponent(1, ()),)
        found = set()
        for comp in comps:
            for start in range(comp.period):
                finishing = [[] for _ in range(n)]
                for phase, offs, allowed in comp.constraints:
                    lo, hi = min(offs), max(offs)
                    for k in range(start - hi - comp.period, start + n + comp.period):
                        if (k - phase) % comp.period:
                            continue
                        rel = [k + o - start for o in offs]
                        if min(rel) >= 0 and max(rel) < n:
                            finishing[max(rel)].append((tuple(rel), allowed))
                word = []

                def rec(t):
                    if t == n:
                        found.add(tuple(word))
                        return
                    for v in range(q):
                        meter.spend()
                        word.append(v)
                        if all(tuple(word[i] for i in rel) in allowed for rel, allowed in finishing[t]):
                            rec(t + 1)
                        word.pop()

                rec(0)
        return found


def count_words_1d(lang, n, budget=None):
    return len(lang.words(n, budget))


def einsiedler_component(k):
    eq = frozenset({(0, 0), (1, 1)})
    zero = frozenset({(0,)})
    table = {
        0: (0, (0,), zero),   # even places vanish
        1: (1, (0,), zero),   # odd places vanish
        2: (0, (0, 1), eq),   # y[2n] = y[2n+1]
        3: (1, (0, 1), eq),   # y[2n-1] = y[2n]
    }
    return PeriodicComponent(2, (table[k],))


def einsiedler_restriction(parts=(0, 1, 2, 3)):
    name = "einsiedler-restriction" if tuple(parts) == (0, 1, 2, 3) else \
        "einsiedler-R" + "".join(str(k) for k in parts)
    return Language1D(2, tuple(einsiedler_component(k) for k in parts), name)


def full_language(q=2):
    return Language1D(q, (), f"full-{q}")


def sft_language(q, window, forbidden, name="sft"):
    """Period-one language forbidding the listed words of length ``window``."""
    allowed = frozenset(w for w in itertools.product(range(q), repeat=window)
                        if tuple(w) not in set(map(tuple, forbidden)))
    return Language1D(q, (PeriodicComponent(1, ((0, tuple(range(window)), allowed),)),), name)
