"""Generic finite constraint machinery.

A problem is a list of cells, a domain per cell and a list of
``Constraint(cells, check)`` where ``check`` receives the values of
``cells`` in order. Counting uses a frontier dynamic program over a
fixed cell order, memoized on the values of cells that are still needed
by unfinished constraints. Search uses backtracking with generalized arc
consistency.
"""
from __future__ import annotations

import itertools
import sys
from collections import defaultdict, deque, namedtuple

from .errors import BudgetExceeded

Constraint = namedtuple("Constraint", "cells check")

DEFAULT_BUDGET = 10_000_000
GAC_LIMIT = 4096  # largest joint domain a constraint is revised over


def components(cells, constraints):
    """Split cells into groups that share no constraint."""
    parent = {c: c for c in cells}

    def find(c):
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    for con in constraints:
        r0 = find(con.cells[0])
        for c in con.cells[1:]:
            r = find(c)
            if r != r0:
                parent[r] = r0
    groups = defaultdict(list)
    for c in cells:
        groups[find(c)].append(c)
    cons = defaultdict(list)
    for con in constraints:
        cons[find(con.cells[0])].append(con)
    return [(sorted(g), cons.get(root, [])) for root, g in sorted(groups.items())]


class _Budget:
    def __init__(self, limit):
        self.limit = DEFAULT_BUDGET if limit is None else limit
        self.used = 0

    def spend(self, n=1):
        self.used += n
        if self.used > self.limit:
            raise BudgetExceeded(self.limit)


def _frontier_plan(order, constraints):
    idx = {c: i for i, c in enumerate(order)}
    finishing = defaultdict(list)
    last_use = {c: idx[c] for c in order}
    for con in constraints:
        last = max(idx[c] for c in con.cells)
        finishing[last].append(con)
        for c in con.cells:
            last_use[c] = max(last_use[c], last)
    steps = []
    frontier = []
    for t, cell in enumerate(order):
        full = frontier + [cell]
        pos = {c: i for i, c in enumerate(full)}
        checks = [(tuple(pos[c] for c in con.cells), con.check) for con in finishing[t]]
        nxt = [c for c in full if last_use[c] > t]
        proj = tuple(pos[c] for c in nxt)
        steps.append((cell, checks, proj))
        frontier = nxt
    return steps


def count_dp(cells, domains, constraints, budget=None, _meter=None):
    """Number of assignments satisfying every constraint."""
    meter = _meter or _Budget(budget)
    total = 1
    for group, cons in components(cells, constraints):
        if not cons:
            for c in group:
                total *= len(domains[c])
            continue
        n = _count_component(group, domains, cons, meter)
        if n == 0:
            return 0
        total *= n
    return total


def _count_component(order, domains, constraints, meter):
    layer = {(): 1}
    for cell, checks, proj in _frontier_plan(order, constraints):
        dom = domains[cell]
        meter.spend(len(layer) * len(dom))
        new = defaultdict(int)
        for state, cnt in layer.items():
            for v in dom:
                ext = state + (v,)
                if all(chk(tuple(ext[i] for i in pos)) for pos, chk in checks):
                    new[tuple(ext[i] for i in proj)] += cnt
        layer = new
        if not layer:
            return 0
    return sum(layer.values())


def enumerate_all(cells, domains, constraints, budget=None):
    """All satisfying assignments as dicts, in lexicographic cell order."""
    meter = _Budget(budget)
    order = sorted(cells)
    idx = {c: i for i, c in enumerate(order)}
    finishing = defaultdict(list)
    for con in constraints:
        finishing[max(idx[c] for c in con.cells)].append(
            (tuple(idx[c] for c in con.cells), con.check))
    out = []
    vals = []

    def rec(t):
        if t == len(order):
            out.append(dict(zip(order, vals)))
            return
        for v in domains[order[t]]:
            meter.spend()
            vals.append(v)
            if all(chk(tuple(vals[i] for i in pos)) for pos, chk in finishing[t]):
                rec(t + 1)
            vals.pop()

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * len(order) + 100))
    try:
        rec(0)
    finally:
        sys.setrecursionlimit(old)
    return out


def solve(cells, domains, constraints, budget=None, priority=None):
    """One satisfying assignment (dict) or None.

    ``priority`` maps cells to sort keys; lower keys are tried first among
    cells with equally small domains.
    """
    meter = _Budget(budget)
    cells = list(cells)
    cons_of = defaultdict(list)
    for k, con in enumerate(constraints):
        for c in con.cells:
            cons_of[c].append(k)
    dom = {c: list(domains[c]) for c in cells}
    if any(not d for d in dom.values()):
        return None
    prio = priority or {}
    assign = {}
    trail = []

    def narrow(u, keep):
        trail.append((u, dom[u]))
        dom[u] = keep
        return bool(keep)

    def revise(k):
        """Prune values without support in constraint k; return changed cells or None."""
        con = constraints[k]
        free = list(dict.fromkeys(c for c in con.cells if c not in assign))
        if not free:
            return [] if con.check(tuple(assign[c] for c in con.cells)) else None
        size = 1
        for u in free:
            size *= len(dom[u])
        if size > GAC_LIMIT:
            return []
        seen = {u: set() for u in free}
        local = dict(assign)
        for combo in itertools.product(*(dom[u] for u in free)):
            local.update(zip(free, combo))
            if con.check(tuple(local[c] for c in con.cells)):
                for u, v in zip(free, combo):
                    seen[u].add(v)
        changed = []
        for u in free:
            if len(seen[u]) < len(dom[u]):
                if not narrow(u, [v for v in dom[u] if v in seen[u]]):
                    return None
                changed.append(u)
        return changed

    def propagate(start):
        # generalized arc consistency to a fixpoint
        queue = deque(start)
        queued = set(queue)
        while queue:
            k = queue.popleft()
            queued.discard(k)
            changed = revise(k)
            if changed is None:
                return False
            for u in changed:
                for k2 in cons_of[u]:
                    if k2 not in queued:
                        queued.add(k2)
                        queue.append(k2)
        return True

    def pick():
        best, key = None, None
        for c in cells:
            if c in assign:
                continue
            k = (len(dom[c]), prio.get(c, 0), c)
            if key is None or k < key:
                best, key = c, k
        return best

    def rec():
        cell = pick()
        if cell is None:
            return True
        for v in list(dom[cell]):
            meter.spend()
            mark = len(trail)
            assign[cell] = v
            if propagate(cons_of[cell]) and rec():
                return True
            del assign[cell]
            while len(trail) > mark:
                u, old_dom = trail.pop()
                dom[u] = old_dom
        return False

    # constraints over a single cell prune domains up front
    for con in constraints:
        if len(set(con.cells)) == 1 and len(con.cells) >= 1:
            c = con.cells[0]
            dom[c] = [v for v in dom[c] if con.check(tuple(v for _ in con.cells))]
            if not dom[c]:
                return None
    if not propagate(range(len(constraints))):
        return None
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * len(cells) + 100))
    try:
        return dict(assign) if rec() else None
    finally:
        sys.setrecursionlimit(old)
