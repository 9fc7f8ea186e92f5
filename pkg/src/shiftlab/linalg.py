"""Incremental Gaussian elimination over GF(p).

Rows over GF(2) are Python ints used as bitsets. Rows over larger primes
are sparse dicts ``{column: coefficient}``. In both cases the pivot of a
row is its highest column, and the right-hand side (when used) sits in a
separate slot so consistency can be tracked.
"""
from __future__ import annotations


def is_prime(n):
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


class RowSpace:
    """Row space of a growing system ``A x = b`` over GF(p).

    ``add`` inserts an equation, ``contains`` tests whether a linear form
    lies in the span of the inserted left-hand sides.
    """

    def __init__(self, p=2):
        self.p = p
        self.pivots = {}
        self.inconsistent = False

    @property
    def rank(self):
        return len(self.pivots)

    # -- GF(2) -----------------------------------------------------------
    def _reduce2(self, row, rhs):
        piv = self.pivots
        while row:
            top = row.bit_length() - 1
            hit = piv.get(top)
            if hit is None:
                break
            row ^= hit[0]
            rhs ^= hit[1]
        return row, rhs

    # -- GF(p) -----------------------------------------------------------
    def _reduce_p(self, row, rhs):
        p, piv = self.p, self.pivots
        row = {c: v % p for c, v in row.items() if v % p}
        rhs %= p
        while row:
            top = max(row)
            hit = piv.get(top)
            if hit is None:
                break
            f = row[top]
            prow, prhs = hit
            for c, v in prow.items():
                nv = (row.get(c, 0) - f * v) % p
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
            rhs = (rhs - f * prhs) % p
        return row, rhs

    def reduce(self, row, rhs=0):
        if self.p == 2:
            return self._reduce2(row, rhs & 1)
        return self._reduce_p(row, rhs)

    def add(self, row, rhs=0):
        """Insert an equation; return True when it raised the rank."""
        row, rhs = self.reduce(row, rhs)
        if not row:
            if rhs:
                self.inconsistent = True
            return False
        if self.p == 2:
            self.pivots[row.bit_length() - 1] = (row, rhs)
        else:
            top = max(row)
            inv = pow(row[top], self.p - 2, self.p)
            row = {c: v * inv % self.p for c, v in row.items()}
            self.pivots[top] = (row, rhs * inv % self.p)
        return True

    def contains(self, row):
        return not self.reduce(row, 0)[0]

    def solution(self, nvars):
        """One solution with free variables set to zero, or None."""
        if self.inconsistent:
            return None
        x = [0] * nvars
        for top in sorted(self.pivots):
            row, rhs = self.pivots[top]
            if self.p == 2:
                val = rhs
                rest = row ^ (1 << top)
                while rest:
                    low = rest & -rest
                    val ^= x[low.bit_length() - 1]
                    rest ^= low
                x[top] = val
            else:
                val = rhs
                for c, v in row.items():
                    if c != top:
                        val -= v * x[c]
                x[top] = val % self.p
        return x

    def copy(self):
        other = RowSpace(self.p)
        other.pivots = dict(self.pivots)
        other.inconsistent = self.inconsistent
        return other


def unit_row(col, p=2):
    return (1 << col) if p == 2 else {col: 1}


def make_row(coeffs, p=2):
    """Row from ``{column: coefficient}``."""
    if p == 2:
        r = 0
        for c, v in coeffs.items():
            if v % 2:
                r ^= 1 << c
        return r
    out = {}
    for c, v in coeffs.items():
        nv = (out.get(c, 0) + v) % p
        if nv:
            out[c] = nv
        else:
            out.pop(c, None)
    return out
