"""Independent brute-force references used by the test suite."""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb

import numpy as np


def min_line_certificate(points, X: int, Y: int, t0) -> int:
    """Fewest row/column queries that, after SELECT * returned ``t0``, prove the 2D skyline complete.

    A column query reveals the lowest tuple of that column, a row query the
    leftmost tuple of that row.  A cell is settled when it lies on a queried
    line, in the empty lower-left corner of ``t0``, or is dominated (weakly)
    by a revealed tuple.  Exhaustive over subsets; tiny grids only.
    """
    occupied = {tuple(p) for p in points}
    col_min = {}
    row_min = {}
    for x, y in occupied:
        col_min[x] = min(col_min.get(x, Y), y)
        row_min[y] = min(row_min.get(y, X), x)
    base = np.zeros((X, Y), dtype=bool)
    base[: t0[0] + 1, : t0[1] + 1] = True
    base[t0[0] :, t0[1] :] = True
    lines = [("x", c) for c in range(X)] + [("y", r) for r in range(Y)]
    for size in range(len(lines) + 1):
        for subset in itertools.combinations(lines, size):
            g = base.copy()
            for axis, v in subset:
                if axis == "x":
                    g[v, :] = True
                    if v in col_min:
                        g[v:, col_min[v] :] = True
                else:
                    g[:, v] = True
                    if v in row_min:
                        g[row_min[v] :, v:] = True
            if g.all():
                return size
    raise AssertionError("unreachable: all lines settle every cell")


def brute_skyline_2d(points):
    pts = [tuple(p) for p in points]
    return sorted(p for p in pts if not any(q != p and q[0] <= p[0] and q[1] <= p[1] for q in pts))


def brute_skyline(rows) -> set[int]:
    """Row positions not weakly dominated by a different row (pure Python, O(n^2))."""
    rows = [tuple(r) for r in rows]
    out = set()
    for i, p in enumerate(rows):
        if not any(j != i and q != p and all(a <= b for a, b in zip(q, p)) for j, q in enumerate(rows)):
            out.add(i)
    return out


def brute_skyband(rows, h: int) -> set[int]:
    rows = [tuple(r) for r in rows]
    out = set()
    for i, p in enumerate(rows):
        dominators = sum(1 for q in rows if q != p and all(a <= b for a, b in zip(q, p)))
        if dominators < h:
            out.add(i)
    return out


def expected_sq_cost(s: int, m: int) -> Fraction:
    """Mean SQ cost when each node returns a uniformly random skyline member.

    Computed top-down: a node holding ``s`` skyline tuples costs one query and,
    if non-empty, splits into ``m`` children whose sizes are each uniform on
    ``0..s-1``; only marginals matter, so linearity of expectation gives the value.
    """
    memo = {0: Fraction(1)}

    def e(j):
        if j not in memo:
            memo[j] = 1 + m * sum((e(i) for i in range(j)), Fraction(0)) / j
        return memo[j]

    for j in range(s + 1):
        e(j)
    return memo[s]


def binomial(s: int, m: int) -> int:
    return comb(s + m, m)
