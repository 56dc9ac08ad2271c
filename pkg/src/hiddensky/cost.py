"""Analytical cost predictors and bounds."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .model import Dataset, InvalidParameterError, make_schema
from .pq import choose_plane_attrs, pq2d_cost_formula


@dataclass(frozen=True)
class ExpectedCost:
    s: int
    m: int
    value: Fraction


@dataclass(frozen=True)
class BoundReport:
    sq_worst: int
    rq_worst: int
    binom_bound: int
    exp_bound: float


def expected_cost_recurrence(s: int, m: int) -> Fraction:
    """Mean SQ discovery cost when every answer is a uniformly random matching skyline tuple.

    ``E(C_s) = 1 + (m/s) * sum_{i<s} E(C_i)`` with ``E(C_0) = 1``.
    """
    if s < 0 or m < 1:
        raise InvalidParameterError("need s >= 0 and m >= 1")
    return _recurrence_table(m, s)[s]


@lru_cache(maxsize=None)
def _recurrence_table(m: int, upto: int) -> tuple[Fraction, ...]:
    vals = [Fraction(1)]
    total = Fraction(1)
    for s in range(1, upto + 1):
        v = 1 + Fraction(m, s) * total
        vals.append(v)
        total += v
    return tuple(vals)


def expected_cost_closed(s: int, m: int) -> Fraction:
    """The published closed form ``m((m+s-1)! - (m-1)! s!) / ((m-1)(m-1)! s!)``.

    It sits exactly 1 below the recurrence; see :func:`expected_cost_closed_corrected`.
    """
    if m < 2:
        raise InvalidParameterError("closed form is singular for m = 1; use the recurrence")
    if s < 1:
        raise InvalidParameterError("closed form is stated for s >= 1")
    f = math.factorial
    return Fraction(m * (f(m + s - 1) - f(m - 1) * f(s)), (m - 1) * f(m - 1) * f(s))


def expected_cost_closed_corrected(s: int, m: int) -> Fraction:
    """Exact solution of the recurrence: ``(m (m+s-1)! - (m-1)! s!) / ((m-1)(m-1)! s!)``."""
    if m < 2:
        raise InvalidParameterError("closed form is singular for m = 1; use the recurrence")
    if s < 0:
        raise InvalidParameterError("need s >= 0")
    f = math.factorial
    return Fraction(m * f(m + s - 1) - f(m - 1) * f(s), (m - 1) * f(m - 1) * f(s))


def expected_cost(s: int, m: int) -> ExpectedCost:
    return ExpectedCost(s, m, expected_cost_recurrence(s, m))


def binom_bound(s: int, m: int) -> int:
    return math.comb(s + m, m)


def exp_bound(s: int, m: int) -> float:
    """``(e + e*s/m)^m`` nudged one ulp up so float error never undercuts the true value."""
    return math.nextafter((math.e + math.e * s / m) ** m, math.inf)


def cost_bounds(s: int, m: int, n: int) -> BoundReport:
    if s < 1 or m < 1 or n < s:
        raise InvalidParameterError("need s >= 1, m >= 1 and n >= s")
    return BoundReport(
        sq_worst=m * s ** (m + 1),
        rq_worst=m * min(s ** (m + 1), n),
        binom_bound=binom_bound(s, m),
        exp_bound=exp_bound(s, m),
    )


def pqdb_cost_bound(skyline, schema) -> int:
    """Per-plane gap sum over the skyline members of each plane, padded by the domain corners.

    ``skyline`` holds value tuples or records over the full schema.
    """
    rank = [i for i, a in enumerate(schema) if a.is_ranking]
    x, y = choose_plane_attrs(schema, rank)
    others = [a for a in rank if a not in (x, y)]
    x_max = schema[x].domain_size - 1
    y_max = schema[y].domain_size - 1
    planes: dict[tuple, list] = {}
    for t in skyline:
        vals = t.values if hasattr(t, "values") else tuple(t)
        planes.setdefault(tuple(vals[a] for a in others), []).append((vals[x], vals[y]))
    total = 0
    for combo in itertools.product(*(range(schema[a].domain_size) for a in others)):
        pts = sorted(planes.get(combo, []))
        total += pq2d_cost_formula(pts, x_max, y_max)
    return total


def theorem1_threshold(m: int, s: int) -> int:
    """The SQ lower-bound expression ``(m-1)(|S|-1)^(m-1)``."""
    return (m - 1) * (s - 1) ** (m - 1)


def adversarial_sq_instance(m: int) -> Dataset:
    """Two incomparable tuples ``<0, 1, ..., 1>`` and ``<1, 0, ..., 0>`` on a 3-value grid.

    Index 0 stands for the real value 0.1 and index 1 for 1.0; index 2 is unused headroom.
    """
    if m < 2:
        raise InvalidParameterError("m must be >= 2")
    t1 = (0,) + (1,) * (m - 1)
    t2 = (1,) + (0,) * (m - 1)
    return Dataset.from_rows(make_schema([3] * m, "SQ"), [t1, t2], ids=["t1", "t2"])
