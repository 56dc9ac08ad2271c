"""A simulated top-k hidden database.

The session only accepts conjunctive queries that are legal for each
attribute's interface class, and answers with the k best matching tuples
under a domination-consistent ranking.  An answer of exactly k tuples is
the only overflow signal a caller gets.
"""

from __future__ import annotations

import enum
import hashlib
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .model import (
    Dataset,
    InterfaceClass,
    InvalidParameterError,
    MalformedInputError,
    Record,
    Role,
    skyline_mask,
)


class InterfaceViolation(Exception):
    """The query uses a comparator the attribute's search control lacks."""


class BudgetExhausted(Exception):
    def __init__(self, query_log):
        super().__init__(f"query budget exhausted after {len(query_log)} queries")
        self.query_log = list(query_log)


class Comparator(str, enum.Enum):
    LT = "<"
    LE = "<="
    EQ = "="
    GE = ">="
    GT = ">"


_ALLOWED = {
    InterfaceClass.SQ: {Comparator.LT, Comparator.LE, Comparator.EQ},
    InterfaceClass.RQ: set(Comparator),
    InterfaceClass.PQ: {Comparator.EQ},
}


@dataclass(frozen=True)
class Predicate:
    attribute_index: int
    comparator: Comparator
    value: int

    def __post_init__(self):
        object.__setattr__(self, "comparator", Comparator(self.comparator))
        object.__setattr__(self, "value", int(self.value))

    def to_json(self):
        return [self.attribute_index, self.comparator.value, self.value]


@dataclass(frozen=True)
class Query:
    """Conjunction of per-attribute bounds.

    Stored canonically as inclusive ``(lo, hi)`` per attribute (``None`` =
    unbounded).  ``A < v`` becomes ``hi = v - 1``, so an empty interval is
    a query no tuple can match.
    """

    bounds: tuple[tuple[int, int | None, int | None], ...] = ()

    @classmethod
    def select_all(cls) -> "Query":
        return cls(())

    @classmethod
    def from_predicates(cls, predicates: Iterable[Predicate]) -> "Query":
        lows: dict[int, int] = {}
        highs: dict[int, int] = {}
        for p in predicates:
            a, c, v = p.attribute_index, p.comparator, p.value
            lo = hi = None
            if c is Comparator.LT:
                hi = v - 1
            elif c is Comparator.LE:
                hi = v
            elif c is Comparator.EQ:
                lo = hi = v
            elif c is Comparator.GE:
                lo = v
            else:
                lo = v + 1
            if lo is not None:
                if a in lows:
                    raise MalformedInputError(f"two lower bounds on attribute {a}")
                lows[a] = lo
            if hi is not None:
                if a in highs:
                    raise MalformedInputError(f"two upper bounds on attribute {a}")
                highs[a] = hi
        attrs = sorted(set(lows) | set(highs))
        return cls(tuple((a, lows.get(a), highs.get(a)) for a in attrs))

    def bound(self, attr: int) -> tuple[int | None, int | None]:
        for a, lo, hi in self.bounds:
            if a == attr:
                return lo, hi
        return None, None

    def _with(self, attr: int, lo, hi) -> "Query":
        rest = [b for b in self.bounds if b[0] != attr]
        if lo is not None or hi is not None:
            rest.append((attr, lo, hi))
        return Query(tuple(sorted(rest, key=lambda b: b[0])))

    def lt(self, attr: int, v: int) -> "Query":
        """Conjoin ``A_attr < v`` (keeps the tighter upper bound)."""
        lo, hi = self.bound(attr)
        new_hi = v - 1 if hi is None else min(hi, v - 1)
        return self._with(attr, lo, new_hi)

    def ge(self, attr: int, v: int) -> "Query":
        lo, hi = self.bound(attr)
        new_lo = v if lo is None else max(lo, v)
        return self._with(attr, new_lo, hi)

    def gt(self, attr: int, v: int) -> "Query":
        return self.ge(attr, v + 1)

    def eq(self, attr: int, v: int) -> "Query":
        lo, hi = self.bound(attr)
        if (lo is not None and v < lo) or (hi is not None and v > hi):
            return self._with(attr, v, v - 1)
        return self._with(attr, v, v)

    def conjoin(self, other: "Query") -> "Query":
        q = self
        for a, lo, hi in other.bounds:
            cur_lo, cur_hi = q.bound(a)
            if lo is not None:
                cur_lo = lo if cur_lo is None else max(cur_lo, lo)
            if hi is not None:
                cur_hi = hi if cur_hi is None else min(cur_hi, hi)
            q = q._with(a, cur_lo, cur_hi)
        return q

    @property
    def is_empty(self) -> bool:
        return any(lo is not None and hi is not None and lo > hi for _, lo, hi in self.bounds) or any(
            hi is not None and hi < 0 for _, _, hi in self.bounds
        )

    @property
    def predicates(self) -> tuple[Predicate, ...]:
        out = []
        for a, lo, hi in self.bounds:
            if lo is not None and lo == hi:
                out.append(Predicate(a, Comparator.EQ, lo))
                continue
            if lo is not None and lo > 0:
                out.append(Predicate(a, Comparator.GE, lo))
            if hi is not None:
                out.append(Predicate(a, Comparator.LT, hi + 1))
        return tuple(out)

    def constrained(self) -> set[int]:
        return {a for a, lo, hi in self.bounds if (lo is not None and lo > 0) or hi is not None}

    def matches(self, values: Sequence[int]) -> bool:
        for a, lo, hi in self.bounds:
            v = values[a]
            if lo is not None and v < lo:
                return False
            if hi is not None and v > hi:
                return False
        return True

    def mask(self, matrix: np.ndarray) -> np.ndarray:
        m = np.ones(len(matrix), dtype=bool)
        for a, lo, hi in self.bounds:
            col = matrix[:, a]
            if lo is not None:
                m &= col >= lo
            if hi is not None:
                m &= col <= hi
        return m

    def signature(self) -> str:
        return json.dumps([p.to_json() for p in self.predicates])

    def __str__(self) -> str:
        preds = self.predicates
        if not preds:
            return "SELECT *"
        return " AND ".join(f"A{p.attribute_index + 1} {p.comparator.value} {p.value}" for p in preds)


def matches(t: Record, q: Query) -> bool:
    return q.matches(t.values)


def check_legal(q: Query, schema) -> None:
    for p in q.predicates:
        if not 0 <= p.attribute_index < len(schema):
            raise MalformedInputError(f"attribute {p.attribute_index} out of range")
        attr = schema[p.attribute_index]
        allowed = _ALLOWED[attr.interface_class] if attr.role is Role.RANKING else {Comparator.EQ}
        if p.comparator not in allowed:
            raise InterfaceViolation(f"{attr.name} ({attr.interface_class.value}) does not accept '{p.comparator.value}'")


# -- ranking modes -----------------------------------------------------------


@dataclass(frozen=True)
class WeightedSum:
    weights: tuple[float, ...] | None = None


@dataclass(frozen=True)
class Lexicographic:
    priority: tuple[int, ...] = ()


@dataclass(frozen=True)
class RandomLinearExtension:
    seed: int = 0


@dataclass(frozen=True)
class RandomMatchingSkyline:
    seed: int = 0


RankingMode = WeightedSum | Lexicographic | RandomLinearExtension | RandomMatchingSkyline


def build_total_order(mode, d: Dataset) -> list | None:
    """Record ids from best to worst; a linear extension of dominance.

    Returns ``None`` for :class:`RandomMatchingSkyline`, which has no global
    order and is resolved per query.
    """
    rank = list(d.ranking)
    pts = d.ranking_matrix().astype(np.float64) if d.n else np.empty((0, len(rank)))
    ids = d.ids()
    tiebreak = np.arange(d.n)
    if isinstance(mode, WeightedSum):
        w = np.ones(len(rank)) if mode.weights is None else np.asarray(mode.weights, dtype=np.float64)
        if len(w) != len(rank):
            raise InvalidParameterError("one weight per ranking attribute required")
        if np.any(w <= 0):
            raise InvalidParameterError("weights must be strictly positive")
        order = np.lexsort((tiebreak, pts @ w)) if d.n else []
    elif isinstance(mode, Lexicographic):
        prio = list(mode.priority)
        keys = prio + [a for a in range(len(rank)) if a not in prio]
        if sorted(keys) != list(range(len(rank))):
            raise InvalidParameterError("priority must be a permutation of ranking attribute positions")
        cols = [pts[:, a] for a in keys]
        order = np.lexsort([tiebreak] + cols[::-1]) if d.n else []
    elif isinstance(mode, RandomLinearExtension):
        rng = np.random.default_rng(mode.seed)
        p = rng.random(d.n)
        # key = max priority over the down-set; dominators never get a larger key
        key = np.empty(d.n)
        for i in range(d.n):
            le = np.all(pts <= pts[i], axis=1)
            key[i] = p[le].max()
        order = np.lexsort((tiebreak, pts.sum(axis=1), key)) if d.n else []
    elif isinstance(mode, RandomMatchingSkyline):
        return None
    else:
        raise InvalidParameterError(f"unknown ranking mode {mode!r}")
    return [ids[i] for i in order]


# -- session -----------------------------------------------------------------


@dataclass
class DiscoverySession:
    dataset: Dataset
    k: int
    ranking: object = field(default_factory=WeightedSum)
    budget: int | None = None
    context: Query = field(default_factory=Query)
    query_count: int = 0
    query_log: list = field(default_factory=list)

    def __post_init__(self):
        if self.k < 1:
            raise InvalidParameterError("k must be >= 1")
        if self.budget is not None and self.budget < 0:
            raise InvalidParameterError("budget must be non-negative")
        if isinstance(self.ranking, RandomMatchingSkyline) and self.k != 1:
            raise InvalidParameterError("random_matching_skyline requires k=1")
        for a, lo, hi in self.context.bounds:
            if self.dataset.schema[a].role is not Role.FILTERING or lo != hi:
                raise InvalidParameterError("context may only fix filtering attributes by equality")
        order = build_total_order(self.ranking, self.dataset)
        d = self.dataset
        if order is None:
            pos = list(range(d.n))
        else:
            index = {r.id: i for i, r in enumerate(d.records)}
            pos = [index[i] for i in order]
        self._records = [d.records[i] for i in pos]
        self._matrix = np.asfortranarray(d.matrix[pos] if d.n else d.matrix)
        self._rank_cols = list(d.ranking)
        self._memo: dict[str, tuple] = {}

    @property
    def schema(self):
        return self.dataset.schema

    @property
    def remaining(self) -> int | None:
        return None if self.budget is None else self.budget - self.query_count

    def answer(self, q: Query) -> tuple[Record, ...]:
        check_legal(q, self.schema)
        if self.budget is not None and self.query_count >= self.budget:
            raise BudgetExhausted(self.query_log)
        full = q.conjoin(self.context)
        if isinstance(self.ranking, RandomMatchingSkyline):
            result = self._random_skyline_answer(full)
        elif full.is_empty or not len(self._records):
            result = ()
        else:
            idx = np.flatnonzero(full.mask(self._matrix))[: self.k]
            result = tuple(self._records[i] for i in idx)
        self.query_count += 1
        self.query_log.append((q, tuple(r.id for r in result)))
        return result

    def _random_skyline_answer(self, q: Query) -> tuple:
        sig = q.signature()
        if sig in self._memo:
            return self._memo[sig]
        if q.is_empty or not len(self._records):
            res = ()
        else:
            idx = np.flatnonzero(q.mask(self._matrix))
            if len(idx) == 0:
                res = ()
            else:
                sky = idx[skyline_mask(self._matrix[idx][:, self._rank_cols])]
                h = hashlib.blake2b(f"{self.ranking.seed}|{sig}".encode(), digest_size=8).digest()
                rng = np.random.default_rng(int.from_bytes(h, "little"))
                res = (self._records[int(rng.choice(sky))],)
        self._memo[sig] = res
        return res

    def export_trace(self, fh) -> None:
        for seq, (q, ids) in enumerate(self.query_log):
            fh.write(json.dumps({"seq": seq, "predicates": [p.to_json() for p in q.predicates], "answer_ids": list(ids)}) + "\n")


def read_trace(fh) -> list[tuple[Query, tuple]]:
    out = []
    for line in fh:
        line = line.strip()
        if not line:
            continue
        rec = json.loads(line)
        q = Query.from_predicates(Predicate(a, Comparator(c), v) for a, c, v in rec["predicates"])
        out.append((q, tuple(rec["answer_ids"])))
    return out


def replay(session: DiscoverySession, trace: Sequence[tuple[Query, tuple]]) -> list[int]:
    """Re-issue a recorded query sequence; returns the seq numbers that diverge."""
    bad = []
    for seq, (q, ids) in enumerate(trace):
        got = tuple(r.id for r in session.answer(q))
        if [str(i) for i in got] != [str(i) for i in ids]:
            bad.append(seq)
    return bad
