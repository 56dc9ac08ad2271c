"""Top-h sky-band discovery: tuples dominated by fewer than h others."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .interface import BudgetExhausted, DiscoverySession, Query
from .model import InvalidParameterError, dominator_counts
from .pq import choose_plane_attrs, plane_combinations, pqdb_discover
from .result import SkylineTracker
from .rq import rq_discover
from .sq import sq_discover, sq_expand


@dataclass
class SkybandResult:
    band: frozenset
    h: int
    cost: int
    complete: bool
    extra: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(
            {"band": sorted(self.band, key=str), "h": self.h, "cost": self.cost, "complete": self.complete}
        )


def _check_h(h: int) -> None:
    if h < 1:
        raise InvalidParameterError("h must be >= 1")


def _band_of(records, attrs, h: int) -> frozenset:
    """Ids among ``records`` with fewer than ``h`` dominators inside ``records``."""
    records = list(records)
    if not records:
        return frozenset()
    pts = np.array([[r.values[a] for a in attrs] for r in records], dtype=np.int64)
    counts = dominator_counts(pts)
    return frozenset(r.id for r, c in zip(records, counts) if c < h)


def exclusion_boxes(t, attrs) -> list[Query]:
    """Disjoint boxes whose union is ``{u >= t componentwise} minus {t}``.

    Box ``i`` fixes ``A_j = t_j`` for j before i, requires ``A_i > t_i``
    and leaves ``A_j >= t_j`` for j after i.
    """
    boxes = []
    for i, a in enumerate(attrs):
        q = Query()
        for j in attrs[:i]:
            q = q.eq(j, t.values[j])
        q = q.gt(a, t.values[a])
        for j in attrs[i + 1 :]:
            q = q.ge(j, t.values[j])
        boxes.append(q)
    return boxes


def rq_skyband(s: DiscoverySession, h: int) -> SkybandResult:
    _check_h(h)
    attrs = list(s.dataset.ranking)
    start = s.query_count
    first = rq_discover(s)
    if h == 1 or not first.complete:
        return SkybandResult(first.skyline, h, first.cost, first.complete, {"levels": 1 if first.complete else 0})
    found = {i: s.dataset.get(i) for i in first.skyline}
    band = frozenset(found)
    expanded: set = set()
    level = 1
    try:
        while level < h:
            for tid in sorted(band - expanded, key=str):
                t = found[tid]
                for box in exclusion_boxes(t, attrs):
                    if box.is_empty:
                        continue
                    res = rq_discover(s, base=box)
                    if not res.complete:
                        raise BudgetExhausted(s.query_log)
                    for i in res.skyline:
                        found.setdefault(i, s.dataset.get(i))
                expanded.add(tid)
            level += 1
            band = _band_of(found.values(), attrs, level)
    except BudgetExhausted:
        return SkybandResult(band, h, s.query_count - start, False, {"levels": level, "reruns": len(expanded) + 1})
    return SkybandResult(band, h, s.query_count - start, True, {"levels": level, "reruns": len(expanded) + 1})


# -- point interfaces --------------------------------------------------------


def _plane_dominator_counts(seen: np.ndarray, x: int, y: int, coords: dict, X: int, Y: int) -> np.ndarray:
    """Known dominators of a hypothetical tuple in every cell of one plane."""
    counts = np.zeros((X, Y), dtype=np.int64)
    if not len(seen):
        return counts
    ok = np.ones(len(seen), dtype=bool)
    same = np.ones(len(seen), dtype=bool)
    for a, v in coords.items():
        ok &= seen[:, a] <= v
        same &= seen[:, a] == v
    np.add.at(counts, (seen[ok, x], seen[ok, y]), 1)
    counts = counts.cumsum(axis=0).cumsum(axis=1)
    own = seen[same]
    counts[own[:, x], own[:, y]] -= 1
    return counts


def pq_skyband(s: DiscoverySession, h: int) -> SkybandResult:
    """Column-by-column sweep of every plane, keeping the h lowest tuples per column."""
    _check_h(h)
    if h == 1:
        r = pqdb_discover(s)
        return SkybandResult(r.skyline, 1, r.cost, r.complete, {})
    rank = list(s.dataset.ranking)
    x, y = choose_plane_attrs(s.schema, rank)
    others = [a for a in rank if a not in (x, y)]
    X, Y = s.schema[x].domain_size, s.schema[y].domain_size
    start = s.query_count
    seen: dict = {}
    done_planes: list[dict] = []
    rows: list = []

    def ask(q):
        ans = s.answer(q)
        for r in ans:
            if r.id not in seen:
                seen[r.id] = r
                rows.append(r.values)
        return ans

    def matrix():
        return np.array(rows, dtype=np.int64).reshape(len(rows), s.dataset.m)

    try:
        if len(ask(Query())) < s.k:
            return SkybandResult(_band_of(seen.values(), rank, h), h, s.query_count - start, True, {})
        for combo in plane_combinations(s.schema, others):
            coords = dict(zip(others, combo))
            base = Query()
            for a, v in coords.items():
                base = base.eq(a, v)
            for cx in range(X):
                counts = _plane_dominator_counts(matrix(), x, y, coords, X, Y)
                if (counts[cx] >= h).all():
                    continue
                col = base.eq(x, cx)
                ans = ask(col)
                if len(ans) < s.k or len(ans) >= h:
                    continue
                # k < h: probe single cells above the last returned tuple
                cy = ans[-1].values[y] + 1
                got = len(ans)
                while got < h and cy < Y:
                    counts = _plane_dominator_counts(matrix(), x, y, coords, X, Y)
                    if counts[cx, cy] >= h:
                        break
                    if ask(col.eq(y, cy)):
                        got += 1
                    cy += 1
            done_planes.append(coords)
    except BudgetExhausted:
        done = [r for r in seen.values() if any(all(r.values[a] == v for a, v in c.items()) for c in done_planes)]
        partial = _band_of(seen.values(), rank, h) & frozenset(r.id for r in done)
        return SkybandResult(partial, h, s.query_count - start, False, {"planes_done": len(done_planes)})
    return SkybandResult(_band_of(seen.values(), rank, h), h, s.query_count - start, True, {})


# -- single-ended interfaces -------------------------------------------------


def sq_skyband_partial(s: DiscoverySession, h: int, mode: str = "stop") -> SkybandResult:
    """Best-effort band over single-ended ranges.

    A node is split on the first answer tuple already known to have ``h-1``
    dominators; everything it dominates is then out of the band.  A full
    answer with no such tuple either stops that branch (``mode="stop"``) or
    is crawled exhaustively by equality (``mode="crawl"``).
    """
    _check_h(h)
    if mode not in ("stop", "crawl"):
        raise InvalidParameterError("mode must be 'stop' or 'crawl'")
    if h == 1:
        r = sq_discover(s)
        return SkybandResult(r.skyline, 1, r.cost, r.complete, {})
    attrs = list(s.dataset.ranking)
    tr = SkylineTracker(s)
    start = s.query_count
    stopped: list[frozenset] = []
    frontier = deque([Query()])

    def known_dominators(r) -> int:
        mat = tr.seen_matrix()[:, attrs]
        p = np.array([r.values[a] for a in attrs])
        return int(np.count_nonzero(np.all(mat <= p, axis=1) & np.any(mat < p, axis=1)))

    def crawl(q, depth, ans=None):
        if ans is None:
            ans = tr.ask(q)
        if len(ans) < s.k or depth == len(attrs):
            return
        a = attrs[depth]
        lo, hi = q.bound(a)
        top = s.schema[a].domain_size - 1 if hi is None else hi
        for v in range((lo or 0), top + 1):
            crawl(q.eq(a, v), depth + 1)

    complete = True
    try:
        while frontier:
            q = frontier.popleft()
            ans = tr.ask(q)
            if len(ans) < s.k:
                continue
            pivot = next((r for r in ans if known_dominators(r) >= h - 1), None)
            if pivot is None:
                if mode == "stop":
                    stopped.append(frozenset(r.id for r in ans))
                    complete = False
                else:
                    crawl(q, 0, ans)
                continue
            frontier.extend(c for c in sq_expand(q, pivot, attrs) if not c.is_empty)
    except BudgetExhausted:
        complete = False
        stopped.append(frozenset())
    band = _band_of(tr.seen.values(), attrs, h)
    for ids in stopped:
        band &= ids
    return SkybandResult(band, h, s.query_count - start, complete, {"stopped": len(stopped)})
