"""Discovery over point-predicate (equality only) interfaces.

``pq2d_discover`` crawls a 2D database with one SELECT * followed by row and
column queries; ``pq2dsub_discover`` does the same inside one 2D plane of a
higher-dimensional database whose cells may already be ruled out by earlier
answers; ``pqdb_discover`` sweeps every such plane in preferential order.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .interface import BudgetExhausted, DiscoverySession, Query
from .model import InvalidParameterError, Record
from .result import DiscoveryResult, SkylineTracker


@dataclass(frozen=True)
class Rect:
    """Inclusive cell range ``[x_left..x_right] x [y_bottom..y_top]``."""

    x_left: int
    x_right: int
    y_bottom: int
    y_top: int

    @property
    def width(self) -> int:
        return max(0, self.x_right - self.x_left + 1)

    @property
    def height(self) -> int:
        return max(0, self.y_top - self.y_bottom + 1)

    @property
    def empty(self) -> bool:
        return self.x_left > self.x_right or self.y_bottom > self.y_top

    def axis(self) -> str:
        """``"x"`` to crawl columns (narrower than tall), else ``"y"``."""
        return "x" if self.width < self.height else "y"


def _ask(tr: SkylineTracker, q: Query):
    answer = tr.session.answer(q)
    tr.add(answer, certified=False)
    return answer


# -- 2D ----------------------------------------------------------------------


def pq2d_discover(s: DiscoverySession, *, lifo: bool = False) -> DiscoveryResult:
    rank = s.dataset.ranking
    if len(rank) != 2:
        raise InvalidParameterError(f"pq2d_discover needs exactly 2 ranking attributes, got {len(rank)}")
    ax, ay = rank
    X = s.schema[ax].domain_size
    Y = s.schema[ay].domain_size
    tr = SkylineTracker(s)
    rects_log: list[tuple[Rect, str, int, object]] = []
    try:
        top = _ask(tr, Query())
        if top:
            tr.certify([top[0].id])
        tr.tick()
        if len(top) < s.k:
            return tr.result(True, one_d_queries=0, rects=rects_log)
        t0 = top[0]
        x0, y0 = t0[ax], t0[ay]
        open_rects = deque(
            r for r in (Rect(0, x0 - 1, y0 + 1, Y - 1), Rect(x0 + 1, X - 1, 0, y0 - 1)) if not r.empty
        )
        while open_rects:
            r = open_rects.pop() if lifo else open_rects.popleft()
            if r.axis() == "x":
                ans = _ask(tr, Query().eq(ax, r.x_left))
                hit = ans[0] if ans and ans[0][ay] <= r.y_top else None
                nxt = Rect(r.x_left + 1, r.x_right, r.y_bottom, hit[ay] - 1 if hit else r.y_top)
                rects_log.append((r, "x", r.x_left, hit.id if hit else None))
            else:
                ans = _ask(tr, Query().eq(ay, r.y_bottom))
                hit = ans[0] if ans and ans[0][ax] <= r.x_right else None
                nxt = Rect(r.x_left, hit[ax] - 1 if hit else r.x_right, r.y_bottom + 1, r.y_top)
                rects_log.append((r, "y", r.y_bottom, hit.id if hit else None))
            if hit is not None:
                tr.certify([hit.id])
            tr.tick()
            if not nxt.empty:
                open_rects.append(nxt)
    except BudgetExhausted:
        return tr.result(False, one_d_queries=max(0, tr.session.query_count - tr.start - 1), rects=rects_log)
    return tr.result(True, one_d_queries=s.query_count - tr.start - 1, rects=rects_log)


def pq2d_cost_formula(skyline_points, x_max: int, y_max: int) -> int:
    """Sum of per-gap minima along the sorted 2D skyline, padded by the domain corners.

    ``x_max`` and ``y_max`` are the largest domain indices (domain size - 1).
    """
    pts = [tuple(int(v) for v in p) for p in skyline_points]
    for a, b in zip(pts, pts[1:]):
        if not (a[0] <= b[0] and a[1] >= b[1]):
            raise InvalidParameterError("points must be sorted by increasing A1 (and decreasing A2)")
    ext = [(0, y_max)] + pts + [(x_max, 0)]
    return sum(min(b[0] - a[0], a[1] - b[1]) for a, b in zip(ext, ext[1:]))


def pq2d_upper_bounds(skyline_points) -> tuple[int, int, int]:
    """``t_1[A2]``, ``t_|S|[A1]`` and ``min_i (t_i[A1] + t_i[A2])`` for a non-empty sorted skyline."""
    pts = sorted(tuple(p) for p in skyline_points)
    if not pts:
        raise InvalidParameterError("bounds are defined for a non-empty skyline")
    return pts[0][1], pts[-1][0], min(x + y for x, y in pts)


# -- pruned planes -----------------------------------------------------------


@dataclass
class BlockDiagonalSeries:
    rects: list[Rect]
    widths: list[int]
    heights: list[int]


@dataclass
class PrunedPlane:
    """A 2D plane ``x_attr x y_attr`` with every other ranking attribute fixed.

    ``resolved[x, y]`` is True once cell (x, y) provably holds no tuple that
    is both unseen and undominated.
    """

    x_attr: int
    y_attr: int
    plane_coords: dict[int, int]
    resolved: np.ndarray
    empty_corners: list[Rect] = field(default_factory=list)
    dominated_corners: list[Rect] = field(default_factory=list)

    @classmethod
    def fresh(cls, x_attr: int, y_attr: int, X: int, Y: int, plane_coords=None) -> "PrunedPlane":
        return cls(x_attr, y_attr, dict(plane_coords or {}), np.zeros((X, Y), dtype=bool))

    @property
    def shape(self) -> tuple[int, int]:
        return self.resolved.shape

    @property
    def live_cols(self) -> np.ndarray:
        return np.flatnonzero((~self.resolved).any(axis=1))

    @property
    def live_rows(self) -> np.ndarray:
        return np.flatnonzero((~self.resolved).any(axis=0))

    @property
    def exhausted(self) -> bool:
        return bool(self.resolved.all())

    def base_query(self) -> Query:
        q = Query()
        for a, v in sorted(self.plane_coords.items()):
            q = q.eq(a, v)
        return q

    def contains(self, values) -> bool:
        return all(values[a] == v for a, v in self.plane_coords.items())

    # evidence ---------------------------------------------------------------

    def apply_answer(self, q: Query, answer, k: int) -> None:
        """Rule out cells that ``q`` matched and that would have been returned."""
        X, Y = self.shape
        for a, v in self.plane_coords.items():
            lo, hi = q.bound(a)
            if (lo is not None and v < lo) or (hi is not None and v > hi):
                return
        xl, xh = _clip(q.bound(self.x_attr), X)
        yl, yh = _clip(q.bound(self.y_attr), Y)
        if xl > xh or yl > yh:
            return
        if len(answer) < k:
            self.resolved[xl : xh + 1, yl : yh + 1] = True
            self.empty_corners.append(Rect(xl, xh, yl, yh))
            return
        for t in answer:
            vals = t.values if isinstance(t, Record) else t
            if any(vals[a] < v for a, v in self.plane_coords.items()):
                continue
            tx = min(vals[self.x_attr], xh)
            ty = min(vals[self.y_attr], yh)
            if tx >= xl and ty >= yl:
                self.resolved[xl : tx + 1, yl : ty + 1] = True
                self.empty_corners.append(Rect(xl, tx, yl, ty))

    def apply_seen(self, matrix: np.ndarray) -> None:
        """Rule out cells dominated by seen tuples whose other coordinates are no worse."""
        if not len(matrix):
            return
        ok = np.ones(len(matrix), dtype=bool)
        for a, v in self.plane_coords.items():
            ok &= matrix[:, a] <= v
        pts = matrix[ok][:, [self.x_attr, self.y_attr]]
        if not len(pts):
            return
        X, Y = self.shape
        low = np.full(X, Y, dtype=np.int64)
        np.minimum.at(low, pts[:, 0], pts[:, 1])
        low = np.minimum.accumulate(low)
        self.resolved |= np.arange(Y)[None, :] >= low[:, None]
        for x, y in pts:
            self.dominated_corners.append(Rect(int(x), X - 1, int(y), Y - 1))

    def resolve_line(self, axis: str, v: int) -> None:
        if axis == "x":
            self.resolved[v, :] = True
        else:
            self.resolved[:, v] = True

    def certified(self, values) -> bool:
        """True when nothing unseen in this plane can dominate a tuple at ``values``."""
        tx, ty = values[self.x_attr], values[self.y_attr]
        return bool(self.resolved[: tx + 1, : ty + 1].all())

    # geometry ---------------------------------------------------------------

    def block_series(self) -> BlockDiagonalSeries:
        """Split live rows and columns into the staircase blocks of the unresolved region.

        Column ``c`` joins the block of its lowest unresolved row, row ``r``
        the block of its leftmost unresolved column; every live line lands in
        exactly one block, so widths and heights sum to the live totals.
        """
        free = ~self.resolved
        cols = self.live_cols
        rows = self.live_rows
        X = self.shape[0]
        parent = {}

        def find(u):
            while parent[u] != u:
                parent[u] = parent[parent[u]]
                u = parent[u]
            return u

        for c in cols:
            parent[int(c)] = int(c)
        for r in rows:
            parent[X + int(r)] = X + int(r)
        for c in cols:
            low = int(np.argmax(free[c]))
            parent[find(int(c))] = find(X + low)
        for r in rows:
            left = int(np.argmax(free[:, r]))
            parent[find(X + int(r))] = find(left)
        groups: dict[int, tuple[list, list]] = {}
        for c in cols:
            groups.setdefault(find(int(c)), ([], []))[0].append(int(c))
        for r in rows:
            groups.setdefault(find(X + int(r)), ([], []))[1].append(int(r))
        blocks = sorted(groups.values(), key=lambda g: min(g[0]) if g[0] else X)
        rects = [Rect(min(cs), max(cs), min(rs), max(rs)) for cs, rs in blocks]
        return BlockDiagonalSeries(rects, [len(cs) for cs, _ in blocks], [len(rs) for _, rs in blocks])


def _clip(bound, size: int) -> tuple[int, int]:
    lo, hi = bound
    return max(0, lo or 0), min(size - 1, size - 1 if hi is None else hi)


def pq2dsub_discover(
    s: DiscoverySession, plane: PrunedPlane, *, tracker: SkylineTracker | None = None
) -> DiscoveryResult:
    """Crawl the unresolved part of ``plane`` one row or column query at a time."""
    tr = tracker or SkylineTracker(s)
    start = s.query_count
    base = plane.base_query()
    lines = []
    try:
        _certify_plane(tr, plane)
        while not plane.exhausted:
            series = plane.block_series()
            w, h = sum(series.widths), sum(series.heights)
            overall = "x" if w < h else "y"
            pick = 0
            for i, (bw, bh) in enumerate(zip(series.widths, series.heights)):
                if ("x" if bw < bh else "y") == overall:
                    pick = i
                    break
            block_cols, block_rows = _block_lines(plane, series.rects[pick])
            if overall == "x":
                v = block_cols[0]
                q = base.eq(plane.x_attr, v)
            else:
                v = block_rows[0]
                q = base.eq(plane.y_attr, v)
            ans = _ask(tr, q)
            lines.append((overall, v))
            plane.resolve_line(overall, v)
            plane.apply_answer(q, ans, s.k)
            if ans:
                plane.apply_seen(np.array([r.values for r in ans], dtype=np.int64))
            _certify_plane(tr, plane)
            tr.tick()
    except BudgetExhausted:
        return DiscoveryResult(tr.reported(), s.query_count - start, list(tr.trace), False, {"lines": lines})
    return DiscoveryResult(tr.reported(), s.query_count - start, list(tr.trace), True, {"lines": lines})


def _block_lines(plane: PrunedPlane, rect: Rect) -> tuple[list[int], list[int]]:
    free = ~plane.resolved
    sub = free[rect.x_left : rect.x_right + 1, rect.y_bottom : rect.y_top + 1]
    cols = [rect.x_left + int(c) for c in np.flatnonzero(sub.any(axis=1))]
    rows = [rect.y_bottom + int(r) for r in np.flatnonzero(sub.any(axis=0))]
    return cols, rows


def _certify_plane(tr: SkylineTracker, plane: PrunedPlane) -> None:
    done = [
        i for i in tr.pending if plane.contains(tr.candidates[i].values) and plane.certified(tr.candidates[i].values)
    ]
    tr.certify(done)


def pq2dsub_from_session(s: DiscoverySession, x_attr: int, y_attr: int, coords, tracker: SkylineTracker, log=None):
    """Build a plane from the session's query log and seen tuples."""
    X = s.schema[x_attr].domain_size
    Y = s.schema[y_attr].domain_size
    plane = PrunedPlane.fresh(x_attr, y_attr, X, Y, coords)
    d = s.dataset
    for q, ids in s.query_log if log is None else log:
        plane.apply_answer(q, [d.get(i) for i in ids], s.k)
    plane.apply_seen(tracker.seen_matrix())
    return plane


# -- higher dimensions -------------------------------------------------------


def choose_plane_attrs(schema, attrs=None) -> tuple[int, int]:
    """The two attributes with the largest domains, ties broken by index."""
    if attrs is None:
        attrs = [i for i, a in enumerate(schema) if a.is_ranking]
    attrs = list(attrs)
    if len(attrs) < 2:
        raise InvalidParameterError("need at least 2 point attributes to form a plane")
    best = sorted(attrs, key=lambda i: (-schema[i].domain_size, i))[:2]
    return best[0], best[1]


def plane_combinations(schema, others):
    """Value combinations of ``others`` in lexicographic ascending order."""
    return itertools.product(*(range(schema[a].domain_size) for a in others))


def pqdb_discover(s: DiscoverySession) -> DiscoveryResult:
    rank = list(s.dataset.ranking)
    if len(rank) == 2:
        return pq2d_discover(s)
    if len(rank) < 2:
        raise InvalidParameterError("pqdb_discover needs at least 2 ranking attributes")
    x, y = choose_plane_attrs(s.schema, rank)
    others = [a for a in rank if a not in (x, y)]
    tr = SkylineTracker(s)
    planes = []
    try:
        top = _ask(tr, Query())
        if top:
            tr.certify([top[0].id])
        tr.tick()
        if len(top) < s.k:
            return tr.result(True, one_d_queries=0, planes=planes, plane_attrs=(x, y))
        general = list(s.query_log[-1:])
        for combo in plane_combinations(s.schema, others):
            coords = dict(zip(others, combo))
            plane = pq2dsub_from_session(s, x, y, coords, tr, log=general)
            before = s.query_count
            sub = pq2dsub_discover(s, plane, tracker=tr)
            planes.append((combo, s.query_count - before))
            if not sub.complete:
                raise BudgetExhausted(s.query_log)
    except BudgetExhausted:
        return tr.result(False, one_d_queries=max(0, s.query_count - tr.start - 1), planes=planes, plane_attrs=(x, y))
    return tr.result(True, one_d_queries=s.query_count - tr.start - 1, planes=planes, plane_attrs=(x, y))
