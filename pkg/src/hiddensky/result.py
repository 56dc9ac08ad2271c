from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .interface import DiscoverySession
from .model import Record


@dataclass
class DiscoveryResult:
    skyline: frozenset
    cost: int
    trace: list[tuple[int, int]]
    complete: bool
    extra: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(
            {
                "skyline": sorted(self.skyline, key=str),
                "cost": self.cost,
                "complete": self.complete,
                "trace": [list(p) for p in self.trace],
                **{k: v for k, v in self.extra.items() if isinstance(v, (int, float, str, bool))},
            }
        )


class SkylineTracker:
    """Running skyline over every tuple seen in a session.

    ``candidates`` holds the seen tuples no other seen tuple dominates.
    Tuples added with ``certified=False`` stay out of :meth:`reported`
    until :meth:`certify` vouches for them; the trace counts reported
    tuples only, so it never decreases.
    """

    def __init__(self, session: DiscoverySession, attrs=None):
        self.session = session
        self.attrs = list(session.dataset.ranking if attrs is None else attrs)
        self.start = session.query_count
        self.seen: dict = {}
        self.candidates: dict = {}
        self.pending: set = set()
        self.trace: list[tuple[int, int]] = []
        # default for ask(): True, False, or "cone" to certify an answer tuple only
        # when the query admits every tuple that could dominate it
        self.certify_answers: bool | str = True
        self._attr_set = set(self.attrs)
        self._ranking = set(session.dataset.ranking)
        # candidate keys in insertion order, mirrored as a matrix for vectorized checks
        self._cids: list = []
        self._cmat = np.zeros((0, len(self.attrs)), dtype=np.int64)
        self._seen_buf = np.zeros((16, session.dataset.m), dtype=np.int64)
        self._n_seen = 0

    def _key(self, r: Record):
        return np.fromiter((r.values[a] for a in self.attrs), dtype=np.int64, count=len(self.attrs))

    def add(self, records, certified: bool = True) -> list:
        """Merge an answer; returns the newly seen records."""
        new = []
        for r in records:
            if r.id in self.seen:
                if certified:
                    self.pending.discard(r.id)
                continue
            self.seen[r.id] = r
            if self._n_seen == len(self._seen_buf):
                self._seen_buf = np.concatenate([self._seen_buf, np.zeros_like(self._seen_buf)])
            self._seen_buf[self._n_seen] = r.values
            self._n_seen += 1
            new.append(r)
            p = self._key(r)
            C = self._cmat
            if len(C) and _dominators(C, p).any():
                continue
            if len(C):
                beaten = np.all(p <= C, axis=1) & np.any(p < C, axis=1)
                if beaten.any():
                    for i in np.flatnonzero(beaten):
                        cid = self._cids[i]
                        del self.candidates[cid]
                        self.pending.discard(cid)
                    keep = ~beaten
                    self._cids = [c for c, k in zip(self._cids, keep) if k]
                    C = C[keep]
            self._cmat = np.vstack([C, p[None, :]])
            self._cids.append(r.id)
            self.candidates[r.id] = r
            if not certified:
                self.pending.add(r.id)
        return new

    def certify(self, ids) -> None:
        self.pending.difference_update(ids)

    def certify_all(self) -> None:
        self.pending.clear()

    def reported(self) -> frozenset:
        return frozenset(i for i in self.candidates if i not in self.pending)

    def tick(self) -> None:
        n = len(self.candidates) - len(self.pending)
        self.trace.append((self.session.query_count - self.start, n))

    def seen_matrix(self) -> np.ndarray:
        return self._seen_buf[: self._n_seen]

    def any_seen_matches(self, q) -> bool:
        mat = self.seen_matrix()
        return bool(len(mat)) and bool(q.mask(mat).any())

    def dominator_of(self, r: Record):
        """A current candidate dominating ``r`` (first in insertion order), or None."""
        if not self._cids:
            return None
        hits = np.flatnonzero(_dominators(self._cmat, self._key(r)))
        return self.candidates[self._cids[hits[0]]] if len(hits) else None

    def ask(self, q, certified: bool | None = None):
        """Issue ``q``, merge the answer, record a trace point."""
        answer = self.session.answer(q)
        if certified is None:
            certified = self._covers_cones(q) if self.certify_answers == "cone" else bool(self.certify_answers)
        self.add(answer, certified)
        self.tick()
        return answer

    def _covers_cones(self, q) -> bool:
        # a returned tuple's dominators all match q iff q has no lower bound on a
        # tracked attribute and no bound at all on an untracked ranking attribute
        for a, lo, hi in q.bounds:
            if a in self._attr_set:
                if lo is not None and lo > 0:
                    return False
            elif a in self._ranking and ((lo is not None and lo > 0) or hi is not None):
                return False
        return True

    def result(self, complete: bool, *, finalize: bool = True, **extra) -> DiscoveryResult:
        """Snapshot the run; a complete run vouches for every candidate unless
        it only finished a sub-search on a borrowed tracker (``finalize=False``)."""
        if complete and finalize:
            self.certify_all()
        return DiscoveryResult(
            skyline=self.reported(),
            cost=self.session.query_count - self.start,
            trace=list(self.trace),
            complete=complete,
            extra=extra,
        )


def _dominators(C: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Rows of ``C`` that dominate ``p``."""
    return np.all(C <= p, axis=1) & np.any(C < p, axis=1)
