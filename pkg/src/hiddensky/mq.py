"""Discovery over interfaces mixing range and point attributes.

Range discovery with point attributes left free finds every skyline tuple
except those range-dominated by a found tuple; each of those beats its
range-dominator on some point attribute.  A sweep over point values below
the current maxima, restricted to the region no better than the found
tuples on two-ended attributes, recovers them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .interface import BudgetExhausted, DiscoverySession, Query
from .model import InterfaceClass, InvalidParameterError
from .pq import pqdb_discover
from .result import DiscoveryResult, SkylineTracker
from .rq import rq_discover
from .sq import sq_discover


@dataclass(frozen=True)
class PruningPredicate:
    """``A_j >= lower[A_j]`` for each two-ended range attribute; empty means no pruning."""

    lower: dict = field(default_factory=dict)

    def query(self) -> Query:
        q = Query()
        for a, v in sorted(self.lower.items()):
            if v > 0:
                q = q.ge(a, v)
        return q

    def admits(self, values) -> bool:
        return all(values[a] >= v for a, v in self.lower.items())


def range_prune_predicates(discovered, range_attrs, schema=None) -> PruningPredicate:
    """Componentwise minimum of ``discovered`` over the two-ended attributes among ``range_attrs``."""
    discovered = list(discovered)
    if not discovered:
        return PruningPredicate()
    lower = {}
    for a in range_attrs:
        if schema is not None and schema[a].interface_class is not InterfaceClass.RQ:
            continue
        lower[a] = min(t.values[a] for t in discovered)
    return PruningPredicate(lower)


def _split_attrs(schema, attrs):
    point = [a for a in attrs if schema[a].interface_class is InterfaceClass.PQ]
    rng = [a for a in attrs if schema[a].interface_class is not InterfaceClass.PQ]
    return rng, point


def _range_discover(s, range_attrs, base, tracker):
    if any(s.schema[a].interface_class is InterfaceClass.SQ for a in range_attrs):
        res = sq_discover(s, attrs=range_attrs, base=base, tracker=tracker)
    else:
        res = rq_discover(s, attrs=range_attrs, base=base, tracker=tracker)
    if not res.complete:
        raise BudgetExhausted(s.query_log)
    return res


def crawl_plane(
    s: DiscoverySession,
    fixed_point_values: dict,
    pruning: PruningPredicate,
    *,
    tracker: SkylineTracker | None = None,
    first_answer=None,
    exhaustive: bool = False,
) -> set:
    """Enumerate the free point attributes under ``fixed_point_values`` and ``pruning``.

    Descends in ascending value order and stops wherever an answer
    underflows.  A fully fixed cell that still overflows is handed to range
    discovery, so for such a cell only its range skyline is returned.  With
    ``exhaustive`` the range attributes are enumerated by equality as well,
    which retrieves every matching tuple at a much higher price.
    """
    tr = tracker or SkylineTracker(s)
    range_attrs, point_attrs = _split_attrs(s.schema, s.dataset.ranking)
    free = [a for a in point_attrs if a not in fixed_point_values]
    base = pruning.query()
    for a, v in sorted(fixed_point_values.items()):
        base = base.eq(a, v)
    out: dict = {}

    def visit(q, remaining, answer=None):
        if answer is None:
            answer = tr.ask(q)
        out.update((r.id, r) for r in answer)
        if len(answer) < s.k:
            return
        if not remaining:
            if not range_attrs or exhaustive:
                return
            _range_discover(s, range_attrs, q, tr)
            out.update((r.id, r) for r in tr.seen.values() if q.matches(r.values))
            return
        a = remaining[0]
        lo, hi = q.bound(a)
        top = s.schema[a].domain_size - 1 if hi is None else hi
        for v in range(lo or 0, top + 1):
            visit(q.eq(a, v), remaining[1:])

    visit(base, free + (range_attrs if exhaustive else []), first_answer)
    return set(out.values())


def mq_discover(s: DiscoverySession, *, per_tuple: bool = False) -> DiscoveryResult:
    schema = s.schema
    rank = list(s.dataset.ranking)
    range_attrs, point_attrs = _split_attrs(schema, rank)
    classes = {schema[a].interface_class for a in rank}
    if not range_attrs:
        return pqdb_discover(s)
    if not point_attrs:
        if classes == {InterfaceClass.SQ}:
            return sq_discover(s)
        return rq_discover(s, mixed=InterfaceClass.SQ in classes)
    if not rank:
        raise InvalidParameterError("no ranking attributes")

    tr = SkylineTracker(s)
    # range discovery over a subspace and the point sweep both leave dominators
    # outside their query regions, so only cone-covering answers are vouched for
    tr.certify_answers = "cone"
    sweep: list[tuple[int, int, int]] = []
    phase1 = 0
    try:
        _range_discover(s, range_attrs, None, tr)
        phase1 = s.query_count - tr.start
        found = list(tr.candidates.values())
        if per_tuple:
            jobs = [(range_prune_predicates([t], range_attrs, schema), t) for t in found]
        else:
            jobs = [(range_prune_predicates(found, range_attrs, schema), None)]
        for pruning, anchor in jobs:
            base = pruning.query()
            for b in point_attrs:
                v = 0
                while True:
                    if anchor is not None:
                        limit = anchor.values[b]
                    else:
                        limit = max((t.values[b] for t in tr.candidates.values()), default=0)
                    if v >= limit:
                        break
                    q = base.eq(b, v)
                    answer = tr.ask(q)
                    sweep.append((b, v, len(answer)))
                    if len(answer) == s.k:
                        crawl_plane(s, {b: v}, pruning, tracker=tr, first_answer=answer)
                    v += 1
    except BudgetExhausted:
        return tr.result(False, sweep=sweep, phase1_cost=phase1)
    return tr.result(True, sweep=sweep, phase1_cost=phase1)
