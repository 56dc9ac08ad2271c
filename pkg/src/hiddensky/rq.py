"""Discovery over two-ended range interfaces.

Walks the same tree as :mod:`hiddensky.sq` in depth-first preorder, but
when a previously seen tuple already matches a node it issues the node's
mutually exclusive counterpart instead.  An empty counterpart proves the
whole subtree holds no new skyline tuple.
"""

from __future__ import annotations

from dataclasses import dataclass

from .interface import BudgetExhausted, DiscoverySession, Query
from .model import InterfaceClass, InvalidParameterError, Record
from .result import DiscoveryResult, SkylineTracker
from .sq import TreeNode


@dataclass(frozen=True)
class CounterpartQuery:
    base_node: tuple
    query: Query


def rq_counterpart(node_r: Query, branch_index: int, t: Record, attrs, schema=None) -> Query:
    """R-form of child ``branch_index``: ``A_j >= t[A_j]`` for earlier j, ``A_i < t[A_i]``.

    ``branch_index`` is a position in ``attrs``.  With a schema, the GE
    conjuncts are emitted only for attributes that accept them, which
    weakens disjointness but keeps the region a superset of the exact one.
    """
    q = node_r
    for j in attrs[:branch_index]:
        if schema is None or schema[j].interface_class is InterfaceClass.RQ:
            q = q.ge(j, t.values[j])
    a = attrs[branch_index]
    return q.lt(a, t.values[a])


def rq_discover(
    s: DiscoverySession,
    *,
    attrs=None,
    base: Query | None = None,
    tracker: SkylineTracker | None = None,
    mixed: bool = False,
) -> DiscoveryResult:
    schema = s.schema
    attrs = list(s.dataset.ranking if attrs is None else attrs)
    for a in attrs:
        cls = schema[a].interface_class
        if cls is InterfaceClass.PQ or (cls is InterfaceClass.SQ and not mixed):
            raise InvalidParameterError(f"{schema[a].name} ({cls.value}) lacks two-ended ranges")
    owned = tracker is None
    tr = tracker or SkylineTracker(s)
    base = base or Query()
    # each entry: (SQ-form query, R-form query, path)
    stack = [(base, base, ())]
    nodes = []
    pruned = 0
    try:
        while stack:
            q, r, path = stack.pop()
            if not tr.any_seen_matches(q):
                answer = tr.ask(q)
                nodes.append((path, "q", answer[0].id if answer else None))
                pivot = answer[0] if len(answer) == s.k else None
            else:
                answer = tr.ask(r)
                nodes.append((path, "r", answer[0].id if answer else None))
                if not answer:
                    pruned += 1
                pivot = None
                if len(answer) == s.k:
                    pivot = tr.dominator_of(answer[0]) or answer[0]
            if pivot is None:
                continue
            children = []
            for i, a in enumerate(attrs):
                cq = q.lt(a, pivot.values[a])
                if cq.is_empty:
                    continue
                cr = rq_counterpart(r, i, pivot, attrs, schema if mixed else None)
                if cr.is_empty:
                    pruned += 1
                    continue
                children.append((cq, cr, path + ((pivot.id, a),)))
            stack.extend(reversed(children))
    except BudgetExhausted:
        return tr.result(False, nodes=nodes, pruned=pruned)
    return tr.result(True, finalize=owned, nodes=nodes, pruned=pruned)
