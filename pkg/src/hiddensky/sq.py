"""Divide-and-conquer discovery over single-ended range interfaces.

Each node of the query tree is a conjunction of ``A_i < v`` bounds.  A node
whose answer overflows is split m ways on its top-1 tuple ``t``: child ``i``
appends ``A_i < t[A_i]``.  Every skyline tuple matching the node but not
equal to ``t`` beats ``t`` somewhere, so it matches some child.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .interface import BudgetExhausted, DiscoverySession, Query
from .model import InterfaceClass, InvalidParameterError, Record
from .result import DiscoveryResult, SkylineTracker


@dataclass(frozen=True)
class TreeNode:
    query: Query
    path: tuple[tuple[object, int], ...] = ()


def sq_expand(q: Query, t: Record, attrs) -> list[Query]:
    """The m children of ``q`` branched on ``t``; unsatisfiable ones have ``is_empty``."""
    return [q.lt(a, t.values[a]) for a in attrs]


def range_attrs(schema, attrs=None) -> list[int]:
    if attrs is None:
        attrs = [i for i, a in enumerate(schema) if a.is_ranking]
    return list(attrs)


def sq_discover(
    s: DiscoverySession,
    *,
    attrs=None,
    base: Query | None = None,
    depth_first: bool = False,
    tracker: SkylineTracker | None = None,
) -> DiscoveryResult:
    schema = s.schema
    attrs = range_attrs(schema, attrs)
    for a in attrs:
        if schema[a].interface_class is InterfaceClass.PQ:
            raise InvalidParameterError(f"{schema[a].name} is point-only; SQ discovery needs range predicates")
    owned = tracker is None
    tr = tracker or SkylineTracker(s)
    root = TreeNode(base or Query())
    frontier = deque([root])
    nodes = []
    try:
        while frontier:
            node = frontier.pop() if depth_first else frontier.popleft()
            answer = tr.ask(node.query)
            nodes.append((node.path, answer[0].id if answer else None))
            if len(answer) == s.k:
                t0 = answer[0]
                children = [
                    TreeNode(cq, node.path + ((t0.id, a),))
                    for a, cq in zip(attrs, sq_expand(node.query, t0, attrs))
                    if not cq.is_empty
                ]
                frontier.extend(reversed(children) if depth_first else children)
    except BudgetExhausted:
        return tr.result(False, nodes=nodes)
    return tr.result(True, finalize=owned, nodes=nodes)
