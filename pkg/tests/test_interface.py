import io

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hiddensky.interface import (
    BudgetExhausted,
    Comparator,
    DiscoverySession,
    InterfaceViolation,
    Lexicographic,
    Predicate,
    Query,
    RandomLinearExtension,
    RandomMatchingSkyline,
    WeightedSum,
    build_total_order,
    matches,
    read_trace,
    replay,
)
from hiddensky.model import InvalidParameterError, MalformedInputError, dominates, oracle_skyline, paper_example

from conftest import datasets


def ex():
    return paper_example()


def test_matches_examples():
    d = ex()
    assert matches(d.get("t3"), Query().lt(0, 3))
    assert all(matches(t, Query()) for t in d.records)
    assert not matches(d.get("t1"), Query().lt(0, 5).lt(1, 1))


def test_weighted_sum_order():
    assert build_total_order(WeightedSum(), ex()) == ["t4", "t3", "t1", "t2"]


def test_lexicographic_priority():
    order = build_total_order(Lexicographic((2, 0, 1)), ex())
    vals = [ex().get(i).values[2] for i in order]
    assert vals == sorted(vals)


@pytest.mark.parametrize("seed", range(25))
def test_random_linear_extension_respects_dominance(seed):
    order = build_total_order(RandomLinearExtension(seed), ex())
    assert order.index("t4") < order.index("t2")


def test_random_linear_extension_varies_with_seed():
    orders = {tuple(build_total_order(RandomLinearExtension(s), ex())) for s in range(40)}
    assert len(orders) > 1


def test_answer_examples():
    d = ex()
    assert [t.id for t in DiscoverySession(d, 1).answer(Query())] == ["t4"]
    assert DiscoverySession(d, 1).answer(Query().lt(0, 1)) == ()
    assert [t.id for t in DiscoverySession(d, 4).answer(Query())] == ["t4", "t3", "t1", "t2"]


def test_invalid_parameters():
    d = ex()
    with pytest.raises(InvalidParameterError):
        DiscoverySession(d, 0)
    with pytest.raises(InvalidParameterError):
        DiscoverySession(d, 2, RandomMatchingSkyline(0))
    with pytest.raises(InvalidParameterError):
        build_total_order(WeightedSum((1.0, 0.0, 1.0)), d)
    with pytest.raises(InvalidParameterError):
        DiscoverySession(d, 1, budget=-1)


def test_interface_violation_does_not_consume_budget():
    s = DiscoverySession(paper_example("SQ"), 1, budget=1)
    with pytest.raises(InterfaceViolation):
        s.answer(Query().ge(0, 2))
    assert s.query_count == 0
    s.answer(Query().lt(0, 2))
    assert s.query_count == 1


def test_pq_accepts_equality_only():
    s = DiscoverySession(paper_example("PQ"), 1)
    s.answer(Query().eq(0, 3))
    with pytest.raises(InterfaceViolation):
        s.answer(Query().lt(0, 3))


def test_budget_exhaustion_carries_log():
    s = DiscoverySession(ex(), 1, budget=2)
    s.answer(Query())
    s.answer(Query().lt(0, 4))
    with pytest.raises(BudgetExhausted) as info:
        s.answer(Query().lt(1, 2))
    assert len(info.value.query_log) == 2
    assert s.query_count == len(s.query_log) == 2


def test_query_bounds_and_conflicts():
    q = Query().lt(0, 5).lt(0, 4)
    assert q.bound(0) == (None, 3)
    assert Query().ge(0, 3).lt(0, 3).is_empty
    assert Query().lt(1, 0).is_empty
    assert Query().eq(0, 2).eq(0, 3).is_empty
    with pytest.raises(MalformedInputError):
        Query.from_predicates([Predicate(0, Comparator.LT, 3), Predicate(0, Comparator.LE, 5)])
    assert str(Query()) == "SELECT *"


@given(datasets(max_n=20), st.integers(1, 5), st.sampled_from(["ws", "lex", "rle"]), st.data())
def test_domination_consistency(d, k, mode, data):
    ranking = {"ws": WeightedSum(), "lex": Lexicographic(), "rle": RandomLinearExtension(3)}[mode]
    s = DiscoverySession(d, k, ranking)
    q = Query()
    for a in d.ranking:
        if data.draw(st.booleans()):
            q = q.lt(a, data.draw(st.integers(1, d.schema[a].domain_size)))
        if data.draw(st.booleans()):
            q = q.ge(a, data.draw(st.integers(0, d.schema[a].domain_size - 1)))
    ans = s.answer(q)
    matching = [t for t in d.records if matches(t, q)]
    assert len(ans) == min(k, len(matching))
    assert all(matches(t, q) for t in ans)
    pos = {t.id: i for i, t in enumerate(ans)}
    for u in ans:
        for t in matching:
            if dominates(t, u, d.schema):
                assert t.id in pos and pos[t.id] < pos[u.id]


@given(datasets(max_n=20), st.data())
def test_sq_top1_is_skyline(d, data):
    s = DiscoverySession(d, 1, RandomLinearExtension(data.draw(st.integers(0, 9))))
    q = Query()
    for a in d.ranking:
        if data.draw(st.booleans()):
            q = q.lt(a, data.draw(st.integers(1, d.schema[a].domain_size)))
    ans = s.answer(q)
    if ans:
        assert ans[0].id in oracle_skyline(d)


@given(datasets(max_n=20), st.integers(0, 5))
def test_random_matching_skyline_returns_matching_skyline_member(d, seed):
    s = DiscoverySession(d, 1, RandomMatchingSkyline(seed))
    q = Query().lt(d.ranking[0], max(1, d.schema[d.ranking[0]].domain_size - 1))
    a1 = s.answer(q)
    a2 = s.answer(q)
    assert a1 == a2
    matching = [t for t in d.records if matches(t, q)]
    if not matching:
        assert a1 == ()
        return
    local = {t.id for t in matching if not any(dominates(u, t, d.schema) for u in matching)}
    assert a1[0].id in local


def test_random_matching_skyline_is_roughly_uniform():
    # three mutually incomparable tuples: each should be picked about a third of the time
    from hiddensky.model import Dataset, make_schema

    d = Dataset.from_rows(make_schema([4, 4]), [(0, 2), (1, 1), (2, 0)])
    picks = [DiscoverySession(d, 1, RandomMatchingSkyline(seed)).answer(Query())[0].id for seed in range(900)]
    counts = np.bincount(picks, minlength=3)
    assert counts.min() > 240


def test_trace_export_and_replay():
    d = ex()
    s = DiscoverySession(d, 2)
    for q in (Query(), Query().lt(0, 4), Query().lt(1, 2).ge(2, 1)):
        s.answer(q)
    buf = io.StringIO()
    s.export_trace(buf)
    buf.seek(0)
    trace = read_trace(buf)
    assert len(trace) == 3
    assert replay(DiscoverySession(d, 2), trace) == []
    assert replay(DiscoverySession(d, 1), trace) != []
