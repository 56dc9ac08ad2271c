import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hiddensky.interface import DiscoverySession, Lexicographic, Query, RandomLinearExtension
from hiddensky.model import Dataset, InvalidParameterError, Record, make_schema, oracle_skyline, paper_example
from hiddensky.rq import rq_counterpart, rq_discover
from hiddensky.sq import sq_discover

from conftest import datasets, random_dataset

T1 = Record("t1", (5, 1, 9))


def test_counterpart_examples():
    q = rq_counterpart(Query(), 2, T1, [0, 1, 2])
    assert q.bound(0) == (5, None) and q.bound(1) == (1, None) and q.bound(2) == (None, 8)
    first = rq_counterpart(Query(), 0, T1, [0, 1, 2])
    assert first == Query().lt(0, 5)


def test_counterparts_disjoint_and_cover():
    kids = [rq_counterpart(Query(), i, T1, [0, 1, 2]) for i in range(3)]
    for p in itertools.product(range(10), repeat=3):
        hits = sum(k.matches(p) for k in kids)
        assert hits <= 1
        dominated = all(a >= b for a, b in zip(p, T1.values))
        assert hits == 1 or dominated


@given(st.tuples(*(st.integers(0, 5),) * 3), st.tuples(*(st.integers(0, 5),) * 3))
def test_region_algebra_two_levels(t, u):
    # child counterparts of a child node partition that child's R-region minus u's up-set
    attrs = [0, 1, 2]
    parent = rq_counterpart(Query(), 1, Record("t", t), attrs)
    kids = [rq_counterpart(parent, i, Record("u", u), attrs) for i in range(3)]
    for p in itertools.product(range(6), repeat=3):
        hits = sum(k.matches(p) for k in kids)
        assert hits <= 1
        if parent.matches(p):
            assert hits == 1 or all(a >= b for a, b in zip(p, u))
        else:
            assert hits == 0


@pytest.mark.parametrize("k", [1, 2, 3])
def test_paper_example(k):
    r = rq_discover(DiscoverySession(paper_example(), k))
    assert r.skyline == {"t1", "t3", "t4"}


def test_paper_example_prunes_a_subtree():
    # ranking on A1 first returns t3 at the root, as in the worked tree
    r = rq_discover(DiscoverySession(paper_example(), 1, Lexicographic()))
    assert r.extra["nodes"][0][2] == "t3"
    assert r.extra["pruned"] >= 1
    assert r.skyline == {"t1", "t3", "t4"}


def test_everything_dominated_by_top():
    rows = [(0, 0, 0)] + [(a, b, c) for a, b, c in itertools.product(range(1, 4), repeat=3)][:20]
    d = Dataset.from_rows(make_schema([4, 4, 4]), rows)
    r = rq_discover(DiscoverySession(d, 1))
    assert r.cost <= 1 + 3


def test_requires_two_ended_ranges():
    with pytest.raises(InvalidParameterError):
        rq_discover(DiscoverySession(paper_example("SQ"), 1))


@pytest.mark.parametrize("seed", range(4))
def test_anticorrelated_rq_beats_sq_in_three_dimensions(seed):
    from hiddensky.data import GeneratorConfig, gen_synthetic

    d = gen_synthetic(GeneratorConfig(200, 3, 20, -0.5, seed))
    assert len(oracle_skyline(d)) / d.n > 0.3
    cr = rq_discover(DiscoverySession(d, 1, RandomLinearExtension(seed))).cost
    cs = sq_discover(DiscoverySession(d, 1, RandomLinearExtension(seed))).cost
    assert cr < cs


@given(datasets(m=st.just(2), dom=st.integers(2, 12), max_n=40), st.integers(1, 4), st.integers(0, 3))
def test_two_dimensional_rq_and_sq_cost_the_same(d, k, seed):
    # with two attributes the SQ children of a node share only the empty lower-left
    # corner, so every counterpart matches the same tuples as the plain query
    a = rq_discover(DiscoverySession(d, k, RandomLinearExtension(seed)))
    b = sq_discover(DiscoverySession(d, k, RandomLinearExtension(seed)))
    assert a.cost == b.cost


@given(datasets(max_n=30), st.integers(1, 4))
def test_completeness_and_cost_ceiling(d, k):
    r = rq_discover(DiscoverySession(d, k))
    assert r.complete and r.skyline == oracle_skyline(d)
    s, m = len(r.skyline), d.m
    assert r.cost <= (m + 1) * min(s ** (m + 1), d.n) + m + 1


@given(datasets(max_n=30), st.integers(1, 3), st.integers(1, 10))
def test_anytime_soundness(d, k, budget):
    r = rq_discover(DiscoverySession(d, k, budget=budget))
    assert r.skyline <= oracle_skyline(d)


@given(datasets(max_n=30), st.integers(1, 3))
def test_each_skyline_tuple_first_returned_once(d, k):
    # every skyline tuple is top-1 of at most one issued counterpart
    r = rq_discover(DiscoverySession(d, k))
    tops = [tid for _, kind, tid in r.extra["nodes"] if kind == "r" and tid is not None]
    sky_tops = [t for t in tops if t in r.skyline]
    assert len(sky_tops) == len(set(sky_tops))


def test_mixed_mode_accepts_single_ended():
    d = random_dataset(__import__("numpy").random.default_rng(0), 200, [8, 8, 8], ["RQ", "SQ", "RQ"])
    r = rq_discover(DiscoverySession(d, 2), mixed=True)
    assert r.skyline == oracle_skyline(d)
