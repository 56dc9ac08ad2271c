import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hiddensky.model import (
    AttributeSchema,
    Dataset,
    InterfaceClass,
    InvalidParameterError,
    MalformedInputError,
    Record,
    Role,
    dominates,
    dominates_values,
    make_schema,
    oracle_skyband,
    oracle_skyline,
    paper_example,
)

from conftest import datasets
from oracles import brute_skyband, brute_skyline


def test_dominance_examples():
    d = paper_example()
    t1, t2, t3, t4 = (d.get(f"t{i}") for i in range(1, 5))
    assert dominates(t4, t2, d.schema)
    assert not dominates(t4, t4, d.schema)
    assert not dominates(t1, t3, d.schema)
    assert not dominates(t3, t1, d.schema)


def test_dominance_schema_mismatch():
    d = paper_example()
    with pytest.raises(MalformedInputError):
        dominates(Record("x", (1, 2)), d.get("t1"), d.schema)


def test_filtering_attributes_ignored():
    schema = (
        AttributeSchema("a", 5),
        AttributeSchema("f", 5, InterfaceClass.RQ, Role.FILTERING),
    )
    assert dominates(Record(1, (0, 4)), Record(2, (1, 0)), schema)


def test_oracle_skyline_examples():
    assert oracle_skyline(paper_example()) == {"t1", "t3", "t4"}
    assert oracle_skyline(Dataset.from_rows(make_schema([3, 3]), [])) == frozenset()
    assert oracle_skyline(Dataset.from_rows(make_schema([3, 3]), [(2, 2)])) == {0}


def test_oracle_skyband_examples():
    d = paper_example()
    assert oracle_skyband(d, 1) == {"t1", "t3", "t4"}
    # t2 = (4,4,8) has two dominators, t3 = (1,3,7) and t4 = (3,2,3)
    assert oracle_skyband(d, 2) == {"t1", "t3", "t4"}
    assert oracle_skyband(d, 3) == {"t1", "t2", "t3", "t4"}
    assert oracle_skyband(d, 10) == set(d.ids())
    with pytest.raises(InvalidParameterError):
        oracle_skyband(d, 0)


def test_dataset_rejects_duplicates_and_out_of_domain():
    s = make_schema([3, 3])
    with pytest.raises(MalformedInputError):
        Dataset.from_rows(s, [(1, 1), (1, 1)])
    with pytest.raises(MalformedInputError):
        Dataset.from_rows(s, [(3, 0)])
    with pytest.raises(MalformedInputError):
        Dataset.from_rows(s, [(1, 1, 1)])


def test_schema_validation():
    with pytest.raises(InvalidParameterError):
        AttributeSchema("a", 0)


@given(datasets(max_n=30))
def test_skyline_matches_brute_force(d):
    expect = {d.records[i].id for i in brute_skyline(d.ranking_matrix().tolist())}
    assert oracle_skyline(d) == expect


@given(datasets(max_n=30), st.integers(1, 4))
def test_skyband_matches_brute_force(d, h):
    expect = {d.records[i].id for i in brute_skyband(d.ranking_matrix().tolist(), h)}
    assert oracle_skyband(d, h) == expect


@given(datasets(max_n=30))
def test_skyband_one_is_skyline_and_nested(d):
    assert oracle_skyband(d, 1) == oracle_skyline(d)
    assert oracle_skyband(d, 2) <= oracle_skyband(d, 3)


@given(datasets(max_n=30))
def test_skyline_pairwise_incomparable(d):
    sky = [d.get(i) for i in oracle_skyline(d)]
    for a in sky:
        for b in sky:
            assert not dominates(a, b, d.schema)


@given(st.lists(st.tuples(*(st.integers(0, 4),) * 3), min_size=3, max_size=3, unique=True))
def test_antisymmetry_and_transitivity(pts):
    a, b, c = pts
    assert not (dominates_values(a, b) and dominates_values(b, a))
    if dominates_values(a, b) and dominates_values(b, c):
        assert dominates_values(a, c)


@given(datasets(max_n=20), st.data())
def test_adding_a_tuple_never_revives_a_dominated_one(d, data):
    before = oracle_skyline(d)
    new = tuple(data.draw(st.integers(0, a.domain_size - 1)) for a in d.schema)
    if any(r.values == new for r in d.records):
        return
    d2 = Dataset(d.schema, d.records + (Record("new", new),))
    after = oracle_skyline(d2) - {"new"}
    assert after <= before


def test_matrix_is_read_only():
    d = paper_example()
    with pytest.raises(ValueError):
        d.matrix[0, 0] = 7
    assert isinstance(d.matrix, np.ndarray)
