"""Domain types, dominance, and brute-force skyline / sky-band oracles.

Every attribute value is a normalized preference index: 0 is the most
preferred value, so "smaller is better" everywhere downstream.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

import numpy as np


class MalformedInputError(ValueError):
    pass


class InvalidParameterError(ValueError):
    pass


class InterfaceClass(str, enum.Enum):
    SQ = "SQ"  # single-ended range: <, <=, =
    RQ = "RQ"  # two-ended range: <, <=, =, >=, >
    PQ = "PQ"  # point only: =


class Role(str, enum.Enum):
    RANKING = "ranking"
    FILTERING = "filtering"


@dataclass(frozen=True)
class AttributeSchema:
    name: str
    domain_size: int
    interface_class: InterfaceClass = InterfaceClass.RQ
    role: Role = Role.RANKING

    def __post_init__(self):
        if self.domain_size < 1:
            raise InvalidParameterError(f"{self.name}: domain_size must be >= 1")
        object.__setattr__(self, "interface_class", InterfaceClass(self.interface_class))
        object.__setattr__(self, "role", Role(self.role))

    @property
    def is_ranking(self) -> bool:
        return self.role is Role.RANKING


@dataclass(frozen=True)
class Record:
    """One tuple of the hidden database."""

    id: Hashable
    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))

    def __getitem__(self, i: int) -> int:
        return self.values[i]


def make_schema(domains: Sequence[int], classes: str | Sequence[str] = "RQ") -> tuple[AttributeSchema, ...]:
    """Shorthand: ranking attributes A1..Am with the given domain sizes."""
    if isinstance(classes, str):
        classes = [classes] * len(domains)
    return tuple(
        AttributeSchema(f"A{i + 1}", int(d), InterfaceClass(c)) for i, (d, c) in enumerate(zip(domains, classes))
    )


def ranking_indices(schema: Sequence[AttributeSchema]) -> tuple[int, ...]:
    return tuple(i for i, a in enumerate(schema) if a.is_ranking)


@dataclass(frozen=True)
class Dataset:
    schema: tuple[AttributeSchema, ...]
    records: tuple[Record, ...]
    _matrix: np.ndarray = field(init=False, repr=False, compare=False)
    _by_id: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        schema = tuple(self.schema)
        records = tuple(self.records)
        object.__setattr__(self, "schema", schema)
        object.__setattr__(self, "records", records)
        m = len(schema)
        seen_ids = set()
        seen_combo = set()
        rank = ranking_indices(schema)
        for r in records:
            if len(r.values) != m:
                raise MalformedInputError(f"record {r.id!r} has {len(r.values)} values, schema has {m}")
            for v, a in zip(r.values, schema):
                if not 0 <= v < a.domain_size:
                    raise MalformedInputError(f"record {r.id!r}: value {v} outside domain of {a.name}")
            if r.id in seen_ids:
                raise MalformedInputError(f"duplicate record id {r.id!r}")
            seen_ids.add(r.id)
            combo = tuple(r.values[i] for i in rank)
            if combo in seen_combo:
                raise MalformedInputError(f"duplicate ranking combination {combo} (general positioning)")
            seen_combo.add(combo)
        matrix = np.array([r.values for r in records], dtype=np.int64).reshape(len(records), m)
        matrix.setflags(write=False)
        object.__setattr__(self, "_matrix", matrix)
        object.__setattr__(self, "_by_id", {r.id: r for r in records})

    @classmethod
    def from_rows(cls, schema, rows: Iterable[Sequence[int]], ids: Iterable[Hashable] | None = None) -> "Dataset":
        rows = [tuple(r) for r in rows]
        if ids is None:
            ids = range(len(rows))
        return cls(tuple(schema), tuple(Record(i, r) for i, r in zip(ids, rows)))

    @property
    def n(self) -> int:
        return len(self.records)

    @property
    def m(self) -> int:
        return len(self.schema)

    @property
    def ranking(self) -> tuple[int, ...]:
        return ranking_indices(self.schema)

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    def ranking_matrix(self) -> np.ndarray:
        return self._matrix[:, list(self.ranking)]

    def get(self, rid) -> Record:
        return self._by_id[rid]

    def ids(self) -> list:
        return [r.id for r in self.records]


def dominates(t: Record, u: Record, schema: Sequence[AttributeSchema]) -> bool:
    if len(t.values) != len(schema) or len(u.values) != len(schema):
        raise MalformedInputError("value count does not match schema")
    if t.id == u.id:
        return False
    rank = ranking_indices(schema)
    if all(t.values[i] == u.values[i] for i in rank):
        return False
    return all(t.values[i] <= u.values[i] for i in rank)


def dominates_values(a: Sequence[int], b: Sequence[int]) -> bool:
    """Strict Pareto dominance on plain value vectors."""
    le = True
    lt = False
    for x, y in zip(a, b):
        if x > y:
            le = False
            break
        if x < y:
            lt = True
    return le and lt


def dominator_counts(points: np.ndarray) -> np.ndarray:
    """For each row, the number of other rows dominating it."""
    n = len(points)
    counts = np.zeros(n, dtype=np.int64)
    if n == 0:
        return counts
    for i in range(n):
        le = np.all(points <= points[i], axis=1)
        lt = np.any(points < points[i], axis=1)
        counts[i] = int(np.count_nonzero(le & lt))
    return counts


def skyline_mask(points: np.ndarray) -> np.ndarray:
    """Boolean mask of non-dominated rows; sort-filter scan."""
    n = len(points)
    mask = np.zeros(n, dtype=bool)
    if n == 0:
        return mask
    order = np.lexsort(points.T[::-1])
    order = order[np.argsort(points[order].sum(axis=1), kind="stable")]
    kept: list[int] = []
    kept_pts = np.empty((0, points.shape[1]), dtype=points.dtype)
    for i in order:
        p = points[i]
        if len(kept) and np.any(np.all(kept_pts <= p, axis=1) & np.any(kept_pts < p, axis=1)):
            continue
        kept.append(i)
        kept_pts = points[kept]
    mask[kept] = True
    return mask


def oracle_skyline(d: Dataset) -> frozenset:
    if d.n == 0:
        return frozenset()
    mask = skyline_mask(d.ranking_matrix())
    return frozenset(r.id for r, keep in zip(d.records, mask) if keep)


def oracle_skyband(d: Dataset, h: int) -> frozenset:
    if h < 1:
        raise InvalidParameterError("h must be >= 1")
    if h == 1:
        return oracle_skyline(d)
    counts = dominator_counts(d.ranking_matrix())
    return frozenset(r.id for r, c in zip(d.records, counts) if c < h)


PAPER_EXAMPLE = ((5, 1, 9), (4, 4, 8), (1, 3, 7), (3, 2, 3))


def paper_example(interface_class: str = "RQ") -> Dataset:
    """The four-tuple running example; ids are 't1'..'t4'."""
    schema = make_schema([10, 10, 10], interface_class)
    return Dataset.from_rows(schema, PAPER_EXAMPLE, ids=["t1", "t2", "t3", "t4"])
