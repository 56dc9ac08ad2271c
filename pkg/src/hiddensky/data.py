"""Dataset ingestion, discretization, synthetic generation and export."""

from __future__ import annotations

import csv
import json
import logging
import os
from dataclasses import asdict, dataclass, field

import numpy as np

from .model import (
    AttributeSchema,
    Dataset,
    InterfaceClass,
    InvalidParameterError,
    MalformedInputError,
    Record,
    Role,
    make_schema,
)

log = logging.getLogger(__name__)

SMALLER = "smaller"
LARGER = "larger"


@dataclass(frozen=True)
class AttributeConfig:
    column: str
    direction: str = SMALLER
    interface_class: str = "RQ"
    role: str = "ranking"
    buckets: int | None = None
    # set when the column already holds normalized indices (e.g. our own exports)
    domain_size: int | None = None

    def __post_init__(self):
        if self.direction not in (SMALLER, LARGER):
            raise InvalidParameterError(f"{self.column}: direction must be '{SMALLER}' or '{LARGER}'")
        InterfaceClass(self.interface_class)
        Role(self.role)
        if self.buckets is not None and self.buckets < 2:
            raise InvalidParameterError(f"{self.column}: bucket count must be >= 2")


@dataclass(frozen=True)
class SchemaConfig:
    attributes: tuple[AttributeConfig, ...]
    id_column: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "attributes", tuple(self.attributes))
        if not any(a.role == "ranking" for a in self.attributes):
            raise InvalidParameterError("schema needs at least one ranking attribute")

    @classmethod
    def from_json(cls, obj: dict) -> "SchemaConfig":
        return cls(tuple(AttributeConfig(**a) for a in obj["attributes"]), obj.get("id_column"))

    def to_json(self) -> dict:
        return {"attributes": [asdict(a) for a in self.attributes], "id_column": self.id_column}


@dataclass
class IngestReport:
    rows_read: int = 0
    rows_kept: int = 0
    duplicates_dropped: int = 0
    errors: list[tuple[int, str]] = field(default_factory=list)


def ingest_csv(path, config: SchemaConfig, *, report: IngestReport | None = None) -> Dataset:
    """Read a headered CSV and rank-encode each configured column (0 = most preferred)."""
    report = report if report is not None else IngestReport()
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        wanted = [a.column for a in config.attributes] + ([config.id_column] if config.id_column else [])
        missing = [c for c in wanted if c not in header]
        if missing:
            raise MalformedInputError(f"missing column(s): {', '.join(missing)}")
        raw: list[tuple[object, list[float]]] = []
        for line_no, row in enumerate(reader, start=2):
            report.rows_read += 1
            try:
                vals = []
                for a in config.attributes:
                    cell = row[a.column]
                    if cell is None or cell.strip() == "":
                        raise ValueError(f"empty cell in column {a.column!r}")
                    vals.append(float(cell))
            except ValueError as exc:
                report.errors.append((line_no, str(exc)))
                continue
            rid = row[config.id_column] if config.id_column else len(raw)
            raw.append((rid, vals))
    for line_no, msg in report.errors:
        log.warning("%s:%d: %s", path, line_no, msg)
    if not raw:
        log.warning("%s: no valid rows; returning an empty dataset", path)

    cols = np.array([v for _, v in raw], dtype=float).reshape(len(raw), len(config.attributes))
    encoded = np.zeros(cols.shape, dtype=np.int64)
    schema = []
    for j, a in enumerate(config.attributes):
        col = cols[:, j]
        if a.domain_size is not None:
            if len(col) and (np.any(col != np.round(col)) or col.min() < 0 or col.max() >= a.domain_size):
                raise MalformedInputError(f"column {a.column!r} is not a normalized index column")
            encoded[:, j] = col.astype(np.int64)
            size = a.domain_size
        else:
            distinct = np.unique(col)
            if a.direction == LARGER:
                distinct = distinct[::-1]
            lookup = {v: i for i, v in enumerate(distinct.tolist())}
            encoded[:, j] = [lookup[v] for v in col.tolist()]
            size = max(1, len(distinct))
        schema.append(AttributeSchema(a.column, size, InterfaceClass(a.interface_class), Role(a.role)))

    rank = [j for j, a in enumerate(schema) if a.is_ranking]
    seen_combo = set()
    records = []
    for (rid, _), row in zip(raw, encoded.tolist()):
        combo = tuple(row[j] for j in rank)
        if combo in seen_combo:
            report.duplicates_dropped += 1
            continue
        seen_combo.add(combo)
        records.append(Record(rid, tuple(row)))
    report.rows_kept = len(records)
    d = Dataset(tuple(schema), tuple(records))
    for j, a in enumerate(config.attributes):
        if a.buckets is not None and a.buckets < d.schema[j].domain_size:
            d = discretize(d, j, a.buckets, mode="equal_frequency")
    return d


def discretize(d: Dataset, attr: int, buckets: int, mode: str = "truncate") -> Dataset:
    """Shrink the domain of ``attr`` to ``buckets`` values.

    ``truncate`` keeps the ``buckets`` most populated values (ties to the
    more preferred value) and drops every tuple outside them;
    ``equal_frequency`` merges adjacent values into buckets of roughly equal
    population.  Tuples that collide on their ranking values afterwards are
    dropped, first occurrence wins.
    """
    size = d.schema[attr].domain_size
    if buckets > size:
        raise InvalidParameterError(f"cannot discretize a domain of {size} into {buckets} buckets")
    if buckets < 1:
        raise InvalidParameterError("buckets must be >= 1")
    if buckets == size:
        return d
    col = d.matrix[:, attr] if d.n else np.zeros(0, dtype=np.int64)
    counts = np.bincount(col, minlength=size)
    if mode == "truncate":
        keep = sorted(sorted(range(size), key=lambda v: (-counts[v], v))[:buckets])
        remap = {v: i for i, v in enumerate(keep)}
    elif mode == "equal_frequency":
        n = max(1, len(col))
        before = np.concatenate([[0], np.cumsum(counts)[:-1]])
        remap = {v: min(buckets - 1, int(before[v] * buckets // n)) for v in range(size)}
    else:
        raise InvalidParameterError("mode must be 'truncate' or 'equal_frequency'")
    schema = list(d.schema)
    a = schema[attr]
    schema[attr] = AttributeSchema(a.name, buckets, a.interface_class, a.role)
    rank = [j for j, s in enumerate(schema) if s.is_ranking]
    out, seen = [], set()
    for r in d.records:
        v = r.values[attr]
        if v not in remap:
            continue
        vals = list(r.values)
        vals[attr] = remap[v]
        combo = tuple(vals[j] for j in rank)
        if combo in seen:
            continue
        seen.add(combo)
        out.append(Record(r.id, tuple(vals)))
    return Dataset(tuple(schema), tuple(out))


@dataclass(frozen=True)
class GeneratorConfig:
    n: int
    m: int
    domains: int | tuple[int, ...] = 100
    correlation: float = 0.0
    seed: int = 0
    interface_class: str | tuple[str, ...] = "RQ"

    def __post_init__(self):
        if self.n < 0 or self.m < 1:
            raise InvalidParameterError("need n >= 0 and m >= 1")
        if not -1.0 <= self.correlation <= 1.0:
            raise InvalidParameterError("correlation must lie in [-1, 1]")
        if isinstance(self.domains, (list, tuple)):
            object.__setattr__(self, "domains", tuple(int(x) for x in self.domains))
            if len(self.domains) != self.m:
                raise InvalidParameterError("one domain size per attribute")
        if isinstance(self.interface_class, list):
            object.__setattr__(self, "interface_class", tuple(self.interface_class))
        if min(self.domain_list()) < 2:
            raise InvalidParameterError("domain sizes must be >= 2")

    def domain_list(self) -> list[int]:
        return list(self.domains) if isinstance(self.domains, tuple) else [int(self.domains)] * self.m


def gen_synthetic(cfg: GeneratorConfig) -> Dataset:
    """Gaussian copula with equicorrelation ``rho``, then rank-based discretization.

    ``rho = 1`` gives identical rankings on every attribute, ``rho = -1`` (two
    attributes) exactly reversed ones.  Below ``-1/(m-1)`` the equicorrelation
    matrix is not a covariance, so ``rho`` is clipped there.
    """
    rng = np.random.default_rng(cfg.seed)
    n, m = cfg.n, cfg.m
    doms = cfg.domain_list()
    rho = cfg.correlation
    if m > 1:
        rho = max(rho, -1.0 / (m - 1))
    cov = np.full((m, m), rho) + (1 - rho) * np.eye(m)
    z = rng.multivariate_normal(np.zeros(m), cov, size=n, method="eigh") if n else np.zeros((0, m))
    vals = np.zeros((n, m), dtype=np.int64)
    for j in range(m):
        # stable argsort keeps exact copies of a column (rho = 1) identically ranked
        order = np.argsort(z[:, j], kind="stable")
        ranks = np.empty(n, dtype=np.int64)
        ranks[order] = np.arange(n)
        vals[:, j] = ranks * doms[j] // max(n, 1)
    _, first = np.unique(vals, axis=0, return_index=True) if n else (None, np.zeros(0, dtype=np.int64))
    rows = vals[np.sort(first)] if n else vals
    schema = make_schema(doms, list(cfg.interface_class) if isinstance(cfg.interface_class, tuple) else cfg.interface_class)
    return Dataset.from_rows(schema, rows.tolist())


def sidecar_path(csv_path) -> str:
    return os.fspath(csv_path) + ".schema.json"


def export_csv(d: Dataset, path) -> None:
    """Write normalized indices as CSV plus a JSON sidecar describing the schema."""
    path = os.fspath(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["id"] + [a.name for a in d.schema])
        for r in d.records:
            w.writerow([r.id, *r.values])
    cfg = SchemaConfig(
        tuple(
            AttributeConfig(a.name, SMALLER, a.interface_class.value, a.role.value, None, a.domain_size)
            for a in d.schema
        ),
        id_column="id",
    )
    with open(sidecar_path(path), "w") as fh:
        json.dump(cfg.to_json(), fh, indent=2)


def load_dataset(path) -> Dataset:
    """Re-read a CSV written by :func:`export_csv` (ids come back as strings unless numeric)."""
    with open(sidecar_path(path)) as fh:
        cfg = SchemaConfig.from_json(json.load(fh))
    d = ingest_csv(path, cfg)
    recs = tuple(Record(_maybe_int(r.id), r.values) for r in d.records)
    return Dataset(d.schema, recs)


def _maybe_int(x):
    try:
        return int(x)
    except (TypeError, ValueError):
        return x
