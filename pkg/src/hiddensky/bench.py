"""Experiment harness: algorithm registry, baseline crawler and parameter sweeps."""

from __future__ import annotations

import csv
import dataclasses
import io
import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .data import GeneratorConfig, gen_synthetic, load_dataset
from .interface import (
    BudgetExhausted,
    DiscoverySession,
    Lexicographic,
    Query,
    RandomLinearExtension,
    RandomMatchingSkyline,
    WeightedSum,
)
from .model import InterfaceClass, InvalidParameterError, oracle_skyline, skyline_mask
from .mq import mq_discover
from .pq import pq2d_discover, pqdb_discover
from .result import DiscoveryResult
from .rq import rq_discover
from .sq import sq_discover


def baseline_crawl(s: DiscoverySession) -> tuple[set, int]:
    """Retrieve every tuple by recursive range splitting; returns ``(records, cost)``.

    An overflowing box is cut on its widest attribute at the value of the
    last returned tuple (or at the midpoint when that cut would not shrink
    the box).
    """
    schema = s.schema
    rank = list(s.dataset.ranking)
    if any(schema[a].interface_class is not InterfaceClass.RQ for a in rank):
        raise InvalidParameterError("baseline crawl needs two-ended ranges on every ranking attribute")
    start = s.query_count
    got: dict = {}
    stack = [{a: (0, schema[a].domain_size - 1) for a in rank}]
    while stack:
        box = stack.pop()
        q = Query()
        for a, (lo, hi) in box.items():
            if lo > 0:
                q = q.ge(a, lo)
            if hi < schema[a].domain_size - 1:
                q = q.lt(a, hi + 1)
        ans = s.answer(q)
        got.update((r.id, r) for r in ans)
        if len(ans) < s.k:
            continue
        a = max(rank, key=lambda j: (box[j][1] - box[j][0], -j))
        lo, hi = box[a]
        if lo == hi:
            continue  # every ranking value fixed: at most one tuple lives here
        cut = ans[-1].values[a]
        if not lo <= cut < hi:
            cut = (lo + hi) // 2
        left = dict(box)
        left[a] = (lo, cut)
        right = dict(box)
        right[a] = (cut + 1, hi)
        stack.extend([right, left])
    return set(got.values()), s.query_count - start


def baseline_discover(s: DiscoverySession) -> DiscoveryResult:
    start = s.query_count
    try:
        records, cost = baseline_crawl(s)
    except BudgetExhausted:
        return DiscoveryResult(frozenset(), s.query_count - start, [], False)
    records = list(records)
    rank = list(s.dataset.ranking)
    if records:
        pts = np.array([[r.values[a] for a in rank] for r in records], dtype=np.int64)
        sky = frozenset(r.id for r, keep in zip(records, skyline_mask(pts)) if keep)
    else:
        sky = frozenset()
    return DiscoveryResult(sky, cost, [(cost, len(sky))], True, {"crawled": len(records)})


ALGORITHMS = {
    "sq": sq_discover,
    "rq": rq_discover,
    "pq2d": pq2d_discover,
    "pq": pqdb_discover,
    "mq": mq_discover,
    "baseline": baseline_discover,
}

RANKINGS = ("weighted_sum", "lexicographic", "random_linear_extension", "random_matching_skyline")


def make_ranking(name: str, seed: int = 0, m: int | None = None):
    if name == "weighted_sum":
        return WeightedSum()
    if name == "lexicographic":
        return Lexicographic()
    if name == "random_linear_extension":
        return RandomLinearExtension(seed)
    if name == "random_matching_skyline":
        return RandomMatchingSkyline(seed)
    raise InvalidParameterError(f"unknown ranking mode {name!r}; choose from {', '.join(RANKINGS)}")


def run_algorithm(name: str, s: DiscoverySession) -> DiscoveryResult:
    try:
        fn = ALGORITHMS[name]
    except KeyError:
        raise InvalidParameterError(f"unknown algorithm {name!r}; choose from {', '.join(ALGORITHMS)}") from None
    return fn(s)


@dataclass
class ExperimentConfig:
    algorithm: str = "rq"
    generator: GeneratorConfig | None = None
    csv_path: str | None = None
    k_values: tuple[int, ...] = (10,)
    n_values: tuple[int, ...] = (1000,)
    m_values: tuple[int, ...] = (2,)
    seeds: tuple[int, ...] = (0,)
    ranking: str = "weighted_sum"
    budget: int | None = None
    output: str | None = None
    workers: int = 1

    def __post_init__(self):
        for name in ("k_values", "n_values", "m_values", "seeds"):
            vals = tuple(getattr(self, name))
            setattr(self, name, vals)
            if not vals:
                raise InvalidParameterError(f"{name} must not be empty")
        if self.generator is None and self.csv_path is None:
            raise InvalidParameterError("need a generator config or a CSV path")

    def cells(self):
        if self.csv_path is not None:
            return [(k, None, None, seed) for k, seed in itertools.product(self.k_values, self.seeds)]
        return list(itertools.product(self.k_values, self.n_values, self.m_values, self.seeds))


@dataclass
class BenchReport:
    rows: list[dict] = field(default_factory=list)
    traces: list[dict] = field(default_factory=list)

    def summary(self) -> list[dict]:
        groups: dict = {}
        for r in self.rows:
            if r.get("error"):
                continue
            groups.setdefault((r["algorithm"], r["k"], r["n"], r["m"]), []).append(r)
        out = []
        for (alg, k, n, m), rs in sorted(groups.items(), key=lambda kv: tuple(str(x) for x in kv[0])):
            out.append(
                {
                    "algorithm": alg,
                    "k": k,
                    "n": n,
                    "m": m,
                    "mean_cost": float(np.mean([r["cost"] for r in rs])),
                    "mean_skyline": float(np.mean([r["skyline_size"] for r in rs])),
                    "complete_fraction": float(np.mean([r["complete"] for r in rs])),
                    "runs": len(rs),
                }
            )
        return out

    def to_csv(self, fh, summary: bool = False) -> None:
        rows = self.summary() if summary else self.rows
        if not rows:
            return
        keys = list(dict.fromkeys(k for r in rows for k in r))
        w = csv.DictWriter(fh, fieldnames=keys)
        w.writeheader()
        w.writerows(rows)

    def traces_jsonl(self) -> str:
        buf = io.StringIO()
        for t in self.traces:
            buf.write(json.dumps(t) + "\n")
        return buf.getvalue()


def _run_cell(cfg: ExperimentConfig, cell) -> tuple[dict, dict]:
    k, n, m, seed = cell
    row = {"algorithm": cfg.algorithm, "k": k, "n": n, "m": m, "seed": seed}
    try:
        if cfg.csv_path is not None:
            d = load_dataset(cfg.csv_path)
        else:
            d = gen_synthetic(dataclasses.replace(cfg.generator, n=n, m=m, seed=seed, domains=_domains_for(cfg.generator, m)))
        row["n_actual"] = d.n
        if cfg.csv_path is not None:
            row["n"], row["m"] = d.n, d.m
        s = DiscoverySession(d, k, make_ranking(cfg.ranking, seed, d.m), budget=cfg.budget)
        res = run_algorithm(cfg.algorithm, s)
        oracle = oracle_skyline(d)
        ok = res.skyline == oracle if res.complete else res.skyline <= oracle
        if not ok:
            raise AssertionError("discovered skyline disagrees with the oracle")
        row.update(cost=s.query_count, skyline_size=len(res.skyline), complete=res.complete, oracle_ok=ok)
        trace = {**row, "trace": [list(p) for p in res.trace]}
    except (InvalidParameterError, AssertionError) as exc:
        row.update(cost=None, skyline_size=None, complete=False, error=str(exc))
        trace = {**row, "trace": []}
    return row, trace


def _domains_for(gen: GeneratorConfig, m: int):
    return gen.domains if not isinstance(gen.domains, tuple) or len(gen.domains) == m else gen.domains[0]


def run_experiment(cfg: ExperimentConfig) -> BenchReport:
    cells = cfg.cells()
    report = BenchReport()
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            results = list(pool.map(_run_cell, itertools.repeat(cfg), cells))
    else:
        results = [_run_cell(cfg, c) for c in cells]
    for row, trace in results:
        report.rows.append(row)
        report.traces.append(trace)
    return report
