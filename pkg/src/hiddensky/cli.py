"""Command-line front end (``hiddensky <subcommand>``)."""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import logging
import os
import sys

from . import cost
from .bench import ALGORITHMS, RANKINGS, ExperimentConfig, make_ranking, run_algorithm, run_experiment
from .data import GeneratorConfig, IngestReport, SchemaConfig, export_csv, gen_synthetic, ingest_csv, load_dataset
from .interface import DiscoverySession, InterfaceViolation, read_trace, replay
from .model import InvalidParameterError, MalformedInputError
from .skyband import pq_skyband, rq_skyband, sq_skyband_partial

SKYBAND = {"rq": rq_skyband, "pq": pq_skyband, "sq": sq_skyband_partial}


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _classes(text: str):
    parts = [p.strip().upper() for p in text.split(",") if p.strip()]
    return parts[0] if len(parts) == 1 else tuple(parts)


@contextlib.contextmanager
def _open_out(path: str | None):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=int, default=d(0), help="random seed (data and ranking)")
    p.add_argument("--budget", type=int, default=d(None), help="maximum number of interface queries")
    p.add_argument("--k", type=int, default=d(10), help="top-k answer size")
    p.add_argument("--output", default=d("-"), help="output path, '-' for stdout")


def _data_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data", help="normalized CSV with a .schema.json sidecar")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--domains", type=_ints, default=[100], help="domain size, or one per attribute")
    p.add_argument("--correlation", type=float, default=0.0)
    p.add_argument("--classes", type=_classes, default="RQ", help="interface class, or one per attribute")


def _gen_config(args, n=None, m=None) -> GeneratorConfig:
    m = args.m if m is None else m
    doms = args.domains[0] if len(args.domains) == 1 else tuple(args.domains)
    return GeneratorConfig(args.n if n is None else n, m, doms, args.correlation, args.seed, args.classes)


def _dataset(args):
    if args.data:
        return load_dataset(args.data)
    return gen_synthetic(_gen_config(args))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hiddensky", description="Skyline discovery over top-k search interfaces.")
    _global_flags(parser, suppress=False)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)

    p = sub.add_parser("gen", parents=[common], help="generate a synthetic dataset")
    _data_flags(p)

    p = sub.add_parser("ingest", parents=[common], help="rank-encode a raw CSV")
    p.add_argument("input")
    p.add_argument("--schema", required=True, help="JSON schema config")

    for name, helptext in (("run", "discover the skyline"), ("trace", "discover and dump the query log")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        _data_flags(p)
        p.add_argument("--algorithm", default="rq", choices=sorted(ALGORITHMS))
        p.add_argument("--ranking", default="weighted_sum", choices=RANKINGS)
        p.add_argument("--h", type=int, default=None, help="sky-band depth (rq, pq or sq only)")
        p.add_argument("--mode", default="stop", choices=("stop", "crawl"), help="SQ sky-band overflow policy")

    p = sub.add_parser("bench", parents=[common], help="sweep k, n, m over seeds")
    _data_flags(p)
    p.add_argument("--algorithm", default="rq", choices=sorted(ALGORITHMS))
    p.add_argument("--ranking", default="weighted_sum", choices=RANKINGS)
    p.add_argument("--k-values", type=_ints, default=None)
    p.add_argument("--n-values", type=_ints, default=None)
    p.add_argument("--m-values", type=_ints, default=None)
    p.add_argument("--seeds", type=int, default=5, help="number of seeds, starting at --seed")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--summary", action="store_true", help="emit per-cell means instead of raw rows")
    p.add_argument("--traces", help="write per-run anytime traces as JSON lines")

    p = sub.add_parser("analyze", parents=[common], help="tabulate expected cost and bounds")
    p.add_argument("--s-max", type=int, default=30)
    p.add_argument("--m-values", type=_ints, default=list(range(2, 11)))

    p = sub.add_parser("replay", parents=[common], help="re-issue a recorded query log")
    _data_flags(p)
    p.add_argument("trace_file")
    p.add_argument("--ranking", default="weighted_sum", choices=RANKINGS)
    return parser


def _session(args, d):
    return DiscoverySession(d, args.k, make_ranking(args.ranking, args.seed, d.m), budget=args.budget)


def cmd_gen(args) -> int:
    d = gen_synthetic(_gen_config(args))
    if args.output == "-":
        w = csv.writer(sys.stdout)
        w.writerow(["id"] + [a.name for a in d.schema])
        w.writerows([r.id, *r.values] for r in d.records)
    else:
        export_csv(d, args.output)
    logging.info("generated %d tuples", d.n)
    return 0


def cmd_ingest(args) -> int:
    with open(args.schema) as fh:
        cfg = SchemaConfig.from_json(json.load(fh))
    report = IngestReport()
    d = ingest_csv(args.input, cfg, report=report)
    if args.output == "-":
        w = csv.writer(sys.stdout)
        w.writerow(["id"] + [a.name for a in d.schema])
        w.writerows([r.id, *r.values] for r in d.records)
    else:
        export_csv(d, args.output)
    print(
        f"rows_read={report.rows_read} rows_kept={report.rows_kept} "
        f"duplicates_dropped={report.duplicates_dropped} errors={len(report.errors)}",
        file=sys.stderr,
    )
    return 0


def _discover(args):
    d = _dataset(args)
    s = _session(args, d)
    if args.h is None:
        return s, run_algorithm(args.algorithm, s).to_json()
    if args.algorithm not in SKYBAND:
        raise InvalidParameterError(f"no sky-band variant for {args.algorithm!r}")
    fn = SKYBAND[args.algorithm]
    res = fn(s, args.h, args.mode) if args.algorithm == "sq" else fn(s, args.h)
    return s, res.to_json()


def cmd_run(args) -> int:
    _, out = _discover(args)
    with _open_out(args.output) as fh:
        fh.write(out + "\n")
    return 0


def cmd_trace(args) -> int:
    s, _ = _discover(args)
    with _open_out(args.output) as fh:
        s.export_trace(fh)
    return 0


def cmd_bench(args) -> int:
    seeds = tuple(range(args.seed, args.seed + args.seeds))
    cfg = ExperimentConfig(
        algorithm=args.algorithm,
        generator=None if args.data else _gen_config(args),
        csv_path=args.data,
        k_values=tuple(args.k_values) if args.k_values is not None else (args.k,),
        n_values=tuple(args.n_values) if args.n_values is not None else (args.n,),
        m_values=tuple(args.m_values) if args.m_values is not None else (args.m,),
        seeds=seeds,
        ranking=args.ranking,
        budget=args.budget,
        output=args.output,
        workers=args.workers,
    )
    if args.algorithm not in ALGORITHMS:
        raise InvalidParameterError(f"unknown algorithm {args.algorithm!r}")
    report = run_experiment(cfg)
    with _open_out(args.output) as fh:
        report.to_csv(fh, summary=args.summary)
    if args.traces:
        with open(args.traces, "w") as fh:
            fh.write(report.traces_jsonl())
    failed = [r for r in report.rows if r.get("error")]
    for r in failed:
        logging.warning("cell k=%s n=%s m=%s seed=%s: %s", r["k"], r["n"], r["m"], r["seed"], r["error"])
    return 0


def cmd_analyze(args) -> int:
    if args.s_max < 1:
        raise InvalidParameterError("--s-max must be >= 1")
    with _open_out(args.output) as fh:
        w = csv.writer(fh)
        w.writerow(["s", "m", "expected", "binom_bound", "exp_bound"])
        for m in args.m_values:
            for s in range(1, args.s_max + 1):
                w.writerow([s, m, float(cost.expected_cost_recurrence(s, m)), cost.binom_bound(s, m), cost.exp_bound(s, m)])
    return 0


def cmd_replay(args) -> int:
    d = _dataset(args)
    with open(args.trace_file) as fh:
        trace = read_trace(fh)
    bad = replay(_session(args, d), trace)
    with _open_out(args.output) as fh:
        fh.write(json.dumps({"queries": len(trace), "diverged": bad}) + "\n")
    return 1 if bad else 0


COMMANDS = {
    "gen": cmd_gen,
    "ingest": cmd_ingest,
    "run": cmd_run,
    "trace": cmd_trace,
    "bench": cmd_bench,
    "analyze": cmd_analyze,
    "replay": cmd_replay,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    if args.output != "-" and os.path.dirname(args.output):
        os.makedirs(os.path.dirname(args.output), exist_ok=True)
    try:
        return COMMANDS[args.command](args)
    except (InvalidParameterError, MalformedInputError, InterfaceViolation, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
