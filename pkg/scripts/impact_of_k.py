"""Mean query cost as k grows, for each discovery algorithm on its own interface class."""

import argparse
import sys

from hiddensky.bench import ExperimentConfig, run_experiment
from hiddensky.data import GeneratorConfig

SETUPS = {"sq": "SQ", "rq": "RQ", "pq": "PQ", "mq": ("RQ", "RQ", "PQ")}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--m", type=int, default=3)
    ap.add_argument("--domain", type=int, default=20)
    ap.add_argument("--correlation", type=float, default=0.0)
    ap.add_argument("--k-values", default="1,5,10,25,50")
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--output", default="-")
    args = ap.parse_args(argv)
    ks = tuple(int(x) for x in args.k_values.split(","))
    rows = []
    for alg, cls in SETUPS.items():
        if isinstance(cls, tuple) and len(cls) != args.m:
            cls = ("RQ",) * (args.m - 1) + ("PQ",)
        gen = GeneratorConfig(args.n, args.m, args.domain, args.correlation, interface_class=cls)
        cfg = ExperimentConfig(alg, gen, k_values=ks, n_values=(args.n,), m_values=(args.m,), seeds=tuple(range(args.seeds)), workers=args.workers)
        rows += run_experiment(cfg).summary()
    out = sys.stdout if args.output == "-" else open(args.output, "w")
    out.write("algorithm,k,mean_cost,mean_skyline,complete_fraction\n")
    for r in rows:
        out.write(f"{r['algorithm']},{r['k']},{r['mean_cost']:.1f},{r['mean_skyline']:.1f},{r['complete_fraction']:.2f}\n")


if __name__ == "__main__":
    main()
