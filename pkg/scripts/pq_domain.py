"""PQ discovery cost as the per-attribute domain shrinks (most populated values kept)."""

import argparse
import sys

import numpy as np

from hiddensky.data import GeneratorConfig, discretize, gen_synthetic
from hiddensky.interface import DiscoverySession
from hiddensky.model import oracle_skyline
from hiddensky.pq import pqdb_discover


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=5000)
    ap.add_argument("--m", type=int, default=3)
    ap.add_argument("--full-domain", type=int, default=30)
    ap.add_argument("--domains", default="5,10,15,20,30")
    ap.add_argument("--correlation", type=float, default=-0.3)
    ap.add_argument("--k", type=int, default=10)
    ap.add_argument("--seeds", type=int, default=3)
    ap.add_argument("--output", default="-")
    args = ap.parse_args(argv)
    out = sys.stdout if args.output == "-" else open(args.output, "w")
    out.write("domain,n_kept,skyline,cost\n")
    for v in (int(x) for x in args.domains.split(",")):
        n_kept, sky, cost = [], [], []
        for seed in range(args.seeds):
            d = gen_synthetic(GeneratorConfig(args.n, args.m, args.full_domain, args.correlation, seed, "PQ"))
            for a in range(d.m):
                d = discretize(d, a, min(v, d.schema[a].domain_size))
            r = pqdb_discover(DiscoverySession(d, args.k))
            assert r.skyline == oracle_skyline(d)
            n_kept.append(d.n)
            sky.append(len(r.skyline))
            cost.append(r.cost)
        out.write(f"{v},{np.mean(n_kept):.0f},{np.mean(sky):.1f},{np.mean(cost):.1f}\n")
        out.flush()


if __name__ == "__main__":
    main()
