"""Query cost of crawl-then-filter versus direct RQ skyline discovery."""

import argparse
import sys

from hiddensky.bench import baseline_crawl
from hiddensky.data import GeneratorConfig, gen_synthetic
from hiddensky.interface import DiscoverySession
from hiddensky.model import oracle_skyline
from hiddensky.rq import rq_discover


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-values", default="1000,5000,10000")
    ap.add_argument("--m", type=int, default=3)
    ap.add_argument("--domain", type=int, default=1000)
    ap.add_argument("--k", type=int, default=10)
    ap.add_argument("--seeds", type=int, default=3)
    ap.add_argument("--output", default="-")
    args = ap.parse_args(argv)
    out = sys.stdout if args.output == "-" else open(args.output, "w")
    out.write("n,seed,skyline,rq_cost,baseline_cost,ratio\n")
    for n in (int(x) for x in args.n_values.split(",")):
        for seed in range(args.seeds):
            d = gen_synthetic(GeneratorConfig(n, args.m, args.domain, 0.0, seed))
            sky = oracle_skyline(d)
            r = rq_discover(DiscoverySession(d, args.k))
            assert r.skyline == sky
            _, base = baseline_crawl(DiscoverySession(d, args.k))
            out.write(f"{d.n},{seed},{len(sky)},{r.cost},{base},{base / r.cost:.1f}\n")
            out.flush()


if __name__ == "__main__":
    main()
