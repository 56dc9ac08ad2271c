"""Simulated SQ cost on incomparable tuples against the exact expectation and its bounds.

Ranking mode returns a uniformly random matching skyline tuple (k = 1).
"""

import argparse
import sys

import numpy as np

from hiddensky.cost import binom_bound, exp_bound, expected_cost_recurrence
from hiddensky.interface import DiscoverySession, RandomMatchingSkyline
from hiddensky.model import Dataset, make_schema
from hiddensky.sq import sq_discover


def incomparable(s, m, rng):
    heads = [rng.permutation(s) + 1 for _ in range(m - 1)]
    order = np.lexsort((rng.random(s), -np.sum(heads, axis=0)))
    last = np.empty(s, dtype=np.int64)
    last[order] = np.arange(1, s + 1)
    rows = [tuple(int(h[i]) for h in heads) + (int(last[i]),) for i in range(s)]
    return Dataset.from_rows(make_schema([s + 1] * m, "SQ"), rows)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--s-values", default="2,5,10,20")
    ap.add_argument("--m-values", default="2,3,4")
    ap.add_argument("--runs", type=int, default=500)
    ap.add_argument("--output", default="-")
    args = ap.parse_args(argv)
    out = sys.stdout if args.output == "-" else open(args.output, "w")
    out.write("m,s,simulated,expected,binom_bound,exp_bound\n")
    for m in (int(x) for x in args.m_values.split(",")):
        for s in (int(x) for x in args.s_values.split(",")):
            costs = [
                sq_discover(DiscoverySession(incomparable(s, m, np.random.default_rng(i)), 1, RandomMatchingSkyline(i))).cost
                for i in range(args.runs)
            ]
            e = float(expected_cost_recurrence(s, m))
            out.write(f"{m},{s},{np.mean(costs):.2f},{e:.2f},{binom_bound(s, m)},{exp_bound(s, m):.1f}\n")
            out.flush()


if __name__ == "__main__":
    main()
