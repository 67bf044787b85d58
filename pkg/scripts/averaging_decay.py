#!/usr/bin/env python3
"""Measure the Monte-Carlo decay of the factor averages.

For a batch of random unit-norm curvature operators, compares the sampled
group average against its exact projection (scalar plus one Weyl block) over
a geometric ladder of sample counts.  The error column should shrink like
1/sqrt(n); the printed ratio between successive rungs should hover around 2
for a 4x ladder.
"""

import argparse
import sys

import numpy as np

from halfpic import curvature, group_actions


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ops", type=int, default=10, help="number of random operators")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--factor", choices=group_actions.FACTORS, default="left")
    ap.add_argument("--n-min", type=int, default=1562)
    ap.add_argument("--rungs", type=int, default=4, help="ladder length, 4x per rung")
    args = ap.parse_args(argv)

    ns = [args.n_min * 4**k for k in range(args.rungs)]
    errs = np.empty((args.ops, len(ns)))
    for i in range(args.ops):
        r = curvature.random_bianchi(np.random.default_rng((args.seed, i)), norm=1.0)
        proj = group_actions.exact_projection(r, args.factor)
        for j, n in enumerate(ns):
            avg = group_actions.average(r, args.factor, n=n, seed=args.seed)
            errs[i, j] = np.linalg.norm(avg - proj)

    gmean = np.exp(np.mean(np.log(errs), axis=0))
    print("n,gmean_error,ratio_to_prev")
    for j, n in enumerate(ns):
        ratio = "" if j == 0 else f"{gmean[j - 1] / gmean[j]:.3f}"
        print(f"{n},{gmean[j]:.6e},{ratio}")
    print(
        f"{args.factor} factor, {args.ops} operators; expect ratios near 2 for a 4x ladder",
        file=sys.stderr,
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
