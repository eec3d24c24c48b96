"""Projection and isotonicity statistics over random generated wedges."""
import argparse
import collections
import time

import numpy as np

from isowedge import GeneratedWedge, Tolerance, check_isotone_wedge
from isowedge.projection import FaceOracle, WedgeProjector


def random_generators(rng, max_dim, max_gens, line_prob):
    n = int(rng.integers(1, max_dim + 1))
    g = rng.uniform(-2, 2, size=(int(rng.integers(1, max_gens + 1)), n))
    if rng.random() < line_prob:
        g = np.vstack([g, -g[:1]])
    return g


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--wedges", type=int, default=500)
    ap.add_argument("--points", type=int, default=5)
    ap.add_argument("--max-dim", type=int, default=6)
    ap.add_argument("--max-gens", type=int, default=8)
    ap.add_argument("--line-prob", type=float, default=0.3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    tol = Tolerance()
    rng = np.random.default_rng(args.seed)
    verdicts = collections.Counter()
    failed, worst = 0, 0.0
    start = time.perf_counter()
    for _ in range(args.wedges):
        W = GeneratedWedge(random_generators(rng, args.max_dim, args.max_gens, args.line_prob))
        xs = rng.normal(size=(args.points, W.ambient_dim)) * 3
        results = WedgeProjector(W, tol).project_many(xs)
        direct = FaceOracle(W.generators, tol).project_many(xs)
        for x, a, b in zip(xs, results, direct):
            failed += not a.certificate.passed
            worst = max(worst, np.linalg.norm(a.point - b.point) / (1 + np.linalg.norm(x)))
        verdicts[check_isotone_wedge(W, tol).verdict.value] += 1
    elapsed = time.perf_counter() - start

    print(f"wedges: {args.wedges}, projections: {args.wedges * args.points}, {elapsed:.1f}s")
    print(f"certificate failures: {failed}")
    print(f"worst gap between decomposed and direct projection: {worst:.2e}")
    for k, v in sorted(verdicts.items()):
        print(f"  {k:>12}: {v}")


if __name__ == "__main__":
    main()
