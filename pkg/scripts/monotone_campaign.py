"""Isotonicity campaign on the monotone wedge.

For each m, run the polar-ray criterion, compare PAVA against the exact
projector and sample ordered pairs for violations. Prints one row per m.
"""
import argparse
import time

import numpy as np

from isowedge import Tolerance, build_monotone_wedge, pava_project, sample_isotonicity
from isowedge.monotone import monotone_isotone_selfcheck
from isowedge.projection import WedgeProjector


def run(m, n_pairs, n_points, seed, tol):
    start = time.perf_counter()
    report, ray_distance = monotone_isotone_selfcheck(m, tol)
    W = build_monotone_wedge(m)
    xs = np.random.default_rng(seed).normal(size=(n_points, m)) * 3
    exact = WedgeProjector(W, tol).project_many(xs)
    gap = max(np.linalg.norm(pava_project(x) - r.point) / (1 + np.linalg.norm(x))
              for x, r in zip(xs, exact))
    sample = sample_isotonicity(W, n_pairs, seed=seed, tol=tol)
    return {
        "m": m,
        "verdict": report.verdict.value,
        "ray_distance": ray_distance,
        "pava_gap": gap,
        "violations": len(sample.violations),
        "seconds": time.perf_counter() - start,
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m-min", type=int, default=2)
    ap.add_argument("--m-max", type=int, default=10)
    ap.add_argument("--pairs", type=int, default=2000)
    ap.add_argument("--points", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    tol = Tolerance()
    print(f"{'m':>3} {'verdict':>10} {'ray dist':>10} {'pava gap':>10} {'viol':>5} {'sec':>6}")
    for m in range(args.m_min, args.m_max + 1):
        r = run(m, args.pairs, args.points, args.seed, tol)
        print(f"{r['m']:>3} {r['verdict']:>10} {r['ray_distance']:>10.1e} "
              f"{r['pava_gap']:>10.1e} {r['violations']:>5} {r['seconds']:>6.2f}")


if __name__ == "__main__":
    main()
