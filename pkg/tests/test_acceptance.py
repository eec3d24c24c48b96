"""Exit criteria, each run at its stated tolerance and sample size."""
import time

import numpy as np
import pytest

from isowedge.isotone import (
    Verdict,
    check_isotone_cone,
    check_isotone_wedge,
    find_violation_witness,
    sample_isotonicity,
)
from isowedge.linalg import Tolerance
from isowedge.monotone import (
    MonotoneBasis,
    build_monotone_wedge,
    coefficients,
    is_monotone,
    pava_project,
    ray_set_distance,
)
from isowedge.projection import FaceOracle, WedgeProjector
from isowedge.wedge import (
    GeneratedWedge,
    contains,
    decompose,
    is_generating,
    is_pointed,
    polar_generators,
)

from oracles import brute_force_polar, random_wedge_generators

pytestmark = pytest.mark.acceptance

TOL = Tolerance(eps_rank=1e-10, eps_feas=1e-8, eps_eq=1e-9)
SKEW = GeneratedWedge([[1.0, 0], [-1, 1]])


@pytest.fixture(scope="module")
def random_wedge_runs():
    """1000 wedges (dim <= 6, <= 8 generators, entries U[-2, 2]) with 5 points each."""
    rng = np.random.default_rng(20240601)
    runs = []
    start = time.perf_counter()
    for _ in range(1000):
        g = random_wedge_generators(rng, max_dim=6, max_gens=8)
        W = GeneratedWedge(g)
        xs = rng.normal(size=(5, W.ambient_dim)) * 3
        results = WedgeProjector(W, TOL).project_many(xs)
        runs.append((W, xs, results))
    return runs, time.perf_counter() - start


def test_c01_projection_certificates(random_wedge_runs, criterion):
    runs, elapsed = random_wedge_runs
    total = sum(len(r) for _, _, r in runs)
    passed = sum(res.certificate.passed for _, _, r in runs for res in r)
    ok = passed == total and elapsed < 60
    criterion(1, ok, f"{passed}/{total} certificates passed in {elapsed:.1f}s (limit 60s)")
    assert ok


def test_c02_decomposition_matches_direct_oracle(random_wedge_runs, criterion):
    runs, _ = random_wedge_runs
    worst, agree, total = 0.0, 0, 0
    for W, xs, results in runs:
        direct = FaceOracle(W.generators, TOL).project_many(xs)
        for x, a, b in zip(xs, results, direct):
            rel = np.linalg.norm(a.point - b.point) / (1 + np.linalg.norm(x))
            worst = max(worst, rel)
            agree += rel <= 1e-8
            total += 1
    ok = agree == total
    criterion(2, ok, f"{agree}/{total} agree, worst relative gap {worst:.2e} (limit 1e-8)")
    assert ok


def test_c03_pava_equals_exact_projection(criterion):
    rng = np.random.default_rng(3)
    start = time.perf_counter()
    worst, bad = 0.0, 0
    for m in range(2, 11):
        oracle = WedgeProjector(build_monotone_wedge(m), TOL)
        xs = rng.normal(size=(1000, m)) * 3
        for x, r in zip(xs, oracle.project_many(xs)):
            gap = np.linalg.norm(pava_project(x) - r.point) / (1 + np.linalg.norm(x))
            worst = max(worst, gap)
            bad += gap > 1e-9
    elapsed = time.perf_counter() - start
    ok = bad == 0 and elapsed < 120
    criterion(3, ok, f"{9000 - bad}/9000 within 1e-9, worst {worst:.2e}, {elapsed:.1f}s (limit 120s)")
    assert ok


def test_c04_monotone_wedge_isotone(criterion):
    failures = []
    worst = 0.0
    for m in range(2, 13):
        rep = check_isotone_wedge(build_monotone_wedge(m), TOL)
        dist = ray_set_distance(rep.polar_rays, MonotoneBasis.build(m).u)
        worst = max(worst, dist)
        if rep.verdict is not Verdict.ISOTONE or dist > 1e-9:
            failures.append(m)
    ok = not failures
    criterion(4, ok, f"isotone with u_i rays for m=2..12, worst ray distance {worst:.1e}; failures {failures}")
    assert ok


def test_c05_sampling_positive(criterion):
    counts = {}
    for m in (3, 5, 8):
        rep = sample_isotonicity(build_monotone_wedge(m), 10_000, seed=m, tol=TOL)
        counts[m] = (rep.pairs_tested, len(rep.violations))
    ok = all(v == 0 and n == 10_000 for n, v in counts.values())
    criterion(5, ok, f"(pairs, violations) per m: {counts}")
    assert ok


def test_c06_sampling_negative(criterion):
    rep = check_isotone_cone(SKEW, tol=TOL)
    brute = brute_force_polar(SKEW.generators)
    dd_vs_brute = ray_set_distance(rep.polar_rays, brute)
    brute_gram = brute @ brute.T
    brute_worst = float(brute_gram[0, 1])
    witness = find_violation_witness(SKEW, 100_000, seed=0, tol=TOL)
    confirmed = False
    if witness is not None:
        confirmed = witness.witness.member and not contains(SKEW, witness.pv - witness.pu, TOL).member
    ok = (
        rep.verdict is Verdict.NOT_ISOTONE
        and abs(rep.worst_pair[1] - 1 / np.sqrt(2)) <= 1e-9
        and abs(brute_worst - 1 / np.sqrt(2)) <= 1e-9
        and dd_vs_brute <= 1e-9
        and confirmed
    )
    criterion(6, ok, f"verdict {rep.verdict.value}, worst pair {rep.worst_pair[1]:.12f}, "
                     f"witness found and confirmed: {confirmed}")
    assert ok


def test_c07_basis_identities(criterion):
    # Checked as stated: (1/(m-j+1)) (e'_j + e_m) = e_j together with the
    # orthogonality patterns, to 1e-12.
    failures = {}
    for m in range(2, 13):
        b = MonotoneBasis.build(m)
        ue = b.u @ b.e_prime.T
        off = np.max(np.abs(ue[~np.eye(m - 1, dtype=bool)])) if m > 2 else 0.0
        checks = {
            "u_i.e'_j=0": off <= 1e-12,
            "u_i.e'_i<0": bool(np.all(np.diag(ue) < 0)),
            "e'_j.e_m=0": bool(np.all(np.abs(b.e_prime @ b.e[-1]) <= 1e-12)),
            "(e'_j+e_m)/(m-j+1)=e_j": all(
                np.max(np.abs((b.e_prime[j - 1] + b.e[-1]) / (m - j + 1) - b.e[j - 1])) <= 1e-12
                for j in range(1, m)
            ),
        }
        bad = [k for k, v in checks.items() if not v]
        if bad:
            failures[m] = bad
    ok = not failures
    detail = "all identities hold for m=2..12" if ok else f"failing identities by m: {failures}"
    criterion(7, ok, detail)
    assert ok, detail


def test_c08_membership_equivalence(criterion):
    rng = np.random.default_rng(8)
    mismatches, total, monotone_count = 0, 0, 0
    for m in range(3, 9):
        for i in range(10_000):
            x = rng.normal(size=m) * 3
            if i % 2:
                x = np.sort(x)[::-1]
            mono = is_monotone(x, TOL)
            coef = bool(np.all(coefficients(x).t[:-1] >= -1e-8))
            mismatches += mono != coef
            monotone_count += mono
            total += 1
    ok = mismatches == 0
    criterion(8, ok, f"{total - mismatches}/{total} agree ({monotone_count} monotone samples)")
    assert ok


def _random_generating_wedge(rng):
    while True:
        n = int(rng.integers(1, 6))
        g = rng.uniform(-2, 2, size=(int(rng.integers(n, n + 4)), n))
        if rng.random() < 0.4:
            g = np.vstack([g, -g[: int(rng.integers(1, len(g) + 1))]])
        W = GeneratedWedge(g)
        if is_generating(W, TOL):
            return W


def test_c09_wedge_verdict_matches_cone_part(criterion):
    rng = np.random.default_rng(9)
    applicable = agree = isotone = corroborated = 0
    for i in range(200):
        W = _random_generating_wedge(rng)
        wedge_rep = check_isotone_wedge(W, TOL)
        D = decompose(W, TOL)
        if len(D.cone_part):
            q = D.complement(TOL).vectors
            local = GeneratedWedge(D.cone_part.generators @ q.T)
            cone_rep = check_isotone_cone(local, tol=TOL)
        else:
            cone_rep = wedge_rep
        if cone_rep.verdict is Verdict.INAPPLICABLE:
            continue
        applicable += 1
        agree += wedge_rep.verdict is cone_rep.verdict
        if wedge_rep.verdict is Verdict.ISOTONE:
            isotone += 1
            sample = sample_isotonicity(W, 1000, seed=1000 + i, tol=TOL)
            corroborated += not sample.violations
    ok = agree == applicable and corroborated == isotone and applicable > 0
    criterion(9, ok, f"{agree}/{applicable} verdicts agree; {corroborated}/{isotone} isotone verdicts "
                     "corroborated by 1000-pair sampling")
    assert ok


def test_c10_bipolarity(criterion):
    rng = np.random.default_rng(10)
    done = good = 0
    while done < 100:
        n = int(rng.integers(1, 5))
        W = GeneratedWedge(rng.uniform(-2, 2, size=(int(rng.integers(n, n + 4)), n)))
        if not (is_generating(W, TOL) and is_pointed(W, TOL)):
            continue
        done += 1
        P = GeneratedWedge(polar_generators(W, tol=TOL))
        PP = GeneratedWedge(polar_generators(P, tol=TOL))
        good += all(contains(PP, g, TOL).member for g in W.generators) and all(
            contains(W, g, TOL).member for g in PP.generators
        )
    ok = good == 100
    criterion(10, ok, f"{good}/100 cones regenerated by their bipolar")
    assert ok
