"""Deciding whether the projection onto a wedge is isotone for the order it induces.

A wedge W orders the space by u <=_W v iff v - u ∈ W. For W = K ⊕ L the
projection is W-isotone exactly when the projection onto K is K-isotone
inside L⊥, and for a generating wedge that holds iff the polar of K in L⊥ is
generated by linearly independent rays with pairwise non-positive inner
products. Sampling utilities search for order pairs whose projections break
the order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    SubspaceBasis,
    Tolerance,
    complement_basis,
    matrix_rank,
    orthonormal_basis,
)
from .projection import WedgeProjector
from .wedge import (
    GeneratedWedge,
    MembershipCertificate,
    PolarNotPointedError,
    contains,
    decompose,
    is_generating,
    polar_generators,
)

U_RADIUS = 10.0
SAMPLE_BATCH = 256


class Verdict(str, Enum):
    ISOTONE = "isotone"
    NOT_ISOTONE = "not_isotone"
    INAPPLICABLE = "inapplicable"


@dataclass(frozen=True, eq=False)
class IsotoneReport:
    verdict: Verdict
    polar_rays: np.ndarray
    worst_pair: tuple[tuple[int, int], float] | None
    reason: str


@dataclass(frozen=True, eq=False)
class OrderPair:
    """u <=_W v, witnessed by membership of v - u.

    When produced as a violation, `pu`/`pv` hold the projections and
    `violation` the failed membership certificate for pv - pu.
    """

    u: np.ndarray
    v: np.ndarray
    witness: MembershipCertificate
    pu: np.ndarray | None = None
    pv: np.ndarray | None = None
    violation: MembershipCertificate | None = None


@dataclass
class SampleReport:
    pairs_tested: int
    violations: list[OrderPair] = field(default_factory=list)


def check_isotone_cone(K: GeneratedWedge, within: SubspaceBasis | None = None,
                       tol: Tolerance = DEFAULT_TOL) -> IsotoneReport:
    """Apply the polar criterion to a cone K inside span(within)."""
    if within is None:
        within = SubspaceBasis.full(K.ambient_dim)
    try:
        rays = polar_generators(K, within, tol)
    except PolarNotPointedError:
        return IsotoneReport(Verdict.INAPPLICABLE, np.zeros((0, K.ambient_dim)), None, "not_generating")
    worst = None
    if len(rays) > 1:
        gram = rays @ rays.T
        iu = np.triu_indices(len(rays), k=1)
        f = int(np.argmax(gram[iu]))
        worst = ((int(iu[0][f]), int(iu[1][f])), float(gram[iu][f]))
    if matrix_rank(rays, tol) < len(rays):
        return IsotoneReport(Verdict.NOT_ISOTONE, rays, worst, "polar_rays_dependent")
    if worst is not None and worst[1] > tol.eps_feas:
        return IsotoneReport(Verdict.NOT_ISOTONE, rays, worst, "acute_polar_pair")
    return IsotoneReport(Verdict.ISOTONE, rays, worst, "polar_independent_non_acute")


def check_isotone_wedge(W: GeneratedWedge, tol: Tolerance = DEFAULT_TOL,
                        intrinsic: bool = False) -> IsotoneReport:
    """Decide isotonicity of P_W by reducing to the cone part inside L⊥.

    With ``intrinsic=True`` a non-generating wedge is analysed inside its own
    span instead of being reported inapplicable. That reduction is an
    extension: projections and the order both live in span(W).
    """
    n = W.ambient_dim
    generating = is_generating(W, tol)
    if not generating and not intrinsic:
        return IsotoneReport(Verdict.INAPPLICABLE, np.zeros((0, n)), None, "not_generating")
    D = decompose(W, tol)
    if len(D.cone_part) == 0:
        return IsotoneReport(Verdict.ISOTONE, np.zeros((0, n)), None, "subspace")
    if generating:
        lperp = D.complement(tol)
    else:
        # L lies inside span(W), so span(W) ∩ L⊥ is span(W) projected onto L⊥.
        s = orthonormal_basis(W.generators, tol).vectors
        lin = D.lineality.vectors
        lperp = orthonormal_basis(s - (s @ lin.T) @ lin, tol, dim=n)
    return check_isotone_cone(D.cone_part, lperp, tol)


def _draw_pairs(rng: np.random.Generator, W: GeneratedWedge, count: int):
    n = W.ambient_dim
    u = rng.standard_normal((count, n))
    norms = np.linalg.norm(u, axis=1, keepdims=True)
    u = np.where(norms > U_RADIUS, u * (U_RADIUS / np.maximum(norms, 1e-300)), u)
    t = rng.uniform(0.0, 1.0, size=(count, len(W)))
    return u, u + t @ W.generators


def sample_isotonicity(W: GeneratedWedge, n_pairs: int, seed: int = 0,
                       tol: Tolerance = DEFAULT_TOL, stop_at_first: bool = False,
                       projector: WedgeProjector | None = None) -> SampleReport:
    """Test P_W u <=_W P_W v on seeded random ordered pairs.

    u is standard normal clipped to norm 10; v = u + sum t_i g_i with
    t_i ~ U[0, 1]. Pairs are drawn in batches from one generator, so the
    sequence is a pure function of `seed`.
    """
    if n_pairs < 1:
        raise ValueError("n_pairs must be positive")
    rng = np.random.default_rng(seed)
    proj = projector or WedgeProjector(W, tol)
    report = SampleReport(0)
    while report.pairs_tested < n_pairs:
        count = min(SAMPLE_BATCH, n_pairs - report.pairs_tested)
        us, vs = _draw_pairs(rng, W, count)
        pus = proj.project_many(us)
        pvs = proj.project_many(vs)
        for u, v, pu, pv in zip(us, vs, pus, pvs):
            report.pairs_tested += 1
            check = contains(W, pv.point - pu.point, tol)
            if not check.member:
                report.violations.append(
                    OrderPair(u, v, contains(W, v - u, tol), pu.point, pv.point, check)
                )
                if stop_at_first:
                    return report
    return report


def find_violation_witness(W: GeneratedWedge, budget: int, seed: int = 0,
                           tol: Tolerance = DEFAULT_TOL) -> OrderPair | None:
    """First sampled order pair whose projections are not ordered, or None."""
    report = sample_isotonicity(W, budget, seed, tol, stop_at_first=True)
    return report.violations[0] if report.violations else None
