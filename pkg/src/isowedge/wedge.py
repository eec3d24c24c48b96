"""Finitely generated wedges, their lineality space and orthogonal splitting.

A wedge is stored by a list of generators (V-representation). The lineality
space L = W ∩ (-W) is found by conic membership tests, and the cone part
K = W ∩ L⊥ is generated by the generators projected onto L⊥.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from .nnls import nnls

from .linalg import (
    DEFAULT_TOL,
    DimensionError,
    SubspaceBasis,
    Tolerance,
    as_matrix,
    as_vector,
    complement_basis,
    matrix_rank,
    orthonormal_basis,
)

MAX_GENERATORS = 24
MAX_POLAR_DIM = 12


class ScaleLimitError(ValueError):
    """Input exceeds the desk-scale limits of an exhaustive method."""


class PolarNotPointedError(ValueError):
    """The cone does not span the subspace, so its polar there contains a line."""


@dataclass(frozen=True, eq=False)
class GeneratedWedge:
    """The wedge cone{g_1, ..., g_k} in R^ambient_dim.

    `generators` is a (k, ambient_dim) array. An empty generator array is
    allowed and denotes the zero wedge {0}, as does a single zero generator.
    """

    generators: np.ndarray
    ambient_dim: int | None = None

    def __post_init__(self):
        g = np.array(as_matrix(self.generators, self.ambient_dim), dtype=float)
        g.setflags(write=False)
        object.__setattr__(self, "generators", g)
        object.__setattr__(self, "ambient_dim", g.shape[1])

    def __len__(self):
        return self.generators.shape[0]

    @property
    def is_zero(self) -> bool:
        return len(self) == 0 or not np.any(self.generators)


@dataclass(frozen=True)
class MembershipCertificate:
    member: bool
    coefficients: np.ndarray | None
    residual_norm: float


@dataclass(frozen=True, eq=False)
class WedgeDecomposition:
    """W = K ⊕ L with L given by an orthonormal basis and K by generators in L⊥."""

    lineality: SubspaceBasis
    cone_part: GeneratedWedge
    ambient_dim: int

    def complement(self, tol: Tolerance = DEFAULT_TOL) -> SubspaceBasis:
        """Orthonormal basis of L⊥."""
        return complement_basis(self.lineality, tol)


def contains(W: GeneratedWedge, x, tol: Tolerance = DEFAULT_TOL) -> MembershipCertificate:
    """Decide x ∈ W by nonnegative least squares min_{t >= 0} ||G^T t - x||."""
    x = as_vector(x, W.ambient_dim)
    bound = tol.eps_feas * (1.0 + np.linalg.norm(x))
    if len(W) == 0:
        r = float(np.linalg.norm(x))
        return MembershipCertificate(bool(r <= bound), np.zeros(0) if r <= bound else None, r)
    t, _ = nnls(W.generators.T, x)
    r = float(np.linalg.norm(W.generators.T @ t - x))
    member = bool(r <= bound)
    return MembershipCertificate(member, t if member else None, r)


def lineality_space(W: GeneratedWedge, tol: Tolerance = DEFAULT_TOL) -> SubspaceBasis:
    """Orthonormal basis of L = W ∩ (-W).

    L is spanned by exactly those generators whose negation lies in W: any
    x ∈ L written as Σ t_i g_i forces -g_i ∈ W whenever t_i > 0.
    """
    two_sided = [g for g in W.generators if np.any(g) and contains(W, -g, tol).member]
    return orthonormal_basis(two_sided, tol, dim=W.ambient_dim)


def decompose(W: GeneratedWedge, tol: Tolerance = DEFAULT_TOL) -> WedgeDecomposition:
    """Split W into its lineality space L and the pointed cone K = W ∩ L⊥."""
    n = W.ambient_dim
    lin = lineality_space(W, tol)
    q = lin.vectors
    kept = []
    for g in W.generators:
        k = g - q.T @ (q @ g)
        if np.linalg.norm(k) > tol.eps_eq * (1.0 + np.linalg.norm(g)):
            kept.append(k)
    return WedgeDecomposition(lin, GeneratedWedge(as_matrix(kept, n), n), n)


def is_generating(W: GeneratedWedge, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff W - W is the whole space, i.e. the generators span R^m."""
    return matrix_rank(W.generators, tol) == W.ambient_dim


def is_pointed(W: GeneratedWedge, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff no generator g has -g ∈ W, which is equivalent to W ∩ (-W) = {0}."""
    return lineality_space(W, tol).dim == 0


def _subspace_coordinates(K: GeneratedWedge, within: SubspaceBasis, tol: Tolerance) -> np.ndarray:
    if within.ambient_dim != K.ambient_dim:
        raise DimensionError("cone and subspace live in different ambient spaces")
    q = within.vectors
    g = K.generators
    c = g @ q.T
    off = np.linalg.norm(g - c @ q, axis=1)
    if np.any(off > tol.eps_eq * (1.0 + np.linalg.norm(g, axis=1)) * 10):
        raise ValueError("cone generators do not lie in the given subspace")
    norms = np.linalg.norm(c, axis=1)
    keep = norms > tol.eps_eq * (1.0 + np.linalg.norm(g, axis=1))
    return c[keep] / norms[keep, None]


def _independent_rows(c: np.ndarray, tol: Tolerance) -> list[int]:
    chosen: list[int] = []
    basis: list[np.ndarray] = []
    for i, row in enumerate(c):
        w = row.copy()
        for _ in range(2):
            for b in basis:
                w -= (b @ w) * b
        nw = np.linalg.norm(w)
        if nw > tol.eps_rank:
            chosen.append(i)
            basis.append(w / nw)
        if len(chosen) == c.shape[1]:
            break
    return chosen


def _double_description(c: np.ndarray, tol: Tolerance) -> np.ndarray:
    """Extreme rays of {y : c y <= 0} for unit rows `c` of full column rank."""
    d = c.shape[1]
    zt = tol.eps_eq
    start = _independent_rows(c, tol)
    rays = -np.linalg.inv(c[start]).T
    rays /= np.linalg.norm(rays, axis=1, keepdims=True)
    processed = list(start)
    for i in range(c.shape[0]):
        if i in start:
            continue
        vals = rays @ c[i]
        pos = np.flatnonzero(vals > zt)
        if pos.size == 0:
            processed.append(i)
            continue
        neg = np.flatnonzero(vals < -zt)
        keep = np.flatnonzero(vals <= zt)
        tight = np.abs(c[processed] @ rays.T) <= zt
        new = [rays[keep]]
        for p in pos:
            for q in neg:
                common = tight[:, p] & tight[:, q]
                if common.sum() < d - 2:
                    continue
                if d > 2 and matrix_rank(c[processed][common], tol) != d - 2:
                    continue
                r = vals[p] * rays[q] - vals[q] * rays[p]
                nr = np.linalg.norm(r)
                if nr > zt:
                    new.append((r / nr)[None, :])
        rays = np.vstack(new)
        processed.append(i)
    return rays


def _dedupe_rays(rays: np.ndarray, tol: Tolerance) -> np.ndarray:
    out: list[np.ndarray] = []
    for r in rays:
        if all(np.linalg.norm(r - s) > 1e3 * tol.eps_eq for s in out):
            out.append(r)
    return np.array(out).reshape(len(out), rays.shape[1])


def polar_generators(
    K: GeneratedWedge, within: SubspaceBasis | None = None, tol: Tolerance = DEFAULT_TOL
) -> np.ndarray:
    """Unit extreme rays of the polar of K taken inside span(within).

    Parameters
    ----------
    K : GeneratedWedge
        Cone whose generators lie in span(within) and span it.
    within : SubspaceBasis, optional
        Subspace in which the polar is taken; defaults to the whole space.
    tol : Tolerance

    Returns
    -------
    numpy.ndarray, shape (r, ambient_dim)
        Rows are unit vectors y in span(within) with <y, g> <= 0 for all
        generators g, one per extreme ray of the polar.

    Raises
    ------
    PolarNotPointedError
        If the generators do not span `within`.
    ScaleLimitError
        Beyond 12 subspace dimensions or 24 generators.
    """
    if within is None:
        within = SubspaceBasis.full(K.ambient_dim)
    d = within.dim
    n = K.ambient_dim
    if len(K) > MAX_GENERATORS or d > MAX_POLAR_DIM:
        raise ScaleLimitError(f"polar limited to {MAX_POLAR_DIM} dims and {MAX_GENERATORS} generators")
    if d == 0:
        return np.zeros((0, n))
    c = _subspace_coordinates(K, within, tol)
    if c.shape[0] == 0 or matrix_rank(c, tol) < d:
        raise PolarNotPointedError("polar is not pointed here: cone does not span the subspace")
    if c.shape[0] == d:
        # Simplicial: the negated dual basis satisfies <c_i, y_j> = -delta_ij.
        y = -np.linalg.inv(c).T
    else:
        y = _double_description(c, tol)
    y = _dedupe_rays(y / np.linalg.norm(y, axis=1, keepdims=True), tol)
    amb = y @ within.vectors
    return amb / np.linalg.norm(amb, axis=1, keepdims=True)
