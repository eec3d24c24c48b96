"""Dimension-checked vector primitives and orthonormal subspace bases.

Vectors are plain 1-D float64 numpy arrays; :func:`as_vector` is the single
entry point that validates them.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DimensionError(ValueError):
    """Raised when vectors of incompatible ambient dimension are combined."""


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds shared by every module.

    Parameters
    ----------
    eps_rank : float
        Relative threshold for rank and linear-independence decisions.
    eps_feas : float
        Relative threshold for membership and KKT feasibility.
    eps_eq : float
        Threshold for equality and orthogonality checks.
    """

    eps_rank: float = 1e-10
    eps_feas: float = 1e-8
    eps_eq: float = 1e-9

    def __post_init__(self):
        for name in ("eps_rank", "eps_feas", "eps_eq"):
            value = getattr(self, name)
            if not (0.0 < value < 1e-2):
                raise ValueError(f"{name} must lie in (0, 1e-2), got {value!r}")


DEFAULT_TOL = Tolerance()


def as_vector(x, dim: int | None = None) -> np.ndarray:
    """Return `x` as a finite 1-D float array, optionally checking its length."""
    v = np.asarray(x, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise DimensionError(f"expected a nonempty 1-D vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector entries must be finite")
    if dim is not None and v.size != dim:
        raise DimensionError(f"expected dimension {dim}, got {v.size}")
    return v


def as_matrix(rows, dim: int | None = None) -> np.ndarray:
    """Stack a list of vectors into a (k, dim) array; k may be zero if `dim` is given."""
    if isinstance(rows, np.ndarray) and rows.ndim == 2:
        a = rows.astype(float, copy=False)
    else:
        rows = list(rows)
        if not rows:
            if dim is None:
                raise DimensionError("cannot infer dimension of an empty vector list")
            return np.zeros((0, dim))
        vs = [as_vector(r) for r in rows]
        sizes = {v.size for v in vs}
        if len(sizes) != 1:
            raise DimensionError(f"vectors have mixed dimensions {sorted(sizes)}")
        a = np.vstack(vs)
    if not np.all(np.isfinite(a)):
        raise ValueError("vector entries must be finite")
    if dim is not None and a.shape[1] != dim:
        raise DimensionError(f"expected dimension {dim}, got {a.shape[1]}")
    return a


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """Orthonormal basis of a linear subspace of R^ambient_dim.

    `vectors` is a (k, ambient_dim) array whose rows are orthonormal; k = 0
    encodes the zero subspace.
    """

    vectors: np.ndarray
    ambient_dim: int

    def __post_init__(self):
        v = as_matrix(self.vectors, self.ambient_dim)
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def __len__(self):
        return self.dim

    def check(self, tol: Tolerance = DEFAULT_TOL) -> None:
        gram = self.vectors @ self.vectors.T
        if not np.allclose(gram, np.eye(self.dim), atol=tol.eps_eq, rtol=0.0):
            raise ValueError("basis vectors are not orthonormal")

    @classmethod
    def empty(cls, ambient_dim: int) -> "SubspaceBasis":
        return cls(np.zeros((0, ambient_dim)), ambient_dim)

    @classmethod
    def full(cls, ambient_dim: int) -> "SubspaceBasis":
        return cls(np.eye(ambient_dim), ambient_dim)


def orthonormal_basis(vs, tol: Tolerance = DEFAULT_TOL, dim: int | None = None) -> SubspaceBasis:
    """Orthonormal basis of span(vs) by two-pass Gram-Schmidt.

    A candidate direction is kept when its residual after orthogonalization
    exceeds ``eps_rank`` times the largest input norm; zero vectors are skipped.
    """
    a = as_matrix(vs, dim)
    n = a.shape[1]
    if a.shape[0] == 0:
        return SubspaceBasis.empty(n)
    scale = np.max(np.linalg.norm(a, axis=1))
    if scale == 0.0:
        return SubspaceBasis.empty(n)
    basis: list[np.ndarray] = []
    for v in a:
        w = v.copy()
        for _ in range(2):
            for b in basis:
                w -= (b @ w) * b
        nw = np.linalg.norm(w)
        if nw > tol.eps_rank * scale:
            basis.append(w / nw)
        if len(basis) == n:
            break
    return SubspaceBasis(np.array(basis).reshape(len(basis), n), n)


def project_subspace(x, basis: SubspaceBasis) -> np.ndarray:
    """Orthogonal projection of `x` onto the span of `basis`."""
    x = as_vector(x, basis.ambient_dim)
    q = basis.vectors
    return q.T @ (q @ x)


def complement_basis(basis: SubspaceBasis, tol: Tolerance = DEFAULT_TOL) -> SubspaceBasis:
    """Orthonormal basis of the orthogonal complement of span(basis)."""
    n = basis.ambient_dim
    k = basis.dim
    if k == 0:
        return SubspaceBasis.full(n)
    if k >= n:
        return SubspaceBasis.empty(n)
    # Right singular vectors beyond the rank span the null space of the basis rows.
    _, _, vt = np.linalg.svd(basis.vectors, full_matrices=True)
    comp = vt[k:]
    # Re-orthogonalize against the given basis to remove rounding drift.
    comp = comp - (comp @ basis.vectors.T) @ basis.vectors
    q, _ = np.linalg.qr(comp.T)
    return SubspaceBasis(q.T[: n - k], n)


def matrix_rank(a, tol: Tolerance = DEFAULT_TOL) -> int:
    """Numerical rank of the rows of `a`, relative to the largest singular value."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > tol.eps_rank * s[0]))
