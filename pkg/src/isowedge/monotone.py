"""The monotone wedge {x : x^1 >= x^2 >= ... >= x^m}.

Bases used throughout (1-based j as in the usual notation):

* ``e_j``  : j leading ones, then zeros; ``e_m`` spans the lineality space.
* ``e'_j`` : j copies of (m - j) followed by (m - j) copies of -j; these lie
  in the hyperplane orthogonal to e_m and generate the cone part.
* ``u_i``  : -1 at position i, +1 at position i + 1; these generate the
  polar of the cone part inside that hyperplane.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DEFAULT_TOL, Tolerance, as_vector
from .wedge import GeneratedWedge


@dataclass(frozen=True, eq=False)
class MonotoneBasis:
    m: int
    e: np.ndarray
    e_prime: np.ndarray
    u: np.ndarray

    @classmethod
    def build(cls, m: int) -> "MonotoneBasis":
        if m < 2:
            raise ValueError(f"monotone wedge needs m >= 2, got {m}")
        idx = np.arange(m)
        e = (idx[None, :] <= idx[:, None]).astype(float)
        e_prime = np.empty((m - 1, m))
        for j in range(1, m):
            e_prime[j - 1, :j] = m - j
            e_prime[j - 1, j:] = -j
        u = np.zeros((m - 1, m))
        u[idx[:-1], idx[:-1]] = -1.0
        u[idx[:-1], idx[1:]] = 1.0
        return cls(m, e, e_prime, u)


@dataclass(frozen=True, eq=False)
class MonotoneCoefficients:
    """Coordinates of x in the basis {e'_1, ..., e'_{m-1}, e_m}.

    ``t[:-1]`` weight the e'_j and must be nonnegative for x to be monotone;
    ``t[-1]`` weights e_m and is unconstrained.
    """

    t: np.ndarray

    def reconstruct(self) -> np.ndarray:
        b = MonotoneBasis.build(len(self.t))
        return self.t[:-1] @ b.e_prime + self.t[-1] * b.e[-1]


def build_monotone_wedge(m: int) -> GeneratedWedge:
    """Generators {e'_1, ..., e'_{m-1}, e_m, -e_m} of the monotone wedge in R^m."""
    b = MonotoneBasis.build(m)
    return GeneratedWedge(np.vstack([b.e_prime, b.e[-1], -b.e[-1]]), m)


def is_monotone(x, tol: Tolerance = DEFAULT_TOL) -> bool:
    x = as_vector(x)
    slack = -tol.eps_feas * (1.0 + np.linalg.norm(x))
    return bool(np.all(x[:-1] - x[1:] >= slack))


def coefficients(x) -> MonotoneCoefficients:
    """Solve sum_j t^j e'_j + t^m e_m = x.

    Since e'_j + j e_m = m e_j, the telescoping representation
    x = sum_j (x^j - x^{j+1}) e_j + x^m e_m becomes
    t^j = (x^j - x^{j+1}) / m for j < m, and t^m is the mean of x
    (the e'_j are orthogonal to e_m).
    """
    x = as_vector(x)
    m = x.size
    if m < 2:
        raise ValueError("coefficients need m >= 2")
    t = np.empty(m)
    t[:-1] = (x[:-1] - x[1:]) / m
    t[-1] = x.mean()
    return MonotoneCoefficients(t)


def pava_project(x) -> np.ndarray:
    """Euclidean projection onto the nonincreasing vectors by pool-adjacent-violators.

    Blocks are kept on a stack as (sum, count); whenever the newest block's
    mean exceeds the mean of the block before it, the two are pooled.
    """
    x = as_vector(x)
    sums: list[float] = []
    counts: list[int] = []
    for v in x:
        s, c = float(v), 1
        # Pool while the previous block mean is below the current one.
        while sums and sums[-1] * c < s * counts[-1]:
            s += sums.pop()
            c += counts.pop()
        sums.append(s)
        counts.append(c)
    return np.repeat([s / c for s, c in zip(sums, counts)], counts)


def ray_set_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Largest distance from a unit ray in one set to its nearest ray in the other.

    Returns inf when the sets differ in size.
    """
    a = np.atleast_2d(a)
    b = np.atleast_2d(b)
    if a.shape != b.shape:
        return float("inf")
    if a.size == 0:
        return 0.0
    a = a / np.linalg.norm(a, axis=1, keepdims=True)
    b = b / np.linalg.norm(b, axis=1, keepdims=True)
    d = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=2)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def monotone_isotone_selfcheck(m: int, tol: Tolerance = DEFAULT_TOL):
    """Run the isotonicity checker on the monotone wedge of R^m.

    Returns the report and the ray-set distance between its polar rays and
    the normalized u_i; a correct run gives verdict ``isotone`` and a
    distance below ``tol.eps_eq``.
    """
    from .isotone import check_isotone_wedge

    if not 2 <= m <= 12:
        raise ValueError("selfcheck supports 2 <= m <= 12")
    report = check_isotone_wedge(build_monotone_wedge(m), tol)
    u = MonotoneBasis.build(m).u
    return report, ray_set_distance(report.polar_rays, u)
