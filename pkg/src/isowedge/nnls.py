"""Active-set nonnegative least squares (Lawson and Hanson).

Solves min ||A t - b|| subject to t >= 0. Used for conic membership, where
the residual norm decides whether b lies in the cone spanned by A's columns.
"""
from __future__ import annotations

import numpy as np


def _ls(a, b):
    sol, *_ = np.linalg.lstsq(a, b, rcond=None)
    return sol


def nnls(A, b, maxiter: int | None = None):
    """Return ``(t, rnorm)`` minimizing ``||A t - b||`` over ``t >= 0``.

    Parameters
    ----------
    A : array_like, shape (m, n)
    b : array_like, shape (m,)
    maxiter : int, optional
        Cap on inner (step-back) iterations, default ``10 * n``.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    if maxiter is None:
        maxiter = 10 * max(n, 1)
    x = np.zeros(n)
    if n == 0:
        return x, float(np.linalg.norm(b))
    passive = np.zeros(n, dtype=bool)
    blocked = np.zeros(n, dtype=bool)
    tol = 1e-12 * max(np.linalg.norm(A), 1e-300) * max(np.linalg.norm(b), 1.0)
    w = A.T @ (b - A @ x)
    inner = 0
    for _ in range(3 * n + 10):
        cand = ~passive & ~blocked & (w > tol)
        if not cand.any():
            break
        j = int(np.argmax(np.where(cand, w, -np.inf)))
        passive[j] = True
        s = np.zeros(n)
        s[passive] = _ls(A[:, passive], b)
        if s[j] <= 0.0:
            # Degenerate entering column: the multiplier was positive only by rounding.
            passive[j] = False
            blocked[j] = True
            continue
        while passive.any() and np.min(s[passive]) <= 0.0 and inner < maxiter:
            inner += 1
            neg = np.flatnonzero(passive & (s <= 0.0))
            ratios = x[neg] / (x[neg] - s[neg])
            k = int(np.argmin(ratios))
            x = x + ratios[k] * (s - x)
            x[neg[k]] = 0.0
            passive &= x > 0.0
            x[~passive] = 0.0
            s = np.zeros(n)
            if passive.any():
                s[passive] = _ls(A[:, passive], b)
        x = s
        blocked[:] = False
        w = A.T @ (b - A @ x)
    x = np.maximum(x, 0.0)
    return x, float(np.linalg.norm(A @ x - b))
