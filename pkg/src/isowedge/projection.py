"""Exact metric projection onto finitely generated cones and wedges.

The oracle enumerates candidate faces cone{g_i : i in S} over linearly
independent generator subsets S. If p is the projection, a Caratheodory
representation of p with strictly positive weights has independent support S,
and the variational conditions force x - p to be orthogonal to every g_i with
i in S. So p is the least-squares projection of x onto span{g_i : i in S}, and
checking the independent subsets suffices.

Each candidate is accepted only if its coefficients are nonnegative and
it passes the KKT certificate

    <x - p, g> <= 0 for all generators g,      <x - p, p> = 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, islice

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    DimensionError,
    SubspaceBasis,
    Tolerance,
    as_matrix,
    as_vector,
)
from .wedge import (
    MAX_GENERATORS,
    GeneratedWedge,
    ScaleLimitError,
    WedgeDecomposition,
    contains,
    decompose,
    polar_generators,
)

FACE_CHUNK = 2048
POINT_BATCH = 64


class ProjectionError(RuntimeError):
    """No candidate face passed the certificate; usually a tolerance problem."""

    def __init__(self, message, best_point=None, certificate=None):
        super().__init__(message)
        self.best_point = best_point
        self.certificate = certificate


@dataclass(frozen=True)
class KktCertificate:
    max_inner_generator: float
    complementarity: float
    passed: bool
    member: bool = True


@dataclass(frozen=True, eq=False)
class ProjectionResult:
    """Projected point with the data that certifies it.

    `active_coefficients` maps generator indices of the projected wedge to
    nonnegative weights; `lineality_component` is what remains of the point
    after subtracting that combination and lies in the lineality space.
    """

    point: np.ndarray
    residual: np.ndarray
    active_coefficients: dict[int, float]
    certificate: KktCertificate
    lineality_component: np.ndarray | None = field(default=None)


def kkt_certificate(generators: np.ndarray, x: np.ndarray, p: np.ndarray,
                    tol: Tolerance = DEFAULT_TOL, member: bool = True) -> KktCertificate:
    r = x - p
    inner = float(np.max(generators @ r)) if len(generators) else 0.0
    comp = float(r @ p)
    scale = 1.0 + float(np.linalg.norm(x))
    ok = member and inner <= tol.eps_feas * scale and abs(comp) <= tol.eps_feas * scale**2
    return KktCertificate(inner, comp, bool(ok), bool(member))


def verify_projection(W: GeneratedWedge, x, p, tol: Tolerance = DEFAULT_TOL) -> KktCertificate:
    """Check the variational characterization of p = P_W x.

    Testing <x - p, y> <= 0 on generators is enough for all y in W by
    linearity. A point p outside W yields a failed certificate with
    ``member=False``.
    """
    x = as_vector(x, W.ambient_dim)
    p = as_vector(p, W.ambient_dim)
    member = contains(W, p, tol).member
    return kkt_certificate(W.generators, x, p, tol, member)


def _face_subsets(k: int, max_size: int):
    for s in range(max_size + 1):
        yield from combinations(range(k), s)


@dataclass
class _FaceChunk:
    subsets: list[tuple[int, ...]]
    solve: np.ndarray   # (faces, smax, n): coefficients t = solve @ x
    gens: np.ndarray    # (faces, smax, n): padded face generators
    norms: np.ndarray   # (faces, smax): generator norms, 0 on padding


class FaceOracle:
    """Face-enumeration projector onto cone(generators), reusable across points.

    Face tables are built lazily in chunks of increasing face size and cached,
    so repeated projections onto the same wedge only pay for factorization once.
    """

    def __init__(self, generators, tol: Tolerance = DEFAULT_TOL, dim: int | None = None):
        g = as_matrix(generators, dim)
        if g.shape[0] > MAX_GENERATORS:
            raise ScaleLimitError(f"face enumeration limited to {MAX_GENERATORS} generators")
        self.generators = g
        self.tol = tol
        self.n = g.shape[1]
        self._gnorm = np.linalg.norm(g, axis=1)
        self._live = np.flatnonzero(self._gnorm > 0)
        self._smax = min(len(self._live), self.n)
        self._subset_iter = _face_subsets(len(self._live), self._smax)
        self._chunks: list[_FaceChunk] = []
        self._exhausted = False
        self._gscale = float(self._gnorm.max()) if len(g) else 0.0

    def _build_chunk(self) -> _FaceChunk | None:
        if self._exhausted:
            return None
        raw = list(islice(self._subset_iter, FACE_CHUNK))
        if not raw:
            self._exhausted = True
            return None
        n, smax = self.n, max(self._smax, 1)
        subsets, solves, gens, norms = [], [], [], []
        for sub in raw:
            idx = self._live[list(sub)]
            m = np.zeros((smax, n))
            gp = np.zeros((smax, n))
            nm = np.zeros(smax)
            if idx.size:
                a = self.generators[idx]
                q, r = np.linalg.qr(a.T)
                diag = np.abs(np.diag(r))
                if diag.min() <= self.tol.eps_rank * self._gscale:
                    continue
                m[: idx.size] = np.linalg.solve(r, q.T)
                gp[: idx.size] = a
                nm[: idx.size] = self._gnorm[idx]
            subsets.append(tuple(int(i) for i in idx))
            solves.append(m)
            gens.append(gp)
            norms.append(nm)
        if not subsets:
            return self._build_chunk()
        chunk = _FaceChunk(subsets, np.array(solves), np.array(gens), np.array(norms))
        self._chunks.append(chunk)
        return chunk

    def _iter_chunks(self):
        i = 0
        while True:
            if i < len(self._chunks):
                yield self._chunks[i]
            else:
                c = self._build_chunk()
                if c is None:
                    return
                yield c
            i += 1

    def _evaluate(self, chunk: _FaceChunk, xs: np.ndarray):
        t = np.einsum("fjn,bn->bfj", chunk.solve, xs)
        p = np.einsum("bfj,fjn->bfn", t, chunk.gens)
        r = xs[:, None, :] - p
        scale = 1.0 + np.linalg.norm(xs, axis=1)
        if len(self.generators):
            inner = np.max(r @ self.generators.T, axis=2)
        else:
            inner = np.zeros(r.shape[:2])
        comp = np.einsum("bfn,bfn->bf", r, p)
        coef = np.min(t * chunk.norms[None], axis=2) if t.shape[2] else np.zeros(r.shape[:2])
        viol = np.maximum.reduce([
            -coef / scale[:, None],
            inner / scale[:, None],
            np.abs(comp) / scale[:, None] ** 2,
        ])
        return t, p, viol

    def project_many(self, xs) -> list[ProjectionResult]:
        xs = as_matrix(xs, self.n)
        out: list[ProjectionResult] = []
        for start in range(0, len(xs), POINT_BATCH):
            out.extend(self._project_batch(xs[start:start + POINT_BATCH]))
        return out

    def project(self, x) -> ProjectionResult:
        return self.project_many(as_vector(x, self.n)[None, :])[0]

    def _project_batch(self, xs: np.ndarray) -> list[ProjectionResult]:
        b = len(xs)
        found: list[ProjectionResult | None] = [None] * b
        best = [(np.inf, None, None, None)] * b
        todo = np.arange(b)
        bound = self.tol.eps_feas
        for chunk in self._iter_chunks():
            t, p, viol = self._evaluate(chunk, xs[todo])
            ok = viol <= bound
            for row, i in enumerate(todo):
                hits = np.flatnonzero(ok[row])
                if hits.size:
                    f = hits[0]
                    found[i] = self._result(xs[i], p[row, f], chunk.subsets[f], t[row, f])
                else:
                    f = int(np.argmin(viol[row]))
                    if viol[row, f] < best[i][0]:
                        best[i] = (viol[row, f], p[row, f], chunk.subsets[f], t[row, f])
            todo = np.array([i for i in todo if found[i] is None], dtype=int)
            if todo.size == 0:
                break
        if todo.size:
            i = int(todo[0])
            _, bp, bs, bt = best[i]
            cert = None
            if bp is not None:
                cert = kkt_certificate(self.generators, xs[i], bp, self.tol)
            raise ProjectionError(
                "no candidate face passed the KKT certificate; check tolerances",
                best_point=bp, certificate=cert,
            )
        return found  # type: ignore[return-value]

    def _result(self, x, p, subset, t) -> ProjectionResult:
        p = np.array(p)
        coeffs = {int(i): float(max(c, 0.0)) for i, c in zip(subset, t)}
        cert = kkt_certificate(self.generators, x, p, self.tol)
        return ProjectionResult(p, x - p, coeffs, cert)


def project_cone_oracle(K: GeneratedWedge, x, tol: Tolerance = DEFAULT_TOL) -> ProjectionResult:
    """Exact projection of x onto cone(K.generators) by face enumeration.

    Works for any finitely generated wedge, pointed or not; limited to 24
    generators since the number of faces grows exponentially.
    """
    x = as_vector(x, K.ambient_dim)
    return FaceOracle(K.generators, tol, K.ambient_dim).project(x)


class WedgeProjector:
    """Projection onto W through its decomposition W = K ⊕ L.

    x is split into x_l ∈ L and x_k ∈ L⊥, and P_W x = P_K x_k + x_l, with
    P_K from the face oracle on the cone part. Certificates are evaluated
    against the original generators of W.
    """

    def __init__(self, W: GeneratedWedge, tol: Tolerance = DEFAULT_TOL,
                 decomposition: WedgeDecomposition | None = None):
        self.wedge = W
        self.tol = tol
        self.decomposition = decomposition or decompose(W, tol)
        self._lin = self.decomposition.lineality.vectors
        self._oracle = FaceOracle(self.decomposition.cone_part.generators, tol, W.ambient_dim)
        self._cone_index = _cone_part_index(W, self.decomposition, tol)

    def project_many(self, xs) -> list[ProjectionResult]:
        xs = as_matrix(xs, self.wedge.ambient_dim)
        xl = (xs @ self._lin.T) @ self._lin
        cone = self._oracle.project_many(xs - xl)
        return [self._assemble(x, l, r) for x, l, r in zip(xs, xl, cone)]

    def project(self, x) -> ProjectionResult:
        x = as_vector(x, self.wedge.ambient_dim)
        return self.project_many(x[None, :])[0]

    def _assemble(self, x, xl, cone_result: ProjectionResult) -> ProjectionResult:
        p = cone_result.point + xl
        coeffs = {int(self._cone_index[i]): c for i, c in cone_result.active_coefficients.items()}
        g = self.wedge.generators
        combo = sum((c * g[i] for i, c in coeffs.items()), np.zeros_like(p))
        cert = kkt_certificate(g, x, p, self.tol)
        return ProjectionResult(p, x - p, coeffs, cert, lineality_component=p - combo)


def _cone_part_index(W: GeneratedWedge, D: WedgeDecomposition, tol: Tolerance) -> np.ndarray:
    # Map each cone-part generator back to the original generator it came from.
    q = D.lineality.vectors
    idx = []
    for i, g in enumerate(W.generators):
        k = g - q.T @ (q @ g)
        if np.linalg.norm(k) > tol.eps_eq * (1.0 + np.linalg.norm(g)):
            idx.append(i)
    if len(idx) != len(D.cone_part):
        raise ValueError("decomposition does not match the wedge's generators")
    return np.array(idx, dtype=int)


def project_wedge(W: GeneratedWedge, x, tol: Tolerance = DEFAULT_TOL) -> ProjectionResult:
    """Project x onto W via P_W x = P_K x_k + x_l."""
    return WedgeProjector(W, tol).project(x)


def moreau_check(K: GeneratedWedge, within: SubspaceBasis, x, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Check x = P_K x + P_{polar} x with orthogonal parts, inside span(within)."""
    x = as_vector(x, K.ambient_dim)
    if within.ambient_dim != K.ambient_dim:
        raise DimensionError("cone and subspace live in different ambient spaces")
    q = within.vectors
    scale = 1.0 + np.linalg.norm(x)
    if np.linalg.norm(x - q.T @ (q @ x)) > tol.eps_feas * scale:
        raise ValueError("x does not lie in the given subspace")
    polar = polar_generators(K, within, tol)
    pk = project_cone_oracle(K, x, tol).point
    pp = project_cone_oracle(GeneratedWedge(polar, K.ambient_dim), x, tol).point
    return bool(
        np.linalg.norm(x - pk - pp) <= tol.eps_feas * scale
        and abs(pk @ pp) <= tol.eps_feas * scale**2
    )
