import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from isowedge.linalg import DimensionError, SubspaceBasis, Tolerance, complement_basis
from isowedge.monotone import MonotoneBasis, build_monotone_wedge, ray_set_distance
from isowedge.wedge import (
    GeneratedWedge,
    PolarNotPointedError,
    ScaleLimitError,
    contains,
    decompose,
    is_generating,
    is_pointed,
    lineality_space,
    polar_generators,
)

from oracles import brute_force_polar

TOL = Tolerance()
SQ2 = np.sqrt(2.0)


def random_generators(seed, max_dim=4, max_extra=3, lines=False):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, max_dim + 1))
    k = int(rng.integers(n, n + max_extra + 1))
    g = rng.uniform(-2, 2, size=(k, n))
    if lines and rng.random() < 0.5:
        g = np.vstack([g, -g[: int(rng.integers(1, k + 1))]])
    return g


class TestContains:
    def test_monotone_member(self):
        assert contains(build_monotone_wedge(3), [3, 2, 1]).member

    def test_monotone_non_member(self):
        c = contains(build_monotone_wedge(3), [1, 2, 3])
        assert not c.member and c.coefficients is None and c.residual_norm > 0.1

    def test_coefficients_witness(self):
        # (1,0) + (-1,1) = (0,1); the generator matrix is invertible so the
        # witness is unique.
        g = np.array([[1.0, 0], [-1, 1]])
        c = contains(GeneratedWedge(g), [0, 1])
        assert c.member
        np.testing.assert_allclose(c.coefficients, np.linalg.solve(g.T, [0, 1]), atol=1e-12)
        np.testing.assert_allclose(c.coefficients, [1, 1], atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            contains(GeneratedWedge([[1, 0]]), [1, 0, 0])

    def test_zero_wedge(self):
        W = GeneratedWedge([[0.0, 0.0]])
        assert contains(W, [0, 0]).member
        assert not contains(W, [1, 0]).member

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_witness_reconstructs(self, seed):
        rng = np.random.default_rng(seed)
        g = random_generators(seed)
        x = rng.uniform(0, 1, len(g)) @ g
        c = contains(GeneratedWedge(g), x)
        assert c.member
        assert np.all(c.coefficients >= -TOL.eps_feas)
        assert np.linalg.norm(g.T @ c.coefficients - x) <= TOL.eps_feas * (1 + np.linalg.norm(x))


class TestLineality:
    def test_monotone_diagonal(self):
        L = lineality_space(build_monotone_wedge(3))
        assert L.dim == 1
        np.testing.assert_allclose(np.abs(L.vectors[0]), np.ones(3) / np.sqrt(3))

    def test_pointed_orthant(self):
        assert lineality_space(GeneratedWedge(np.eye(2))).dim == 0
        assert is_pointed(GeneratedWedge(np.eye(2)))

    def test_half_plane(self):
        L = lineality_space(GeneratedWedge([[1, 0], [-1, 0], [0, 1]]))
        assert L.dim == 1
        np.testing.assert_allclose(np.abs(L.vectors[0]), [1, 0])

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_basis_vectors_are_two_sided(self, seed):
        W = GeneratedWedge(random_generators(seed, lines=True))
        for b in lineality_space(W).vectors:
            assert contains(W, b).member and contains(W, -b).member


class TestDecompose:
    def test_monotone_m3(self):
        D = decompose(build_monotone_wedge(3))
        np.testing.assert_allclose(np.abs(D.lineality.vectors), np.ones((1, 3)) / np.sqrt(3))
        np.testing.assert_allclose(D.cone_part.generators, [[2, -1, -1], [1, 1, -2]], atol=1e-12)

    def test_pointed_cone_unchanged(self):
        D = decompose(GeneratedWedge(np.eye(2)))
        assert D.lineality.dim == 0
        np.testing.assert_allclose(D.cone_part.generators, np.eye(2))

    def test_whole_plane(self):
        D = decompose(GeneratedWedge([[1, 0], [-1, 0], [0, 1], [0, -1]]))
        assert D.lineality.dim == 2 and len(D.cone_part) == 0

    def test_zero_wedge(self):
        D = decompose(GeneratedWedge([[0.0, 0.0, 0.0]]))
        assert D.lineality.dim == 0 and len(D.cone_part) == 0

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_split_is_orthogonal_and_equivalent(self, seed):
        W = GeneratedWedge(random_generators(seed, lines=True))
        D = decompose(W)
        lin, cone = D.lineality.vectors, D.cone_part.generators
        if lin.size and cone.size:
            assert np.max(np.abs(cone @ lin.T)) <= TOL.eps_eq
        assert is_pointed(D.cone_part) or len(D.cone_part) == 0
        rebuilt = GeneratedWedge(np.vstack([cone, lin, -lin]), W.ambient_dim)
        for g in W.generators:
            assert contains(rebuilt, g).member
        for g in rebuilt.generators:
            assert contains(W, g).member


class TestGenerating:
    @pytest.mark.parametrize("m", [2, 3, 7, 12])
    def test_monotone(self, m):
        assert is_generating(build_monotone_wedge(m))

    def test_single_ray(self):
        assert not is_generating(GeneratedWedge([[1, 0]]))

    def test_two_independent(self):
        assert is_generating(GeneratedWedge([[1, 0], [1, 1]]))


class TestPolar:
    def test_monotone_cone_part(self):
        D = decompose(build_monotone_wedge(3))
        rays = polar_generators(D.cone_part, complement_basis(D.lineality))
        u = MonotoneBasis.build(3).u / SQ2
        assert ray_set_distance(rays, u) < TOL.eps_eq

    def test_orthant(self):
        rays = polar_generators(GeneratedWedge(np.eye(2)))
        assert ray_set_distance(rays, -np.eye(2)) < TOL.eps_eq

    def test_non_simplicial_against_oracle(self):
        g = np.array([[1.0, 0], [-1, 1]])
        rays = polar_generators(GeneratedWedge(g))
        expected = np.array([[0, -1], [-1, -1]]) / np.array([[1], [SQ2]])
        assert ray_set_distance(rays, expected) < TOL.eps_eq
        assert ray_set_distance(rays, brute_force_polar(g)) < TOL.eps_eq
        assert np.all(rays @ g.T <= TOL.eps_feas)

    def test_double_description_path(self):
        # Four generators in R^3 forces the non-simplicial branch.
        g = np.array([[1.0, 0, 1], [0, 1, 1], [-1, 0, 1], [0, -1, 1]])
        rays = polar_generators(GeneratedWedge(g))
        assert len(rays) == 4
        assert ray_set_distance(rays, brute_force_polar(g)) < 1e-9

    def test_not_generating_raises(self):
        with pytest.raises(PolarNotPointedError, match="not pointed"):
            polar_generators(GeneratedWedge([[1, 0]]))

    def test_generators_outside_subspace(self):
        with pytest.raises(ValueError):
            polar_generators(GeneratedWedge([[1, 0, 1]]), SubspaceBasis(np.array([[1.0, 0, 0]]), 3))

    def test_scale_limit(self):
        with pytest.raises(ScaleLimitError):
            polar_generators(GeneratedWedge(np.eye(13)))

    def test_polar_of_non_pointed_cone_in_plane(self):
        # Half-plane y >= 0: its polar is the single ray (0, -1).
        rays = polar_generators(GeneratedWedge([[1, 0], [-1, 0], [0, 1]]))
        assert ray_set_distance(rays, [[0, -1]]) < TOL.eps_eq

    @settings(max_examples=150, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_matches_brute_force(self, seed):
        g = random_generators(seed)
        assume(np.linalg.matrix_rank(g) == g.shape[1])
        rays = polar_generators(GeneratedWedge(g))
        assert np.all(rays @ g.T <= TOL.eps_feas)
        assert ray_set_distance(rays, brute_force_polar(g)) < 1e-7

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_bipolar(self, seed):
        g = random_generators(seed)
        W = GeneratedWedge(g)
        assume(is_generating(W) and is_pointed(W))
        P = GeneratedWedge(polar_generators(W))
        PP = GeneratedWedge(polar_generators(P))
        for v in g:
            assert contains(PP, v).member
        for v in PP.generators:
            assert contains(W, v).member
