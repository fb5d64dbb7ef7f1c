import cmath

import numpy as np
import pytest

from helpers import gauge_error
from polypick.errors import DegenerateData, LowerDimensional
from polypick.geodesic import (
    GeodesicParams,
    ProjectiveTarget,
    _all_converged,
    extremal_scale,
    geodesic_eval,
    invert_phi,
    inversion_jacobian,
    phi_map,
)
from polypick.hyperbolic import mobius
from polypick.sampling import (
    random_disc_point,
    random_geodesic_params,
    sample_lambdas,
)
from polypick.schur_pick import blaschke_interpolate


def test_geodesic_eval_zero_alpha_is_minus_lambda_squared():
    g = GeodesicParams(0.3, -0.4, np.zeros(2), np.array([0.5, 0.5]), np.ones(1, dtype=complex))
    lam = 0.3 - 0.2j
    pt = geodesic_eval(g, lam)
    assert np.max(np.abs(pt - (-lam * lam))) <= 1e-15


def test_geodesic_eval_fixed_points():
    rng = np.random.default_rng(0)
    g = random_geodesic_params(rng, 3)
    assert np.max(np.abs(geodesic_eval(g, 0.0))) == 0.0
    assert abs(geodesic_eval(g, g.alpha[0])[0]) <= 1e-15


def test_each_coordinate_interpolates_degree_two_blaschke():
    rng = np.random.default_rng(1)
    g = random_geodesic_params(rng, 3)
    lams = sample_lambdas(23, radius=0.8)
    pts = geodesic_eval(g, lams)
    for k in range(3):
        fit = blaschke_interpolate(lams[:3], pts[:3, k])
        rest = np.abs(fit(lams[3:]) - pts[3:, k])
        assert float(np.max(rest)) <= 1e-10


class TestPhiMap:
    def test_evenness(self):
        rng = np.random.default_rng(2)
        for n in (2, 3):
            g = random_geodesic_params(rng, n)
            z1, w1, xi1 = phi_map(g)
            z2, w2, xi2 = phi_map(g.mirrored())
            assert np.max(np.abs(z1 - z2)) <= 1e-12
            assert np.max(np.abs(w1 - w2)) <= 1e-12
            assert xi1.chordal(xi2) <= 1e-12

    def test_zero_alpha_projective_target(self):
        g = GeodesicParams(
            0.3, -0.5j, np.zeros(2), np.array([0.4, 0.6]), np.ones(1, dtype=complex)
        )
        _, _, xi = phi_map(g)
        expected = ProjectiveTarget(g.x**2, g.y**2)
        assert xi.chordal(expected) <= 1e-15


class TestInvertPhi:
    def test_round_trip(self):
        rng = np.random.default_rng(3)
        for n in (2, 3):
            for _ in range(10):
                g = random_geodesic_params(rng, n)
                z, w, xi = phi_map(g)
                h, diag = invert_phi(z, w, xi)
                assert gauge_error(g, h) <= 1e-8
                assert diag.residual_norm <= 1e-10

    def test_round_trip_higher_dimension_identifiable_part(self):
        # for four variables the weight fiber is genuinely non-unique; the
        # identifiable components (x, y, alpha, omega, gamma) are recovered
        rng = np.random.default_rng(4)
        for _ in range(3):
            g = random_geodesic_params(rng, 4)
            z, w, xi = phi_map(g)
            h, _ = invert_phi(z, w, xi)
            assert gauge_error(g, h, include_t=False) <= 1e-8

    def test_canonical_gauge(self):
        rng = np.random.default_rng(5)
        g = random_geodesic_params(rng, 2)
        z, w, xi = phi_map(g)
        h, _ = invert_phi(z, w, xi)
        assert h.x.real > 0.0 or (abs(h.x.real) <= 1e-12 and h.x.imag > 0.0)

    def test_equal_nodes_rejected(self):
        z = np.array([0.3, 0.1j])
        with pytest.raises(DegenerateData):
            invert_phi(z, z, ProjectiveTarget(1.0, 0.5))

    def test_boundary_weights_reported_lower_dimensional(self):
        rng = np.random.default_rng(6)
        g = random_geodesic_params(rng, 2)
        shifted = GeodesicParams(
            g.x, g.y, g.alpha, np.array([1.0 - 1e-12, 1e-12]), g.omega
        )
        z, w, xi = phi_map(shifted)
        with pytest.raises(LowerDimensional):
            invert_phi(z, w, xi)

    def test_perturbation_continuity(self):
        rng = np.random.default_rng(7)
        g = random_geodesic_params(rng, 2)
        z, w, xi = phi_map(g)
        bumped = ProjectiveTarget(xi.sigma * (1.0 + 1e-3), xi.tau)
        h, diag = invert_phi(z, w, bumped)
        assert diag.residual_norm <= 1e-10
        move = gauge_error(g, h)
        assert 0.0 < move <= 0.05

    def test_two_preimage_orbits_only(self):
        rng = np.random.default_rng(8)
        g = random_geodesic_params(rng, 2)
        z, w, xi = phi_map(g)
        found = _all_converged(z, w, xi)
        assert found
        for h in found:
            assert gauge_error(g, h) <= 1e-7

    def test_jacobian_full_rank_at_solution(self):
        rng = np.random.default_rng(9)
        for n in (2, 3):
            g = random_geodesic_params(rng, n)
            z, w, xi = phi_map(g)
            h, _ = invert_phi(z, w, xi)
            jac = inversion_jacobian(h, z, w, xi)
            assert jac.shape == (4 * n + 2, 4 * n + 2)
            svals = np.linalg.svd(jac, compute_uv=False)
            assert svals[-1] > 1e-8 * svals[0]

    def test_permutation_equivariance(self):
        # permuting coordinates permutes (alpha, rotation block) after
        # re-anchoring the first rotation: the root of the old first rotation
        # rotates (x, y, alpha) and the remaining rotations are ratios
        rng = np.random.default_rng(10)
        g = random_geodesic_params(rng, 3)
        z, w, xi = phi_map(g)
        perm = [2, 0, 1]
        h, _ = invert_phi(z[perm], w[perm], xi)
        rot = g.rotations()
        u = cmath.sqrt(rot[perm[0]])
        expected = GeodesicParams(
            u * g.x,
            u * g.y,
            u * g.alpha[perm],
            g.t[perm],
            np.array([rot[perm[1]] / rot[perm[0]], rot[perm[2]] / rot[perm[0]]]),
        )
        assert gauge_error(expected, h) <= 1e-8
        zz, ww, xx = phi_map(h)
        assert np.max(np.abs(zz - z[perm])) <= 1e-9
        assert np.max(np.abs(ww - w[perm])) <= 1e-9
        assert xx.chordal(xi) <= 1e-9


class TestExtremalScale:
    def test_already_extremal_targets(self):
        rng = np.random.default_rng(11)
        g = random_geodesic_params(rng, 2)
        z, w, _ = phi_map(g)
        gamma = g.gamma
        sig = g.x * mobius(gamma, g.x)
        tau = g.y * mobius(gamma, g.y)
        result = extremal_scale(z, w, sig, tau)
        assert abs(result.scale - 1.0) <= 1e-9
        assert abs(result.phase - 1.0) <= 1e-8

    def test_homogeneity(self):
        rng = np.random.default_rng(12)
        g = random_geodesic_params(rng, 2)
        z, w, _ = phi_map(g)
        gamma = g.gamma
        sig = g.x * mobius(gamma, g.x)
        tau = g.y * mobius(gamma, g.y)
        result = extremal_scale(z, w, 0.5 * sig, 0.5 * tau)
        assert abs(result.scale - 2.0) <= 1e-8

    def test_rotated_targets_report_phase(self):
        rng = np.random.default_rng(13)
        g = random_geodesic_params(rng, 2)
        z, w, _ = phi_map(g)
        gamma = g.gamma
        sig = g.x * mobius(gamma, g.x)
        tau = g.y * mobius(gamma, g.y)
        rot = cmath.exp(0.8j)
        result = extremal_scale(z, w, rot * sig, rot * tau)
        assert abs(result.scale - 1.0) <= 1e-8
        assert abs(result.phase - np.conj(rot)) <= 1e-8
