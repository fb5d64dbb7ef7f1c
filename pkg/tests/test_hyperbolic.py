import cmath

import numpy as np
import pytest

from polypick.errors import NodesNotDistinct, TargetsNotDistinct
from polypick.hyperbolic import (
    BlaschkeProduct,
    MobiusMap,
    PickProblem,
    mobius,
    normalize_problem,
    polydisc_distance,
    pseudo_hyperbolic,
)
from polypick.sampling import random_disc_point


def test_mobius_pinned_values():
    assert mobius(0.0, 0.5) == -0.5
    assert abs(mobius(0.3, 0.3)) == 0.0
    assert mobius(0.5j, 0.0) == 0.5j


def test_mobius_involution():
    rng = np.random.default_rng(0)
    for _ in range(200):
        a = random_disc_point(rng)
        lam = random_disc_point(rng, 0.0, 0.95)
        assert abs(mobius(a, mobius(a, lam)) - lam) <= 1e-12


def test_schwarz_pick_isometry():
    rng = np.random.default_rng(1)
    for _ in range(200):
        a, b, c = (random_disc_point(rng, 0.0, 0.9) for _ in range(3))
        lhs = pseudo_hyperbolic(mobius(c, a), mobius(c, b))
        assert abs(lhs - pseudo_hyperbolic(a, b)) <= 1e-12


def test_pseudo_hyperbolic_values():
    assert pseudo_hyperbolic(0.3 - 0.2j, 0.3 - 0.2j) == 0.0
    assert pseudo_hyperbolic(0.0, 0.5) == 0.5
    assert abs(pseudo_hyperbolic(0.5, -0.5) - 0.8) <= 1e-15  # |a-b|/|1-ab| = 1/1.25


def test_pseudo_hyperbolic_symmetry():
    rng = np.random.default_rng(2)
    for _ in range(50):
        a, b = random_disc_point(rng), random_disc_point(rng)
        assert abs(pseudo_hyperbolic(a, b) - pseudo_hyperbolic(b, a)) <= 1e-15


def test_polydisc_distance_is_max_over_coordinates():
    z = np.array([0.2, 0.1j])
    w = np.array([0.6, 0.1j])
    assert polydisc_distance(z, w) == pseudo_hyperbolic(0.2, 0.6)


class TestBlaschkeProduct:
    def test_pinned_convention(self):
        # lam * m_0(lam) encoded with zeros {0, 0} and factor -1
        b = BlaschkeProduct(-1.0, (0.0, 0.0))
        assert abs(b(0.5) - (-0.25)) <= 1e-15

    def test_degree_one_identity(self):
        b = BlaschkeProduct(-1.0, (0.0,))
        assert abs(b(0.3) - 0.3) <= 1e-15

    def test_boundary_modulus(self):
        b = BlaschkeProduct(cmath.exp(0.7j), (0.3 - 0.4j, -0.2j))
        for theta in np.linspace(0.0, 2.0 * np.pi, 32, endpoint=False):
            assert abs(abs(b(cmath.exp(1j * theta))) - 1.0) <= 1e-12

    def test_modulus_bounded_on_closed_disc_grid(self):
        rng = np.random.default_rng(3)
        b = BlaschkeProduct(
            cmath.exp(1j * rng.uniform(0, 2 * np.pi)),
            (random_disc_point(rng), random_disc_point(rng)),
        )
        re, im = np.meshgrid(np.linspace(-1, 1, 64), np.linspace(-1, 1, 64))
        grid = re + 1j * im
        grid = grid[np.abs(grid) <= 1.0]
        assert np.max(np.abs(b(grid))) <= 1.0 + 1e-12

    def test_rejects_bad_factor_and_zeros(self):
        with pytest.raises(ValueError):
            BlaschkeProduct(0.5, ())
        with pytest.raises(ValueError):
            BlaschkeProduct(1.0, (1.2,))


class TestNormalize:
    def test_already_normalized_is_fixed(self):
        p = PickProblem(
            np.array([[0.0, 0.0], [0.3, 0.1], [0.1, -0.4j]]),
            np.array([0.0, 0.2, -0.3]),
        )
        q, transform = normalize_problem(p)
        assert np.allclose(q.nodes, p.nodes)
        assert np.allclose(q.targets, p.targets)
        assert transform.target_map.param == 0.0

    def test_round_trip(self):
        p = PickProblem(
            np.array([[0.2], [0.5], [-0.1]]),
            np.array([0.1, 0.4, 0.0]),
        )
        q, transform = normalize_problem(p)
        assert abs(q.nodes[0, 0]) <= 1e-15 and abs(q.targets[0]) <= 1e-15
        back = transform.invert_problem(q)
        assert np.max(np.abs(back.nodes - p.nodes)) <= 1e-12
        assert np.max(np.abs(back.targets - p.targets)) <= 1e-12

    def test_apply_then_invert_on_random_points(self):
        rng = np.random.default_rng(4)
        p = PickProblem(
            np.array([[0.3 - 0.2j, 0.1j], [0.5, -0.2], [-0.1, 0.6j]]),
            np.array([0.1, -0.2j, 0.4]),
        )
        _, transform = normalize_problem(p)
        pts = np.array(
            [[random_disc_point(rng, 0, 0.95) for _ in range(2)] for _ in range(100)]
        )
        back = transform.invert_point(transform.apply_point(pts))
        assert np.max(np.abs(back - pts)) <= 1e-12

    def test_preserves_distances(self):
        p = PickProblem(
            np.array([[0.3, -0.2j], [0.5, 0.1], [-0.1, 0.6j]]),
            np.array([0.1, -0.2j, 0.4]),
        )
        q, _ = normalize_problem(p)
        for i in range(3):
            for j in range(i + 1, 3):
                assert abs(
                    pseudo_hyperbolic(q.targets[i], q.targets[j])
                    - pseudo_hyperbolic(p.targets[i], p.targets[j])
                ) <= 1e-12
                for k in range(2):
                    assert abs(
                        pseudo_hyperbolic(q.nodes[i][k], q.nodes[j][k])
                        - pseudo_hyperbolic(p.nodes[i][k], p.nodes[j][k])
                    ) <= 1e-12

    def test_rejects_repeated_nodes_and_targets(self):
        with pytest.raises(NodesNotDistinct):
            normalize_problem(
                PickProblem(
                    np.array([[0.1, 0.2], [0.1, 0.2], [0.3, 0.1]]),
                    np.array([0.0, 0.1, 0.2]),
                )
            )
        with pytest.raises(TargetsNotDistinct):
            normalize_problem(
                PickProblem(
                    np.array([[0.1, 0.2], [0.2, 0.1], [0.3, 0.1]]),
                    np.array([0.1, 0.1, 0.2]),
                )
            )

    def test_allows_nodes_equal_in_one_coordinate(self):
        p = PickProblem(
            np.array([[0.1, 0.2], [0.1, 0.5], [0.3, 0.2]]),
            np.array([0.0, 0.1, 0.2]),
        )
        q, _ = normalize_problem(p)
        assert q.is_normalized()


def test_mobius_map_with_prefactor_round_trip():
    m = MobiusMap(0.3 - 0.1j, cmath.exp(0.9j))
    rng = np.random.default_rng(5)
    pts = np.array([random_disc_point(rng, 0, 0.95) for _ in range(50)])
    assert np.max(np.abs(m.invert(m.apply(pts)) - pts)) <= 1e-12
