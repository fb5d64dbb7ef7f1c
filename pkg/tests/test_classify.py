from itertools import permutations

import numpy as np
import pytest

from helpers import (
    gauge_error,
    one_dimensional_tridisc,
    permute_problem,
    two_dimensional_tridisc,
)
from polypick.classify import classify, dimension, is_degenerate, two_point_extremal
from polypick.errors import UnsolvablePair
from polypick.hyperbolic import PickProblem, normalize_problem
from polypick.sampling import problem_from_geodesic, random_geodesic_params


class TestTwoPointExtremal:
    def test_equal_targets_not_extremal(self):
        assert not two_point_extremal(
            np.array([0.2, 0.1]), 0.3, np.array([0.5, -0.2]), 0.3
        )

    def test_projection_attains_the_distance(self):
        assert two_point_extremal(
            np.array([0.2, 0.1]), 0.2, np.array([0.6, 0.1]), 0.6
        )

    def test_strict_margin_is_not_extremal(self):
        assert not two_point_extremal(
            np.array([0.2, 0.1]), 0.1, np.array([0.6, 0.1]), 0.3
        )

    def test_unsolvable_pair_raises(self):
        with pytest.raises(UnsolvablePair):
            two_point_extremal(np.array([0.2, 0.0]), 0.0, np.array([0.3, 0.0]), 0.9)


class TestIsDegenerate:
    def test_origin_pair_witness(self):
        # |target| equals the max node coordinate modulus: pair (0, 1) extremal
        z = np.array([0.5, 0.2])
        w = np.array([0.1, -0.6])
        p = PickProblem(
            np.vstack([np.zeros(2), z, w]), np.array([0.0, 0.5, 0.1])
        )
        flag, witness = is_degenerate(p)
        assert flag and witness == (0, 1)

    def test_strict_margins_non_degenerate(self):
        rng = np.random.default_rng(0)
        g = random_geodesic_params(rng, 2)
        p = problem_from_geodesic(g)
        flag, witness = is_degenerate(p)
        assert not flag and witness is None


class TestDimension:
    def test_one_dimensional_pinned_example(self):
        # second coordinate shrunk below the square of the first: strict margin
        z = np.array([0.5, 0.25 * 0.8])
        w = np.array([-0.4, 0.16 * 0.8])
        p = PickProblem(
            np.vstack([np.zeros(2), z, w]), np.array([0.0, 0.3, -0.2])
        )
        cls = dimension(p)
        assert cls.dimension == 1 and cls.witness_coordinate == 0
        assert not cls.boundary_case

    def test_boundary_equality_is_flagged(self):
        # second coordinate exactly the square of the first: the slack
        # comparison sits on the decision boundary
        z = np.array([0.5, 0.25])
        w = np.array([-0.4, 0.16])
        p = PickProblem(
            np.vstack([np.zeros(2), z, w]), np.array([0.0, 0.3, -0.2])
        )
        cls = dimension(p)
        assert cls.dimension == 1 and cls.boundary_case

    def test_manufactured_one_dimensional_tridisc(self):
        rng = np.random.default_rng(1)
        for _ in range(5):
            p = one_dimensional_tridisc(rng)
            cls = classify(p)
            assert not cls.degenerate
            assert cls.dimension == 1 and cls.witness_coordinate == 0

    def test_manufactured_two_dimensional_tridisc(self):
        rng = np.random.default_rng(2)
        for _ in range(5):
            p, planted = two_dimensional_tridisc(rng)
            cls = classify(p)
            assert not cls.degenerate
            assert cls.dimension == 2 and cls.witness_pair == (0, 1)
            assert gauge_error(planted, cls.geodesic) <= 1e-7

    def test_full_dimension_from_interior_data(self):
        rng = np.random.default_rng(3)
        for n in (2, 3):
            for _ in range(4):
                g = random_geodesic_params(rng, n)
                p = problem_from_geodesic(g)
                cls = classify(p)
                assert not cls.degenerate
                assert cls.dimension == n
                assert gauge_error(g, cls.geodesic) <= 1e-7

    def test_permutation_invariance_two_dimensional(self):
        rng = np.random.default_rng(4)
        p, _ = two_dimensional_tridisc(rng)
        for perm in permutations(range(3)):
            q = permute_problem(p, perm)
            cls = classify(q)
            assert cls.dimension == 2
            expected_pair = tuple(sorted((perm.index(0), perm.index(1))))
            assert cls.witness_pair == expected_pair

    def test_permutation_invariance_one_dimensional(self):
        rng = np.random.default_rng(5)
        p = one_dimensional_tridisc(rng)
        for perm in permutations(range(3)):
            q = permute_problem(p, perm)
            cls = classify(q)
            assert cls.dimension == 1
            assert cls.witness_coordinate == perm.index(0)

    def test_requires_normalized_problem(self):
        p = PickProblem(
            np.array([[0.1, 0.1], [0.3, 0.2], [0.2, -0.4]]),
            np.array([0.05, 0.2, -0.1]),
        )
        with pytest.raises(ValueError):
            dimension(p)

    def test_reduction_for_four_variables(self):
        rng = np.random.default_rng(6)
        g = random_geodesic_params(rng, 4)
        p = problem_from_geodesic(g)
        cls = classify(p)
        assert not cls.degenerate
        assert cls.dimension == 3
        assert cls.reduced_indices is not None and len(cls.reduced_indices) == 3


def test_synthesis_consistency_with_dimension():
    # whatever dimension comes back, a matching interpolant reproduces the data
    from polypick.solver import solve

    rng = np.random.default_rng(7)
    p1 = one_dimensional_tridisc(rng)
    report = solve(p1)
    assert report.classification.dimension == 1
    assert len(report.interpolant.variables) == 1
    assert max(report.residuals.interpolation) <= 1e-9

    p2, _ = two_dimensional_tridisc(rng)
    report = solve(p2)
    assert report.classification.dimension == 2
    assert len(report.interpolant.variables) == 2
    assert max(report.residuals.interpolation) <= 1e-9
