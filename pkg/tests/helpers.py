"""Shared construction helpers for the test suite."""

from __future__ import annotations

import cmath

import numpy as np

from polypick.geodesic import GeodesicParams, phi_map
from polypick.hyperbolic import PickProblem, mobius, pseudo_hyperbolic
from polypick.sampling import random_disc_point, random_geodesic_params
from polypick.schur_pick import disc_extremal_scale


def gauge_error(g: GeodesicParams, h: GeodesicParams, include_t: bool = True) -> float:
    """Distance between parameter tuples up to the mirror symmetry."""

    def err(a, b):
        parts = [
            abs(a.x - b.x),
            abs(a.y - b.y),
            float(np.max(np.abs(a.alpha - b.alpha))),
        ]
        if len(a.omega):
            parts.append(float(np.max(np.abs(a.omega - b.omega))))
        if include_t:
            parts.append(float(np.max(np.abs(a.t - b.t))))
        else:
            parts.append(abs(complex(np.dot(a.t, a.alpha)) - complex(np.dot(b.t, b.alpha))))
        return max(parts)

    return min(err(g, h), err(g.mirrored(), h))


def pairwise_margins_ok(problem: PickProblem, margin: float = 0.9) -> bool:
    """All two-point subproblems strictly inside extremality by the margin."""
    for i in range(3):
        for j in range(i + 1, 3):
            node_d = max(
                pseudo_hyperbolic(problem.nodes[i][k], problem.nodes[j][k])
                for k in range(problem.n)
            )
            target_d = pseudo_hyperbolic(problem.targets[i], problem.targets[j])
            if target_d > margin * node_d:
                return False
    return True


def dominating_coordinate(z, w) -> int | None:
    """Plain nodal test used only to steer generation, not as the oracle."""
    n = len(z)
    for c in range(n):
        if abs(z[c]) < 1e-12 or abs(w[c]) < 1e-12:
            continue
        ok = True
        for j in range(n):
            if j == c:
                continue
            rz, rw = z[j] / z[c], w[j] / w[c]
            if abs(abs(rz) - 1.0) <= 1e-12 and abs(rz - rw) <= 1e-12:
                continue
            if abs(z[j]) >= abs(z[c]) or abs(w[j]) >= abs(w[c]):
                ok = False
                break
            if pseudo_hyperbolic(rz, rw) >= pseudo_hyperbolic(z[c], w[c]):
                ok = False
                break
        if ok:
            return c
    return None


def manufactured_extremal_disc(rng, spread: float = 0.85):
    """Random three-point disc datum scaled to the extremal locus by bisection."""
    while True:
        nodes = np.array([random_disc_point(rng, 0.0, spread) for _ in range(3)])
        if min(abs(nodes[0] - nodes[1]), abs(nodes[0] - nodes[2]), abs(nodes[1] - nodes[2])) < 0.1:
            continue
        direction = np.array([random_disc_point(rng, 0.1, spread) for _ in range(3)])
        if min(abs(direction[0] - direction[1]), abs(direction[0] - direction[2]),
               abs(direction[1] - direction[2])) < 0.1:
            continue
        try:
            scale = disc_extremal_scale(nodes, direction)
        except Exception:
            continue
        targets = scale * direction
        if np.max(np.abs(targets)) > 0.995:
            continue
        return nodes, targets


def one_dimensional_tridisc(rng):
    """Normalized tridisc problem interpolable by a function of coordinate 0.

    Nodes sit on ``lam -> (lam, lam phi_1(lam), lam phi_2(lam))`` with strict
    contractions ``phi_j``; targets are extremal for the coordinate-0 disc
    datum.  Returns the problem (witness coordinate is 0).
    """
    while True:
        z1 = random_disc_point(rng, 0.35, 0.8)
        w1 = random_disc_point(rng, 0.35, 0.8)
        if pseudo_hyperbolic(z1, w1) < 0.25:
            continue
        phis = []
        for _ in range(2):
            r = rng.uniform(0.3, 0.7)
            beta = random_disc_point(rng, 0.0, 0.6)
            phis.append(lambda lam, r=r, beta=beta: r * mobius(beta, lam))
        z = np.array([z1, z1 * phis[0](z1), z1 * phis[1](z1)])
        w = np.array([w1, w1 * phis[0](w1), w1 * phis[1](w1)])
        if max(abs(z[1]), abs(z[2])) > 0.9 * abs(z1):
            continue
        if max(abs(w[1]), abs(w[2])) > 0.9 * abs(w1):
            continue
        slack = max(
            pseudo_hyperbolic(z[j] / z1, w[j] / w1) for j in (1, 2)
        )
        if slack > 0.9 * pseudo_hyperbolic(z1, w1):
            continue
        direction = np.array([0.0, random_disc_point(rng, 0.2, 0.8), random_disc_point(rng, 0.2, 0.8)])
        if abs(direction[1] - direction[2]) < 0.1:
            continue
        try:
            scale = disc_extremal_scale(np.array([0.0, z1, w1]), direction)
        except Exception:
            continue
        targets = scale * direction
        if np.max(np.abs(targets)) > 0.99 or abs(targets[1]) < 0.05 or abs(targets[2]) < 0.05:
            continue
        problem = PickProblem(np.vstack([np.zeros(3), z, w]), targets)
        if not pairwise_margins_ok(problem):
            continue
        return problem


def two_dimensional_tridisc(rng):
    """Normalized tridisc problem reducible to a bidisc pair (0, 1).

    The pair carries an interior bidisc geodesic; the third coordinate is a
    strict contraction of the base points.  Returns (problem, planted
    geodesic).
    """
    while True:
        g2 = random_geodesic_params(rng, 2)
        z2, w2, xi = phi_map(g2)
        r = rng.uniform(0.3, 0.7)
        beta = random_disc_point(rng, 0.0, 0.6)
        z3 = g2.x * r * mobius(beta, g2.x)
        w3 = g2.y * r * mobius(beta, g2.y)
        if pseudo_hyperbolic(z3 / g2.x, w3 / g2.y) > 0.9 * pseudo_hyperbolic(g2.x, g2.y):
            continue
        if abs(z3) > 0.9 * abs(g2.x) or abs(w3) > 0.9 * abs(g2.y):
            continue
        z = np.append(z2, z3)
        w = np.append(w2, w3)
        if dominating_coordinate(z, w) is not None:
            continue
        gamma = g2.gamma
        targets = np.array(
            [0.0, g2.x * mobius(gamma, g2.x), g2.y * mobius(gamma, g2.y)]
        )
        if abs(targets[1]) < 0.05 or abs(targets[2]) < 0.05:
            continue
        if abs(targets[1] - targets[2]) < 0.05:
            continue
        problem = PickProblem(np.vstack([np.zeros(3), z, w]), targets)
        if not pairwise_margins_ok(problem):
            continue
        return problem, g2


def permute_problem(problem: PickProblem, perm) -> PickProblem:
    """Apply a coordinate permutation: new coordinate k is old ``perm[k]``."""
    perm = list(perm)
    return PickProblem(problem.nodes[:, perm], problem.targets)
