"""Deterministic instance generation and quasi-random polydisc sampling."""

from __future__ import annotations

import cmath
import math

import numpy as np
from scipy.stats import qmc

from .geodesic import GeodesicParams, phi_map
from .hyperbolic import PickProblem, mobius


def random_disc_point(rng, r_lo: float = 0.0, r_hi: float = 0.85) -> complex:
    rad = rng.uniform(r_lo, r_hi)
    return rad * cmath.exp(1j * rng.uniform(0.0, 2.0 * math.pi))


def random_geodesic_params(
    rng,
    n: int,
    *,
    x_range=(0.15, 0.85),
    alpha_max: float = 0.75,
    min_sep: float = 0.12,
    min_area: float = 0.05,
    t_min: float = 0.1,
) -> GeodesicParams:
    """Interior parameters with margins from the region boundaries.

    Rejection-sampled so that the base points are separated, the disc
    parameters are pairwise separated (and span a triangle of area at least
    ``min_area`` for three variables), and the weights stay away from the
    simplex boundary.
    """
    while True:
        x = random_disc_point(rng, *x_range)
        y = random_disc_point(rng, *x_range)
        if abs(x - y) < 0.1:
            continue
        alpha = np.array([random_disc_point(rng, 0.0, alpha_max) for _ in range(n)])
        if any(
            abs(alpha[i] - alpha[j]) < min_sep
            for i in range(n)
            for j in range(i + 1, n)
        ):
            continue
        if n == 3:
            area = 0.5 * abs(
                ((alpha[1] - alpha[0]) * np.conj(alpha[2] - alpha[0])).imag
            )
            if area < min_area:
                continue
        t = rng.dirichlet(np.full(n, 3.0))
        if t.min() < t_min:
            continue
        omega = np.array(
            [cmath.exp(1j * rng.uniform(0.0, 2.0 * math.pi)) for _ in range(n - 1)]
        )
        return GeodesicParams(x, y, alpha, t, omega)


def problem_from_geodesic(g: GeodesicParams) -> PickProblem:
    """Normalized problem with extremal targets carried by the parameters."""
    z, w, _ = phi_map(g)
    gamma = g.gamma
    nodes = np.vstack([np.zeros(g.n, dtype=complex), z, w])
    targets = np.array(
        [0.0, g.x * mobius(gamma, g.x), g.y * mobius(gamma, g.y)], dtype=complex
    )
    return PickProblem(nodes, targets)


def halton_polydisc(count: int, n: int, *, radius: float = 0.95) -> np.ndarray:
    """Deterministic low-discrepancy points of the polydisc, shape (count, n).

    Maps an unscrambled Halton sequence through the area-preserving square
    to disc transform coordinate-wise.
    """
    sampler = qmc.Halton(d=2 * n, scramble=False)
    sampler.fast_forward(1)  # skip the origin-heavy first point
    u = sampler.random(count)
    pts = np.empty((count, n), dtype=complex)
    for k in range(n):
        rad = radius * np.sqrt(u[:, 2 * k])
        ang = 2.0 * math.pi * u[:, 2 * k + 1]
        pts[:, k] = rad * np.exp(1j * ang)
    return pts


def boundary_shell_points(count: int, n: int, *, shells=(0.9, 0.99, 0.999)) -> np.ndarray:
    """Near-boundary samples: Halton angles at fixed coordinate moduli."""
    sampler = qmc.Halton(d=n, scramble=False)
    sampler.fast_forward(1)
    per_shell = max(1, count // len(shells))
    blocks = []
    for rho in shells:
        ang = 2.0 * math.pi * sampler.random(per_shell)
        blocks.append(rho * np.exp(1j * ang))
    return np.vstack(blocks)


def sample_lambdas(count: int, *, radius: float = 0.95) -> np.ndarray:
    """Deterministic spiral of evaluation points in the disc."""
    j = np.arange(count)
    rad = radius * np.sqrt((j + 0.5) / count)
    ang = 2.0 * math.pi * ((j * 0.6180339887498949) % 1.0)
    return rad * np.exp(1j * ang)
