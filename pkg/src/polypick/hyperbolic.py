"""Disc automorphisms, Blaschke products, and problem normalization.

The involutive Moebius maps ``m_a(z) = (a - z) / (1 - conj(a) z)`` are the
building blocks of everything else in the package: Blaschke factors use them,
the pseudo-hyperbolic metric is ``|m_a(b)|``, and three-point problems are
normalized by applying one such map per coordinate.

All comparisons against hyperbolic distances are done on pseudo-hyperbolic
values; the two metrics are monotone equivalents (``rho = atanh(p)``), so
every inequality between distances is preserved verbatim while avoiding
``atanh`` overflow near the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NodesNotDistinct, TargetsNotDistinct

#: tolerance for algebraic identities (involutions, round trips)
ATOL_ALGEBRA = 1e-12

#: half-width of the band in which decision predicates report a boundary case
DECISION_BAND = 1e-9


def mobius(alpha: complex, lam):
    """Evaluate ``m_alpha(lam) = (alpha - lam) / (1 - conj(alpha) lam)``.

    Involutive: ``m_alpha(m_alpha(lam)) == lam``.  Accepts scalars or numpy
    arrays for ``lam``.  The denominator cannot vanish for ``|alpha| < 1`` and
    ``|lam| <= 1``.
    """
    return (alpha - lam) / (1.0 - np.conj(alpha) * lam)


def unimodular(c: complex) -> complex:
    """Project a nonzero complex number to the unit circle."""
    r = abs(c)
    if r == 0.0:
        raise ValueError("cannot normalize zero to the unit circle")
    return c / r


def pseudo_hyperbolic(a: complex, b: complex) -> float:
    """Pseudo-hyperbolic distance ``|a - b| / |1 - conj(a) b|`` on the disc.

    Symmetric, in ``[0, 1)`` for interior points, zero iff ``a == b``.
    """
    return abs(a - b) / abs(1.0 - np.conj(a) * b)


def polydisc_distance(z, w) -> float:
    """Kobayashi-type distance on the polydisc: max coordinate distance."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    return max(pseudo_hyperbolic(zk, wk) for zk, wk in zip(z.ravel(), w.ravel()))


def require_in_disc(values, name: str = "value", strict: bool = True) -> np.ndarray:
    """Validate that all entries have modulus < 1; returns a complex array."""
    arr = np.asarray(values, dtype=complex)
    limit = 1.0 if strict else 1.0 + ATOL_ALGEBRA
    if np.any(np.abs(arr) >= limit):
        raise ValueError(f"{name} must lie strictly inside the unit disc")
    return arr


@dataclass(frozen=True)
class BlaschkeProduct:
    """Finite Blaschke product ``u * prod_k m_{zeros[k]}(lam)``.

    The factors are the involutive maps ``m_a`` (not ``(lam - a)/(1 - conj(a)
    lam)``); the unimodular prefactor ``u`` absorbs the sign difference.
    Degree 0..2 in this package.
    """

    factor: complex
    zeros: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "zeros", tuple(complex(z) for z in self.zeros))
        object.__setattr__(self, "factor", complex(self.factor))
        if abs(abs(self.factor) - 1.0) > 1e-9:
            raise ValueError("Blaschke prefactor must be unimodular")
        for z in self.zeros:
            if abs(z) >= 1.0:
                raise ValueError("Blaschke zeros must lie inside the unit disc")

    @property
    def degree(self) -> int:
        return len(self.zeros)

    def __call__(self, lam):
        out = np.full_like(np.asarray(lam, dtype=complex), self.factor)
        for z in self.zeros:
            out = out * mobius(z, lam)
        if np.ndim(lam) == 0:
            return complex(out)
        return out


@dataclass(frozen=True)
class MobiusMap:
    """Disc automorphism ``z -> prefactor * m_param(z)`` with its inverse."""

    param: complex
    prefactor: complex = 1.0 + 0.0j

    def __post_init__(self):
        if abs(self.param) >= 1.0:
            raise ValueError("Moebius parameter must lie inside the unit disc")
        if abs(abs(self.prefactor) - 1.0) > 1e-9:
            raise ValueError("Moebius prefactor must be unimodular")

    def apply(self, z):
        return self.prefactor * mobius(self.param, z)

    def invert(self, w):
        # (phi * m_a)^{-1} = m_a(conj(phi) * w) because m_a is an involution
        return mobius(self.param, np.conj(self.prefactor) * w)


@dataclass(frozen=True)
class PickProblem:
    """Three nodes in the polydisc and three targets in the disc."""

    nodes: np.ndarray    # shape (3, n)
    targets: np.ndarray  # shape (3,)

    def __post_init__(self):
        nodes = np.atleast_2d(np.asarray(self.nodes, dtype=complex))
        targets = np.asarray(self.targets, dtype=complex).ravel()
        if nodes.shape[0] != 3 or targets.shape != (3,):
            raise ValueError("a Pick problem needs exactly three nodes and targets")
        require_in_disc(nodes, "nodes")
        require_in_disc(targets, "targets")
        nodes.setflags(write=False)
        targets.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "targets", targets)

    @property
    def n(self) -> int:
        return self.nodes.shape[1]

    def validate_distinct(self):
        for i in range(3):
            for j in range(i + 1, 3):
                if np.allclose(self.nodes[i], self.nodes[j], rtol=0.0, atol=0.0):
                    raise NodesNotDistinct(f"nodes {i} and {j} coincide")
                if self.targets[i] == self.targets[j]:
                    raise TargetsNotDistinct(f"targets {i} and {j} coincide")

    def is_normalized(self, atol: float = ATOL_ALGEBRA) -> bool:
        return bool(
            np.all(np.abs(self.nodes[0]) <= atol) and abs(self.targets[0]) <= atol
        )


@dataclass(frozen=True)
class ProblemTransform:
    """Coordinate-wise disc maps plus one target map, with exact inverses."""

    disc_maps: tuple        # one MobiusMap per coordinate
    target_map: MobiusMap

    def apply_point(self, z):
        z = np.asarray(z, dtype=complex)
        return np.array([m.apply(z[..., k]) for k, m in enumerate(self.disc_maps)]).T

    def invert_point(self, z):
        z = np.asarray(z, dtype=complex)
        return np.array([m.invert(z[..., k]) for k, m in enumerate(self.disc_maps)]).T

    def apply_target(self, lam):
        return self.target_map.apply(lam)

    def invert_target(self, lam):
        return self.target_map.invert(lam)

    def apply_problem(self, p: PickProblem) -> PickProblem:
        return PickProblem(self.apply_point(p.nodes), self.apply_target(p.targets))

    def invert_problem(self, p: PickProblem) -> PickProblem:
        return PickProblem(self.invert_point(p.nodes), self.invert_target(p.targets))


def blaschke_eval(b: BlaschkeProduct, lam):
    """Module-level alias for evaluating a Blaschke product."""
    return b(lam)


def normalize_problem(p: PickProblem) -> tuple[PickProblem, ProblemTransform]:
    """Move the first node to ``0`` and the first target to ``0``.

    Returns the normalized problem and the transform that produced it.  The
    transform's ``apply``/``invert`` pair is exact (the maps are involutions
    with prefactor one), and pseudo-hyperbolic distances between targets and,
    per coordinate, between node coordinates are preserved.
    """
    p.validate_distinct()
    # prefactor -1 makes the map (z - a)/(1 - conj(a) z): the identity when
    # the problem is already normalized
    disc_maps = tuple(MobiusMap(p.nodes[0, k], -1.0) for k in range(p.n))
    target_map = MobiusMap(p.targets[0], -1.0)
    transform = ProblemTransform(disc_maps, target_map)
    return transform.apply_problem(p), transform
