"""One-variable Pick machinery on the unit disc.

Pick matrices decide solvability, a scale-invariant eigenvalue band decides
extremality, and extremal three-point data are interpolated explicitly by a
Blaschke product of degree at most two via one step of Schur (Nevanlinna)
reduction.  Eigenvalues of the 2x2 and 3x3 Hermitian matrices are computed in
closed form so the decisions are deterministic and dependency-free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NodesNotDistinct, NotExtremal, UnsolvableDatum
from .hyperbolic import BlaschkeProduct, mobius, require_in_disc, unimodular

STRICTLY_SOLVABLE = "strictly_solvable"
EXTREMAL = "extremal"
UNSOLVABLE = "unsolvable"

#: relative width of the extremality band: |min eig| <= band * trace
EXTREMALITY_BAND = 1e-9

#: reduced targets with modulus above 1 - _BOUNDARY_BAND take the degree-1 route
_BOUNDARY_BAND = 1e-8

_INTERP_TOL = 1e-10


def _det3(h: np.ndarray) -> complex:
    return (
        h[0, 0] * (h[1, 1] * h[2, 2] - h[1, 2] * h[2, 1])
        - h[0, 1] * (h[1, 0] * h[2, 2] - h[1, 2] * h[2, 0])
        + h[0, 2] * (h[1, 0] * h[2, 1] - h[1, 1] * h[2, 0])
    )


def hermitian_eigenvalues(h: np.ndarray) -> np.ndarray:
    """Eigenvalues of a 1x1, 2x2 or 3x3 Hermitian matrix, ascending.

    Closed-form characteristic-polynomial solutions (trigonometric method for
    3x3); no iterative eigensolver is involved.
    """
    h = np.asarray(h, dtype=complex)
    n = h.shape[0]
    if n == 1:
        return np.array([h[0, 0].real])
    if n == 2:
        m = 0.5 * (h[0, 0].real + h[1, 1].real)
        r = math.hypot(0.5 * (h[0, 0].real - h[1, 1].real), abs(h[0, 1]))
        return np.array([m - r, m + r])
    if n == 3:
        p1 = abs(h[0, 1]) ** 2 + abs(h[0, 2]) ** 2 + abs(h[1, 2]) ** 2
        q = (h[0, 0].real + h[1, 1].real + h[2, 2].real) / 3.0
        d0, d1, d2 = h[0, 0].real - q, h[1, 1].real - q, h[2, 2].real - q
        p2 = d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * p1
        if p2 <= 0.0:
            return np.array([q, q, q])
        p = math.sqrt(p2 / 6.0)
        b = (h - q * np.eye(3)) / p
        r = _det3(b).real / 2.0
        r = min(1.0, max(-1.0, r))
        phi = math.acos(r) / 3.0
        e_hi = q + 2.0 * p * math.cos(phi)
        e_lo = q + 2.0 * p * math.cos(phi + 2.0 * math.pi / 3.0)
        e_mid = 3.0 * q - e_hi - e_lo
        return np.array(sorted([e_lo, e_mid, e_hi]))
    raise ValueError("closed-form eigenvalues implemented for sizes 1..3 only")


def _validate_disc_data(nodes, targets):
    nodes = require_in_disc(nodes, "nodes").ravel()
    targets = require_in_disc(targets, "targets").ravel()
    if nodes.shape != targets.shape:
        raise ValueError("nodes and targets must have equal length")
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            if nodes[i] == nodes[j]:
                raise NodesNotDistinct(f"disc nodes {i} and {j} coincide")
    return nodes, targets


def pick_matrix(nodes, targets) -> np.ndarray:
    """Pick matrix with entries ``(1 - t_i conj(t_j)) / (1 - z_i conj(z_j))``."""
    nodes, targets = _validate_disc_data(nodes, targets)
    num = 1.0 - np.outer(targets, np.conj(targets))
    den = 1.0 - np.outer(nodes, np.conj(nodes))
    h = num / den
    return 0.5 * (h + h.conj().T)


@dataclass(frozen=True)
class DiscSolvability:
    verdict: str
    min_eigenvalue: float
    trace: float

    @property
    def band(self) -> float:
        return EXTREMALITY_BAND * self.trace


def is_solvable_disc(nodes, targets) -> DiscSolvability:
    """Eigenvalue verdict: positive definite, singular PSD, or indefinite."""
    h = pick_matrix(nodes, targets)
    eigs = hermitian_eigenvalues(h)
    min_eig = float(eigs[0])
    trace = float(np.trace(h).real)
    band = EXTREMALITY_BAND * trace
    if min_eig > band:
        verdict = STRICTLY_SOLVABLE
    elif min_eig >= -band:
        verdict = EXTREMAL
    else:
        verdict = UNSOLVABLE
    return DiscSolvability(verdict, min_eig, trace)


def _blaschke_factor_form(func, zeros) -> BlaschkeProduct:
    """Recover the unimodular prefactor of ``func`` given its zero set."""
    probes = (0.0, 0.37, -0.41j, 0.23 + 0.31j)
    best, best_mod = None, -1.0
    for q in probes:
        den = np.prod([mobius(z, q) for z in zeros]) if zeros else 1.0
        if abs(den) > best_mod:
            best, best_mod = q, abs(den)
    den = np.prod([mobius(z, best) for z in zeros]) if zeros else 1.0
    u = complex(func(best) / den)
    if abs(abs(u) - 1.0) > 1e-8:
        raise NotExtremal("constructed interpolant is not inner; datum not extremal")
    return BlaschkeProduct(unimodular(u), tuple(zeros))


def _degree_one(z1: complex, l1: complex, mu: complex) -> BlaschkeProduct:
    # f(lam) = m_{l1}(mu * m_{z1}(lam)), a disc automorphism
    root = mobius(z1, np.conj(mu) * l1)
    return _blaschke_factor_form(lambda lam: mobius(l1, mu * mobius(z1, lam)), [root])


def blaschke_interpolate(nodes, targets) -> BlaschkeProduct:
    """Interpolate an extremal three-point disc datum by a Blaschke product.

    One Schur reduction step peels the pivot node (the node equal to zero when
    present, otherwise the first), the reduced two-point extremal problem is
    solved by the explicit disc automorphism through its data, and the result
    is recomposed.  Degree is at most two; the residual at all three nodes is
    verified to ``1e-10``.

    Raises :class:`NotExtremal` when the datum is strictly solvable or
    unsolvable per :func:`is_solvable_disc`.
    """
    nodes, targets = _validate_disc_data(nodes, targets)
    if len(nodes) != 3:
        raise ValueError("blaschke_interpolate expects exactly three points")
    verdict = is_solvable_disc(nodes, targets)
    if verdict.verdict != EXTREMAL:
        raise NotExtremal(
            f"datum is {verdict.verdict} (min eigenvalue {verdict.min_eigenvalue:.3e})"
        )

    pivot = 0
    for i, z in enumerate(nodes):
        if abs(z) <= 1e-15:
            pivot = i
            break
    order = [pivot] + [i for i in range(3) if i != pivot]
    (z1, z2, z3) = nodes[order]
    (l1, l2, l3) = targets[order]

    mu2 = mobius(l1, l2) / mobius(z1, z2)
    mu3 = mobius(l1, l3) / mobius(z1, z3)

    if max(abs(mu2), abs(mu3)) >= 1.0 - _BOUNDARY_BAND:
        # a pivot pair is extremal: the reduced interpolant is a unimodular
        # constant and the solution has degree one
        mu = unimodular(mu2 if abs(mu2) >= abs(mu3) else mu3)
        result = _degree_one(z1, l1, mu)
    elif abs(mu2 - mu3) <= 1e-12:
        result = _degree_one(z1, l1, mu2)
    else:
        ratio = mobius(mu2, mu3) / mobius(z2, z3)
        phi = unimodular(ratio)
        b = mobius(z2, np.conj(phi) * mu2)           # zero of the automorphism h

        def h(lam):
            return mobius(mu2, phi * mobius(z2, lam))

        hb = _blaschke_factor_form(h, [b])
        c = hb.factor
        # zeros of m_{l1}(c * m_b * m_{z1}) solve a quadratic with nonzero lead
        coeffs = [
            c - l1 * np.conj(b) * np.conj(z1),
            -(c * (b + z1) - l1 * (np.conj(b) + np.conj(z1))),
            c * b * z1 - l1,
        ]
        roots = np.roots(coeffs)
        if np.any(np.abs(roots) >= 1.0):
            raise NotExtremal("interpolant zeros left the disc; datum not extremal")
        roots = sorted(roots, key=lambda r: (r.real, r.imag))
        result = _blaschke_factor_form(
            lambda lam: mobius(l1, c * mobius(b, lam) * mobius(z1, lam)), roots
        )

    residual = max(abs(result(z) - l) for z, l in zip(nodes, targets))
    if residual > _INTERP_TOL:
        raise NotExtremal(
            f"interpolation residual {residual:.3e} exceeds {_INTERP_TOL:.0e}"
        )
    return result


def mobius_interpolant(z1: complex, l1: complex, z2: complex, l2: complex) -> BlaschkeProduct:
    """Degree-(at most)-one solution of an extremal two-point disc datum.

    Requires ``p(l1, l2) == p(z1, z2)`` within the decision band; the result
    is the unique disc automorphism through the two conditions.
    """
    if z1 == z2:
        raise NodesNotDistinct("two-point interpolant needs distinct nodes")
    num = mobius(l1, l2)
    den = mobius(z1, z2)
    if abs(abs(num) - abs(den)) > 1e-7 * max(1.0, abs(den)):
        raise NotExtremal(
            f"pair is not extremal: target gap {abs(num):.12g}, node gap {abs(den):.12g}"
        )
    phi = unimodular(num / den)
    root = mobius(z1, np.conj(phi) * l1)
    return _blaschke_factor_form(lambda lam: mobius(l1, phi * mobius(z1, lam)), [root])


def disc_extremal_scale(nodes, targets, *, tol: float = 1e-14) -> float:
    """Unique ``s > 0`` making the datum ``(nodes, s * targets)`` extremal.

    Bisection against the Pick-matrix eigenvalue test; the minimum eigenvalue
    is non-increasing in ``s``, which makes the bracket valid.
    """
    nodes, targets = _validate_disc_data(nodes, targets)
    peak = float(np.max(np.abs(targets)))
    if peak == 0.0:
        raise ValueError("target direction must be nonzero")

    def min_eig(s: float) -> float:
        return float(hermitian_eigenvalues(pick_matrix(nodes, s * targets))[0])

    hi = (1.0 - 1e-12) / peak
    if min_eig(hi) >= 0.0:
        raise UnsolvableDatum(
            "no extremal scale below the boundary; datum direction is degenerate"
        )
    lo = 0.0
    # bisect on the raw eigenvalue sign, returning the solvable endpoint so
    # the result classifies as extremal rather than marginally unsolvable
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if min_eig(mid) < 0.0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= tol * max(1.0, hi):
            break
    return lo
