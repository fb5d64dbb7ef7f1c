"""Independent bidisc solvability oracle via the two-kernel decomposition.

A three-point bidisc problem is solvable iff there are PSD matrices Gamma,
Delta with

    1 - t_i conj(t_j) = (1 - z_i^1 conj(z_j^1)) Gamma_ij
                        + (1 - z_i^2 conj(z_j^2)) Delta_ij.

Delta is eliminated entrywise, leaving the nine real parameters of the
Hermitian Gamma.  The penalty (squared distance of both matrices to the PSD
cone) is convex in Gamma, so a quasi-Newton descent from deterministic starts
settles feasibility: a feasible answer returns a certificate that satisfies
the identity exactly by construction and is PSD within ``1e-9``; an
infeasible answer carries the best remaining penalty as a heuristic margin
(no dual certificate is produced).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .hyperbolic import require_in_disc

#: eigenvalue floor for accepting a certificate as PSD
PSD_FLOOR = 1e-9

_N_RANDOM_STARTS = 11


@dataclass(frozen=True)
class AglerCertificate:
    gamma: np.ndarray
    delta: np.ndarray
    residual: float          # max entrywise violation of the identity
    min_eigenvalue: float    # over both matrices


@dataclass(frozen=True)
class AglerResult:
    feasible: bool
    certificate: AglerCertificate | None
    margin: float            # best penalty reached (0 when feasible)


def _pack(h: np.ndarray) -> np.ndarray:
    return np.array(
        [
            h[0, 0].real, h[1, 1].real, h[2, 2].real,
            h[0, 1].real, h[0, 1].imag,
            h[0, 2].real, h[0, 2].imag,
            h[1, 2].real, h[1, 2].imag,
        ]
    )


def _unpack(p: np.ndarray) -> np.ndarray:
    h = np.array(
        [
            [p[0], p[3] + 1j * p[4], p[5] + 1j * p[6]],
            [p[3] - 1j * p[4], p[1], p[7] + 1j * p[8]],
            [p[5] - 1j * p[6], p[7] - 1j * p[8], p[2]],
        ],
        dtype=complex,
    )
    return h


def _grad_from_matrix(g: np.ndarray) -> np.ndarray:
    return np.array(
        [
            g[0, 0].real, g[1, 1].real, g[2, 2].real,
            2.0 * g[0, 1].real, 2.0 * g[0, 1].imag,
            2.0 * g[0, 2].real, 2.0 * g[0, 2].imag,
            2.0 * g[1, 2].real, 2.0 * g[1, 2].imag,
        ]
    )


def _neg_part(h: np.ndarray):
    """Squared distance to the PSD cone and its Hermitian gradient."""
    vals, vecs = np.linalg.eigh(h)
    neg = np.minimum(vals, 0.0)
    value = float(np.sum(neg * neg))
    grad = (vecs * (2.0 * neg)) @ vecs.conj().T
    return value, grad


def _kernel_data(nodes, targets):
    nodes = require_in_disc(nodes, "nodes")
    targets = require_in_disc(targets, "targets").ravel()
    if nodes.shape != (3, 2) or targets.shape != (3,):
        raise ValueError("oracle expects three bidisc nodes and three targets")
    k = 1.0 - np.outer(targets, np.conj(targets))
    a = 1.0 - np.outer(nodes[:, 0], np.conj(nodes[:, 0]))
    b = 1.0 - np.outer(nodes[:, 1], np.conj(nodes[:, 1]))
    return k, a, b


def _starts(nodes):
    szego = 1.0 / (1.0 - np.outer(nodes[:, 0], np.conj(nodes[:, 0])))
    starts = [_pack(c * szego) for c in (0.0, 0.25, 0.5, 0.75, 1.0)]
    rng = np.random.default_rng(0)
    for _ in range(_N_RANDOM_STARTS):
        m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        starts.append(_pack(0.5 * (m + m.conj().T)))
    return starts


def agler_feasible(nodes, targets, *, psd_floor: float = PSD_FLOOR) -> AglerResult:
    """Search for the two-kernel certificate of a three-point bidisc datum.

    Runs the fixed start sequence in order; the first start reaching a PSD
    pair wins.  Feasible results carry a certificate whose identity residual
    is zero by construction; infeasible results only report the best penalty
    margin, which is heuristic.
    """
    k, a, b = _kernel_data(nodes, targets)
    ratio = a / b

    def objective(p):
        gamma = _unpack(p)
        delta = (k - a * gamma) / b
        v1, g1 = _neg_part(gamma)
        v2, g2 = _neg_part(delta)
        grad_matrix = g1 - g2 * np.conj(ratio)
        return v1 + v2, _grad_from_matrix(grad_matrix)

    best_margin = np.inf
    for start in _starts(np.asarray(nodes, dtype=complex)):
        res = minimize(
            objective,
            start,
            jac=True,
            method="L-BFGS-B",
            options={"maxiter": 300, "ftol": 1e-18, "gtol": 1e-14},
        )
        gamma = _unpack(res.x)
        delta = (k - a * gamma) / b
        min_eig = float(
            min(np.linalg.eigvalsh(gamma)[0], np.linalg.eigvalsh(delta)[0])
        )
        best_margin = min(best_margin, float(res.fun))
        if min_eig >= -psd_floor:
            residual = float(np.max(np.abs(k - a * gamma - b * delta)))
            cert = AglerCertificate(gamma, delta, residual, min_eig)
            return AglerResult(True, cert, 0.0)
        if res.status == 0 and res.fun > 1e-14:
            # the penalty is convex, so a converged clearly-positive minimum
            # settles infeasibility without trying the remaining starts
            break
    return AglerResult(False, None, best_margin)


def feasibility_crossover(
    nodes, targets, lo: float = 0.5, hi: float = 1.5, rel_tol: float = 1e-3
) -> float:
    """Scale at which ``s * targets`` flips from feasible to infeasible.

    Relies on the monotonicity of feasibility along the scaling.  The bracket
    is widened geometrically if needed before bisecting.
    """
    targets = np.asarray(targets, dtype=complex).ravel()
    peak = float(np.max(np.abs(targets)))
    if peak == 0.0:
        raise ValueError("target direction must be nonzero")
    cap = (1.0 - 1e-9) / peak

    for _ in range(20):
        if not agler_feasible(nodes, lo * targets).feasible:
            lo *= 0.5
        else:
            break
    else:
        raise ValueError("could not find a feasible lower bracket")
    hi = min(hi, cap)
    for _ in range(20):
        if agler_feasible(nodes, hi * targets).feasible:
            if hi >= cap:
                raise ValueError("datum stays feasible up to the boundary")
            hi = min(hi * 1.5, cap)
        else:
            break
    else:
        raise ValueError("could not find an infeasible upper bracket")

    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if agler_feasible(nodes, mid * targets).feasible:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
