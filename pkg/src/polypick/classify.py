"""Degeneracy and dimension predicates for normalized three-point problems.

A problem is degenerate when some two-point subproblem is already extremal
(target distance equals the max coordinate distance).  A non-degenerate
problem is one-dimensional when a dominating coordinate carries the nodes on
a disc of the form ``lam -> (lam, lam phi_1(lam), ...)``; on the tridisc it
is two-dimensional when some coordinate pair inverts as a bidisc problem and
the remaining coordinate has strict Schwarz-Pick slack against the recovered
base points.  Otherwise the dimension is maximal and the full inversion is
the witness.

Comparisons near region boundaries are never silently classified: any
deciding comparison inside the hysteresis band sets ``boundary_case`` and
the verdict notes carry both candidates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateData,
    LowerDimensional,
    NoConvergence,
    UnsolvablePair,
)
from .geodesic import (
    GeodesicParams,
    InversionDiagnostics,
    ProjectiveTarget,
    invert_phi,
)
from .hyperbolic import (
    DECISION_BAND,
    PickProblem,
    polydisc_distance,
    pseudo_hyperbolic,
)
from .magic import caratheodory_reduce


def _banded(a: float, b: float, band: float) -> int:
    """Three-way comparison: -1 below, +1 above, 0 inside the band."""
    if a < b - band:
        return -1
    if a > b + band:
        return 1
    return 0


def two_point_extremal(z_i, lam_i, z_j, lam_j, *, band: float = DECISION_BAND) -> bool:
    """Whether the subproblem ``z_i -> lam_i, z_j -> lam_j`` is extremal.

    True iff the target distance equals the polydisc distance of the nodes
    within the decision band.  Raises :class:`UnsolvablePair` when the target
    distance exceeds the node distance beyond the band.
    """
    z_i = np.asarray(z_i, dtype=complex).ravel()
    z_j = np.asarray(z_j, dtype=complex).ravel()
    if np.array_equal(z_i, z_j):
        raise ValueError("two-point test requires distinct nodes")
    target_d = pseudo_hyperbolic(complex(lam_i), complex(lam_j))
    node_d = polydisc_distance(z_i, z_j)
    cmp = _banded(target_d, node_d, band)
    if cmp > 0:
        raise UnsolvablePair(
            f"target distance {target_d:.12g} exceeds node distance {node_d:.12g}"
        )
    return cmp == 0


def is_degenerate(p: PickProblem, *, band: float = DECISION_BAND):
    """Check all three two-point subproblems; returns ``(flag, witness)``.

    The witness is the first extremal pair in the order (0,1), (0,2), (1,2).
    """
    for i, j in ((0, 1), (0, 2), (1, 2)):
        if two_point_extremal(
            p.nodes[i], p.targets[i], p.nodes[j], p.targets[j], band=band
        ):
            return True, (i, j)
    return False, None


@dataclass(frozen=True)
class Classification:
    """Primary verdict for a normalized three-point problem."""

    degenerate: bool
    degenerate_witness: tuple | None = None
    dimension: int | None = None
    witness_coordinate: int | None = None
    witness_pair: tuple | None = None
    reduced_indices: tuple | None = None
    geodesic: GeodesicParams | None = None
    diagnostics: InversionDiagnostics | None = None
    boundary_case: bool = False
    notes: tuple = field(default_factory=tuple)


def _dominating_coordinate(z, w, band: float):
    """First coordinate carrying the nodes on a one-variable disc, if any.

    Coordinate ``c`` qualifies when every other coordinate either is a common
    unimodular multiple of it or satisfies the strict Schwarz-Pick conditions
    ``|z_j| < |z_c|``, ``|w_j| < |w_c|``, ``p(z_j/z_c, w_j/w_c) < p(z_c, w_c)``.
    Returns ``(coordinate, boundary_flag)`` or ``(None, False)``.
    """
    n = len(z)
    for c in range(n):
        if abs(z[c]) <= band or abs(w[c]) <= band:
            continue
        ok = True
        touched_band = False
        for j in range(n):
            if j == c:
                continue
            rz = z[j] / z[c]
            rw = w[j] / w[c]
            if abs(abs(rz) - 1.0) <= band and abs(rz - rw) <= band:
                continue  # proportional branch: z_j = om z_c, w_j = om w_c
            cz = _banded(abs(z[j]), abs(z[c]), band)
            cw = _banded(abs(w[j]), abs(w[c]), band)
            if cz > 0 or cw > 0:
                ok = False
                break
            slack = _banded(pseudo_hyperbolic(rz, rw), pseudo_hyperbolic(z[c], w[c]), band)
            if slack > 0:
                ok = False
                break
            if cz == 0 or cw == 0 or slack == 0:
                touched_band = True
        if ok:
            return c, touched_band
    return None, False


_PAIR_ORDER = ((0, 1), (0, 2), (1, 2))


def dimension(p: PickProblem, *, band: float = DECISION_BAND) -> Classification:
    """Dimension verdict of a normalized, non-degenerate problem.

    Pairs for the two-dimensional test on the tridisc are tried in the fixed
    order (0,1), (0,2), (1,2); the first success wins.  For dimension ``n``
    the full inversion is the witness; for four or more variables the full
    inversion is reduced to three active coordinates.
    """
    if not p.is_normalized():
        raise ValueError("dimension expects a normalized problem")
    n = p.n
    z, w = p.nodes[1], p.nodes[2]
    sigma, tau = p.targets[1], p.targets[2]
    notes = []

    coord, touched = _dominating_coordinate(z, w, band)
    if coord is not None:
        if touched:
            notes.append(
                f"coordinate {coord} dominates only up to the decision band; "
                "candidate dimensions 1 and higher"
            )
        return Classification(
            degenerate=False,
            dimension=1,
            witness_coordinate=coord,
            boundary_case=touched,
            notes=tuple(notes),
        )

    xi = ProjectiveTarget(sigma, tau)

    if n == 3:
        for i, j in _PAIR_ORDER:
            # the pair data must itself be maximal bidisc data: a dominating
            # coordinate inside the pair rules it out before inverting
            if _dominating_coordinate(z[[i, j]], w[[i, j]], band)[0] is not None:
                continue
            try:
                g2, diag = invert_phi(z[[i, j]], w[[i, j]], xi)
            except (DegenerateData, LowerDimensional, NoConvergence):
                continue
            m = next(k for k in range(3) if k not in (i, j))
            cz = _banded(abs(z[m]), abs(g2.x), band)
            cw = _banded(abs(w[m]), abs(g2.y), band)
            if cz > 0 or cw > 0:
                continue
            slack = _banded(
                pseudo_hyperbolic(z[m] / g2.x, w[m] / g2.y),
                pseudo_hyperbolic(g2.x, g2.y),
                band,
            )
            if slack > 0:
                continue
            boundary = slack == 0 or cz == 0 or cw == 0
            if boundary:
                notes.append(
                    f"pair ({i},{j}): third-coordinate slack inside the decision "
                    "band; candidate dimensions 2 and 3"
                )
            return Classification(
                degenerate=False,
                dimension=2,
                witness_pair=(i, j),
                geodesic=g2,
                diagnostics=diag,
                boundary_case=boundary,
                notes=tuple(notes),
            )

    g, diag = invert_phi(z, w, xi)
    if n <= 3:
        return Classification(
            degenerate=False,
            dimension=n,
            geodesic=g,
            diagnostics=diag,
            notes=tuple(notes),
        )
    indices, weights = caratheodory_reduce(g.alpha, g.t)
    active = tuple(i for i, wt in zip(indices, weights) if wt > 0.0)
    return Classification(
        degenerate=False,
        dimension=len(active),
        reduced_indices=indices,
        geodesic=g,
        diagnostics=diag,
        notes=tuple(notes),
    )


def classify(p: PickProblem, *, band: float = DECISION_BAND) -> Classification:
    """Full classification: degeneracy first, then dimension."""
    degenerate, witness = is_degenerate(p, band=band)
    if degenerate:
        return Classification(degenerate=True, degenerate_witness=witness)
    return dimension(p, band=band)
