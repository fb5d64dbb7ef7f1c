"""End-to-end solve of a three-point problem, with verification.

Pipeline: normalize, reject degenerate data to the two-point route, classify
the dimension, recover the geodesic by inversion, synthesize the rational
inner interpolant as a composition tree, and certify extremality
constructively (geodesic + left inverse + degree-two composed Blaschke
product).  Non-extremal inputs are rejected with the computed extremal scale
rather than silently rescaled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import agler
from .classify import Classification, dimension, is_degenerate
from .errors import (
    DegenerateCombination,
    IncompatibleDegenerateThirdValue,
    NotExtremalDatum,
    PolypickError,
    UnsolvableDatum,
    UnsolvablePair,
)
from .geodesic import GeodesicParams, InversionDiagnostics, geodesic_eval
from .hyperbolic import (
    DECISION_BAND,
    BlaschkeProduct,
    PickProblem,
    ProblemTransform,
    mobius,
    normalize_problem,
    pseudo_hyperbolic,
    unimodular,
)
from .magic import (
    RationalInnerFunction,
    build_left_inverse,
    caratheodory_reduce,
    embed_variables,
)
from .sampling import boundary_shell_points, halton_polydisc, sample_lambdas
from .schur_pick import (
    EXTREMAL,
    STRICTLY_SOLVABLE,
    blaschke_interpolate,
    disc_extremal_scale,
    is_solvable_disc,
    mobius_interpolant,
)

#: tolerance on |scale - 1| for accepting given targets as extremal
SCALE_BAND = 1e-9

_THIRD_VALUE_TOL = 1e-9


@dataclass(frozen=True)
class CoordinateInterpolant:
    """One-variable interpolant: a Blaschke product of a single coordinate."""

    coordinate: int
    blaschke: BlaschkeProduct

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return self.blaschke(z[..., self.coordinate])

    @property
    def variables(self) -> tuple:
        return (self.coordinate,)


@dataclass(frozen=True)
class ExtremalScaleInfo:
    scale: float
    extremal_targets: tuple
    phase: complex


@dataclass(frozen=True)
class Residuals:
    interpolation: tuple
    left_inverse: float | None
    sup_norm_sample: float | None
    convex_combination: float | None


@dataclass(frozen=True)
class SolveReport:
    """Everything the solve produced, on normalized coordinates.

    ``interpolant`` acts on the normalized problem; :meth:`evaluate` maps
    points of the original problem through the recorded transform.
    """

    problem: PickProblem
    normalized_problem: PickProblem
    transform: ProblemTransform
    classification: Classification
    geodesic: GeodesicParams | None
    geodesic_variables: tuple | None
    interpolant: RationalInnerFunction | CoordinateInterpolant
    phase: complex
    composed_blaschke: BlaschkeProduct
    extremal_scale_info: ExtremalScaleInfo
    residuals: Residuals
    diagnostics: InversionDiagnostics | None

    @property
    def n(self) -> int:
        return self.problem.n

    def evaluate_normalized(self, z):
        return self.interpolant(z)

    def evaluate(self, z):
        mapped = self.transform.apply_point(np.asarray(z, dtype=complex))
        return self.transform.invert_target(self.interpolant(mapped))


def _geodesic_points(g: GeodesicParams, variables, n: int, lams) -> np.ndarray:
    """Polydisc points carrying the geodesic on ``variables``, zero elsewhere."""
    base = geodesic_eval(g, lams)
    pts = np.zeros(base.shape[:-1] + (n,), dtype=complex)
    for col, var in enumerate(variables):
        pts[..., var] = base[..., col]
    return pts


def _convex_combination_residual(g: GeodesicParams) -> float:
    active = [i for i in range(g.n) if g.t[i] > 0.0]
    pts = g.alpha[active]
    gamma = g.gamma
    if len(active) == 1:
        return float(abs(pts[0] - gamma))
    if len(active) == 2:
        d = pts[0] - pts[1]
        s = ((gamma - pts[1]) * np.conj(d)).real / abs(d) ** 2
        resid = abs(s * pts[0] + (1 - s) * pts[1] - gamma)
        violation = max(0.0, -s, s - 1.0)
        return float(max(resid, violation))
    system = np.array(
        [[1.0] * len(active), [p.real for p in pts], [p.imag for p in pts]]
    )
    rhs = np.array([1.0, gamma.real, gamma.imag])
    sol, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    resid = abs(complex(np.dot(sol, pts)) - gamma)
    violation = max(0.0, float(-np.min(sol)), float(np.max(sol) - 1.0))
    return float(max(resid, violation))


def _interp_residuals(norm_p: PickProblem, f) -> tuple:
    return tuple(
        float(abs(f(norm_p.nodes[k]) - norm_p.targets[k])) for k in range(3)
    )


def _sup_norm(f, n: int, budget: int) -> float | None:
    if budget <= 0:
        return None
    interior = halton_polydisc(budget, n)
    shells = boundary_shell_points(max(3, budget // 8), n)
    vals = np.abs(f(np.vstack([interior, shells])))
    return float(np.max(vals))


def _left_inverse_residual(
    f, g: GeodesicParams, variables, n: int, composed: BlaschkeProduct
) -> float:
    lams = sample_lambdas(50, radius=0.9)
    pts = _geodesic_points(g, variables, n, lams)
    return float(np.max(np.abs(f(pts) - composed(lams))))


def _left_inverse_with_fallback(alpha, omega, t) -> RationalInnerFunction:
    from itertools import permutations

    try:
        return build_left_inverse(alpha, omega, t, association="left")
    except DegenerateCombination:
        pass
    try:
        return build_left_inverse(alpha, omega, t, association="right")
    except DegenerateCombination:
        pass
    active = [i for i in range(len(alpha)) if t[i] > 0.0]
    for order in permutations(active):
        shape = order[0]
        for idx in order[1:]:
            shape = (shape, idx)
        try:
            return build_left_inverse(alpha, omega, t, association=shape)
        except DegenerateCombination:
            continue
    raise DegenerateCombination(
        "no association order avoids a degenerate intermediate combination"
    )


def _coordinate_report(
    p, norm_p, transform, cls, coord, blaschke, diagnostics=None, sample_budget=1024
) -> SolveReport:
    interp = CoordinateInterpolant(coord, blaschke)
    residuals = Residuals(
        interpolation=_interp_residuals(norm_p, interp),
        left_inverse=None,
        sup_norm_sample=_sup_norm(interp, norm_p.n, sample_budget),
        convex_combination=None,
    )
    return SolveReport(
        problem=p,
        normalized_problem=norm_p,
        transform=transform,
        classification=cls,
        geodesic=None,
        geodesic_variables=None,
        interpolant=interp,
        phase=1.0 + 0.0j,
        composed_blaschke=blaschke,
        extremal_scale_info=ExtremalScaleInfo(
            1.0, (norm_p.targets[1], norm_p.targets[2]), 1.0 + 0.0j
        ),
        residuals=residuals,
        diagnostics=diagnostics,
    )


def _solve_disc_route(p, norm_p, transform, cls, coord, sample_budget) -> SolveReport:
    nodes = norm_p.nodes[:, coord]
    targets = norm_p.targets
    verdict = is_solvable_disc(nodes, targets)
    if verdict.verdict == STRICTLY_SOLVABLE:
        try:
            scale = disc_extremal_scale(nodes, targets)
        except UnsolvableDatum:
            scale = None
        raise NotExtremalDatum(
            f"targets lie strictly inside the extremal scale {scale!r}",
            extremal_scale=scale,
        )
    if verdict.verdict != EXTREMAL:
        raise UnsolvableDatum(
            f"disc datum unsolvable (min eigenvalue {verdict.min_eigenvalue:.3e})"
        )
    blaschke = blaschke_interpolate(nodes, targets)
    return _coordinate_report(
        p, norm_p, transform, cls, coord, blaschke, sample_budget=sample_budget
    )


def _solve_degenerate(p, norm_p, transform, pair, band, sample_budget) -> SolveReport:
    i, j = pair
    zi, zj = norm_p.nodes[i], norm_p.nodes[j]
    coord = int(
        np.argmax([pseudo_hyperbolic(zi[k], zj[k]) for k in range(norm_p.n)])
    )
    blaschke = mobius_interpolant(
        zi[coord], norm_p.targets[i], zj[coord], norm_p.targets[j]
    )
    rest = next(k for k in range(3) if k not in pair)
    third = abs(blaschke(norm_p.nodes[rest][coord]) - norm_p.targets[rest])
    if third > _THIRD_VALUE_TOL:
        raise IncompatibleDegenerateThirdValue(
            f"extremal pair {pair} forces a one-variable solution that misses "
            f"the third value by {third:.3e}"
        )
    cls = Classification(
        degenerate=True, degenerate_witness=pair, witness_coordinate=coord
    )
    return _coordinate_report(
        p, norm_p, transform, cls, coord, blaschke, sample_budget=sample_budget
    )


def _solve_geodesic_route(p, norm_p, transform, cls, sample_budget) -> SolveReport:
    n = norm_p.n
    sigma, tau = norm_p.targets[1], norm_p.targets[2]
    g = cls.geodesic
    variables = cls.witness_pair if (cls.dimension == 2 and n == 3) else tuple(range(n))

    gamma = g.gamma
    sig_star = g.x * mobius(gamma, g.x)
    tau_star = g.y * mobius(gamma, g.y)
    scale = abs(sig_star / sigma) if abs(sigma) > abs(tau) else abs(tau_star / tau)
    if scale > 1.0 + SCALE_BAND:
        raise NotExtremalDatum(
            f"targets lie strictly inside the extremal scale {scale:.12g}",
            extremal_scale=scale,
        )
    if scale < 1.0 - SCALE_BAND:
        raise UnsolvableDatum(
            f"targets exceed the extremal scale by factor {1.0 / scale:.12g}"
        )
    phase = unimodular(sigma / sig_star if abs(sigma) > abs(tau) else tau / tau_star)

    if n >= 4:
        indices, weights = caratheodory_reduce(g.alpha, g.t)
        t_build = np.zeros(n)
        t_build[list(indices)] = weights
        build_gamma = complex(np.dot(t_build, g.alpha))
    else:
        t_build = g.t
        build_gamma = gamma
    raw = _left_inverse_with_fallback(g.alpha, g.omega, t_build)
    if variables != tuple(range(raw.n)):
        raw = embed_variables(
            raw, {k: variables[k] for k in range(len(variables))}, n
        )
    interp = raw.scaled(phase)
    composed = BlaschkeProduct(-phase, (0.0, build_gamma))

    residuals = Residuals(
        interpolation=_interp_residuals(norm_p, interp),
        left_inverse=_left_inverse_residual(interp, g, variables, n, composed),
        sup_norm_sample=_sup_norm(interp, n, sample_budget),
        convex_combination=_convex_combination_residual(g),
    )
    if max(residuals.interpolation) > 1e-9:
        raise PolypickError(
            f"synthesized interpolant misses the data by "
            f"{max(residuals.interpolation):.3e}; inversion inconsistent"
        )
    return SolveReport(
        problem=p,
        normalized_problem=norm_p,
        transform=transform,
        classification=cls,
        geodesic=g,
        geodesic_variables=variables,
        interpolant=interp,
        phase=complex(phase),
        composed_blaschke=composed,
        extremal_scale_info=ExtremalScaleInfo(scale, (sig_star, tau_star), phase),
        residuals=residuals,
        diagnostics=cls.diagnostics,
    )


def solve(p: PickProblem, *, band: float = DECISION_BAND, sample_budget: int = 1024) -> SolveReport:
    """Solve a three-point problem end to end.

    Routes by classification: degenerate data take the two-point-driven
    one-variable solution (third value checked for compatibility);
    one-dimensional data delegate to the disc interpolator on the dominating
    coordinate; otherwise the geodesic is recovered by inversion, the
    interpolant is built as a composition tree (reduced to three active
    variables for four or more), and the composed Blaschke product is
    ``phase * lam * m_gamma(lam)`` by construction.

    Raises :class:`NotExtremalDatum` (with the extremal scale) for
    strictly-inside targets, :class:`UnsolvableDatum` for data beyond the
    extremal scale, and :class:`IncompatibleDegenerateThirdValue` on the
    degenerate route when no one-variable solution exists.
    """
    p.validate_distinct()
    norm_p, transform = normalize_problem(p)
    if p.n == 1:
        cls = Classification(degenerate=False, dimension=1, witness_coordinate=0)
        return _solve_disc_route(p, norm_p, transform, cls, 0, sample_budget)
    try:
        degenerate, pair = is_degenerate(norm_p, band=band)
    except UnsolvablePair as exc:
        raise UnsolvableDatum(str(exc)) from exc
    if degenerate:
        return _solve_degenerate(p, norm_p, transform, pair, band, sample_budget)
    cls = dimension(norm_p, band=band)
    if cls.dimension == 1:
        return _solve_disc_route(
            p, norm_p, transform, cls, cls.witness_coordinate, sample_budget
        )
    return _solve_geodesic_route(p, norm_p, transform, cls, sample_budget)


@dataclass(frozen=True)
class VerificationSummary:
    interpolation_ok: bool
    interpolation_max: float
    sup_norm_ok: bool | None
    sup_norm_max: float | None
    left_inverse_ok: bool | None
    left_inverse_max: float | None
    convex_combination_ok: bool | None
    convex_combination_value: float | None
    agler_ok: bool | None

    @property
    def all_ok(self) -> bool:
        checks = (
            self.interpolation_ok,
            self.sup_norm_ok,
            self.left_inverse_ok,
            self.convex_combination_ok,
            self.agler_ok,
        )
        return all(flag is not False for flag in checks)


def verify(report: SolveReport, sample_budget: int = 4096) -> VerificationSummary:
    """Recheck a report against independent computations.

    Recomputes interpolation residuals, samples the sup norm on
    quasi-random interior points and near-boundary shells (skipped when the
    budget is zero), replays the left-inverse identity on fifty points,
    re-solves the convex-combination certificate, and for bidisc geodesic
    routes cross-checks the two-kernel oracle at 0.99 and 1.01 scalings of
    the extremal targets.
    """
    norm_p = report.normalized_problem
    interp_res = _interp_residuals(norm_p, report.interpolant)
    interp_max = float(max(interp_res))
    interpolation_ok = bool(interp_max <= 1e-9)

    sup_max = _sup_norm(report.interpolant, norm_p.n, sample_budget)
    sup_ok = None if sup_max is None else bool(sup_max <= 1.0 + 1e-9)

    left_ok = left_max = None
    convex_ok = convex_val = None
    agler_ok = None
    if report.geodesic is not None:
        left_max = float(
            _left_inverse_residual(
                report.interpolant,
                report.geodesic,
                report.geodesic_variables,
                norm_p.n,
                report.composed_blaschke,
            )
        )
        left_ok = bool(left_max <= 1e-9)
        convex_val = float(_convex_combination_residual(report.geodesic))
        convex_ok = bool(convex_val <= 1e-9)
        if norm_p.n == 2:
            targets_star = np.array(
                [0.0, *report.extremal_scale_info.extremal_targets], dtype=complex
            )
            feasible_low = agler.agler_feasible(norm_p.nodes, 0.99 * targets_star)
            feasible_high = agler.agler_feasible(norm_p.nodes, 1.01 * targets_star)
            agler_ok = feasible_low.feasible and not feasible_high.feasible
    return VerificationSummary(
        interpolation_ok=interpolation_ok,
        interpolation_max=float(interp_max),
        sup_norm_ok=sup_ok,
        sup_norm_max=sup_max,
        left_inverse_ok=left_ok,
        left_inverse_max=left_max,
        convex_combination_ok=convex_ok,
        convex_combination_value=convex_val,
        agler_ok=agler_ok,
    )


def uniqueness_variety_sample(
    g: GeodesicParams, f, s_grid, lam_grid
) -> float:
    """Max residual of the scaled-geodesic identity over a grid.

    Evaluates ``|f(psi_s(lam)) - lam m_{s gamma}(lam)|`` where ``psi_s`` uses
    the disc parameters scaled by ``s`` with the original rotations.  For a
    left inverse built from ``g`` this is at the rounding level for every
    ``s`` in ``[0, 1]``; functions interpolating the same data but built
    differently still agree here while differing elsewhere.
    """
    lam_grid = np.asarray(lam_grid, dtype=complex).ravel()
    gamma = g.gamma
    worst = 0.0
    for s in np.asarray(s_grid, dtype=float).ravel():
        scaled = GeodesicParams(g.x, g.y, s * g.alpha, g.t, g.omega)
        pts = geodesic_eval(scaled, lam_grid)
        target = lam_grid * mobius(s * gamma, lam_grid)
        worst = max(worst, float(np.max(np.abs(f(pts) - target))))
    return worst
