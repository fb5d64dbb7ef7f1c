"""Analytic discs through three nodes and the parametrization map.

``psi(lam)`` has coordinates ``rot_k * lam * m_{alpha_k}(lam)`` (first
rotation fixed to one); the map

    Phi(x, y, alpha, t, omega) = (psi(x), psi(y),
                                  [x m_{t.alpha}(x) : y m_{t.alpha}(y)])

sends the ``4n + 2`` real parameters to node/target data of the same real
dimension.  Phi is even in ``(x, y, alpha)`` and two-to-one; the inversion
below recovers the parameters by a damped Newton iteration on the square
real system, with a deterministic multistart bootstrap seeded from the data,
and reports the canonical sign-gauge representative (``Re x > 0``).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateData, LowerDimensional, NoConvergence, InconsistentRatio
from .hyperbolic import mobius, require_in_disc, unimodular
from .magic import validate_weights

#: success threshold on the sup-norm of the residual
NEWTON_TOL = 1e-11

#: hard wall keeping Newton iterates inside the open regions
_R_MAX = 1.0 - 1e-12
_T_EPS = 1e-12

#: converged weights below this are reported as a simplex-boundary hit
_T_BOUNDARY = 1e-9

_MAX_ITER = 200
_MAX_STARTS = 64


@dataclass(frozen=True)
class GeodesicParams:
    """Parameters ``(x, y, alpha, t, omega)`` of a three-node analytic disc."""

    x: complex
    y: complex
    alpha: np.ndarray
    t: np.ndarray
    omega: np.ndarray

    def __post_init__(self):
        alpha = require_in_disc(self.alpha, "alpha").ravel()
        t = validate_weights(self.t, len(alpha))
        omega = np.asarray(self.omega, dtype=complex).ravel()
        if len(omega) != len(alpha) - 1:
            raise ValueError("omega must have length n - 1")
        if np.any(np.abs(np.abs(omega) - 1.0) > 1e-9):
            raise ValueError("omega entries must be unimodular")
        for arr in (alpha, t, omega):
            arr.setflags(write=False)
        object.__setattr__(self, "x", complex(self.x))
        object.__setattr__(self, "y", complex(self.y))
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "omega", omega)
        if abs(self.x) >= 1.0 or abs(self.y) >= 1.0:
            raise ValueError("x and y must lie inside the unit disc")

    @property
    def n(self) -> int:
        return len(self.alpha)

    @property
    def gamma(self) -> complex:
        return complex(np.dot(self.t, self.alpha))

    def mirrored(self) -> "GeodesicParams":
        return GeodesicParams(-self.x, -self.y, -self.alpha, self.t, self.omega)

    def rotations(self) -> np.ndarray:
        return np.concatenate(([1.0 + 0.0j], self.omega))


@dataclass(frozen=True)
class ProjectiveTarget:
    """Point of the projective line, stored with its largest component at 1."""

    sigma: complex
    tau: complex

    def __post_init__(self):
        s, t = complex(self.sigma), complex(self.tau)
        if s == 0 and t == 0:
            raise ValueError("projective target cannot be (0, 0)")
        pivot = s if abs(s) >= abs(t) else t
        object.__setattr__(self, "sigma", s / pivot)
        object.__setattr__(self, "tau", t / pivot)

    def chordal(self, other: "ProjectiveTarget") -> float:
        cross = abs(self.sigma * other.tau - self.tau * other.sigma)
        na = math.hypot(abs(self.sigma), abs(self.tau))
        nb = math.hypot(abs(other.sigma), abs(other.tau))
        return cross / (na * nb)


@dataclass(frozen=True)
class InversionDiagnostics:
    residual_norm: float
    iterations: int
    starts_used: int
    sign_gauge: int


def geodesic_eval(g: GeodesicParams, lam):
    """Point ``psi(lam)`` of the disc; each coordinate is a Blaschke value."""
    lam = np.asarray(lam, dtype=complex)
    rot = g.rotations()
    coords = [rot[k] * lam * mobius(g.alpha[k], lam) for k in range(g.n)]
    out = np.stack(coords, axis=-1)
    return out


def phi_map(g: GeodesicParams):
    """Data ``(z, w, xi)`` reached by the parameters ``g``."""
    z = geodesic_eval(g, g.x)
    w = geodesic_eval(g, g.y)
    gamma = g.gamma
    xi = ProjectiveTarget(g.x * mobius(gamma, g.x), g.y * mobius(gamma, g.y))
    return z, w, xi


# ---------------------------------------------------------------------------
# Newton system
# ---------------------------------------------------------------------------


def _pack(g: GeodesicParams) -> np.ndarray:
    theta = [g.x.real, g.x.imag, g.y.real, g.y.imag]
    for a in g.alpha:
        theta.extend((a.real, a.imag))
    theta.extend(g.t[:-1])
    theta.extend(cmath.phase(w) for w in g.omega)
    return np.array(theta, dtype=float)


def _unpack(theta: np.ndarray, n: int):
    x = complex(theta[0], theta[1])
    y = complex(theta[2], theta[3])
    alpha = [complex(theta[4 + 2 * k], theta[5 + 2 * k]) for k in range(n)]
    t_free = theta[4 + 2 * n : 3 + 3 * n]
    t = list(t_free) + [1.0 - float(np.sum(t_free))]
    omega = [cmath.exp(1j * th) for th in theta[3 + 3 * n : 2 + 4 * n]]
    return x, y, alpha, t, omega


def _in_domain(theta: np.ndarray, n: int) -> bool:
    x, y, alpha, t, _ = _unpack(theta, n)
    if abs(x) >= _R_MAX or abs(y) >= _R_MAX:
        return False
    if any(abs(a) >= _R_MAX for a in alpha):
        return False
    return all(_T_EPS <= tk <= 1.0 - _T_EPS for tk in t)


def _residual(theta: np.ndarray, n: int, z, w, sigma: complex, tau: complex):
    x, y, alpha, t, omega = _unpack(theta, n)
    rot = [1.0 + 0.0j] + omega
    res = np.empty(4 * n + 2)
    for k in range(n):
        pk = rot[k] * x * (alpha[k] - x) / (1.0 - alpha[k].conjugate() * x)
        qk = rot[k] * y * (alpha[k] - y) / (1.0 - alpha[k].conjugate() * y)
        res[2 * k] = (pk - z[k]).real
        res[2 * k + 1] = (pk - z[k]).imag
        res[2 * n + 2 * k] = (qk - w[k]).real
        res[2 * n + 2 * k + 1] = (qk - w[k]).imag
    gamma = sum(tk * ak for tk, ak in zip(t, alpha))
    u = x * (gamma - x) / (1.0 - gamma.conjugate() * x)
    v = y * (gamma - y) / (1.0 - gamma.conjugate() * y)
    # chordal-metric cross term on the projective line
    scale = math.hypot(abs(u), abs(v)) * math.hypot(abs(sigma), abs(tau))
    cross = (u * tau - v * sigma) / max(scale, 1e-300)
    res[4 * n] = cross.real
    res[4 * n + 1] = cross.imag
    return res


def _jacobian(theta: np.ndarray, n: int, z, w, sigma, tau) -> np.ndarray:
    m = len(theta)
    jac = np.empty((m, m))
    h = 1e-7
    for j in range(m):
        tp = theta.copy()
        tm = theta.copy()
        tp[j] += h
        tm[j] -= h
        jac[:, j] = (_residual(tp, n, z, w, sigma, tau)
                     - _residual(tm, n, z, w, sigma, tau)) / (2.0 * h)
    return jac


def _line_search(theta, step, norm, n, z, w, sigma, tau):
    damp = 1.0
    for _ in range(30):
        trial = theta + damp * step
        if _in_domain(trial, n):
            trial_res = _residual(trial, n, z, w, sigma, tau)
            trial_norm = float(np.linalg.norm(trial_res))
            if trial_norm < (1.0 - 1e-4 * damp) * norm:
                return trial, trial_res, trial_norm
        damp *= 0.5
    return None


def _clamp_into_domain(theta: np.ndarray, n: int) -> np.ndarray:
    out = theta.copy()
    for base in range(0, 4 + 2 * n, 2):
        c = complex(out[base], out[base + 1])
        if abs(c) >= _R_MAX:
            c *= (_R_MAX - 1e-13) / abs(c)
            out[base], out[base + 1] = c.real, c.imag
    frees = out[4 + 2 * n : 3 + 3 * n]
    np.clip(frees, 10.0 * _T_EPS, 1.0 - 10.0 * _T_EPS, out=frees)
    return out


def _lm_rescue(theta: np.ndarray, n: int, z, w, sigma, tau):
    """Adaptive Levenberg-Marquardt polish for starts the plain Newton stalls on."""
    from scipy.optimize import least_squares

    def clamped_residual(th):
        return _residual(_clamp_into_domain(th, n), n, z, w, sigma, tau)

    sol = least_squares(
        clamped_residual,
        theta,
        method="lm",
        xtol=1e-15,
        ftol=1e-15,
        gtol=1e-15,
        max_nfev=4000,
    )
    candidate = _clamp_into_domain(sol.x, n)
    res = _residual(candidate, n, z, w, sigma, tau)
    if float(np.max(np.abs(res))) <= NEWTON_TOL and _in_domain(candidate, n):
        return candidate, float(np.linalg.norm(res)), int(sol.nfev)
    return None


def _newton(theta: np.ndarray, n: int, z, w, sigma, tau):
    start = theta
    res = _residual(theta, n, z, w, sigma, tau)
    norm = float(np.linalg.norm(res))
    for it in range(_MAX_ITER):
        if float(np.max(np.abs(res))) <= NEWTON_TOL:
            return theta, norm, it
        jac = _jacobian(theta, n, z, w, sigma, tau)
        if n <= 3:
            try:
                step = np.linalg.solve(jac, -res)
            except np.linalg.LinAlgError:
                step = np.linalg.lstsq(jac, -res, rcond=None)[0]
        else:
            # the weight fiber is (n-3)-dimensional: take minimum-norm steps
            step = np.linalg.lstsq(jac, -res, rcond=1e-12)[0]
        accepted = _line_search(theta, step, norm, n, z, w, sigma, tau)
        if accepted is None:
            # regularized fallback for near-singular Jacobians far from a root
            jtj = jac.T @ jac
            jtr = jac.T @ res
            ident = np.eye(len(theta))
            for mu in (1e-6, 1e-4, 1e-2, 1.0):
                step = np.linalg.solve(jtj + mu * ident, -jtr)
                accepted = _line_search(theta, step, norm, n, z, w, sigma, tau)
                if accepted is not None:
                    break
        if accepted is None:
            return _lm_rescue(start, n, z, w, sigma, tau)
        theta, res, norm = accepted
    if float(np.max(np.abs(res))) <= NEWTON_TOL:
        return theta, norm, _MAX_ITER
    return _lm_rescue(start, n, z, w, sigma, tau)


# ---------------------------------------------------------------------------
# Data-seeded starts
# ---------------------------------------------------------------------------


def _blaschke_preimages(a: complex, value: complex):
    """Both solutions of ``lam * m_a(lam) = value``; they lie in the disc."""
    roots = np.roots([1.0, -(a + a.conjugate() * value), value])
    return [complex(r) for r in roots]


def _ratio_candidates(zc: complex, wc: complex, x: complex, y: complex):
    """Solutions ``a`` of ``zc * y * m_a(y) = wc * x * m_a(x)`` inside the disc.

    The equation is linear in ``(a, conj a, |a|^2)``; eliminating the radial
    term reduces it to a line-conic intersection solved in closed form.
    """
    big_a = zc * y
    big_b = wc * x
    p = big_a - big_b
    q = x * y * p
    r = big_b * y - big_a * x
    s = big_b * x - big_a * y
    scale = max(abs(p), abs(q), abs(r), abs(s))
    if scale == 0.0:
        return []
    p, q, r, s = p / scale, q / scale, r / scale, s / scale

    # real/imaginary parts of p*a + q*conj(a) + r*|a|^2 + s = 0 with a = u + iv
    ku1, kv1, kr1, kc1 = p.real + q.real, -p.imag + q.imag, r.real, s.real
    ku2, kv2, kr2, kc2 = p.imag + q.imag, p.real - q.real, r.imag, s.imag

    out = []
    if abs(r) <= 1e-13:
        det = ku1 * kv2 - kv1 * ku2
        if abs(det) > 1e-15:
            u = (-kc1 * kv2 + kv1 * kc2) / det
            v = (-ku1 * kc2 + kc1 * ku2) / det
            out.append(complex(u, v))
    else:
        # eliminate |a|^2: a linear relation between u and v
        la = kr2 * ku1 - kr1 * ku2
        lb = kr2 * kv1 - kr1 * kv2
        lc = kr2 * kc1 - kr1 * kc2
        ku, kv, kr, kc = (ku1, kv1, kr1, kc1) if abs(kr1) >= abs(kr2) else (
            ku2, kv2, kr2, kc2)
        if max(abs(la), abs(lb)) <= 1e-15:
            return []
        if abs(la) >= abs(lb):
            # u = p0 + q0 v
            p0, q0 = -lc / la, -lb / la
            a2 = kr * (q0 * q0 + 1.0)
            a1 = ku * q0 + kv + 2.0 * kr * p0 * q0
            a0 = ku * p0 + kr * p0 * p0 + kc
            for v in _real_quadratic_roots(a2, a1, a0):
                out.append(complex(p0 + q0 * v, v))
        else:
            p0, q0 = -lc / lb, -la / lb
            a2 = kr * (q0 * q0 + 1.0)
            a1 = kv * q0 + ku + 2.0 * kr * p0 * q0
            a0 = kv * p0 + kr * p0 * p0 + kc
            for u in _real_quadratic_roots(a2, a1, a0):
                out.append(complex(u, p0 + q0 * u))
    return [a for a in out if abs(a) < _R_MAX]


def _real_quadratic_roots(a2: float, a1: float, a0: float):
    if abs(a2) <= 1e-15 * max(1.0, abs(a1), abs(a0)):
        if abs(a1) <= 1e-15:
            return []
        return [-a0 / a1]
    disc = a1 * a1 - 4.0 * a2 * a0
    if disc < 0.0:
        return []
    root = math.sqrt(disc)
    q = -0.5 * (a1 + math.copysign(root, a1)) if a1 != 0.0 else 0.5 * root
    if q == 0.0:
        return [0.0]
    return [q / a2, a0 / q]


def _simplex_weights(alpha, gamma: complex, n: int) -> np.ndarray:
    if n == 2:
        d = alpha[0] - alpha[1]
        if abs(d) < 1e-14:
            t0 = 0.5
        else:
            t0 = ((gamma - alpha[1]) * d.conjugate()).real / abs(d) ** 2
        t = np.array([t0, 1.0 - t0])
    else:
        system = np.array(
            [[1.0] * n, [a.real for a in alpha], [a.imag for a in alpha]]
        )
        rhs = np.array([1.0, gamma.real, gamma.imag])
        t, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    t = np.clip(t, 10.0 * _T_EPS, None)
    return t / t.sum()


def _bootstrap_starts(z, w, sigma: complex, tau: complex, n: int):
    """Assemble candidate parameter vectors from the data.

    Sixteen trial values for the first disc parameter, each giving the two
    Blaschke preimages of ``z_1`` and of ``w_1`` (four ``(x, y)`` pairs), and
    a closed-form coordinate-wise completion of the remaining parameters.
    """
    trials = [0.0 + 0.0j] + [
        rad * cmath.exp(2j * math.pi * (k + off) / 12.0)
        for rad, off in ((0.2, 0.0), (0.5, 0.5), (0.75, 0.0))
        for k in range(12)
    ]
    starts = []
    for a1 in trials:
        for x in _blaschke_preimages(a1, z[0]):
            for y in _blaschke_preimages(a1, w[0]):
                if abs(x) >= _R_MAX or abs(y) >= _R_MAX:
                    continue
                if abs(x) < 1e-8 or abs(y) < 1e-8 or abs(x - y) < 1e-8:
                    continue
                theta = _assemble(a1, x, y, z, w, sigma, tau, n)
                if theta is not None:
                    starts.append(theta)
    ranked = sorted(
        starts,
        key=lambda th: float(
            np.linalg.norm(_residual(th, n, z, w, sigma, tau))
        ),
    )
    return ranked[:_MAX_STARTS]


def _assemble(a1, x, y, z, w, sigma, tau, n):
    alpha = [a1]
    omega = []
    for k in range(1, n):
        cands = _ratio_candidates(z[k], w[k], x, y)
        if not cands:
            alpha.append(0.0 + 0.0j)
            omega.append(1.0 + 0.0j)
            continue
        # the true branch makes the implied rotation unimodular
        def rot_defect(a):
            den = x * (a - x) / (1.0 - a.conjugate() * x)
            if abs(den) < 1e-12:
                return math.inf
            return abs(abs(z[k] / den) - 1.0)

        best = min(cands, key=rot_defect)
        alpha.append(best)
        den = x * (best - x) / (1.0 - best.conjugate() * x)
        omega.append(unimodular(z[k] / den) if abs(den) > 1e-12 else 1.0 + 0.0j)

    gammas = _ratio_candidates(sigma, tau, x, y) or [
        complex(np.mean(alpha))
    ]
    best_theta, best_norm = None, math.inf
    for gamma in gammas:
        t = _simplex_weights(alpha, gamma, n)
        theta = [x.real, x.imag, y.real, y.imag]
        for a in alpha:
            theta.extend((a.real, a.imag))
        theta.extend(t[:-1])
        theta.extend(cmath.phase(om) for om in omega)
        theta = np.array(theta)
        if not _in_domain(theta, n):
            continue
        norm = float(np.linalg.norm(_residual(theta, n, z, w, sigma, tau)))
        if norm < best_norm:
            best_theta, best_norm = theta, norm
    return best_theta


# ---------------------------------------------------------------------------
# Inversion
# ---------------------------------------------------------------------------


def _precheck(z, w):
    if np.allclose(z, w, rtol=0.0, atol=1e-14):
        raise DegenerateData("nodes z and w coincide")
    if np.allclose(z, 0.0, atol=1e-14) or np.allclose(w, 0.0, atol=1e-14):
        raise DegenerateData("a node coincides with the origin")


def _as_xi(xi) -> ProjectiveTarget:
    if isinstance(xi, ProjectiveTarget):
        return xi
    return ProjectiveTarget(*xi)


def _solution_params(theta: np.ndarray, n: int) -> GeodesicParams:
    x, y, alpha, t, omega = _unpack(theta, n)
    return GeodesicParams(x, y, np.array(alpha), np.array(t), np.array(omega))


def _validate_region(g: GeodesicParams):
    if np.min(g.t) <= _T_BOUNDARY:
        raise LowerDimensional(
            "recovered weights hit the simplex boundary; reclassify the problem"
        )
    if g.n == 2 and abs(g.alpha[0] - g.alpha[1]) <= 1e-9:
        raise LowerDimensional("recovered disc parameters coincide")
    if g.n == 3:
        area = 0.5 * abs(
            ((g.alpha[1] - g.alpha[0]) * np.conj(g.alpha[2] - g.alpha[0])).imag
        )
        if area <= 1e-10:
            raise LowerDimensional("recovered disc parameters are co-linear")


def _gauge(g: GeodesicParams):
    flip = g.x.real < -1e-12 or (abs(g.x.real) <= 1e-12 and g.x.imag < 0.0)
    return (g.mirrored(), -1) if flip else (g, 1)


def invert_phi(z, w, xi, *, max_starts: int = _MAX_STARTS):
    """Recover ``(x, y, alpha, t, omega)`` from data ``(z, w, xi)``.

    Runs the ranked start sequence in order; the first start whose damped
    Newton iteration meets the tolerance wins, which makes the answer
    deterministic.  The result carries the canonical sign gauge.

    Raises :class:`DegenerateData` for data failing the pre-checks,
    :class:`LowerDimensional` when the recovered parameters sit on the
    boundary of the maximal-dimension region, and :class:`NoConvergence`
    when every start fails (data likely outside the invertible region).
    """
    z = require_in_disc(z, "z").ravel()
    w = require_in_disc(w, "w").ravel()
    if z.shape != w.shape:
        raise ValueError("z and w must have the same dimension")
    n = len(z)
    if n < 2:
        raise ValueError("inversion requires dimension at least 2")
    _precheck(z, w)
    xi = _as_xi(xi)
    sigma, tau = xi.sigma, xi.tau

    starts = _bootstrap_starts(z, w, sigma, tau, n)[:max_starts]
    if not starts:
        raise NoConvergence("no admissible start could be assembled from the data")
    for idx, theta0 in enumerate(starts):
        result = _newton(theta0, n, z, w, sigma, tau)
        if result is None:
            continue
        theta, norm, iterations = result
        g = _solution_params(theta, n)
        _validate_region(g)
        g, gauge = _gauge(g)
        diag = InversionDiagnostics(norm, iterations, idx + 1, gauge)
        return g, diag
    raise NoConvergence(
        f"all {len(starts)} Newton starts failed; data may be degenerate, "
        "lower-dimensional, or outside the invertible region"
    )


def _all_converged(z, w, xi, *, max_starts: int = _MAX_STARTS):
    """Raw (ungauged) converged parameters from every start; for testing."""
    z = np.asarray(z, dtype=complex).ravel()
    w = np.asarray(w, dtype=complex).ravel()
    xi = _as_xi(xi)
    n = len(z)
    found = []
    for theta0 in _bootstrap_starts(z, w, xi.sigma, xi.tau, n)[:max_starts]:
        result = _newton(theta0, n, z, w, xi.sigma, xi.tau)
        if result is not None:
            found.append(_solution_params(result[0], n))
    return found


def inversion_jacobian(g: GeodesicParams, z, w, xi) -> np.ndarray:
    """Finite-difference Jacobian of the square system at given parameters."""
    xi = _as_xi(xi)
    z = np.asarray(z, dtype=complex).ravel()
    w = np.asarray(w, dtype=complex).ravel()
    return _jacobian(_pack(g), g.n, z, w, xi.sigma, xi.tau)


@dataclass(frozen=True)
class ExtremalScaleResult:
    scale: float
    extremal_targets: tuple
    phase: complex
    geodesic: GeodesicParams
    diagnostics: InversionDiagnostics


def extremal_scale(z, w, sigma: complex, tau: complex) -> ExtremalScaleResult:
    """Unique positive factor making targets along ``[sigma : tau]`` extremal.

    Inverts the parametrization at the ray of ``(sigma, tau)``; the extremal
    targets are ``(x m_gamma(x), y m_gamma(y))`` and the scale is the common
    modulus ratio against the inputs.  ``phase`` is the unimodular factor
    relating the scaled inputs to the extremal targets.
    """
    if sigma == 0 and tau == 0:
        raise ValueError("(sigma, tau) cannot both vanish")
    g, diag = invert_phi(z, w, ProjectiveTarget(sigma, tau))
    gamma = g.gamma
    sig_star = g.x * mobius(gamma, g.x)
    tau_star = g.y * mobius(gamma, g.y)
    ratios = []
    if abs(sigma) > 1e-13:
        ratios.append(sig_star / sigma)
    if abs(tau) > 1e-13:
        ratios.append(tau_star / tau)
    if not ratios:
        raise InconsistentRatio("both targets are numerically zero")
    if len(ratios) == 2:
        if abs(abs(ratios[0]) - abs(ratios[1])) > 1e-9 * max(
            abs(ratios[0]), abs(ratios[1])
        ):
            raise InconsistentRatio(
                f"moduli ratios disagree: {abs(ratios[0])!r} vs {abs(ratios[1])!r}"
            )
    ratio = ratios[0]
    return ExtremalScaleResult(
        scale=abs(ratio),
        extremal_targets=(sig_star, tau_star),
        phase=unimodular(ratio),
        geodesic=g,
        diagnostics=diag,
    )
