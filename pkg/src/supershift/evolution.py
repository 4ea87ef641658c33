"""Time evolution by rotated-contour integration of the Green's function.

``Psi(t, x) = int G(t, x, y) F(y) dy`` is evaluated on a contour deformed
into the complex plane.  For the free kernel the path is the straight line
``x + u e^{i theta}``.  For kernels with a singularity or interface at the
origin each half line is treated separately: on the half line that contains
``x`` the path runs along the real axis from 0 to ``x`` and then leaves on
the ray ``x + s u e^{i theta}``; on the other half line it is the ray
``s u e^{i theta}`` from the origin.  Both choices keep the integrand bounded
by its value at the saddle, so no cancellation between large terms occurs.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import cmath
import math
from typing import NamedTuple, Optional

import numpy as np

from . import greens
from .exceptions import (CapabilityError, DomainError, PreconditionError,
                         QuadratureAccuracyError)
from .quadrature import (QuadratureConfig, RotatedIntegrand, path_integral,
                         regularized_real_result, richardson_zero)
from .superosc import EntireFunction, GrowthBound

__all__ = [
    "EvolutionProblem", "WaveField", "PsiResult", "evolve", "evolve_result", "evolve_dx",
    "evolve_grid", "boundary_trace", "transmission_residual", "initial_recovery_scan",
    "supershift_scan", "kappa_holomorphy_check", "psi_schrodinger_residual",
    "evolve_regularized", "BOUNDARY_DELTA",
]

BOUNDARY_DELTA = 1e-7


@dataclass(frozen=True)
class EvolutionProblem:
    """Green's function, initial datum and contour/quadrature settings."""

    green: greens.GreensFunctionSpec
    initial: EntireFunction
    theta: float = math.pi / 4
    cfg: QuadratureConfig = field(default_factory=QuadratureConfig)

    def __post_init__(self):
        if not isinstance(self.initial, EntireFunction):
            raise PreconditionError("initial datum must be an EntireFunction with a growth bound")
        if not 0.0 < self.theta < math.pi / 2:
            raise PreconditionError("theta must lie in (0, pi/2)")

    def with_initial(self, initial):
        return EvolutionProblem(self.green, initial, self.theta, self.cfg)

    def fingerprint(self):
        return (f"{self.green.describe()}|F={self.initial.name}|theta={self.theta!r}"
                f"|rel_tol={self.cfg.rel_tol!r}")


class PsiResult(NamedTuple):
    value: complex
    error: float
    converged: bool
    nodes: int


@dataclass
class WaveField:
    """Psi sampled on a (t, x) grid with per-cell convergence flags."""

    t_grid: np.ndarray
    x_grid: np.ndarray
    values: np.ndarray
    converged: np.ndarray
    errors: np.ndarray
    meta: dict = field(default_factory=dict)


def _pieces(spec, x, theta):
    """List of (z0, d, weight, length) path pieces; length None means a ray."""
    e = complex(math.cos(theta), math.sin(theta))
    if spec.variant == greens.FREE:
        return [(complex(x), e, e, None, False), (complex(x), -e, e, None, False)]
    sx = 1.0 if x > 0 else -1.0
    x0 = abs(x)
    grade = spec.is_centrifugal
    # centrifugal kernels are algebraic at z = 0, graded at both ends of the near path
    out = [(0j, complex(sx), 1.0, x0, grade), (complex(sx * x0), sx * e, e, None, grade)]
    if not spec.is_centrifugal:
        out.append((0j, -sx * e, e, None, False))
    return out


def _integrate(prob, t, x, deriv):
    spec = prob.green
    a = spec.a(t)
    F = prob.initial
    b = F.bound
    if spec.variant == greens.POINT:
        hint = 2.0 * abs(x) / t + 1.0 / math.sqrt(t)
    elif spec.is_centrifugal:
        hint = abs(x) / (2.0 * t)
    else:
        hint = 0.0

    c0 = 0.5 / (cmath.sqrt(1j) * math.sqrt(math.pi * t)) if spec.variant == greens.POINT else 0.0

    def g(z):
        gt, gx = greens.gtilde(spec, t, x, z, with_dx=deriv)
        pf = np.exp(1j * a * (z - x) ** 2) * F(z)
        # size of the terms that cancel near the interface (for the round-off floor)
        mag = np.abs(gt - c0) + abs(c0)
        if deriv:
            lin = -2j * a * (z - x)
            return pf * (lin * gt + gx), np.abs(pf) * (np.abs(lin) * mag + np.abs(gx))
        return pf * gt, np.abs(pf) * mag

    parts = []
    for z0, d, wgt, length, grade in _pieces(spec, x, prob.theta):
        w0 = z0 - x
        d2 = d * d

        def rate(u, z0=z0, d=d):
            return 2.0 * a * np.abs(z0 + u * d - x) + b.B * b.p + hint

        if length is None:
            def log_env(u, w0=w0, d=d, d2=d2, z0=z0):
                q = -a * ((w0 * w0).imag + 2.0 * u * (w0 * d).imag + u * u * d2.imag)
                env = q + b.log_envelope(abs(z0) + u)
                if deriv:
                    env = env + np.log1p(2.0 * a * (abs(w0) + u))
                return env

            res = path_integral(g, z0, d, prob.cfg, log_env=log_env, rate=rate, grade=grade,
                                paired=True)
        else:
            res = path_integral(g, z0, d, prob.cfg, length=length, rate=rate, grade=grade,
                                paired=True)
        parts.append((wgt, res))
    value = sum(w * r.value for w, r in parts)
    err = sum(abs(w) * r.error for w, r in parts)
    return PsiResult(complex(value), float(err), all(r.converged for _, r in parts),
                     sum(r.nodes for _, r in parts))


def _check_tx(spec, t, x):
    if not (math.isfinite(t) and t > 0):
        raise DomainError("t must be positive")
    if not math.isfinite(x) or (x == 0 and spec.variant != greens.FREE):
        raise DomainError("x must be finite and non-zero")


def evolve_result(prob, t, x, deriv=False):
    """Psi(t, x) (or Psi_x with ``deriv``) with quadrature diagnostics; never raises on accuracy."""
    t, x = float(t), float(x)
    _check_tx(prob.green, t, x)
    return _integrate(prob, t, x, deriv)


def evolve(prob, t, x):
    """Wave function Psi(t, x) for the initial datum ``prob.initial``.

    Raises
    ------
    QuadratureAccuracyError
        If the contour quadrature does not reach ``prob.cfg.rel_tol``.
    """
    res = evolve_result(prob, t, x)
    if not res.converged:
        raise QuadratureAccuracyError(
            f"Psi({t}, {x}) for {prob.fingerprint()} did not converge", res.value, res.error)
    return res.value


def evolve_dx(prob, t, x):
    """Spatial derivative Psi_x(t, x), differentiating the kernel under the integral."""
    res = evolve_result(prob, t, x, deriv=True)
    if not res.converged:
        raise QuadratureAccuracyError(
            f"Psi_x({t}, {x}) for {prob.fingerprint()} did not converge", res.value, res.error)
    return res.value


def evolve_grid(prob, t_grid, x_grid, workers=1):
    """Evaluate Psi on the tensor grid; cells are independent and flagged individually."""
    tg = np.sort(np.asarray(t_grid, dtype=float).ravel())
    xg = np.sort(np.asarray(x_grid, dtype=float).ravel())
    if np.any(tg <= 0):
        raise DomainError("t grid must be positive")
    if np.any(xg == 0) and prob.green.variant != greens.FREE:
        raise DomainError("x grid must exclude 0")
    cells = [(t, x) for t in tg for x in xg]

    def one(c):
        try:
            return evolve_result(prob, c[0], c[1])
        except QuadratureAccuracyError as exc:
            return PsiResult(exc.value, exc.error, False, 0)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(one, cells))
    else:
        results = [one(c) for c in cells]
    shape = (tg.size, xg.size)
    vals = np.array([r.value for r in results], dtype=complex).reshape(shape)
    conv = np.array([r.converged for r in results], dtype=bool).reshape(shape)
    errs = np.array([r.error for r in results], dtype=float).reshape(shape)
    meta = {"problem": prob.fingerprint(), "nodes": int(sum(r.nodes for r in results))}
    return WaveField(tg, xg, vals, conv, errs, meta)


def boundary_trace(prob, t, derivatives=True, delta=BOUNDARY_DELTA):
    """One-sided limits (Psi(0+), Psi(0-), Psi_x(0+), Psi_x(0-)).

    Each limit is the Richardson combination ``2 f(delta/2) - f(delta)``
    of evaluations at ``+-delta``.  Centrifugal kernels have no bounded
    derivative coefficients at the origin; asking for derivative traces then
    raises :class:`CapabilityError`.  With ``derivatives=False`` only the two
    value traces are returned.
    """
    if derivatives and prob.green.is_centrifugal:
        raise CapabilityError("derivative traces are unavailable for centrifugal kernels")

    def lim(fun, s):
        return 2.0 * fun(prob, t, s * delta / 2) - fun(prob, t, s * delta)

    out = [lim(evolve, 1.0), lim(evolve, -1.0)]
    if derivatives:
        out += [lim(evolve_dx, 1.0), lim(evolve_dx, -1.0)]
    return tuple(complex(v) for v in out)


def transmission_residual(prob, t):
    """Norm of the interface condition evaluated on the boundary traces of Psi."""
    tc = greens.transmission_matrices(prob.green)
    if prob.green.is_centrifugal:
        p, m = boundary_trace(prob, t, derivatives=False)
        return float(np.linalg.norm([p, m]))
    return tc.residual(*boundary_trace(prob, t))


def initial_recovery_scan(prob, x, t_seq):
    """|Psi(t, x) - F(x)| for each t in ``t_seq``; NaN where quadrature failed."""
    f0 = complex(prob.initial(np.asarray(x, dtype=complex)))
    out = []
    for t in t_seq:
        r = evolve_result(prob, t, x)
        out.append(abs(r.value - f0) if r.converged else float("nan"))
    return np.array(out)


def _compact_grid(compact):
    lo, hi = float(compact[0]), float(compact[1])
    n = int(compact[2]) if len(compact) > 2 else 201
    if lo <= 0 <= hi:
        raise PreconditionError("compact interval must exclude 0")
    return np.linspace(lo, hi, n)


def supershift_scan(green, family, n_seq, t, compact, theta=math.pi / 4, cfg=None,
                    linearity=True, reference=None):
    """Sup-errors of Psi(t, .; F_n) against Psi(t, .; phi_target) on a compact set.

    Parameters
    ----------
    green : GreensFunctionSpec
    family : SupershiftFamily
    n_seq : sequence of int
    t : float
    compact : tuple
        ``(lo, hi[, samples])``; uniform grid with endpoints, default 201 points.
    linearity : bool or int
        Also evaluate ``sum_l C_l(n) Psi(t, x; phi_{kappa_l(n)})`` and report
        its deviation from the direct evaluation, relative to
        ``max_x sum_l |C_l| |Psi_l|`` (the size of the terms being summed).
        An integer limits this to rows with ``n <= linearity``.
    reference : callable, optional
        ``reference(x)`` replacing the contour evaluation of the target wave.

    Returns
    -------
    list of dict
        Rows with keys ``n``, ``sup_error``, ``linearity_residual``,
        ``converged`` and ``grid_step``.
    """
    cfg = cfg or QuadratureConfig()
    xs = _compact_grid(compact)
    step = float(xs[1] - xs[0]) if xs.size > 1 else 0.0

    def psi_vec(F):
        prob = EvolutionProblem(green, F, theta, cfg)
        res = [evolve_result(prob, t, x) for x in xs]
        return np.array([r.value for r in res]), all(r.converged for r in res)

    if reference is not None:
        target = np.array([complex(reference(x)) for x in xs])
        tconv = True
    else:
        target, tconv = psi_vec(family.phi(family.target))
    rows = []
    for n in n_seq:
        direct, conv = psi_vec(family.member(n))
        row = {"n": int(n), "sup_error": float(np.max(np.abs(direct - target))),
               "linearity_residual": float("nan"), "converged": bool(conv and tconv),
               "grid_step": step}
        lin_on = linearity if isinstance(linearity, bool) else n <= int(linearity)
        if lin_on:
            c, kap = family.coefficients(n)
            summed = np.zeros_like(direct)
            scale = np.zeros(xs.size)
            for cl, kl in zip(c, kap):
                psi_l, cv = psi_vec(family.phi(kl))
                summed += cl * psi_l
                scale += abs(cl) * np.abs(psi_l)
                row["converged"] &= cv
            row["linearity_residual"] = float(np.max(np.abs(direct - summed)) / np.max(scale))
        rows.append(row)
    return rows


def kappa_holomorphy_check(green, phi_family, t, x, triangle, m=16, theta=math.pi / 4, cfg=None):
    """Closed contour integral of kappa -> Psi(t, x; phi_kappa) around a triangle.

    ``phi_family(kappa)`` must return an EntireFunction.  Each edge is
    integrated with an ``m``-point Gauss-Legendre rule; the result vanishes
    (to quadrature accuracy) when Psi depends holomorphically on kappa.
    """
    cfg = cfg or QuadratureConfig()
    xg, wg = np.polynomial.legendre.leggauss(int(m))
    verts = [complex(v) for v in triangle]
    if len(verts) != 3:
        raise PreconditionError("triangle needs three vertices")
    total = 0j
    for k in range(3):
        a, b = verts[k], verts[(k + 1) % 3]
        if a == b:
            continue
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        acc = 0j
        for xi, wi in zip(xg, wg):
            prob = EvolutionProblem(green, phi_family(mid + half * xi), theta, cfg)
            acc += wi * evolve(prob, t, x)
        total += half * acc
    return complex(total)


def _psi_fd(prob, t, x, h_t, h_x):
    def P(tt, xx):
        return evolve(prob, tt, xx)

    dt = (P(t + h_t, x) - P(t - h_t, x)) / (2.0 * h_t)
    p0 = P(t, x)
    dxx = (P(t, x + h_x) - 2.0 * p0 + P(t, x - h_x)) / (h_x * h_x)
    V = float(prob.green.potential(x))
    return 1j * dt - (-dxx + V * p0)


def psi_schrodinger_residual(prob, t, x, h_t, h_x, richardson=False):
    """Central-difference residual of ``i Psi_t = -Psi_xx + V Psi`` at (t, x)."""
    greens.check_stencil(t, x, h_t, h_x)
    r = _psi_fd(prob, t, x, h_t, h_x)
    if richardson:
        r2 = _psi_fd(prob, t, x, h_t / 2, h_x / 2)
        return complex((4.0 * r2 - r) / 3.0)
    return complex(r)


def evolve_regularized(prob, t, x, eps_seq=(1e-2, 5e-3, 2.5e-3, 1.25e-3), y0=0.0, cfg=None):
    """Psi from the Gaussian-regularised real-line integral, extrapolated to eps -> 0.

    Independent of the contour machinery apart from the kernel evaluation;
    returns ``(value, error_estimate)``.
    """
    t, x = float(t), float(x)
    _check_tx(prob.green, t, x)
    spec = prob.green
    cfg = cfg or QuadratureConfig(rel_tol=max(prob.cfg.rel_tol, 1e-12), max_nodes=2 ** 22)
    F = prob.initial
    a = spec.a(t)

    def f(y):
        y = np.asarray(y, dtype=complex)
        zero = y.real == 0
        ys = np.where(zero, 1.0, y)
        gt, _ = greens.gtilde(spec, t, x, ys)
        return np.where(zero, 0.0, gt * F(ys))

    A0 = greens.growth_coefficients(spec, t, x)[0] if not spec.is_centrifugal else 1.0
    ri = RotatedIntegrand(f, GrowthBound(max(A0, 1e-300), F.bound.B, F.bound.p), a, x,
                          freq_hint=abs(x) / t, probe=False)
    vals = []
    for eps in eps_seq:
        if spec.variant == greens.FREE:
            res = regularized_real_result(ri, eps, y0, cfg)
        else:
            # split at the origin, where the kernel is not smooth
            pos = regularized_real_result(ri, eps, y0, cfg, side="positive", start=0.0,
                                          grade=spec.is_centrifugal)
            neg_ri = RotatedIntegrand(lambda y: f(-np.asarray(y, dtype=complex)), ri.bound, a, -x,
                                      freq_hint=ri.freq_hint, probe=False)
            neg = regularized_real_result(neg_ri, eps, -y0, cfg, side="positive", start=0.0,
                                          grade=spec.is_centrifugal)
            res = PsiResult(pos.value + neg.value, pos.error + neg.error,
                            pos.converged and neg.converged, pos.nodes + neg.nodes)
        if not res.converged:
            raise QuadratureAccuracyError("regularised integral did not converge",
                                          res.value, res.error)
        vals.append(res.value)
    return richardson_zero(eps_seq, vals)
