"""Rotated-contour Fresnel integrals and their regularised real-line counterparts.

Integrals of the form ``int e^{ia(y-x)^2} f(y) dy`` over a half line or the
whole line are evaluated on the rotated contour ``y e^{i theta}``, where
the quadratic phase turns into Gaussian damping ``exp(-a sin(2 theta) y^2)``.
All paths are straight and are integrated with composite 16-point
Gauss-Legendre panels whose width keeps the local complex phase below
``pi/2`` per panel; panels are split until two successive estimates agree.
"""
from dataclasses import dataclass
import math
from typing import Callable, NamedTuple, Optional

import numpy as np

from .exceptions import PreconditionError, QuadratureAccuracyError
from .superosc import GrowthBound

__all__ = [
    "SectorSpec", "QuadratureConfig", "RotatedIntegrand", "QuadResult",
    "fresnel_halfline", "fresnel_fullline", "shifted_halfline", "regularized_real",
    "regularized_rotated", "regularized_limit", "richardson_zero", "path_integral",
]

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)
_EPS = np.finfo(float).eps
_GRADE_RATIO = 0.15
_GRADE_LEVELS = 20


@dataclass(frozen=True)
class SectorSpec:
    """Rotation angle ``theta`` in (0, pi/2), the side(s) to integrate and strip depth ``h``."""

    theta: float = math.pi / 4
    side: str = "both"
    h: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.theta < math.pi / 2:
            raise PreconditionError("theta must lie in (0, pi/2)")
        if self.side not in ("positive", "both"):
            raise PreconditionError("side must be 'positive' or 'both'")
        if not self.h >= 0.0:
            raise PreconditionError("strip depth h must be non-negative")


@dataclass(frozen=True)
class QuadratureConfig:
    """Accuracy knobs: relative tolerance, node budget and truncation safety factor."""

    rel_tol: float = 1e-11
    max_nodes: int = 2 ** 21
    truncation_safety: float = 1e-2

    def __post_init__(self):
        if not self.rel_tol >= 1e-14:
            raise PreconditionError("rel_tol must be >= 1e-14")
        if not 16 <= int(self.max_nodes) <= 2 ** 22:
            raise PreconditionError("max_nodes must lie in [16, 2**22]")
        if not self.truncation_safety > 0:
            raise PreconditionError("truncation_safety must be positive")


def _probe_bound(f, bound, theta, radius=12.0, n=48):
    r = np.linspace(0.5, radius, n)
    ang = np.linspace(-theta, theta, 5)
    z = (r[:, None] * np.exp(1j * ang[None, :])).ravel()
    z = np.concatenate([z, -z])
    with np.errstate(all="ignore"):
        v = np.abs(np.asarray(f(z)))
        lhs = np.log(np.maximum(v, 1e-300))
    rhs = bound.log_envelope(np.abs(z))
    if not np.all(np.isfinite(v)) or np.any(lhs > rhs + 1e-6 + 1e-9 * np.abs(rhs)):
        raise PreconditionError("integrand violates its declared growth bound on the sector")


@dataclass(frozen=True)
class RotatedIntegrand:
    """Integrand ``e^{ia(y-x)^2} f(y)`` with a growth bound for ``f``.

    Parameters
    ----------
    f : callable
        Vectorised function of a complex array.
    bound : GrowthBound
        ``|f(z)| <= A exp(B |z|^p)`` on the relevant sector, ``p < 2``.
    a : float
        Phase strength, ``a > 0``.
    x : float
        Phase centre.
    freq_hint : float
        Extra oscillation rate of ``f`` used when sizing panels.
    probe : bool
        Sample ``f`` on the sector at construction and reject it if it
        exceeds the bound.
    """

    f: Callable
    bound: GrowthBound
    a: float
    x: float = 0.0
    freq_hint: float = 0.0
    probe: bool = True

    def __post_init__(self):
        if not isinstance(self.bound, GrowthBound):
            raise PreconditionError("bound must be a GrowthBound")
        if not (self.a > 0 and math.isfinite(self.a)):
            raise PreconditionError("phase strength a must be positive")
        if not math.isfinite(self.x):
            raise PreconditionError("phase centre must be finite")
        if self.probe:
            _probe_bound(self.f, self.bound, math.pi / 2 - 1e-3)


class QuadResult(NamedTuple):
    value: complex
    error: float
    converged: bool
    nodes: int


# ---------------------------------------------------------------------------
# path machinery

def _truncation(log_env, thr, u_start=1.0):
    """Smallest Y with log_env(u) < max(log_env) + thr for all u >= Y (sampled)."""
    U = u_start
    for _ in range(60):
        u = np.linspace(0.0, U, 801)
        le = log_env(u)
        peak = float(np.max(le))
        cut = peak + thr
        tail_falling = le[-1] < le[-2]
        if le[-1] < cut and tail_falling:
            above = np.nonzero(le >= cut)[0]
            i = int(above[-1])
            lo, hi = u[i], u[i + 1]
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                if log_env(np.array([mid]))[0] >= cut:
                    lo = mid
                else:
                    hi = mid
            return hi, peak
        U *= 2.0
    raise QuadratureAccuracyError("envelope does not decay; cannot truncate")


def _edges(length, rate, span, grade):
    """Panel edges on [0, length] with about ``span`` radians of phase per panel."""
    g = np.linspace(0.0, length, 4097)
    rg = rate(g)
    phase = np.concatenate([[0.0], np.cumsum(0.5 * (rg[1:] + rg[:-1]) * np.diff(g))])
    npan = max(1, int(math.ceil(phase[-1] / span)))
    edges = np.interp(np.linspace(0.0, phase[-1], npan + 1), phase, g)
    edges[0], edges[-1] = 0.0, length
    if grade:
        first = edges[1]
        geo = first * _GRADE_RATIO ** np.arange(_GRADE_LEVELS, 0, -1)
        edges = np.concatenate([[0.0], geo, edges[1:]])
    return edges


def _gl_sum(g, z0, d, edges, paired=False):
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    u = mid[:, None] + half[:, None] * _GL_X[None, :]
    w = half[:, None] * _GL_W[None, :]
    out = g(z0 + d * u)
    if paired:
        vals = np.asarray(out[0], dtype=complex).reshape(u.shape)
        l1 = float(np.sum(np.abs(out[1]).reshape(u.shape) * w))
    else:
        vals = np.asarray(out, dtype=complex).reshape(u.shape)
        l1 = float(np.sum(np.abs(vals) * w))
    return complex(np.sum(vals * w)), l1, u.size


def path_integral(g, z0, d, cfg, length=None, log_env=None, rate=None, grade=False,
                  span=math.pi / 2, paired=False):
    """Integrate ``g(z0 + u d)`` over ``u`` in [0, length] (or [0, inf)).

    Returns the integral in the parameter ``u`` (without the factor ``d``)
    as a :class:`QuadResult`; never raises on non-convergence.

    Parameters
    ----------
    g : callable
        Vectorised complex function.
    z0, d : complex
        Start point and direction of the straight path.
    cfg : QuadratureConfig
    length : float, optional
        Finite path length; when omitted ``log_env`` must be given and the
        path is truncated where it drops below ``rel_tol * truncation_safety``
        of its peak.
    log_env : callable, optional
        Upper bound of ``log|g(z0 + u d)|``.
    rate : callable, optional
        Local oscillation/decay rate of ``g`` along the path.
    grade : bool
        Geometric refinement towards ``u = 0`` (algebraic endpoint behaviour).
    paired : bool
        ``g`` returns ``(values, magnitudes)``; the magnitudes (size of the
        terms that cancel inside ``g``) set the round-off floor of the
        convergence test instead of ``|g|``.
    """
    if length is None:
        thr = math.log(cfg.rel_tol * cfg.truncation_safety)
        length, _ = _truncation(log_env, thr)
    if length <= 0:
        return QuadResult(0j, 0.0, True, 0)
    rate_fn = rate if rate is not None else (lambda u: np.zeros_like(u))
    base = 4.0 / length

    def r(u):
        return rate_fn(u) + base

    edges = _edges(length, r, span, grade)
    prev, l1, nodes = _gl_sum(g, z0, d, edges, paired)
    total = nodes
    while True:
        mids = 0.5 * (edges[1:] + edges[:-1])
        new = np.empty(2 * edges.size - 1)
        new[0::2] = edges
        new[1::2] = mids
        if (new.size - 1) * 16 > cfg.max_nodes:
            return QuadResult(prev, float("inf"), False, total)
        edges = new
        cur, l1, nodes = _gl_sum(g, z0, d, edges, paired)
        total += nodes
        err = abs(cur - prev)
        if err <= max(cfg.rel_tol * abs(cur), 10.0 * _EPS * l1):
            return QuadResult(cur, err, True, total)
        prev = cur


def _raise_or_value(res, what):
    if not res.converged:
        raise QuadratureAccuracyError(f"{what} did not converge within the node budget",
                                      res.value, res.error)
    return res.value


def _combine(*parts):
    val = sum(p.value for p in parts)
    err = sum(p.error for p in parts)
    return QuadResult(val, err, all(p.converged for p in parts), sum(p.nodes for p in parts))


def _ray(ri, anchor, direction, cfg, eps=0.0, y0=0.0):
    """int_0^inf e^{ia(z-x)^2 - eps(z-y0)^2} f(z) du along z = anchor + u*direction."""
    a, x = ri.a, ri.x
    b = ri.bound
    anchor = complex(anchor)
    direction = complex(direction)
    r0 = abs(anchor)
    w = anchor - x
    v = anchor - y0
    d2 = direction * direction
    # log|e^{ia(z-x)^2}| = -a Im((w + u d)^2) and similarly for the regulariser
    qa = -a * d2.imag - eps * d2.real
    la = -2.0 * a * (w * direction).imag - 2.0 * eps * (v * direction).real
    ca = -a * (w * w).imag - eps * (v * v).real
    if qa >= 0:
        raise PreconditionError("integrand is not Gaussian-damped along this ray")

    def log_env(u):
        return qa * u * u + la * u + ca + b.log_envelope(r0 + u)

    def rate(u):
        z = anchor + u * direction
        return (2.0 * abs(a) * np.abs(z - x) + 2.0 * eps * np.abs(z - y0)
                + b.B * b.p * np.maximum(r0 + u, 1.0) ** (b.p - 1.0) + ri.freq_hint)

    def g(z):
        return np.exp(1j * a * (z - x) ** 2 - eps * (z - y0) ** 2) * ri.f(z)

    return path_integral(g, anchor, direction, cfg, log_env=log_env, rate=rate)


# ---------------------------------------------------------------------------
# public operations

def fresnel_halfline_result(ri, s=SectorSpec(side="positive"), cfg=QuadratureConfig()):
    d = complex(math.cos(s.theta), math.sin(s.theta))
    res = _ray(ri, 0.0, d, cfg)
    return QuadResult(d * res.value, res.error, res.converged, res.nodes)


def fresnel_halfline(ri, s=SectorSpec(side="positive"), cfg=QuadratureConfig()):
    """``e^{i theta} int_0^inf e^{ia(y e^{i theta} - x)^2} f(y e^{i theta}) dy``.

    Raises
    ------
    QuadratureAccuracyError
        If the node budget is exhausted; carries the best estimate.
    """
    return _raise_or_value(fresnel_halfline_result(ri, s, cfg), "fresnel_halfline")


def fresnel_fullline_result(ri, s=SectorSpec(), cfg=QuadratureConfig(), shift=0.0):
    d = complex(math.cos(s.theta), math.sin(s.theta))
    right = _ray(ri, shift, d, cfg)
    left = _ray(ri, shift, -d, cfg)
    res = _combine(right, left)
    return QuadResult(d * res.value, res.error, res.converged, res.nodes)


def fresnel_fullline(ri, s=SectorSpec(), cfg=QuadratureConfig(), shift=0.0):
    """``e^{i theta} int_R e^{ia(y e^{i theta} - x)^2} f(y e^{i theta}) dy`` on the double sector.

    ``shift`` moves the rotation centre from 0 to a real point (valid for
    entire ``f``); it is 0 for the textbook form.
    """
    return _raise_or_value(fresnel_fullline_result(ri, s, cfg, shift), "fresnel_fullline")


def shifted_halfline(ri, x0, s=SectorSpec(side="positive"), cfg=QuadratureConfig()):
    """``e^{i theta} int_0^inf e^{ia(x0 + y e^{i theta} - x)^2} f(x0 + y e^{i theta}) dy``."""
    d = complex(math.cos(s.theta), math.sin(s.theta))
    res = _ray(ri, float(x0), d, cfg)
    return _raise_or_value(QuadResult(d * res.value, res.error, res.converged, res.nodes),
                           "shifted_halfline")


def _check_eps(ri, eps, theta):
    if not eps > 0:
        raise PreconditionError("epsilon must be positive")
    ceiling = 2.0 * ri.a / math.tan(theta)
    if not eps < ceiling:
        raise PreconditionError(f"epsilon={eps} violates eps < 2a/tan(theta) = {ceiling}")


def regularized_rotated(ri, eps, y0=None, s=SectorSpec(), cfg=QuadratureConfig()):
    """Rotated form of the regularised integral at finite ``eps``.

    ``e^{i theta} int e^{ia(ye^{i theta}-x)^2 - eps(ye^{i theta}-y0)^2} f(ye^{i theta}) dy``,
    over the half line or the full line according to ``s.side``.
    """
    y0 = ri.x if y0 is None else float(y0)
    _check_eps(ri, eps, s.theta)
    d = complex(math.cos(s.theta), math.sin(s.theta))
    parts = [_ray(ri, 0.0, d, cfg, eps, y0)]
    if s.side == "both":
        parts.append(_ray(ri, 0.0, -d, cfg, eps, y0))
    res = _combine(*parts)
    return _raise_or_value(QuadResult(d * res.value, res.error, res.converged, res.nodes),
                           "regularized_rotated")


def _real_side(ri, eps, y0, c, sign, cfg, grade=False):
    """int_0^inf of the regularised integrand at y = c + sign*u on the real axis."""
    a, x = ri.a, ri.x
    b = ri.bound

    def g(z):
        return np.exp(1j * a * (z - x) ** 2 - eps * (z - y0) ** 2) * ri.f(z)

    def log_bound(u):
        y = c + sign * u
        return -eps * (y - y0) ** 2 + b.log_envelope(np.abs(y))

    thr = math.log(cfg.rel_tol * cfg.truncation_safety)
    U, _ = _truncation(log_bound, thr)
    # sampled |f| on the real axis: the declared bound is often loose there
    us = np.linspace(0.0, U, max(2001, int(U / 0.05) + 1))
    with np.errstate(divide="ignore"):
        ls = np.log(np.abs(np.asarray(g(c + sign * us))) + 1e-300)
    # suffix maximum, widened by the sampling step through the bound's slope
    suff = np.maximum.accumulate(ls[::-1])[::-1]
    peak = float(np.max(ls))
    if peak <= math.log(1e-300) + 1.0:
        # integrand vanishes identically on this side
        return QuadResult(0j, 0.0, True, int(us.size))
    below = np.nonzero(suff < peak + thr - 2.0)[0]
    Y = float(us[below[0]]) if below.size else U

    def rate(u):
        y = c + sign * u
        return 2.0 * a * np.abs(y - x) + 2.0 * eps * np.abs(y - y0) + b.B + ri.freq_hint

    return path_integral(g, complex(c), complex(sign), cfg, length=Y, rate=rate, grade=grade)


def regularized_real_result(ri, eps, y0=None, cfg=QuadratureConfig(), theta=math.pi / 4,
                            side="both", start=0.0, grade=False):
    y0 = ri.x if y0 is None else float(y0)
    _check_eps(ri, eps, theta)
    if side == "positive":
        return _real_side(ri, eps, y0, float(start), 1.0, cfg, grade)
    c = y0
    return _combine(_real_side(ri, eps, y0, c, 1.0, cfg), _real_side(ri, eps, y0, c, -1.0, cfg))


def regularized_real(ri, eps, y0=None, cfg=QuadratureConfig(), theta=math.pi / 4, side="both",
                     start=0.0):
    """Real-line integral ``int e^{-eps(y-y0)^2} e^{ia(y-x)^2} f(y) dy``.

    Brute-force composite quadrature on the real axis with Gaussian
    truncation; serves as an independent check of the rotated forms.
    ``side='positive'`` integrates over ``[start, inf)`` only.  ``theta``
    only enters the admissibility check ``eps < 2a/tan(theta)``.
    """
    return _raise_or_value(regularized_real_result(ri, eps, y0, cfg, theta, side, start),
                           "regularized_real")


def richardson_zero(eps, values):
    """Polynomial (Neville) extrapolation of ``values(eps)`` to ``eps = 0``.

    Returns the extrapolated value and the difference to the extrapolant
    that omits the largest ``eps``, a practical error estimate.
    """
    eps = np.asarray(eps, dtype=float)
    vals = np.asarray(values, dtype=complex)
    n = eps.size
    if n == 1:
        return complex(vals[0]), float("inf")
    p = vals.copy()
    prev = None
    for m in range(1, n):
        nxt = np.empty(n - m, dtype=complex)
        for i in range(n - m):
            nxt[i] = (eps[i + m] * p[i] - eps[i] * p[i + 1]) / (eps[i + m] - eps[i])
        prev = nxt[-1] if nxt.size > 1 else p[-1]
        p = nxt
    return complex(p[0]), float(abs(p[0] - prev))


def regularized_limit(ri, eps_seq=(4e-2, 2e-2, 1e-2, 5e-3), y0=None, cfg=QuadratureConfig(),
                      theta=math.pi / 4, side="both", start=0.0):
    """Extrapolate :func:`regularized_real` to ``eps -> 0``; returns (value, error estimate)."""
    vals = [regularized_real(ri, e, y0, cfg, theta, side, start) for e in eps_seq]
    return richardson_zero(eps_seq, vals)
