"""Green's functions of the free particle, the centrifugal potentials and point interactions.

Every kernel is split as ``G(t, x, z) = exp(i a(t) (z - x)^2) * Gt(t, x, z)``
with ``a(t) = 1/(4t)``; the remainder ``Gt`` is bounded on the rotated
contours used by :mod:`supershift.evolution`.  Complex powers use the
principal branch, in particular ``sqrt(i t) = exp(i pi/4) sqrt(t)``.
"""
from dataclasses import dataclass, field
from functools import lru_cache
import cmath
import math
from typing import NamedTuple

import numpy as np

from . import specfun
from .exceptions import DomainError, PreconditionError, UnsupportedOrderError

__all__ = [
    "GreensFunctionSpec", "TransmissionCondition", "PointInteractionCoefficients",
    "GreenEvaluation", "classify_point_interaction", "eval_green", "green_dx",
    "growth_coefficients", "transmission_matrices", "schrodinger_residual",
    "CASE_TOL", "FREE", "ATTRACTIVE", "REPULSIVE", "POINT",
]

CASE_TOL = 1e-12
UNITARY_TOL = 1e-12
FREE, ATTRACTIVE, REPULSIVE, POINT = "free", "centrifugal_attractive", "centrifugal_repulsive", "point"
_SQRT_I = cmath.exp(0.25j * math.pi)
_SIGN_PAIRS = ((1, 1), (1, -1), (-1, 1), (-1, -1))


@dataclass(frozen=True)
class PointInteractionCoefficients:
    """Coefficients of the point-interaction kernel; maps are keyed by (sgn x, sgn y)."""

    case_id: str
    omega_plus: float
    omega_minus: float
    mu_plus: dict = field(repr=False)
    mu_minus: dict = field(repr=False)
    mu_zero: dict = field(repr=False)
    eta: dict = field(repr=False)


def _unitary_J(phi, a, b):
    return cmath.exp(1j * phi) * np.array([[a, -b.conjugate()], [b, a.conjugate()]])


def classify_point_interaction(phi, a_J, b_J):
    """Case selection and coefficient algebra for the interface matrix J(phi, a_J, b_J).

    Parameters
    ----------
    phi : float
        Phase in [0, pi).
    a_J, b_J : complex
        Entries of the SU(2) part, ``|a_J|^2 + |b_J|^2 = 1``.

    Returns
    -------
    PointInteractionCoefficients

    Notes
    -----
    In the generic case I the reflected amplitudes are
    ``mu_pm = -(omega_pm / 2) (Theta(xy) +- eta)``, obtained from the
    partial-fraction expansion of the scattering matrix
    ``S(k) = [(k+1) I + (k-1) J]^{-1} [(k-1) I + (k+1) J]``.
    """
    phi = float(phi)
    a = complex(a_J)
    b = complex(b_J)
    if not 0.0 <= phi < math.pi:
        raise PreconditionError("phi must lie in [0, pi)")
    if abs(abs(a) ** 2 + abs(b) ** 2 - 1.0) > UNITARY_TOL:
        raise PreconditionError("|a_J|^2 + |b_J|^2 must equal 1")
    ra = a.real
    if abs(abs(ra) - 1.0) <= CASE_TOL:
        eta = {p: 0j for p in _SIGN_PAIRS}
    else:
        s = 1.0 / math.sqrt(1.0 - ra * ra)
        eta = {(1, 1): -a.imag * s + 0j, (1, -1): -1j * b.conjugate() * s,
               (-1, 1): 1j * b * s, (-1, -1): a.imag * s + 0j}
    theta = {p: float(p[0] * p[1] > 0) for p in _SIGN_PAIRS}
    sgn = {p: float(p[0] * p[1]) for p in _SIGN_PAIRS}
    denom = math.cos(phi) + ra
    zero = {p: 0j for p in _SIGN_PAIRS}
    if abs(denom) > CASE_TOL:
        root = math.sqrt(max(0.0, 1.0 - ra * ra))
        wp = (-math.sin(phi) + root) / denom
        wm = (-math.sin(phi) - root) / denom
        mup = {p: -0.5 * wp * (theta[p] + eta[p]) for p in _SIGN_PAIRS}
        mum = {p: -0.5 * wm * (theta[p] - eta[p]) for p in _SIGN_PAIRS}
        mu0 = {p: complex(sgn[p]) for p in _SIGN_PAIRS}
        return PointInteractionCoefficients("I", wp, wm, mup, mum, mu0, eta)
    if abs(ra + 1.0) > CASE_TOL:
        wp = math.cos(phi) / math.sin(phi)
        mup = {p: -0.5 * wp * (theta[p] + eta[p]) for p in _SIGN_PAIRS}
        mu0 = {p: eta[p] - (1.0 - theta[p]) for p in _SIGN_PAIRS}
        return PointInteractionCoefficients("II", wp, 0.0, mup, dict(zero), mu0, eta)
    mu0 = {p: -1.0 + 0j for p in _SIGN_PAIRS}
    return PointInteractionCoefficients("III", 0.0, 0.0, dict(zero), dict(zero), mu0, eta)


@dataclass(frozen=True)
class GreensFunctionSpec:
    """Immutable description of a propagator.

    Use the constructors :meth:`free`, :meth:`centrifugal` and
    :meth:`point_interaction` rather than the raw fields.
    """

    variant: str
    lam: float = 0.0
    phi: float = 0.0
    a_J: complex = 0j
    b_J: complex = 0j

    def __post_init__(self):
        if self.variant in (ATTRACTIVE, REPULSIVE):
            if self.lam == 0.0:
                raise PreconditionError("centrifugal strength must be non-zero")
            if self.lam == -0.25:
                raise UnsupportedOrderError("lambda = -1/4 (nu = 0) is not supported")
            if (self.variant == ATTRACTIVE) != (self.lam < 0):
                raise PreconditionError("variant does not match the sign of lambda")
        elif self.variant == POINT:
            classify_point_interaction(self.phi, self.a_J, self.b_J)
        elif self.variant != FREE:
            raise PreconditionError(f"unknown variant {self.variant!r}")

    @classmethod
    def free(cls):
        return cls(FREE)

    @classmethod
    def centrifugal(cls, lam):
        lam = float(lam)
        return cls(ATTRACTIVE if lam < 0 else REPULSIVE, lam=lam)

    @classmethod
    def point_interaction(cls, phi, a_J, b_J):
        return cls(POINT, phi=float(phi), a_J=complex(a_J), b_J=complex(b_J))

    @property
    def order(self):
        return specfun.BesselOrder.from_lambda(self.lam)

    @property
    def coefficients(self):
        return _coeffs(self.phi, self.a_J, self.b_J)

    @property
    def is_centrifugal(self):
        return self.variant in (ATTRACTIVE, REPULSIVE)

    @staticmethod
    def a(t):
        return 0.25 / t

    def potential(self, x):
        x = np.asarray(x, dtype=float)
        if self.is_centrifugal:
            return self.lam / (x * x)
        return np.zeros_like(x)

    def describe(self):
        if self.variant == FREE:
            return "free"
        if self.is_centrifugal:
            return f"{self.variant}(lambda={self.lam!r})"
        return f"point(phi={self.phi!r}, a_J={self.a_J!r}, b_J={self.b_J!r})"


@lru_cache(maxsize=64)
def _coeffs(phi, a, b):
    return classify_point_interaction(phi, a, b)


class GreenEvaluation(NamedTuple):
    value: complex
    gtilde: complex
    gtilde_dx: complex
    a_t: float


@dataclass(frozen=True)
class TransmissionCondition:
    """Interface condition ``M (psi(0+), psi(0-)) = N (psi_x(0+), -psi_x(0-))``."""

    M: np.ndarray
    N: np.ndarray

    def residual(self, psi_p, psi_m, dpsi_p, dpsi_m):
        """Euclidean norm of ``M (psi+, psi-) - N (psi_x+, -psi_x-)``."""
        lhs = self.M @ np.array([psi_p, psi_m], dtype=complex)
        rhs = self.N @ np.array([dpsi_p, -dpsi_m], dtype=complex)
        return float(np.linalg.norm(lhs - rhs))


def transmission_matrices(spec):
    """Interface matrices of ``spec``; the free particle is the continuity condition."""
    if spec.is_centrifugal:
        return TransmissionCondition(np.eye(2, dtype=complex), np.zeros((2, 2), dtype=complex))
    if spec.variant == FREE:
        J = _unitary_J(0.5 * math.pi, 0j, -1j)
    else:
        J = _unitary_J(spec.phi, spec.a_J, spec.b_J)
    I = np.eye(2, dtype=complex)
    return TransmissionCondition(I - J, 1j * (I + J))


# ---------------------------------------------------------------------------
# kernels

def _check_args(spec, t, x, z):
    if not (np.isfinite(t) and t > 0):
        raise DomainError("t must be positive")
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)) or (spec.variant != FREE and np.any(x == 0)):
        raise DomainError("x must be finite and non-zero")
    z = np.asarray(z, dtype=complex)
    if spec.variant != FREE and np.any(z.real == 0):
        raise DomainError("Re(z) must be non-zero")
    return x, z


def _free(t, x, z, with_dx):
    c = 0.5 / (_SQRT_I * math.sqrt(math.pi * t))
    gt = np.full(np.broadcast(x, z).shape, c, dtype=complex)
    return gt, (np.zeros_like(gt) if with_dx else None)


def _centrifugal(spec, t, x, z, with_dx):
    shape = np.broadcast(x, z).shape
    xb = np.broadcast_to(x, shape).ravel()
    zb = np.broadcast_to(z, shape).ravel()
    gt = np.zeros(shape, dtype=complex).ravel()
    dx = np.zeros_like(gt)
    on = np.sign(xb) == np.sign(zb.real)
    if np.any(on):
        nu = spec.order.nu
        xs, zs = xb[on], zb[on]
        xz = xs * zs
        w = xz / (2.0 * t)
        ipow = np.exp(0.5j * math.pi * (nu + 1.0))
        if spec.variant == ATTRACTIVE:
            c = 4.0
            f = specfun.hankel2_scaled(spec.order, w)
            fd = specfun.hankel2_deriv_scaled(spec.order, w) if with_dx else None
        else:
            c = 2.0
            f = specfun.bessel_j_scaled(spec.order, w)
            fd = specfun.bessel_j_deriv_scaled(spec.order, w) if with_dx else None
        root = np.sqrt(xz)
        g = root / (c * ipow * t) * f
        gt[on] = g
        if with_dx:
            dx[on] = (0.5 / xs - zs / (2j * t)) * g + zs * root / (2.0 * c * ipow * t * t) * fd
    return gt.reshape(shape), (dx.reshape(shape) if with_dx else None)


def _point(spec, t, x, z, with_dx):
    co = spec.coefficients
    shape = np.broadcast(x, z).shape
    xb = np.broadcast_to(x, shape).ravel()
    zb = np.broadcast_to(z, shape).ravel()
    sx = np.where(xb > 0, 1, -1)
    sz = np.where(zb.real > 0, 1, -1)
    rt = _SQRT_I * math.sqrt(t)
    c0 = 0.5 / (_SQRT_I * math.sqrt(math.pi * t))
    u = np.abs(xb) + sz * zb
    # exp(((x-z)^2 - u^2)/(4it)), exponent -2 z (x + s|x|) / (4it)
    E = np.exp(1j * zb * (xb + sz * np.abs(xb)) / (2.0 * t))
    mp = np.empty(u.shape, dtype=complex)
    mm = np.empty_like(mp)
    m0 = np.empty_like(mp)
    for p in _SIGN_PAIRS:
        sel = (sx == p[0]) & (sz == p[1])
        mp[sel] = co.mu_plus[p]
        mm[sel] = co.mu_minus[p]
        m0[sel] = co.mu_zero[p]
    zeta_p = u / (2.0 * rt) + co.omega_plus * rt
    zeta_m = u / (2.0 * rt) + co.omega_minus * rt
    lp = np.where(mp != 0, specfun.lambda_fn(np.where(mp != 0, zeta_p, 0)), 0)
    lm = np.where(mm != 0, specfun.lambda_fn(np.where(mm != 0, zeta_m, 0)), 0)
    inner = mp * lp + mm * lm + m0 * c0
    gt = E * inner + c0
    dx = None
    if with_dx:
        dlp = np.where(mp != 0, 2.0 * zeta_p * lp - 2.0 / math.sqrt(math.pi), 0)
        dlm = np.where(mm != 0, 2.0 * zeta_m * lm - 2.0 / math.sqrt(math.pi), 0)
        dE = 1j * zb * (1.0 + sz * sx) / (2.0 * t)
        dx = E * (dE * inner + sx * (mp * dlp + mm * dlm) / (2.0 * rt))
        dx = dx.reshape(shape)
    return gt.reshape(shape), dx


def gtilde(spec, t, x, z, with_dx=False):
    """Reduced kernel Gt(t, x, z) (and its x-derivative when ``with_dx``)."""
    x, z = _check_args(spec, t, x, z)
    if spec.variant == FREE:
        return _free(t, x, z, with_dx)
    if spec.is_centrifugal:
        return _centrifugal(spec, t, x, z, with_dx)
    return _point(spec, t, x, z, with_dx)


def eval_green(spec, t, x, z):
    """Evaluate G, Gt and dGt/dx at (t, x, z).

    ``x`` and ``z`` may be arrays (broadcast together); the fields of the
    returned :class:`GreenEvaluation` are then arrays as well.

    Raises
    ------
    DomainError
        For ``t <= 0``, ``x = 0`` or (non-free kernels) ``Re z = 0``.
    """
    gt, dx = gtilde(spec, t, x, z, with_dx=True)
    a = spec.a(t)
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=complex)
    val = np.exp(1j * a * (z - x) ** 2) * gt
    if val.ndim == 0:
        return GreenEvaluation(complex(val), complex(gt), complex(dx), a)
    return GreenEvaluation(val, gt, dx, a)


def green_dx(spec, t, x, z):
    """dG/dx = exp(ia(z-x)^2) (-2ia(z-x) Gt + dGt/dx)."""
    gt, dx = gtilde(spec, t, x, z, with_dx=True)
    a = spec.a(t)
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=complex)
    out = np.exp(1j * a * (z - x) ** 2) * (-2j * a * (z - x) * gt + dx)
    return complex(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# growth constants

@lru_cache(maxsize=32)
def _measured_constant(kind, value, attractive):
    order = specfun.BesselOrder(kind, value)
    if attractive:
        return specfun.measure_hankel_bound(order)
    return specfun.measure_bessel_bound(order)


def _sampled_dx_constant(spec, t, x, theta=math.pi / 4, B1=1.0):
    s = 1.0 if x > 0 else -1.0
    r = np.geomspace(1e-3, 60.0, 121)
    ang = np.linspace(0.0, theta, 9)
    z = s * (r[:, None] * np.exp(1j * ang[None, :])).ravel()
    _, dx = gtilde(spec, t, x, z, with_dx=True)
    return float(np.max(np.abs(dx) * np.exp(-B1 * np.abs(z))))


def growth_coefficients(spec, t, x):
    """Coefficients (A0, B0, A1, B1, p) of the exponential bounds of Gt and dGt/dx.

    ``|Gt(t,x,z)| <= A0 exp(B0 |z|^p)`` and ``|dGt/dx| <= A1 exp(B1 |z|^p)``
    on the rotated sector.  Centrifugal ``A0`` uses the measured constants
    of :func:`specfun.measure_hankel_bound` / :func:`specfun.measure_bessel_bound`;
    centrifugal ``A1`` is a sampled supremum (it is unbounded as ``x -> 0``).
    """
    if not t > 0:
        raise DomainError("t must be positive")
    if spec.variant == FREE:
        return 0.5 / math.sqrt(math.pi * t), 0.0, 0.0, 0.0, 1.0
    if spec.is_centrifugal:
        o = spec.order
        C = _measured_constant(o.kind, o.value, spec.variant == ATTRACTIVE)
        A0 = C / (2.0 * math.sqrt(2.0 * t)) if spec.variant == ATTRACTIVE else C / math.sqrt(2.0 * t)
        return A0, 0.0, _sampled_dx_constant(spec, t, x), 1.0, 1.0
    co = spec.coefficients
    rt = math.sqrt(t)
    c0 = 0.5 / math.sqrt(math.pi * t)
    A0 = c0
    A1 = 0.0
    for s in (1, -1):
        p = (1 if x > 0 else -1, s)
        a0 = c0 * (1.0 + abs(co.mu_zero[p]))
        a1 = abs(co.mu_zero[p]) * math.exp(-1.0) / (2.0 * math.sqrt(math.pi) * t ** 1.5)
        for mu, om in ((co.mu_plus[p], co.omega_plus), (co.mu_minus[p], co.omega_minus)):
            if mu != 0:
                lam = abs(specfun.lambda_fn(om * rt / math.sqrt(2.0)))
                a0 += abs(mu) * lam
                a1 += abs(mu) * ((abs(x) / (2 * t) + abs(om) + math.exp(-1.0) / (2 * t)) * lam
                                 + 1.0 / math.sqrt(math.pi * t))
        A0 = max(A0, a0)
        A1 = max(A1, a1)
    return A0, 0.0, A1, 1.0, 1.0


# ---------------------------------------------------------------------------
# residual of the Schroedinger equation

def _fd_residual(G, V, t, x, h_t, h_x):
    dt = (G(t + h_t, x) - G(t - h_t, x)) / (2.0 * h_t)
    g0 = G(t, x)
    dxx = (G(t, x + h_x) - 2.0 * g0 + G(t, x - h_x)) / (h_x * h_x)
    return 1j * dt - (-dxx + V * g0)


def check_stencil(t, x, h_t, h_x):
    if abs(x) <= h_x:
        raise DomainError("finite-difference stencil crosses x = 0")
    if not (0 < h_x < abs(x) / 10 and 0 < h_t < t / 10):
        raise PreconditionError("need h_x < |x|/10 and h_t < t/10")


def schrodinger_residual(spec, t, x, z, h_t, h_x, richardson=False):
    """Central-difference residual of ``i G_t = -G_xx + V G`` at (t, x, z).

    With ``richardson`` the residuals at steps h and h/2 are combined as
    ``(4 R(h/2) - R(h)) / 3``.
    """
    check_stencil(t, x, h_t, h_x)
    V = float(spec.potential(x))

    def G(tt, xx):
        return eval_green(spec, tt, xx, z).value

    r = _fd_residual(G, V, t, x, h_t, h_x)
    if richardson:
        r2 = _fd_residual(G, V, t, x, h_t / 2, h_x / 2)
        return complex((4.0 * r2 - r) / 3.0)
    return complex(r)
