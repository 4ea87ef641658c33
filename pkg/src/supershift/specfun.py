"""Complex-argument special functions.

Bessel functions of the first kind and Hankel functions of the second kind
are implemented for any non-integer complex order, which covers the real
and purely imaginary orders of the centrifugal propagators.  ``scipy`` only
supports real orders, so the Bessel family is evaluated here:

* ``|w| <= W_SWITCH``: ascending series accumulated in double-double
  arithmetic; Y and H2 follow from the reflection formula.  In the lower
  half plane ``Im w < -1`` (where the reflection formula cancels
  catastrophically) H2 is obtained from K_nu(i w) by Steed's continued
  fraction.
* ``|w| > W_SWITCH``: Hankel asymptotic expansion, at most 12 terms,
  truncated at the smallest term.

The error function and Lambda(z) = exp(z^2) erfc(z) are the Faddeeva-package
routines shipped with ``scipy.special``.
"""
from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np
from scipy import special as sc

from . import _dd
from .exceptions import DomainError, RangeError, UnsupportedOrderError

__all__ = [
    "BesselOrder", "erf_c", "lambda_fn", "lambda_deriv", "bessel_j",
    "bessel_j_deriv", "bessel_y", "hankel2", "hankel2_deriv",
    "hankel2_scaled", "hankel2_deriv_scaled", "bessel_j_scaled",
    "bessel_j_deriv_scaled", "measure_hankel_bound", "measure_bessel_bound",
    "W_SWITCH",
]

W_SWITCH = 25.0
MAX_SERIES_TERMS = 80
MAX_ASYMPTOTIC_TERMS = 12
_SMALL = 4.0
_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)
# pi as an unevaluated sum, for exp(i nu pi) with complex nu
_PI_LO = 1.2246467991473532e-16


@dataclass(frozen=True)
class BesselOrder:
    """Order of a Bessel function, real or purely imaginary.

    Parameters
    ----------
    kind : {'real', 'imaginary'}
    value : float
        Magnitude of the order; the order is ``value`` or ``1j * value``.
    """

    kind: str
    value: float

    def __post_init__(self):
        if self.kind not in ("real", "imaginary"):
            raise DomainError(f"unknown order kind {self.kind!r}")
        v = float(self.value)
        if not math.isfinite(v) or v <= 0.0:
            raise DomainError("order magnitude must be finite and positive")
        object.__setattr__(self, "value", v)

    @classmethod
    def from_lambda(cls, lam):
        """Order nu = sqrt(1/4 + lam) of the centrifugal potential lam/x^2."""
        s = 0.25 + float(lam)
        if s == 0.0:
            raise UnsupportedOrderError("lambda = -1/4 gives nu = 0, which is not supported")
        if s > 0.0:
            return cls("real", math.sqrt(s))
        return cls("imaginary", math.sqrt(-s))

    @property
    def nu(self):
        return complex(self.value) if self.kind == "real" else complex(0.0, self.value)

    @property
    def is_integer(self):
        return self.kind == "real" and abs(self.value - round(self.value)) < 1e-12


def _as_nu(order):
    if isinstance(order, BesselOrder):
        return order.nu
    nu = complex(order)
    if not (math.isfinite(nu.real) and math.isfinite(nu.imag)):
        raise DomainError("order must be finite")
    return nu


def _is_integer(nu):
    return nu.imag == 0.0 and abs(nu.real - round(nu.real)) < 1e-12


def _prepare(w):
    arr = np.asarray(w, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise DomainError("argument must be finite")
    if np.any(arr.real <= 0.0):
        raise DomainError("argument must have positive real part")
    return arr


def _finish(arr, scalar):
    return complex(arr) if scalar else arr


# ---------------------------------------------------------------------------
# error function family

def erf_c(z):
    """Error function of a complex argument.

    Parameters
    ----------
    z : complex or array_like

    Raises
    ------
    RangeError
        If ``|z| >= 1e6`` or the value overflows.
    """
    arr = np.asarray(z, dtype=complex)
    if np.any(np.abs(arr) >= 1e6):
        raise RangeError("|z| must stay below 1e6")
    out = sc.erf(arr)
    if not np.all(np.isfinite(out)):
        raise RangeError("erf overflows: exp(-z^2) is not representable")
    return _finish(out, arr.ndim == 0)


def lambda_fn(z):
    """Lambda(z) = exp(z^2) * (1 - erf(z)), the scaled complementary error function.

    Evaluated by the Faddeeva algorithm (``scipy.special.erfcx``), which uses
    continued fractions for large ``|z|`` and never forms the product
    ``exp(z^2) * erfc(z)`` where it would cancel.

    Raises
    ------
    RangeError
        When ``Re z`` is so negative that ``exp(z^2)`` overflows.
    """
    arr = np.asarray(z, dtype=complex)
    out = sc.erfcx(arr)
    if not np.all(np.isfinite(out)):
        raise RangeError("Lambda(z) overflows for this argument")
    return _finish(out, arr.ndim == 0)


def lambda_deriv(z):
    """Derivative Lambda'(z) = 2 z Lambda(z) - 2/sqrt(pi)."""
    arr = np.asarray(z, dtype=complex)
    out = 2.0 * arr * np.asarray(lambda_fn(arr)) - _TWO_OVER_SQRT_PI
    return _finish(out, arr.ndim == 0)


# ---------------------------------------------------------------------------
# ascending series

@lru_cache(maxsize=256)
def _series_coeffs(nu):
    """dd coefficients of 1/(k! (nu+1)_k), k = 0..MAX_SERIES_TERMS-1."""
    coeffs = [(np.complex128(1.0), np.complex128(0.0))]
    c = _dd.from_complex(1.0 + 0j)
    for k in range(1, MAX_SERIES_TERMS):
        # nu + k exactly in double-double
        rh, rl = _dd._two_sum(nu.real, float(k))
        d = (np.complex128(rh + 1j * nu.imag), np.complex128(rl))
        d = (d[0] * k, d[1] * k) if (k & (k - 1)) == 0 else _dd.mul(d, _dd.from_complex(float(k)))
        c = _dd.div(c, d)
        coeffs.append((np.complex128(c[0]), np.complex128(c[1])))
    return tuple(coeffs)


def _terms_needed(r):
    """Series length so the tail is below dd roundoff relative to the largest term."""
    if r <= 1e-3:
        return 6
    u = 0.25 * r * r
    log_peak = 0.0
    logt = 0.0
    for k in range(1, MAX_SERIES_TERMS):
        logt += math.log(u) - 2.0 * math.log(k)
        log_peak = max(log_peak, logt)
        if logt < log_peak - 80.0 and logt < -75.0:
            return k + 1
    return MAX_SERIES_TERMS


def _jv_series(nu, w):
    """J_nu(w) by the ascending series; ``w`` a 1-d array."""
    out = np.empty_like(w)
    if w.size == 0:
        return out
    coeffs = _series_coeffs(nu)
    pref = np.exp(nu * np.log(0.5 * w)) * sc.rgamma(nu + 1.0)
    small = np.abs(w) <= _SMALL
    if np.any(small):
        ws = w[small]
        n = _terms_needed(float(np.max(np.abs(ws))))
        u = -0.25 * ws * ws
        acc = np.full_like(ws, coeffs[n - 1][0])
        for k in range(n - 2, -1, -1):
            acc = acc * u + coeffs[k][0]
        out[small] = acc
    big = ~small
    if np.any(big):
        wb = w[big]
        n = _terms_needed(float(np.max(np.abs(wb))))
        u = _dd.scale(_dd.square_exact(wb), -0.25)
        out[big] = _dd.to_complex(_dd.horner(list(coeffs[:n]), u))
    return out * pref


def _exp_i_pi(nu):
    # exp(i nu pi) with the pi rounding error corrected to first order
    e = np.exp(1j * nu * math.pi)
    return e * (1.0 + 1j * nu * _PI_LO)


def _sin_pi(nu):
    if nu.imag == 0.0:
        x = nu.real
        r = x - 2.0 * round(x / 2.0)
        return complex(math.sin(math.pi * r))
    return complex(np.sin(np.pi * nu))


def _h2_reflect_scaled(nu, w):
    jm = _jv_series(-nu, w)
    jp = _jv_series(nu, w)
    h2 = 1j * (jm - _exp_i_pi(nu) * jp) / _sin_pi(nu)
    return h2 * np.exp(1j * w)


def _y_reflect(nu, w):
    jm = _jv_series(-nu, w)
    jp = _jv_series(nu, w)
    c = (_exp_i_pi(nu) + _exp_i_pi(-nu)) / 2.0
    return (jp * c - jm) / _sin_pi(nu)


# ---------------------------------------------------------------------------
# continued fraction for K_nu, used for H2 in the lower half plane

def _k_cf_scaled(nu, zeta, maxit=2000, eps=1e-16):
    """exp(zeta) K_nu(zeta) for Re zeta > 0, |zeta| >= 2 (Steed/Temme CF2)."""
    x = zeta
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = d.copy()
    delh = d.copy()
    q1 = np.zeros_like(x)
    q2 = np.ones_like(x)
    a1 = 0.25 - nu * nu
    q = np.full_like(x, a1)
    c = np.full_like(x, a1)
    a = np.full_like(x, -a1)
    s = 1.0 + q * delh
    for i in range(2, maxit):
        a = a - 2.0 * (i - 1)
        c = -a * c / i
        # a hits 0 at half-integer order: the q-series terminates (c stays 0)
        qnew = (q1 - b * q2) / a if np.all(a != 0) else np.zeros_like(q1)
        q1, q2 = q2, qnew
        q = q + c * qnew
        b = b + 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h = h + delh
        dels = q * delh
        s = s + dels
        if np.all(np.abs(dels) < eps * np.abs(s)):
            break
    return np.sqrt(np.pi / (2.0 * x)) / s


def _h2_kcf_scaled(nu, w):
    # H2_nu(w) = (2/pi) i^(nu+1) K_nu(i w)
    return (2.0 / np.pi) * np.exp(0.5j * np.pi * (nu + 1.0)) * _k_cf_scaled(nu, 1j * w)


# ---------------------------------------------------------------------------
# large-argument expansion

def _asym_sums(nu, w):
    """Truncated sums P2 = sum (-i)^k a_k / w^k and P1 = sum i^k a_k / w^k."""
    mu = 4.0 * nu * nu
    p1 = np.ones_like(w)
    p2 = np.ones_like(w)
    t = np.ones_like(w)
    prev = np.full(w.shape, np.inf)
    live = np.ones(w.shape, dtype=bool)
    for k in range(1, MAX_ASYMPTOTIC_TERMS):
        t = t * (mu - (2 * k - 1) ** 2) / (8.0 * k * w)
        mag = np.abs(t)
        live &= mag < prev
        prev = mag
        p1 = np.where(live, p1 + (1j) ** k * t, p1)
        p2 = np.where(live, p2 + (-1j) ** k * t, p2)
    return p1, p2


def _asym_scaled(nu, w):
    """(exp(iw) H2, exp(-iw) H1) from the Hankel expansion."""
    p1, p2 = _asym_sums(nu, w)
    amp = np.sqrt(2.0 / (np.pi * w))
    ph = np.exp(0.5j * np.pi * (nu + 0.5))
    return amp * ph * p2, amp / ph * p1


# ---------------------------------------------------------------------------
# dispatch

def _h2_scaled_any(nu, w):
    w = np.atleast_1d(w)
    out = np.empty_like(w)
    r = np.abs(w)
    asym = r > W_SWITCH
    kcf = (~asym) & (w.imag < -1.0) & (r >= 2.0)
    refl = ~(asym | kcf)
    if np.any(asym):
        out[asym] = _asym_scaled(nu, w[asym])[0]
    if np.any(kcf):
        out[kcf] = _h2_kcf_scaled(nu, w[kcf])
    if np.any(refl):
        out[refl] = _h2_reflect_scaled(nu, w[refl])
    return out


def _j_scaled_any(nu, w):
    """exp(iw) J_nu(w)."""
    w = np.atleast_1d(w)
    out = np.empty_like(w)
    asym = np.abs(w) > W_SWITCH
    if np.any(asym):
        wa = w[asym]
        s2, s1 = _asym_scaled(nu, wa)
        out[asym] = 0.5 * (np.exp(2j * wa) * s1 + s2)
    if np.any(~asym):
        ws = w[~asym]
        out[~asym] = _jv_series(nu, ws) * np.exp(1j * ws)
    return out


def _check_nonint(nu):
    if _is_integer(nu):
        raise UnsupportedOrderError("integer orders are not supported for Y and H2")


def hankel2_scaled(order, w):
    """exp(i w) * H2_nu(w); bounded by C/sqrt|w| in the first quadrant."""
    nu = _as_nu(order)
    _check_nonint(nu)
    arr = _prepare(w)
    return _finish(_h2_scaled_any(nu, arr.ravel()).reshape(arr.shape), arr.ndim == 0)


def hankel2(order, w):
    """Hankel function of the second kind H2_nu(w) = J_nu(w) - i Y_nu(w).

    Parameters
    ----------
    order : BesselOrder or complex
        Non-integer order.
    w : complex or array_like
        Argument with ``Re w > 0``.

    Raises
    ------
    UnsupportedOrderError
        For integer orders.
    DomainError
        For ``Re w <= 0``.
    """
    nu = _as_nu(order)
    _check_nonint(nu)
    arr = _prepare(w)
    out = _h2_scaled_any(nu, arr.ravel()).reshape(arr.shape) * np.exp(-1j * arr)
    return _finish(out, arr.ndim == 0)


def hankel2_deriv_scaled(order, w):
    """exp(i w) * dH2_nu/dw."""
    nu = _as_nu(order)
    _check_nonint(nu)
    arr = _prepare(w)
    flat = arr.ravel()
    out = (nu / flat) * _h2_scaled_any(nu, flat) - _h2_scaled_any(nu + 1.0, flat)
    return _finish(out.reshape(arr.shape), arr.ndim == 0)


def hankel2_deriv(order, w):
    """Derivative of :func:`hankel2` with respect to ``w``."""
    arr = _prepare(w)
    out = np.asarray(hankel2_deriv_scaled(order, arr)) * np.exp(-1j * arr)
    return _finish(out, arr.ndim == 0)


def bessel_j_scaled(order, w):
    """exp(i w) * J_nu(w)."""
    nu = _as_nu(order)
    arr = _prepare(w)
    return _finish(_j_scaled_any(nu, arr.ravel()).reshape(arr.shape), arr.ndim == 0)


def bessel_j(order, w):
    """Bessel function of the first kind J_nu(w) for ``Re w > 0``."""
    nu = _as_nu(order)
    arr = _prepare(w)
    flat = arr.ravel()
    out = np.empty_like(flat)
    big = np.abs(flat) > W_SWITCH
    if np.any(big):
        out[big] = _j_scaled_any(nu, flat[big]) * np.exp(-1j * flat[big])
    if np.any(~big):
        out[~big] = _jv_series(nu, flat[~big])
    return _finish(out.reshape(arr.shape), arr.ndim == 0)


def bessel_j_deriv_scaled(order, w):
    """exp(i w) * dJ_nu/dw."""
    nu = _as_nu(order)
    arr = _prepare(w)
    flat = arr.ravel()
    out = (nu / flat) * _j_scaled_any(nu, flat) - _j_scaled_any(nu + 1.0, flat)
    return _finish(out.reshape(arr.shape), arr.ndim == 0)


def bessel_j_deriv(order, w):
    """Derivative of :func:`bessel_j` with respect to ``w``."""
    nu = _as_nu(order)
    arr = _prepare(w)
    out = np.asarray(bessel_j(nu, arr)) * (nu / arr) - np.asarray(bessel_j(nu + 1.0, arr))
    return _finish(out, arr.ndim == 0)


def bessel_y(order, w):
    """Bessel function of the second kind via the non-integer reflection formula."""
    nu = _as_nu(order)
    _check_nonint(nu)
    arr = _prepare(w)
    flat = arr.ravel()
    out = np.empty_like(flat)
    big = np.abs(flat) > W_SWITCH
    if np.any(big):
        s2, s1 = _asym_scaled(nu, flat[big])
        e = np.exp(1j * flat[big])
        out[big] = (s1 * e - s2 / e) / 2j
    if np.any(~big):
        out[~big] = _y_reflect(nu, flat[~big])
    return _finish(out.reshape(arr.shape), arr.ndim == 0)


# ---------------------------------------------------------------------------
# measured growth constants

def _quadrant_grid(r_min, r_max, n_r, n_arg):
    r = np.geomspace(r_min, r_max, n_r)
    # right edge of the closed first quadrant, nudged off the imaginary axis
    arg = np.linspace(0.0, 0.5 * np.pi - 1e-3, n_arg)
    return (r[:, None] * np.exp(1j * arg[None, :])).ravel()


def measure_hankel_bound(order, r_min=1e-3, r_max=1e3, n_r=241, n_arg=33):
    """Sampled sup of |H2_nu(w)| sqrt|w| exp(-Im w) over the first quadrant.

    This is the constant C_nu of the sector estimate
    ``|H2_nu(w)| <= C_nu / sqrt|w| * exp(Im w)``, measured on a polar grid.
    """
    w = _quadrant_grid(r_min, r_max, n_r, n_arg)
    vals = np.abs(np.asarray(hankel2_scaled(order, w))) * np.sqrt(np.abs(w))
    return float(np.max(vals))


def measure_bessel_bound(order, r_min=1e-3, r_max=1e3, n_r=241, n_arg=33):
    """Sampled sup of |J_nu(w)| sqrt|w| exp(-|Im w|) over the first quadrant."""
    w = _quadrant_grid(r_min, r_max, n_r, n_arg)
    vals = np.abs(np.asarray(bessel_j_scaled(order, w))) * np.sqrt(np.abs(w))
    return float(np.max(vals))
