"""Superoscillating sequences, supershift families and weighted distances.

The canonical sequence is

    F_n(z) = (cos(z/n) + i k sin(z/n))^n = sum_j C_j(n, k) exp(i k_j(n) z),

with ``k_j = 1 - 2j/n`` and ``C_j = binom(n, j) ((1+k)/2)^(n-j) ((1-k)/2)^j``.
For ``|k| > 1`` it converges to ``exp(i k z)`` although every frequency lies
in ``[-1, 1]``.
"""
from dataclasses import dataclass, field
import math
from typing import Callable, Optional

import numpy as np

from .exceptions import PreconditionError

__all__ = [
    "GrowthBound", "EntireFunction", "SuperoscillatingSequence", "SupershiftFamily",
    "build_superosc", "eval_superosc", "aq_distance", "build_supershift_plane_waves",
    "plane_wave", "superosc_function", "poly_exp",
]


@dataclass(frozen=True)
class GrowthBound:
    """Exponential bound ``|f(z)| <= A exp(B |z|^p)`` with ``0 < p < 2``."""

    A: float
    B: float
    p: float = 1.0

    def __post_init__(self):
        for name in ("A", "B", "p"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise PreconditionError(f"growth bound {name} must be finite")
        if self.A < 0 or self.B < 0:
            raise PreconditionError("growth bound needs A >= 0 and B >= 0")
        if not 0.0 < self.p < 2.0:
            raise PreconditionError(
                f"growth exponent p={self.p} not in (0, 2); Fresnel rotation needs p < 2")

    def log_envelope(self, r):
        """log(A) + B r^p, vectorised in ``r >= 0``."""
        r = np.asarray(r, dtype=float)
        la = math.log(self.A) if self.A > 0 else -745.0
        return la + self.B * r ** self.p

    def times(self, other):
        """Bound for the product of two bounded functions.

        Uses ``B1 r^p1 + B2 r^p2 <= (B1 + B2)(1 + r^max(p1, p2))``.
        """
        p = max(self.p, other.p)
        if self.p == other.p:
            return GrowthBound(self.A * other.A, self.B + other.B, p)
        B = self.B + other.B
        return GrowthBound(self.A * other.A * math.exp(B), B, p)


@dataclass(frozen=True)
class EntireFunction:
    """Vectorised handle for an entire function together with its growth bound."""

    func: Callable
    bound: GrowthBound
    name: str = "f"

    def __call__(self, z):
        return self.func(np.asarray(z, dtype=complex))


def plane_wave(k):
    """exp(i k z) with bound (1, |k|, 1)."""
    k = complex(k)
    return EntireFunction(lambda z: np.exp(1j * k * z), GrowthBound(1.0, abs(k), 1.0),
                          f"exp(i*{k!r}*z)")


def poly_exp(coeffs, c=0.0):
    """P(z) exp(c z) with P given by coefficients in increasing degree."""
    coeffs = [complex(v) for v in coeffs] or [0j]
    c = complex(c)
    A = sum(abs(v) * math.factorial(m) for m, v in enumerate(coeffs))
    B = abs(c) + (1.0 if len(coeffs) > 1 else 0.0)

    def f(z):
        return np.polynomial.polynomial.polyval(z, coeffs) * np.exp(c * z)

    return EntireFunction(f, GrowthBound(max(A, 1e-300), B, 1.0), "poly_exp")


@dataclass(frozen=True)
class SuperoscillatingSequence:
    """Coefficients and frequencies of F_n; ``band`` rescales frequencies to [-band, band]."""

    n: int
    k: float
    coefficients: np.ndarray = field(repr=False)
    frequencies: np.ndarray = field(repr=False)
    band: float = 1.0

    @property
    def target(self):
        return self.band * self.k

    def bound(self):
        return GrowthBound(float(np.sum(np.abs(self.coefficients))), abs(self.band), 1.0)


def _log_binom(n, j):
    return math.lgamma(n + 1) - math.lgamma(j + 1) - math.lgamma(n - j + 1)


def build_superosc(n, k, band=1.0):
    """Build the sequence F_n for parameter ``k``.

    Parameters
    ----------
    n : int
        Order, ``n >= 1``.
    k : float
        Target frequency (in units of ``band``), ``|k| > 1``.
    band : float
        Frequencies are ``band * (1 - 2j/n)``.

    Returns
    -------
    SuperoscillatingSequence
    """
    if int(n) != n or n < 1:
        raise PreconditionError("n must be a positive integer")
    n = int(n)
    k = float(k)
    if not abs(k) > 1.0:
        raise PreconditionError(f"|k| = {abs(k)} <= 1 is not superoscillatory")
    if not band > 0:
        raise PreconditionError("band must be positive")
    p, m = (1.0 + k) / 2.0, (1.0 - k) / 2.0
    j = np.arange(n + 1)
    if n <= 50:
        c = np.array([math.comb(n, int(i)) * p ** (n - i) * m ** i for i in j], dtype=float)
    else:
        # log space; signs tracked separately
        logc = np.array([_log_binom(n, int(i)) for i in j])
        logc += (n - j) * math.log(abs(p)) + j * math.log(abs(m))
        sign = np.where(((n - j) % 2 == 1) & (p < 0), -1.0, 1.0)
        sign *= np.where((j % 2 == 1) & (m < 0), -1.0, 1.0)
        c = sign * np.exp(logc)
    freqs = (n - 2 * j) / n
    return SuperoscillatingSequence(n, k, c, band * freqs, float(band))


def eval_superosc(F, z, form="product"):
    """Evaluate F_n at ``z`` (scalar or array) in ``'sum'`` or ``'product'`` form."""
    zz = np.asarray(z, dtype=complex)
    if form == "sum":
        out = np.exp(1j * np.multiply.outer(zz, F.frequencies)) @ F.coefficients
    elif form == "product":
        u = F.band * zz / F.n
        out = (np.cos(u) + 1j * F.k * np.sin(u)) ** F.n
    else:
        raise PreconditionError(f"unknown form {form!r}")
    return complex(out) if zz.ndim == 0 else out


def superosc_function(F):
    """EntireFunction handle for F_n (product form)."""
    return EntireFunction(lambda z: eval_superosc(F, z, "product"), F.bound(),
                          f"F_{F.n}(k={F.k})")


def aq_distance(f, g, B, q, R=40.0, samples=128):
    """Sampled weighted distance ``max |f(z) - g(z)| exp(-B |z|^q)`` over ``|z| <= R``.

    The maximum is taken over a polar grid of ``samples`` radii (including 0)
    by ``samples`` angles, so the result is a lower bound of the supremum
    over the whole plane.
    """
    if not (R > 0 and samples > 0):
        raise PreconditionError("R and samples must be positive")
    if B < 0 or not 0 < q < 2:
        raise PreconditionError("need B >= 0 and 0 < q < 2")
    r = np.linspace(0.0, R, int(samples))
    ang = np.linspace(0.0, 2.0 * np.pi, int(samples), endpoint=False)
    z = (r[:, None] * np.exp(1j * ang[None, :])).ravel()
    with np.errstate(over="ignore", invalid="ignore"):
        d = np.abs(np.asarray(f(z)) - np.asarray(g(z)))
        # combine in log space so large |f| and strong weights do not overflow
        logw = np.where(d > 0, np.log(np.where(d > 0, d, 1.0)) - B * np.abs(z) ** q, -np.inf)
    if np.any(np.isnan(logw)):
        raise PreconditionError("function handles returned non-finite values")
    return float(np.exp(np.max(logw)))


@dataclass(frozen=True)
class SupershiftFamily:
    """A kappa-indexed family phi_kappa with a supershift towards ``target``.

    Attributes
    ----------
    evaluator : callable
        ``evaluator(kappa, z)`` returns phi_kappa(z).
    admissible : tuple
        Interval ``(lo, hi)`` containing every kappa_l(n).
    target : float
        The kappa reached in the limit, outside ``admissible``.
    bound_provider : callable
        ``bound_provider(kappa)`` returns a GrowthBound for phi_kappa.
    coefficients : callable
        ``coefficients(n)`` returns arrays ``(C_l(n), kappa_l(n))``.
    n : int
        Default order.
    direct : callable, optional
        ``direct(n)`` returns a closed-form handle for F_n; when absent F_n is
        summed from the coefficients.
    """

    evaluator: Callable
    admissible: tuple
    target: float
    bound_provider: Callable
    coefficients: Callable
    n: int = 10
    name: str = "family"
    direct: Optional[Callable] = None

    def phi(self, kappa):
        """EntireFunction handle for phi_kappa."""
        return EntireFunction(lambda z: self.evaluator(kappa, z), self.bound_provider(kappa),
                              f"phi_{kappa}")

    def member(self, n=None):
        """EntireFunction handle for F_n = sum_l C_l(n) phi_{kappa_l(n)}."""
        n = self.n if n is None else n
        if self.direct is not None:
            return self.direct(n)
        c, kap = self.coefficients(n)
        bound = GrowthBound(float(np.sum(np.abs(c))), max(self.bound_provider(kk).B for kk in kap), 1.0)

        def f(z):
            z = np.asarray(z, dtype=complex)
            out = np.zeros(z.shape, dtype=complex)
            for cl, kl in zip(c, kap):
                out = out + cl * self.evaluator(kl, z)
            return out

        return EntireFunction(f, bound, f"F_{n}")


def build_supershift_plane_waves(k0, kappa, n=10):
    """Plane-wave supershift: phi_kappa(z) = exp(i kappa z), frequencies in [-k0, k0]."""
    k0 = float(k0)
    kappa = float(kappa)
    if not k0 > 0:
        raise PreconditionError("k0 must be positive")
    if not abs(kappa) > k0:
        raise PreconditionError(f"|kappa| = {abs(kappa)} <= k0 = {k0} is not a supershift target")

    def coeffs(m):
        F = build_superosc(m, kappa / k0, band=k0)
        return F.coefficients, F.frequencies

    def ev(kap, z):
        return np.exp(1j * kap * np.asarray(z, dtype=complex))

    def bnd(kap):
        return GrowthBound(1.0, abs(kap), 1.0)

    def direct(m):
        return superosc_function(build_superosc(m, kappa / k0, band=k0))

    return SupershiftFamily(ev, (-k0, k0), kappa, bnd, coeffs, int(n), "plane_waves", direct)
