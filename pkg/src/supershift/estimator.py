"""scikit-learn style wrapper around the contour evolution.

The estimator has nothing to learn: ``fit`` only validates the
hyper-parameters and assembles the problem, ``transform`` maps rows
``(t, x)`` to ``(Re Psi, Im Psi)``.  This keeps ``get_params``/``set_params``,
cloning and pipelines working for parameter sweeps.
"""
import math

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .config import RunConfig
from .evolution import evolve_result
from .exceptions import QuadratureAccuracyError

__all__ = ["SchrodingerEvolver"]


class SchrodingerEvolver(TransformerMixin, BaseEstimator):
    """Evaluate Psi(t, x) for a configured potential and initial datum.

    Parameters
    ----------
    variant : {'free', 'centrifugal', 'point'}
    lam : float
        Coupling of the centrifugal potential ``lam / x^2``.
    phi : float
        Phase of the interface matrix, in [0, pi).
    alpha, beta : complex
        SU(2) entries of the interface matrix.
    initial : {'plane_wave', 'superosc', 'custom_poly_exp'}
    k : float
        Wave number (plane wave) or target frequency (superoscillation).
    n : int
        Order of the superoscillating sequence.
    k0 : float
        Band limit of the superoscillating sequence.
    coeffs : sequence of complex
        Polynomial coefficients for ``custom_poly_exp``.
    c : complex
        Exponential rate for ``custom_poly_exp``.
    theta : float
        Contour rotation angle.
    rel_tol : float
        Quadrature tolerance.
    strict : bool
        Raise on unconverged points instead of returning NaN.
    """

    def __init__(self, variant="free", lam=-0.1875, phi=0.0, alpha=-1.0, beta=0.0,
                 initial="plane_wave", k=1.0, n=16, k0=1.0, coeffs=(1.0,), c=0.0,
                 theta=math.pi / 4, rel_tol=1e-11, strict=True):
        self.variant = variant
        self.lam = lam
        self.phi = phi
        self.alpha = alpha
        self.beta = beta
        self.initial = initial
        self.k = k
        self.n = n
        self.k0 = k0
        self.coeffs = coeffs
        self.c = c
        self.theta = theta
        self.rel_tol = rel_tol
        self.strict = strict

    def _config(self):
        cfg = RunConfig.default()
        a, b = complex(self.alpha), complex(self.beta)
        for key, v in (("potential.variant", self.variant), ("potential.lambda", self.lam),
                       ("potential.phi", self.phi), ("potential.alpha_re", a.real),
                       ("potential.alpha_im", a.imag), ("potential.beta_re", b.real),
                       ("potential.beta_im", b.imag), ("initial.kind", self.initial),
                       ("initial.k", self.k), ("initial.n", self.n), ("initial.k0", self.k0),
                       ("initial.coeffs", ",".join(repr(complex(v)) for v in self.coeffs)),
                       ("initial.c", repr(complex(self.c))), ("contour.theta", self.theta),
                       ("quadrature.rel_tol", self.rel_tol)):
            cfg.set(key, v if isinstance(v, str) else repr(v))
        return cfg

    def fit(self, X=None, y=None):
        """Validate parameters and build the problem; ``X`` is ignored."""
        self.problem_ = self._config().problem()
        self.n_features_in_ = 2
        return self

    def evaluate(self, X):
        """Complex Psi at rows ``(t, x)``."""
        check_is_fitted(self, "problem_")
        X = check_array(X, dtype=float)
        if X.shape[1] != 2:
            raise ValueError(f"expected rows (t, x), got {X.shape[1]} columns")
        out = np.empty(X.shape[0], dtype=complex)
        for i, (t, x) in enumerate(X):
            r = evolve_result(self.problem_, t, x)
            if not r.converged:
                if self.strict:
                    raise QuadratureAccuracyError(f"Psi({t}, {x}) did not converge", r.value,
                                                  r.error)
                out[i] = complex("nan")
            else:
                out[i] = r.value
        return out

    def transform(self, X):
        """Columns ``(Re Psi, Im Psi)`` for rows ``(t, x)``."""
        psi = self.evaluate(X)
        return np.column_stack([psi.real, psi.imag])
