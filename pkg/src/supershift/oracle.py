"""Crank-Nicolson reference solver on a truncated line.

Unknowns live on ``x = +-j h`` (``j = 1..n_x``) on each half line.  The
one-sided limits ``psi(0+-)`` are ghost values eliminated through the
interface condition ``M (psi+, psi-) = N (psi_x+, -psi_x-)`` with the
second-order one-sided derivative stencils.  For centrifugal potentials the
half lines start at ``+-x_min`` with a hard wall instead.

This solver shares no code with the contour method except the interface
matrices and the potential; it is meant as an independent check.
"""
from dataclasses import dataclass, field
import math

import numpy as np
from scipy import sparse
from scipy.interpolate import CubicSpline
from scipy.sparse.linalg import splu
from scipy.special import erfc

from . import greens
from .evolution import WaveField, evolve_result
from .exceptions import PreconditionError, SetupError

__all__ = ["FdScheme", "cn_evolve", "cross_validate", "scheme_for", "CnSolution"]

PAD_FRACTION = 0.15
BOUNDARIES = ("absorbing-pad", "hard-wall")


@dataclass(frozen=True)
class FdScheme:
    """Discretisation parameters.

    Attributes
    ----------
    L : float
        Half-width of the domain.
    n_x : int
        Interior points per half line.
    n_t : int
        Number of time steps.
    boundary : str
        ``'absorbing-pad'`` (quadratic complex ramp over the outer 15 %, with
        the initial datum tapered smoothly to zero across the pad so the wall
        at ``+-L`` sees no jump) or ``'hard-wall'``.
    interface : TransmissionCondition
    x_min : float
        Hard-wall collar around the origin; 0 means the interface rows are used.
    pad_strength : float
        Peak absorption rate of the pad.
    startup : int
        Backward-Euler half steps before Crank-Nicolson (Rannacher start).
        They damp the stiff modes excited when the initial datum does not
        satisfy the wall or interface condition, which plain CN never damps.
    """

    L: float
    n_x: int
    n_t: int
    boundary: str = "absorbing-pad"
    interface: greens.TransmissionCondition = None
    x_min: float = 0.0
    pad_strength: float = 20.0
    startup: int = 4

    def __post_init__(self):
        if not (self.L > 0 and math.isfinite(self.L)):
            raise PreconditionError("L must be positive")
        if self.n_x < 16 or self.n_t < 16:
            raise PreconditionError("n_x and n_t must be at least 16")
        if self.boundary not in BOUNDARIES:
            raise PreconditionError(f"boundary must be one of {BOUNDARIES}")
        if not 0.0 <= self.x_min < self.L / 2:
            raise PreconditionError("x_min must lie in [0, L/2)")
        if self.startup < 0 or self.startup % 2:
            raise PreconditionError("startup must be an even number of half steps")
        if self.x_min == 0.0 and self.interface is None:
            raise PreconditionError("an interface condition is required without a collar")

    @property
    def h(self):
        return (self.L - self.x_min) / (self.n_x + 1)

    def refined(self, factor=2):
        return FdScheme(self.L, self.n_x * factor + factor - 1, self.n_t * factor, self.boundary,
                        self.interface, self.x_min, self.pad_strength, self.startup)

    def nodes(self):
        """Grid of unknowns, ordered from -L to L."""
        pos = self.x_min + self.h * np.arange(1, self.n_x + 1)
        return np.concatenate([-pos[::-1], pos])


@dataclass
class CnSolution:
    field: WaveField
    x: np.ndarray
    psi: np.ndarray
    interface_residual: float
    norm_drift: float
    step_drift: float = 0.0


def scheme_for(spec, L=20.0, n_x=2048, n_t=400, boundary="absorbing-pad", x_min=0.05):
    """Default scheme for a Green's function spec (collar for centrifugal kernels)."""
    if spec.is_centrifugal:
        return FdScheme(L, n_x, n_t, boundary, None, x_min)
    return FdScheme(L, n_x, n_t, boundary, greens.transmission_matrices(spec), 0.0)


def _ghost_map(scheme):
    """2x4 matrix G with (psi(0+), psi(0-)) = G (psi_1, psi_2, psi_-1, psi_-2)."""
    h = scheme.h
    M, N = scheme.interface.M, scheme.interface.N
    A = M + 1.5 * N / h
    if abs(np.linalg.det(A)) < 1e-12 * max(1.0, np.linalg.norm(A) ** 2):
        raise SetupError("interface rows are singular for this (M, N) pair")
    K = np.linalg.solve(A, N) / (2.0 * h)
    # r = (4 psi_1 - psi_2, 4 psi_-1 - psi_-2)
    R = np.array([[4.0, -1.0, 0.0, 0.0], [0.0, 0.0, 4.0, -1.0]])
    return K @ R


def _hamiltonian(scheme, V):
    n = scheme.n_x
    h = scheme.h
    x = scheme.nodes()
    N2 = 2 * n
    main = 2.0 / h ** 2 + np.asarray(V(x), dtype=complex)
    if scheme.boundary == "absorbing-pad":
        xp = (1.0 - PAD_FRACTION) * scheme.L
        ramp = np.clip((np.abs(x) - xp) / (scheme.L - xp), 0.0, None)
        main = main - 1j * scheme.pad_strength * ramp ** 2
    off = -np.ones(N2 - 1) / h ** 2
    # the two half lines only talk through the interface rows
    off[n - 1] = 0.0
    H = sparse.diags([main, off, off], [0, -1, 1], format="lil", dtype=complex)
    ghost = None
    if scheme.x_min == 0.0:
        ghost = _ghost_map(scheme)
        i_p1, i_p2, i_m1, i_m2 = n, n + 1, n - 1, n - 2
        cols = [i_p1, i_p2, i_m1, i_m2]
        # row of psi_1 picks up -psi(0+)/h^2, row of psi_-1 picks up -psi(0-)/h^2
        for row, g in ((i_p1, ghost[0]), (i_m1, ghost[1])):
            for c, gv in zip(cols, g):
                H[row, c] -= gv / h ** 2
    return H.tocsc(), x, ghost


def _taper(scheme, x):
    """Smooth window, 1 inside the pad and about 1e-8 at +-L."""
    if scheme.boundary != "absorbing-pad":
        return np.ones_like(x)
    width = PAD_FRACTION * scheme.L
    centre = scheme.L - 0.5 * width
    return 0.5 * erfc((np.abs(x) - centre) / (width / 8.0))


def _initial(scheme, F, x):
    return np.asarray(F(x.astype(complex)), dtype=complex) * _taper(scheme, x)


def _setup_check(scheme, F, x):
    f = np.abs(np.asarray(F(x.astype(complex))))
    inner = np.abs(x) <= (1.0 - PAD_FRACTION) * scheme.L
    scale = float(np.max(f[inner])) if np.any(inner) else float(np.max(f))
    ends = np.array([-scheme.L, scheme.L])
    edge = float(np.max(np.abs(_initial(scheme, F, ends))))
    damp = math.exp(-scheme.pad_strength) if scheme.boundary == "absorbing-pad" else 1.0
    if edge * damp > 1e-6 * max(scale, 1e-300):
        raise SetupError(f"|F| at +-L is {edge:.3g}; enlarge L or use an absorbing pad")


def cn_evolve(scheme, V, F, t_final):
    """Crank-Nicolson solution of ``i psi_t = -psi_xx + V psi`` up to ``t_final``.

    Parameters
    ----------
    scheme : FdScheme
    V : callable
        Potential on the grid (finite there).
    F : callable
        Initial datum, vectorised.
    t_final : float

    Returns
    -------
    CnSolution
        Discrete wave field at ``t_final`` plus the largest interface
        residual seen over the run, the relative L2 norm drift over the
        run and the largest relative drift of a single CN step.
    """
    if not t_final > 0:
        raise PreconditionError("t_final must be positive")
    H, x, ghost = _hamiltonian(scheme, V)
    vx = np.asarray(V(x), dtype=float)
    if not np.all(np.isfinite(vx)):
        raise PreconditionError("potential is not finite on the grid")
    _setup_check(scheme, F, x)
    psi = _initial(scheme, F, x)
    dt = t_final / scheme.n_t
    I = sparse.identity(x.size, dtype=complex, format="csc")
    if scheme.startup >= 2 * scheme.n_t:
        raise PreconditionError("startup half steps exceed the number of steps")
    lu = splu((I + 0.5j * dt * H).tocsc())
    B = (I - 0.5j * dt * H).tocsr()
    # backward Euler with dt/2 has the same matrix as the CN left-hand side
    steps = [None] * scheme.startup + ["cn"] * (scheme.n_t - scheme.startup // 2)
    n = scheme.n_x
    h = scheme.h
    norm0 = np.linalg.norm(psi)
    worst = 0.0
    step_drift = 0.0
    for kind in steps:
        prev = np.linalg.norm(psi)
        psi = lu.solve(B @ psi if kind == "cn" else psi)
        if kind == "cn":
            # startup steps are dissipative by design, only CN steps are unitary
            step_drift = max(step_drift, abs(np.linalg.norm(psi) - prev) / prev)
        if ghost is not None:
            p0, m0 = ghost @ psi[[n, n + 1, n - 1, n - 2]]
            dp = (-3.0 * p0 + 4.0 * psi[n] - psi[n + 1]) / (2.0 * h)
            dm = (3.0 * m0 - 4.0 * psi[n - 1] + psi[n - 2]) / (2.0 * h)
            worst = max(worst, scheme.interface.residual(p0, m0, dp, dm) /
                        max(1.0, abs(p0) + abs(m0) + h * (abs(dp) + abs(dm))))
    drift = abs(np.linalg.norm(psi) - norm0) / norm0
    fld = WaveField(np.array([t_final]), x, psi[None, :], np.ones((1, x.size), dtype=bool),
                    np.full((1, x.size), np.nan),
                    {"h": h, "dt": dt, "L": scheme.L, "boundary": scheme.boundary,
                     "x_min": scheme.x_min})
    return CnSolution(fld, x, psi, worst, drift, step_drift)


def _interp(sol, xs):
    out = np.empty(xs.size, dtype=complex)
    for sgn in (1.0, -1.0):
        sel = np.sign(xs) == sgn
        if not np.any(sel):
            continue
        side = np.sign(sol.x) == sgn
        xx, pp = sol.x[side], sol.psi[side]
        out[sel] = CubicSpline(xx, pp.real)(xs[sel]) + 1j * CubicSpline(xx, pp.imag)(xs[sel])
    return out


def cross_validate(prob, scheme, t, compact):
    """Compare the contour solution with Crank-Nicolson on a compact set.

    The CN error is estimated from a second run at half the steps in space
    and time (``|fine - coarse| / 3`` for a second-order scheme); the fine
    run is the one compared.

    Parameters
    ----------
    prob : EvolutionProblem
    scheme : FdScheme
    t : float
    compact : tuple
        ``(lo, hi[, samples])``; must exclude 0 and stay clear of the pad
        and the collar.

    Returns
    -------
    dict
        ``sup``, ``l2`` discrepancies, ``cn_error`` estimate, ``ratio`` of
        coarse/fine CN discrepancies and the ``converged`` flag of the
        contour evaluations.
    """
    lo, hi = float(compact[0]), float(compact[1])
    m = int(compact[2]) if len(compact) > 2 else 201
    if lo <= 0 <= hi:
        raise PreconditionError("compact must exclude 0")
    inner = (1.0 - PAD_FRACTION) * scheme.L
    if max(abs(lo), abs(hi)) >= inner or min(abs(lo), abs(hi)) <= scheme.x_min:
        raise PreconditionError("compact must stay inside the domain, away from pad and collar")
    xs = np.linspace(lo, hi, m)
    spec = prob.green
    V = spec.potential
    coarse = cn_evolve(scheme, V, prob.initial, t)
    fine = cn_evolve(scheme.refined(), V, prob.initial, t)
    pc, pf = _interp(coarse, xs), _interp(fine, xs)
    res = [evolve_result(prob, t, x) for x in xs]
    psi = np.array([r.value for r in res])
    d = np.abs(psi - pf)
    dc = np.abs(psi - pc)
    return {
        "sup": float(np.max(d)),
        "l2": float(np.sqrt(np.mean(d ** 2) * (hi - lo))),
        "cn_error": float(np.max(np.abs(pf - pc)) / 3.0),
        "ratio": float(np.max(dc) / max(np.max(d), 1e-300)),
        "interface_residual": max(coarse.interface_residual, fine.interface_residual),
        "converged": all(r.converged for r in res),
    }
