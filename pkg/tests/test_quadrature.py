import cmath
import math

import numpy as np
import pytest

from supershift import quadrature as q
from supershift.exceptions import PreconditionError, QuadratureAccuracyError
from supershift.superosc import GrowthBound, EntireFunction, plane_wave


def gauss_exp(a, x, c):
    """int_R exp(ia(y-x)^2 + c y) dy in closed form."""
    return cmath.sqrt(1j * math.pi / a) * cmath.exp(c * x + 1j * c * c / (4 * a))


FUNCS = {
    "one": (lambda z: np.ones_like(z), GrowthBound(1.0, 0.0), [(1.0, 0.0)]),
    "z": (lambda z: z, GrowthBound(1.0, 1.0), None),
    "exp_half": (lambda z: np.exp(z / 2), GrowthBound(1.0, 0.5), [(1.0, 0.5)]),
    "cos": (np.cos, GrowthBound(1.0, 1.0), [(0.5, 1j), (0.5, -1j)]),
}


def exact(name, a, x):
    if name == "z":
        return x * gauss_exp(a, x, 0.0)
    return sum(w * gauss_exp(a, x, c) for w, c in FUNCS[name][2])


@pytest.mark.parametrize("name", sorted(FUNCS))
@pytest.mark.parametrize("a,x", [(0.5, 0.0), (2.5, 1.3), (0.1, -2.0)])
def test_fullline_exact(name, a, x):
    f, b, _ = FUNCS[name]
    ri = q.RotatedIntegrand(f, b, a, x)
    got = q.fresnel_fullline(ri)
    ref = exact(name, a, x)
    assert abs(got - ref) <= 1e-10 * max(1.0, abs(ref))


def test_fullline_independent_of_angle_and_shift():
    ri = q.RotatedIntegrand(plane_wave(2.0), plane_wave(2.0).bound, 1.0, 0.7)
    ref = gauss_exp(1.0, 0.7, 2j)
    for th in (0.2, math.pi / 4, 1.3):
        assert abs(q.fresnel_fullline(ri, q.SectorSpec(theta=th)) - ref) < 1e-10
    assert abs(q.fresnel_fullline(ri, shift=0.7) - ref) < 1e-10


def test_halfline_of_constant():
    ri = q.RotatedIntegrand(lambda z: np.ones_like(z), GrowthBound(1.0, 0.0), 2.0, 0.0)
    ref = 0.5 * math.sqrt(math.pi / 2.0) * cmath.exp(1j * math.pi / 4)
    assert abs(q.fresnel_halfline(ri) - ref) < 1e-12


def test_shifted_halfline_pieces_add_up():
    f = plane_wave(1.0)
    ri = q.RotatedIntegrand(f, f.bound, 1.0, 0.5)
    right = q.shifted_halfline(ri, 0.5)
    # left half: reflect y -> 2*0.5 - y
    g = EntireFunction(lambda z: f(1.0 - z), f.bound)
    left = q.shifted_halfline(q.RotatedIntegrand(g, g.bound, 1.0, 0.5), 0.5)
    assert abs(right + left - gauss_exp(1.0, 0.5, 1j)) < 1e-10


@pytest.mark.parametrize("name", sorted(FUNCS))
def test_regularised_real_line_converges_to_rotated(name):
    f, b, _ = FUNCS[name]
    ri = q.RotatedIntegrand(f, b, 1.0, 0.4)
    ref = q.fresnel_fullline(ri)
    eps = [4e-2, 2e-2, 1e-2]
    errs = [abs(q.regularized_real(ri, e) - ref) for e in eps]
    # at least first order in eps
    assert errs[1] < 0.6 * errs[0] and errs[2] < 0.6 * errs[1]
    val, est = q.regularized_limit(ri)
    assert abs(val - ref) < 1e-5 * max(1.0, abs(ref))


def test_regularised_rotated_matches_real_at_fixed_eps():
    f = plane_wave(1.5)
    ri = q.RotatedIntegrand(f, f.bound, 1.0, -0.3)
    a = q.regularized_rotated(ri, 0.05)
    b = q.regularized_real(ri, 0.05)
    assert abs(a - b) < 1e-9


def test_richardson_is_exact_on_polynomials():
    eps = np.array([0.4, 0.2, 0.1])
    val, _ = q.richardson_zero(eps, 3.0 - 2.0 * eps + 5.0 * eps ** 2)
    assert val == pytest.approx(3.0, abs=1e-13)


def test_preconditions():
    with pytest.raises(PreconditionError):
        q.SectorSpec(theta=math.pi / 2)
    with pytest.raises(PreconditionError):
        q.QuadratureConfig(rel_tol=1e-16)
    with pytest.raises(PreconditionError):
        q.RotatedIntegrand(lambda z: np.exp(3 * z), GrowthBound(1.0, 1.0), 1.0)
    ri = q.RotatedIntegrand(lambda z: np.ones_like(z), GrowthBound(1.0, 0.0), 1.0)
    with pytest.raises(PreconditionError):
        q.regularized_real(ri, 5.0)


def test_budget_exhaustion_raises_with_estimate():
    f = plane_wave(3.0)
    ri = q.RotatedIntegrand(f, f.bound, 0.05, 0.0)
    with pytest.raises(QuadratureAccuracyError) as exc:
        q.fresnel_fullline(ri, cfg=q.QuadratureConfig(max_nodes=16))
    assert np.isfinite(exc.value.value) and exc.value.error > 0
