import cmath
import math

import numpy as np
import pytest

from supershift import greens
from supershift.exceptions import DomainError, PreconditionError, UnsupportedOrderError

G = greens.GreensFunctionSpec
CASE_ONE = G.point_interaction(0.3, 0.48 + 0.36j, 0.8 * cmath.exp(0.3j))
DIRICHLET = G.point_interaction(0.0, -1.0, 0.0)
NEUMANN = G.point_interaction(0.0, 1.0, 0.0)
SPECS = {
    "free": G.free(),
    "attractive": G.centrifugal(-0.1875),
    "attractive_imag": G.centrifugal(-0.5),
    "repulsive": G.centrifugal(1.0),
    "case_one": CASE_ONE,
    "case_two": G.point_interaction(0.5 * math.pi, 0.6j, 0.8),
    "dirichlet": DIRICHLET,
}


def steps(h, t, x, z):
    a = 0.25 / t
    w = abs(z - x)
    return h * t / (1 + a * w * w), h / (1 / abs(x) + 2 * a * w)


def test_free_kernel_closed_form():
    t, x, z = 0.3, -0.7, 1.1 + 0.2j
    ref = cmath.exp(1j * (z - x) ** 2 / (4 * t)) / (2 * cmath.sqrt(1j * math.pi * t))
    assert abs(greens.eval_green(SPECS["free"], t, x, z).value - ref) < 1e-14


@pytest.mark.parametrize("name", sorted(SPECS))
@pytest.mark.parametrize("t,x,z", [(0.2, 0.8, 1.3), (0.5, -1.4, -0.6 - 0.3j), (1.0, 0.3, 2.0 + 0.5j)])
def test_kernel_solves_schrodinger(name, t, x, z):
    spec = SPECS[name]
    h_t, h_x = steps(1e-2, t, x, z)
    r = greens.schrodinger_residual(spec, t, x, z, h_t, h_x, richardson=True)
    g = greens.eval_green(spec, t, x, z).value
    v = abs(float(spec.potential(x)))
    scale = abs(g) * (1 + v + (0.25 / t) * abs(z - x) ** 2 / t)
    assert abs(r) < 1e-6 * scale


@pytest.mark.parametrize("name", ["free", "attractive", "repulsive", "dirichlet", "case_two"])
def test_kernel_symmetric_in_real_arguments(name):
    spec = SPECS[name]
    t = 0.4
    for x, y in [(0.5, 1.7), (-0.4, -2.2), (0.9, 0.91)]:
        a = greens.eval_green(spec, t, x, y).value
        b = greens.eval_green(spec, t, y, x).value
        assert abs(a - b) < 1e-12 * max(1.0, abs(a))


def test_dirichlet_kernel_is_odd_image():
    t = 0.35
    free = SPECS["free"]
    for x, y in [(0.6, 1.2), (-0.3, -0.9)]:
        g = greens.eval_green(DIRICHLET, t, x, y).value
        ref = greens.eval_green(free, t, x, y).value - greens.eval_green(free, t, x, -y).value
        assert abs(g - ref) < 1e-13
        assert greens.eval_green(DIRICHLET, t, x, -y).value == 0


def test_neumann_kernel_is_even_image():
    t = 0.35
    free = SPECS["free"]
    g = greens.eval_green(NEUMANN, t, 0.6, 1.2).value
    ref = greens.eval_green(free, t, 0.6, 1.2).value + greens.eval_green(free, t, 0.6, -1.2).value
    assert abs(g - ref) < 1e-13


def test_classification():
    assert greens.classify_point_interaction(0.0, -1.0, 0.0).case_id == "III"
    assert greens.classify_point_interaction(0.0, 1.0, 0.0).case_id == "I"
    assert greens.classify_point_interaction(0.5 * math.pi, 0.6j, 0.8).case_id == "II"
    assert CASE_ONE.coefficients.case_id == "I"
    with pytest.raises(PreconditionError):
        greens.classify_point_interaction(0.2, 0.9, 0.9)


def test_transmission_matrices_free_is_continuity():
    tc = greens.transmission_matrices(SPECS["free"])
    # psi and psi_x continuous: residual vanishes
    assert tc.residual(1.3 + 0.2j, 1.3 + 0.2j, -0.5j, -0.5j) < 1e-15
    assert tc.residual(1.0, 0.0, 0.0, 0.0) > 0.1
    tc = greens.transmission_matrices(DIRICHLET)
    assert tc.residual(0.0, 0.0, 2.0, -3.0) < 1e-15


def test_delta_limit_free_and_attractive():
    for spec in (SPECS["free"], SPECS["attractive"]):
        errs = []
        for t in (1e-2, 1e-4, 1e-6):
            g = greens.eval_green(spec, t, 1.0, 1.0).value
            errs.append(abs(g * 2 * math.sqrt(t) - 1 / cmath.sqrt(1j * math.pi)))
        assert errs[-1] < 1e-4
        if spec.is_centrifugal:
            assert errs[0] > errs[1] > errs[2]


def test_growth_coefficients_bound_samples():
    t, x = 0.5, 0.8
    for name in ("attractive", "repulsive", "case_one"):
        spec = SPECS[name]
        A0, B0, A1, B1, p = greens.growth_coefficients(spec, t, x)
        r = np.geomspace(1e-2, 30, 60)
        z = (r[:, None] * np.exp(1j * np.linspace(0, math.pi / 4, 5))[None, :]).ravel()
        gt = np.array([greens.eval_green(spec, t, x, zz).gtilde for zz in z])
        assert np.all(np.abs(gt) <= A0 * np.exp(B0 * np.abs(z) ** p) * (1 + 1e-9))


def test_argument_errors():
    with pytest.raises(DomainError):
        greens.eval_green(CASE_ONE, 0.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        greens.eval_green(CASE_ONE, 1.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        greens.eval_green(SPECS["repulsive"], 1.0, 0.5, 2j)
    # the free kernel is regular at the origin
    greens.eval_green(SPECS["free"], 1.0, 0.0, 0.0)
    with pytest.raises(UnsupportedOrderError):
        G.centrifugal(-0.25)
    with pytest.raises(PreconditionError):
        G("attractive", lam=0.5)
    with pytest.raises(PreconditionError):
        G("magnetic")


def test_residual_stencil_checks():
    with pytest.raises(DomainError):
        greens.schrodinger_residual(CASE_ONE, 0.5, 0.01, 1.0, 1e-3, 0.02)
    with pytest.raises(PreconditionError):
        greens.schrodinger_residual(CASE_ONE, 0.5, 1.0, 1.0, 0.1, 1e-3)
