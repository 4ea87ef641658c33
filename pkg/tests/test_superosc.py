import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from supershift import superosc as so
from supershift.exceptions import PreconditionError


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 40), st.floats(1.1, 4.0), st.floats(-3, 3), st.floats(-1, 1))
def test_sum_and_product_forms_agree(n, k, x, y):
    F = so.build_superosc(n, k)
    z = complex(x, y)
    s = so.eval_superosc(F, z, "sum")
    p = so.eval_superosc(F, z, "product")
    scale = np.sum(np.abs(F.coefficients)) * math.exp(abs(y))
    assert abs(s - p) <= 1e-12 * scale


def test_coefficients_sum_to_one_and_frequencies_in_band():
    F = so.build_superosc(12, 2.5, band=0.7)
    assert np.sum(F.coefficients) == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.abs(F.frequencies) <= 0.7 + 1e-15)
    assert F.target == pytest.approx(1.75)


def test_superoscillation_approaches_target_wave():
    x = np.linspace(-0.5, 0.5, 21)
    errs = [np.max(np.abs(so.eval_superosc(so.build_superosc(n, 3.0), x) - np.exp(3j * x)))
            for n in (8, 16, 32, 64, 128)]
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 0.05


def test_aq_distance_shrinks():
    target = so.plane_wave(2.0)
    d = [so.aq_distance(so.superosc_function(so.build_superosc(n, 2.0)), target, 2.0, 1.0, R=10.0)
         for n in (8, 16, 32)]
    assert d[0] > d[1] > d[2]
    assert so.aq_distance(target, target, 1.0, 1.0) == 0.0


def test_growth_bound_validation():
    with pytest.raises(PreconditionError):
        so.GrowthBound(1.0, 1.0, 2.0)
    with pytest.raises(PreconditionError):
        so.GrowthBound(-1.0, 1.0)
    b = so.GrowthBound(2.0, 1.0).times(so.GrowthBound(3.0, 0.5))
    assert (b.A, b.B, b.p) == (6.0, 1.5, 1.0)


def test_growth_bound_product_mixed_exponents_is_an_upper_bound():
    b = so.GrowthBound(1.0, 1.0, 0.5).times(so.GrowthBound(1.0, 2.0, 1.5))
    r = np.linspace(0, 50, 501)
    assert np.all(r ** 0.5 + 2 * r ** 1.5 <= b.log_envelope(r) + 1e-9)


def test_plane_wave_and_poly_exp_respect_their_bounds():
    z = 7 * np.exp(1j * np.linspace(0, 2 * np.pi, 64))
    for f in (so.plane_wave(1.5), so.poly_exp([1, -2, 0.5j], c=0.3 - 1j)):
        assert np.all(np.log(np.abs(f(z))) <= f.bound.log_envelope(np.abs(z)) + 1e-12)


def test_supershift_family_members():
    fam = so.build_supershift_plane_waves(1.0, 3.0)
    assert fam.target == 3.0
    z = np.array([0.3, -1.2 + 0.4j])
    c, kap = fam.coefficients(6)
    summed = sum(cl * np.exp(1j * kl * z) for cl, kl in zip(c, kap))
    np.testing.assert_allclose(fam.member(6)(z), summed, rtol=1e-12)
    assert np.all(np.abs(kap) <= 1.0)
    with pytest.raises(PreconditionError):
        so.build_supershift_plane_waves(1.0, 0.5)


def test_unknown_form_rejected():
    with pytest.raises(PreconditionError):
        so.eval_superosc(so.build_superosc(4, 2.0), 0.1, "fourier")
