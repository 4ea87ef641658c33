import cmath

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import FunctionTransformer

from supershift import (EvolutionProblem, GreensFunctionSpec, SchrodingerEvolver, evolve,
                        plane_wave)
from supershift.config import ConfigError


def test_transform_free_plane_wave():
    X = np.array([[0.5, 1.0], [1.0, -2.0], [0.1, 0.0]])
    out = SchrodingerEvolver(k=2.0).fit().transform(X)
    ref = np.exp(1j * (2.0 * X[:, 1] - 4.0 * X[:, 0]))
    np.testing.assert_allclose(out[:, 0] + 1j * out[:, 1], ref, atol=1e-10)


def test_point_interaction_matches_direct_evaluation():
    est = SchrodingerEvolver(variant="point", phi=0.3, alpha=0.48 + 0.36j, beta=0.8, k=1.3)
    X = [[0.4, 0.7], [0.4, -1.5]]
    psi = est.fit().evaluate(X)
    prob = EvolutionProblem(GreensFunctionSpec.point_interaction(0.3, 0.48 + 0.36j, 0.8),
                            plane_wave(1.3))
    np.testing.assert_array_equal(psi, [evolve(prob, t, x) for t, x in X])


def test_params_and_clone():
    est = SchrodingerEvolver(variant="centrifugal", lam=1.0)
    c = clone(est)
    assert c.get_params() == est.get_params()
    c.set_params(lam=2.0)
    assert est.lam == 1.0
    assert c.fit().problem_.green.lam == 2.0


def test_validation_happens_in_fit():
    est = SchrodingerEvolver(variant="harmonic")
    with pytest.raises(ConfigError):
        est.fit()
    with pytest.raises(NotFittedError):
        SchrodingerEvolver().transform([[1.0, 1.0]])
    with pytest.raises(ValueError):
        SchrodingerEvolver().fit().transform([[1.0, 1.0, 1.0]])
    with pytest.raises(ValueError):
        SchrodingerEvolver().fit().transform([[np.nan, 1.0]])


def test_pipeline_use():
    pipe = make_pipeline(FunctionTransformer(lambda X: np.column_stack([X[:, 0], -X[:, 1]])),
                         SchrodingerEvolver(k=1.0))
    X = np.array([[0.2, 0.5]])
    out = pipe.fit_transform(X)
    assert out.shape == (1, 2)
    assert out[0, 0] + 1j * out[0, 1] == pytest.approx(cmath.exp(1j * (-0.5 - 0.2)))
