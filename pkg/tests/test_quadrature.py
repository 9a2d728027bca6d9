import math

import numpy as np
import pytest

from cmentropy.errors import ToleranceNotReached
from cmentropy.quadrature import QuadratureSpec, gauss_kronrod, integrate


def test_kronrod_exact_on_polynomials():
    # K15 integrates degree 22 exactly, G7 degree 13
    v, err = gauss_kronrod(lambda t: t**13, 0.0, 1.0)
    assert v == pytest.approx(1 / 14, rel=1e-15)
    assert err < 1e-15


@pytest.mark.parametrize("f, a, b, want", [
    (np.exp, 0.0, 1.0, math.e - 1),
    (np.sqrt, 0.0, 1.0, 2 / 3),
    (lambda t: np.log(t), 0.0, 1.0, -1.0),
    (lambda t: 1 / (1 + t * t), -5.0, 5.0, 2 * math.atan(5.0)),
])
def test_adaptive(f, a, b, want):
    with np.errstate(divide="ignore"):
        r = integrate(f, a, b, QuadratureSpec(abs_tol=1e-12))
    assert abs(r.value - want) <= 1e-11
    assert r.error_estimate <= 1e-12
    assert r.subdivisions_used >= 1


def test_tolerance_not_reached():
    with pytest.raises(ToleranceNotReached):
        integrate(lambda t: np.sign(t - 1 / 3), 0.0, 1.0, QuadratureSpec(abs_tol=1e-14, max_subdivisions=5))


@pytest.mark.parametrize("kwargs", [{"abs_tol": 0.0}, {"max_subdivisions": 0}])
def test_spec_validation(kwargs):
    with pytest.raises(ValueError):
        QuadratureSpec(**kwargs)
