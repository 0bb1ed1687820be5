import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special

from borelnorm._quadrature import (NormValue, QuadratureSpec, endpoint_sqrt_rule,
                                   left_singular_rule, panels_rule, periodic_rule, two_level)


def test_spec_defaults():
    spec = QuadratureSpec()
    assert spec.rel_tol == 1e-8 and spec.abs_tol == 1e-12
    assert spec.refine_factor == 2


@pytest.mark.parametrize("kw", [{"rel_tol": 0}, {"abs_tol": -1}, {"refine_factor": 1},
                                {"nodes": 1}])
def test_spec_rejects(kw):
    with pytest.raises(ValueError):
        QuadratureSpec(**kw)


def test_refined():
    spec = QuadratureSpec(nodes=10, angles=16, refine_factor=3).refined()
    assert (spec.nodes, spec.angles) == (30, 48)


def test_norm_value_invariants():
    with pytest.raises(ValueError):
        NormValue(np.nan, 0.0)
    with pytest.raises(ValueError):
        NormValue(1.0, -1e-3)
    v = NormValue(2.0, 1e-9) + NormValue(3.0, 2e-9)
    assert v.value == 5.0 and v.error_estimate == pytest.approx(3e-9)
    assert v.scaled(-2).error_estimate == pytest.approx(6e-9)
    assert NormValue(4.0, 1e-8).rel_error == pytest.approx(2.5e-9)


def test_two_level_reports_difference():
    val = two_level(lambda s: 1.0 / s.nodes, QuadratureSpec(nodes=4))
    assert val.value == 1 / 8
    assert val.error_estimate == pytest.approx(1 / 8)


@given(st.integers(0, 20))
def test_panels_exact_for_polynomials(k):
    x, w = panels_rule([0.0, 0.3, 1.0, 2.0], 12)
    assert np.sum(w * x ** k) == pytest.approx(2.0 ** (k + 1) / (k + 1), rel=1e-12)


@given(st.floats(-0.9, 3.0))
def test_singular_rule(power):
    # int_0^2 x^power e^{-x} dx is a lower incomplete gamma function
    x, w = left_singular_rule(2.0, 16, power)
    ref = special.gamma(power + 1) * special.gammainc(power + 1, 2.0)
    assert np.sum(w * np.exp(-x)) == pytest.approx(ref, rel=1e-12)


def test_singular_rule_rejects_nonintegrable():
    with pytest.raises(ValueError):
        left_singular_rule(1.0, 8, -1.0)


def test_sqrt_rule():
    x, w = endpoint_sqrt_rule(0.0, 1.0, 20)
    assert np.sum(w * np.sqrt(1 - x)) == pytest.approx(2 / 3, rel=1e-13)
    x, w = endpoint_sqrt_rule(0.0, 1.0, 20, at_right=False)
    assert np.sum(w * np.sqrt(x)) == pytest.approx(2 / 3, rel=1e-13)


def test_periodic_rule():
    phi, w = periodic_rule(32, 0.1)
    assert np.sum(w * np.exp(np.cos(phi))) == pytest.approx(2 * np.pi * 1.2660658777520082)
