from __future__ import annotations

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nablalaplace.mittag_leffler import DiscreteMLParams, dml_window
from nablalaplace.signals import GridSignal, geometric, rising, unit_impulse, unit_step
from nablalaplace.systems import sweep_lambda
from nablalaplace.transform import (
    Contour,
    ContourError,
    DivergenceError,
    NablaTransform,
    NonConvergenceError,
    OutsideRegionError,
    PoleOnContourError,
    PreconditionError,
    contour_report_json,
    energy,
    final_value,
    forward_transform,
    freq_derivative,
    freq_path_integral,
    geometric_transform,
    grid_csv,
    impulse_transform,
    initial_value,
    inverse_transform,
    ml_transform,
    multiply_in_frequency,
    parseval_inner_product,
    principal_poles,
    rising_transform,
    step_transform,
    taylor_coefficients,
    value_at,
)


def series(f, s, terms=4000):
    """Brute-force ``sum_{m>=1} (1-s)^(m-1) f(m)``."""
    m = np.arange(1, terms + 1)
    return complex(np.sum((1 - s) ** (m - 1) * f(m)))


A = 2.0


# forward


def test_forward_examples():
    assert forward_transform(unit_step(A), 0.5) == pytest.approx(2.0, rel=1e-13)
    for s in (0.3, 1.7 + 0.4j, 0.1 - 0.8j):
        assert forward_transform(unit_impulse(A), s) == 1.0
    ref = math.gamma(1.5) / 0.8**1.5
    assert forward_transform(rising(A, 0.5), 0.8) == pytest.approx(ref, rel=1e-10)


def test_forward_reports_terms_and_diverges():
    val, info = forward_transform(geometric(A, 0.5), 0.4, full_output=True)
    assert val == pytest.approx(1 / (1 - 0.5 * 0.6))
    assert info["K"] > 0
    with pytest.raises(DivergenceError):
        forward_transform(geometric(A, 0.9), -0.2)


def test_from_signal_refuses_outside_certified_disk():
    X = NablaTransform.from_signal(geometric(A, 0.5))
    assert X(0.5) == pytest.approx(1 / (1 - 0.25))
    with pytest.raises(OutsideRegionError):
        X(1 - 1.95)


# inverse


def test_inverse_examples():
    # on rho = 0.5 rounding grows like 2^(m-1), so keep m small there
    k = A + np.arange(1, 11)
    np.testing.assert_allclose(inverse_transform(step_transform(), Contour(0.5), k, a=A), 1, atol=1e-12)
    imp = inverse_transform(impulse_transform(), Contour(0.5), k, a=A)
    np.testing.assert_allclose(imp, np.eye(1, 10)[0], atol=1e-13)
    k = A + np.arange(1, 31)
    np.testing.assert_allclose(inverse_transform(step_transform(), None, k, a=A), 1, atol=1e-12)
    p = DiscreteMLParams(0.5, 1.0, -0.5, A)
    np.testing.assert_allclose(inverse_transform(p.transform(), None, k, a=A), dml_window(p, 30), atol=1e-10)


def test_inverse_report_and_json():
    x, rep = inverse_transform(step_transform(), Contour(0.5), A + 3, a=A, full_output=True)
    data = json.loads(contour_report_json(rep))
    assert set(data) == {"rho", "N", "converged", "value"}
    assert data["converged"] and data["rho"] == 0.5
    assert data["value"] == pytest.approx([1.0, 0.0], abs=1e-12)


def test_inverse_contour_errors():
    X = geometric_transform(2.0)  # pole at s = 0.5
    with pytest.raises(PoleOnContourError):
        inverse_transform(X, Contour(0.5), 1)
    with pytest.raises(ContourError):
        inverse_transform(X, Contour(0.8), 1)
    with pytest.raises(ValueError):
        Contour(0.5, nodes=15)
    with pytest.raises(NonConvergenceError):
        inverse_transform(X, Contour(0.499, 16), 1, max_doublings=1)


def test_inverse_real_signal_has_tiny_imaginary_part():
    x = inverse_transform(rising_transform(0.7), None, np.arange(1, 40))
    assert np.max(np.abs(x.imag)) < 1e-12


@settings(max_examples=25, deadline=None)
@given(
    head=st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False), min_size=1, max_size=12),
    q=st.complex_numbers(max_magnitude=0.8, allow_nan=False, allow_infinity=False),
)
def test_round_trip(head, q):
    h = np.array(head)

    def gen(m):
        m = np.asarray(m)
        out = np.power(complex(q), m - 1.0)
        inside = m <= h.size
        out[inside] += h[m[inside] - 1]
        return out

    x = GridSignal.from_function(A, gen)
    X = NablaTransform.from_signal(x)
    k = A + np.arange(1, 51)
    np.testing.assert_allclose(inverse_transform(X, None, k, a=A), x.window(50), atol=1e-8)


# frequency-domain calculus


def test_freq_derivative_examples():
    ref = series(lambda m: (m - 1.0), 0.5)
    assert freq_derivative(step_transform(), 0.5) == pytest.approx(2.0)
    assert ref == pytest.approx(2.0)
    plain = NablaTransform(lambda s: 1.0 / s, 1.0, (0j,))
    assert freq_derivative(plain, 0.5, method="stencil") == pytest.approx(2.0, rel=1e-9)
    assert freq_derivative(impulse_transform(), 0.7) == pytest.approx(0.0, abs=1e-12)
    ref2 = series(lambda m: (m - 1.0) ** 2, 0.6)
    assert freq_derivative(plain, 0.6, m=2) == pytest.approx(ref2, rel=1e-6)


def test_freq_derivative_stencil_outside_region():
    with pytest.raises(OutsideRegionError):
        freq_derivative(NablaTransform(lambda s: 1 / s, 1.0, (0j,)), 1e-6, method="stencil")


def test_freq_path_integral_examples():
    # m = 0 on the step: sum over k >= a+2 of (1-s)^(k-a-1) / (k-a-1)
    ref = series(lambda m: np.where(m >= 2, 1.0 / np.maximum(m - 1, 1), 0.0), 0.5)
    assert freq_path_integral(step_transform(), 0.5, 0) == pytest.approx(ref, rel=1e-9)
    zero = NablaTransform(lambda s: np.zeros_like(s))
    assert freq_path_integral(zero, 0.5, 2) == 0
    # m = 1 on delta(k-a-2): x(a+2) / (2 - 1 - 1) is the excluded index, so the result is 0
    d2 = NablaTransform(lambda s: 1 - s)
    assert freq_path_integral(d2, 0.4, 1) == pytest.approx(0.0, abs=1e-12)
    # m = 1 on delta(k-a-3): (1-s)^2 / (3 - 1 - 1)
    d3 = NablaTransform(lambda s: (1 - s) ** 2)
    assert freq_path_integral(d3, 0.4, 1) == pytest.approx(0.36, rel=1e-10)


def test_multiply_examples():
    U = step_transform()
    assert multiply_in_frequency(U, U, 0.5) == pytest.approx(2.0, rel=1e-10)
    Y = geometric_transform(0.3 + 0.2j, 1.5)
    assert multiply_in_frequency(impulse_transform(), Y, 0.7) == pytest.approx(1.5, rel=1e-10)
    ramp = rising_transform(1.0)
    s = 0.8 + 0.1j
    assert multiply_in_frequency(U, ramp, s) == pytest.approx(1.0 / s**2, rel=1e-9)


def test_parseval_examples():
    I = impulse_transform()
    assert parseval_inner_product(I, I) == pytest.approx(1.0, abs=1e-13)
    H = geometric_transform(0.5, 0.5)  # x(k) = 2^-(k-a)
    assert parseval_inner_product(H, H) == pytest.approx(1 / 3, rel=1e-12)
    assert energy(H) == pytest.approx(1 / 3, rel=1e-12)
    assert parseval_inner_product(I, step_transform()) == pytest.approx(1.0, rel=1e-9)


# value theorems


def test_initial_value_examples():
    assert initial_value(step_transform()) == pytest.approx(1.0, abs=1e-10)
    assert initial_value(impulse_transform()) == pytest.approx(1.0, abs=1e-12)
    lam = -0.3
    # F_{alpha,1}(lam, a+1, a) = sum lam^j = 1/(1 - lam)
    assert initial_value(ml_transform(0.5, 1.0, lam)) == pytest.approx(1 / (1 - lam), abs=1e-9)


def test_value_at_examples():
    assert value_at(step_transform(), 3, [1, 1]) == pytest.approx(1.0, abs=1e-8)
    assert value_at(impulse_transform(), 2, [1]) == pytest.approx(0.0, abs=1e-8)
    lam = -0.5
    X = ml_transform(0.5, 0.5, lam)
    x = dml_window(DiscreteMLParams(0.5, 0.5, lam), 10)
    for m in range(1, 11):
        assert abs(value_at(X, m) - x[m - 1]) < 1e-8
    lim = value_at(X, 2, x[:1], method="limit")
    coef = value_at(X, 2, method="coefficient")
    assert abs(lim - coef) < 1e-8


def test_final_value_examples():
    assert final_value(step_transform()) == pytest.approx(1.0, abs=1e-8)
    assert final_value(impulse_transform()) == pytest.approx(0.0, abs=1e-8)
    lam = sweep_lambda(0.5, 1.1, math.pi / 2)
    assert abs(final_value(ml_transform(0.5, 0.5, lam))) < 1e-6


def test_final_value_refuses_unstable_poles():
    lam = sweep_lambda(0.5, 0.9, math.pi / 4)
    with pytest.raises(PreconditionError, match="pole"):
        final_value(ml_transform(0.5, 1.0, lam))
    with pytest.raises(PreconditionError):
        final_value(geometric_transform(2.0))
    # a decaying geometric signal is admissible
    assert final_value(geometric_transform(0.5)) == pytest.approx(0.0, abs=1e-8)


def test_principal_poles_branch():
    assert principal_poles(0.5, 0.25) == [pytest.approx(0.0625)]
    # arg(lam) beyond alpha*pi has no principal root
    assert principal_poles(0.5, -0.5) == []


def test_taylor_coefficients_of_rational():
    c = taylor_coefficients(geometric_transform(0.4 - 0.3j), 20)
    np.testing.assert_allclose(c, (0.4 - 0.3j) ** np.arange(20), atol=1e-13)


def test_grid_csv_header():
    text = grid_csv([0.5, 0.25j], [2.0, 1 - 1j])
    lines = text.splitlines()
    assert lines[0] == "re_s,im_s,re_X,im_X"
    assert lines[1] == "0.5,0.0,2.0,0.0"
    assert len(lines) == 3
