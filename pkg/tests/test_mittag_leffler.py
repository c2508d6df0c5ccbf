from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nablalaplace.mittag_leffler import DiscreteMLParams, dml_eval, dml_signal, dml_window
from nablalaplace.signals import GridSignal
from nablalaplace.transform import DivergenceError, NablaTransform, forward_transform, inverse_transform


def mp_dml(alpha, beta, lam, n, terms=400, dps=60):
    """Direct series in mpmath, independent of the float path."""
    with mpmath.workdps(dps):
        lam = mpmath.mpc(lam.real, lam.imag)
        total = mpmath.mpc(0)
        for j in range(terms):
            p = j * mpmath.mpf(alpha) + beta
            total += lam**j * mpmath.rf(p, n - 1) / mpmath.factorial(n - 1)
        return complex(total)


def test_lambda_zero_is_rising_power():
    p = DiscreteMLParams(0.7, 1.6, 0.0, 1.0)
    n = np.arange(1, 12)
    ref = [math.gamma(k + 0.6) / math.gamma(k) / math.gamma(1.6) for k in n]
    np.testing.assert_allclose(dml_window(p, 11), ref, rtol=1e-13)


def test_alpha_one_beta_one_is_geometric():
    lam = 0.35 - 0.2j
    p = DiscreteMLParams(1.0, 1.0, lam)
    n = np.arange(1, 40)
    np.testing.assert_allclose(dml_window(p, 39), (1 - lam) ** (-n.astype(float)), rtol=1e-12)


def test_transform_pair_at_spec_point():
    p = DiscreteMLParams(0.5, 1.0, 0.2)
    s = 0.6
    assert p.transform_guard(s)
    val = forward_transform(dml_signal(p), s)
    assert val == pytest.approx(s ** (0.5 - 1.0) / (s**0.5 - 0.2), rel=1e-7)


def test_divergence_for_large_lambda():
    with pytest.raises(DivergenceError):
        dml_eval(DiscreteMLParams(0.5, 1.0, 1.2), 3)


def test_off_grid_rejected():
    with pytest.raises(ValueError):
        dml_eval(DiscreteMLParams(0.5, 1.0, 0.2, 0.5), 1.0)


@settings(max_examples=30, deadline=None)
@given(
    alpha=st.floats(0.2, 1.8),
    beta=st.floats(0.2, 2.0),
    r=st.floats(0.0, 0.8),
    phi=st.floats(-math.pi, math.pi),
    n=st.integers(1, 60),
)
def test_against_high_precision_series(alpha, beta, r, phi, n):
    lam = r * complex(math.cos(phi), math.sin(phi))
    got = dml_eval(DiscreteMLParams(alpha, beta, lam), n)
    ref = mp_dml(alpha, beta, lam, n, terms=int(60 + 40 * n / max(1e-3, 1 - r)) if r > 0 else 1)
    assert abs(got - ref) <= 1e-9 * max(1.0, abs(ref))


def test_cancellation_path_negative_lambda():
    # alternating terms peak near 1e40 against a sum near 0.06
    p = DiscreteMLParams(0.5, 1.0, -0.9)
    got = dml_eval(p, 101)
    ref = mp_dml(0.5, 1.0, -0.9 + 0j, 101, terms=12000, dps=120)
    assert abs(got - ref) <= 1e-10 * max(1.0, abs(ref))


def test_inverse_transform_agreement():
    for alpha, beta, lam in [(0.5, 1.0, -0.5), (0.3, 0.3, 0.2), (0.9, 0.5, 0.3j)]:
        p = DiscreteMLParams(alpha, beta, lam, 2.0)
        k = 2.0 + np.arange(1, 51)
        ref = inverse_transform(p.transform(), None, k, a=2.0)
        np.testing.assert_allclose(dml_window(p, 50), ref, atol=1e-7)


def test_signal_generator_matches_window():
    p = DiscreteMLParams(0.4, 1.0, -0.3, 1.0)
    x = dml_signal(p)
    assert isinstance(x, GridSignal)
    np.testing.assert_allclose(x.window(20), dml_window(p, 20))
    assert x.value(1.0) == 0
