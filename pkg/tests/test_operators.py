from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nablalaplace.operators import (
    Operator,
    OperatorKind,
    apply,
    caputo_diff,
    convolve,
    frac_sum,
    gl_diff,
    nabla_diff,
    nabla_sum,
    rl_diff,
    rl_window,
)
from nablalaplace.signals import BaseMismatchError, GridSignal, MissingHistoryError, unit_impulse, unit_step
from nablalaplace.special import rising_power


def brute_binom(alpha, j):
    # (-1)^j binom(alpha, j) as a product, independent of the coefficient streams
    return math.prod((i - alpha) / (i + 1) for i in range(j))


def brute_frac_sum(vals, alpha, m):
    return sum(brute_binom(-alpha, j) * vals[m - 1 - j] for j in range(m))


def random_signal(rng, count=40, history=3):
    vals = rng.normal(size=count) + 1j * rng.normal(size=count)
    pre = rng.normal(size=history) + 1j * rng.normal(size=history)
    return GridSignal(rng.uniform(-5, 5), vals, pre)


A = 1.5


def test_nabla_diff_examples():
    x = random_signal(np.random.default_rng(0))
    assert nabla_diff(x, 0, x.base + 4) == x.value(x.base + 4)
    assert nabla_diff(unit_step(A, 1), 1, A + 1) == 1
    quad = GridSignal(A, [1, 4, 9, 16], [0, 1], lambda m: np.asarray(m, float) ** 2)
    assert nabla_diff(quad, 2, A + 3) == pytest.approx(2)


def test_nabla_diff_needs_history():
    with pytest.raises(MissingHistoryError):
        nabla_diff(GridSignal(0.0, [1, 2, 3]), 1, 2)


def test_frac_sum_examples():
    for m in (1, 5, 17):
        assert frac_sum(unit_step(A), 1.0, A + m) == pytest.approx(m)
        ref = math.gamma(m - 1 + 0.7) / (math.gamma(0.7) * math.gamma(m))
        assert frac_sum(unit_impulse(A), 0.7, A + m) == pytest.approx(ref, rel=1e-13)
    assert frac_sum(unit_step(A), 0.5, A + 2) == pytest.approx(1.5)
    x = random_signal(np.random.default_rng(1))
    assert frac_sum(x, 0.0, x.base + 3) == x.value(x.base + 3)
    assert nabla_sum(unit_step(A), 2, A + 4) == pytest.approx(10)


def test_caputo_examples():
    c = GridSignal(A, (), [3.0], lambda m: np.full(np.shape(m), 3.0))
    np.testing.assert_allclose(caputo_diff(c, 0.4, A + np.arange(1, 10)), 0, atol=1e-15)
    ramp = GridSignal(A, (), [0.0], lambda m: np.asarray(m, float))
    assert caputo_diff(ramp, 0.5, A + 2) == pytest.approx(1.5)
    x = random_signal(np.random.default_rng(2))
    k = x.base + np.arange(1, 20)
    np.testing.assert_allclose(caputo_diff(x, 1 - 1e-12, k), nabla_diff(x, 1, k), atol=1e-9)
    with pytest.raises(MissingHistoryError):
        caputo_diff(GridSignal(0.0, [1.0]), 0.5, 1)


def test_rl_examples():
    assert rl_diff(unit_impulse(A), 0.5, A + 1) == pytest.approx(1)
    assert rl_diff(unit_step(A), 0.5, A + 1) == pytest.approx(1)
    # RL minus Caputo for a constant is c (k-a)^(-alpha)/Gamma(1-alpha), rising power
    c = 2.0 - 1j
    x = GridSignal(A, (), [c], lambda m: np.full(np.shape(m), c))
    m = np.arange(1, 25)
    gap = rl_diff(x, 0.5, A + m) - caputo_diff(x, 0.5, A + m)
    np.testing.assert_allclose(gap, c * rising_power(m, -0.5) / math.gamma(0.5), rtol=1e-12)


def test_rl_matches_brute_composition():
    rng = np.random.default_rng(3)
    x = random_signal(rng)
    alpha = 1.3
    vals = x.window(30)
    inner = [brute_frac_sum(vals, 2 - alpha, m) for m in range(1, 31)]
    padded = [0.0, 0.0] + inner
    ref = [padded[i + 2] - 2 * padded[i + 1] + padded[i] for i in range(30)]
    np.testing.assert_allclose(rl_window(x, alpha, 30), ref, rtol=1e-11, atol=1e-12)


def test_gl_examples():
    m = np.arange(1, 12)
    np.testing.assert_allclose(
        gl_diff(unit_impulse(A), 0.5, A + m), [brute_binom(0.5, j) for j in range(11)], rtol=1e-14
    )
    assert gl_diff(unit_step(A), 0.5, A + 2) == pytest.approx(0.5)
    x = GridSignal(A, np.random.default_rng(4).normal(size=30))
    k = A + np.arange(4, 31)
    np.testing.assert_allclose(gl_diff(x, 3.0, k), nabla_diff(GridSignal(A, x.samples, [0, 0, 0]), 3, k), atol=1e-13)


def test_convolve_examples():
    y = random_signal(np.random.default_rng(5))
    k = y.base + np.arange(1, 20)
    np.testing.assert_allclose(convolve(unit_impulse(y.base), y, k), y.value(k))
    assert convolve(unit_step(A), unit_step(A), A + 7) == pytest.approx(7)
    with pytest.raises(BaseMismatchError):
        convolve(unit_step(0.0), unit_step(1.0), 2)


def test_gl_as_convolution_with_rising_kernel():
    alpha = 0.6
    x = random_signal(np.random.default_rng(6))
    g = GridSignal.from_function(x.base, lambda m: rising_power(m, -alpha - 1) / math.gamma(-alpha))
    k = x.base + np.arange(1, 30)
    np.testing.assert_allclose(gl_diff(x, alpha, k), convolve(g, x, k), rtol=1e-11)


orders = st.floats(0.05, 3.9).filter(lambda a: abs(a - round(a)) > 0.02)


@settings(max_examples=40, deadline=None)
@given(alpha=orders, seed=st.integers(0, 2**32 - 1))
def test_sum_of_gl_difference_composition(alpha, seed):
    x = random_signal(np.random.default_rng(seed), count=64)
    y = apply(Operator(OperatorKind.GRUNWALD_LETNIKOV, alpha), x, 64)
    np.testing.assert_allclose(frac_sum(y, alpha, x.base + np.arange(1, 65)), x.window(64), atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(alpha=orders, seed=st.integers(0, 2**32 - 1))
def test_corollary_caputo_composition(alpha, seed):
    rng = np.random.default_rng(seed)
    x = random_signal(rng, count=50, history=4)
    n = math.ceil(alpha)
    y = apply(Operator(OperatorKind.CAPUTO, alpha), x, 50)
    m = np.arange(1, 51)
    lhs = frac_sum(y, alpha, x.base + m)
    # [nabla^j x] at k = a from the stored history
    hist = x.history(n)
    init = [sum(brute_binom(j, i) * hist[i] for i in range(j + 1)) for j in range(n)]
    rhs = x.window(50) - sum(rising_power(m, j) / math.gamma(j + 1) * init[j] for j in range(n))
    np.testing.assert_allclose(lhs, rhs, atol=1e-9 * max(1, np.abs(rhs).max()))


@settings(max_examples=40, deadline=None)
@given(alpha=orders, seed=st.integers(0, 2**32 - 1))
def test_corollary_rl_composition(alpha, seed):
    rng = np.random.default_rng(seed)
    x = random_signal(rng, count=50)
    n = math.ceil(alpha)
    inner_hist = rng.normal(size=n) + 1j * rng.normal(size=n)
    y = GridSignal(x.base, rl_window(x, alpha, 50, inner_hist))
    m = np.arange(1, 51)
    lhs = frac_sum(y, alpha, x.base + m)
    # [RL nabla^(alpha-j-1) x]_{k=a} = [nabla^(n-1-j) inner]_{k=a}
    def init(j):
        d = n - 1 - j
        return sum(brute_binom(d, i) * inner_hist[i] for i in range(d + 1))

    rhs = x.window(50) - sum(rising_power(m, alpha - j - 1) / math.gamma(alpha - j) * init(j) for j in range(n))
    np.testing.assert_allclose(lhs, rhs, atol=1e-9 * max(1, np.abs(rhs).max()))


@settings(max_examples=30, deadline=None)
@given(
    kind=st.sampled_from(list(OperatorKind)),
    alpha=orders,
    c=st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
    seed=st.integers(0, 2**32 - 1),
)
def test_every_operator_is_linear(kind, alpha, c, seed):
    rng = np.random.default_rng(seed)
    x = random_signal(rng, count=30, history=4)
    y = GridSignal(x.base, rng.normal(size=30), rng.normal(size=4))
    integer = kind in (OperatorKind.INTEGER_DIFF, OperatorKind.INTEGER_SUM)
    order = float(max(1, round(alpha))) if integer else alpha
    op = Operator(kind, order)
    z = GridSignal(x.base, c * x.samples + y.samples, c * x.pre_samples + y.pre_samples)
    lhs = apply(op, z, 30).samples
    rhs = c * apply(op, x, 30).samples + apply(op, y, 30).samples
    np.testing.assert_allclose(lhs, rhs, atol=1e-8 * max(1, np.abs(rhs).max()))


def test_operator_rejects_integer_caputo_order():
    with pytest.raises(ValueError):
        Operator(OperatorKind.CAPUTO, 2.0)
