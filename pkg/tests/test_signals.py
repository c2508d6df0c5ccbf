from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nablalaplace.signals import (
    BaseMismatchError,
    GridSignal,
    MissingHistoryError,
    combine,
    geometric,
    pointwise,
    read_signal,
    signal_from_csv,
    signal_from_json,
    signal_to_csv,
    signal_to_json,
    unit_impulse,
    unit_step,
    write_signal,
)

finite = st.floats(-1e300, 1e300, allow_nan=False, allow_infinity=False)
cplx = st.builds(complex, finite, finite)


def test_out_of_domain_reads_are_zero():
    x = GridSignal(2.5, [1, 2, 3])
    assert x.value(2.5) == 0
    assert x.value(-10.5) == 0
    assert x.value(6.5) == 0
    assert x.value(4.5) == 2


def test_off_grid_index_rejected():
    with pytest.raises(ValueError):
        GridSignal(0.0, [1]).value(1.5)


def test_history_must_be_supplied():
    x = GridSignal(0.0, [1, 2], [5])
    np.testing.assert_array_equal(x.history(1), [5])
    with pytest.raises(MissingHistoryError):
        x.history(2)


def test_generator_and_samples_must_agree():
    GridSignal(0.0, [1, 1], (), lambda m: np.ones(np.shape(m)))
    with pytest.raises(ValueError):
        GridSignal(0.0, [1, 2], (), lambda m: np.ones(np.shape(m)))


def test_signals_are_immutable():
    x = GridSignal(0.0, [1, 2])
    with pytest.raises(ValueError):
        x.samples[0] = 3
    with pytest.raises(AttributeError):
        x.base = 1.0


def test_derived_signals():
    x = geometric(1.0, 0.5 + 0.5j)
    w = x.window(4)
    np.testing.assert_allclose(x.conj().window(4), np.conj(w))
    np.testing.assert_allclose(x.real.window(4), w.real)
    np.testing.assert_allclose(x.imag.window(4), w.imag)
    y = combine([x, unit_step(1.0)], [2.0, -1j])
    np.testing.assert_allclose(y.window(4), 2 * w - 1j)
    np.testing.assert_allclose(pointwise(x, unit_impulse(1.0)).window(3), [1, 0, 0])
    with pytest.raises(BaseMismatchError):
        pointwise(x, unit_step(0.0))


@settings(max_examples=60, deadline=None)
@given(
    base=st.floats(-1e6, 1e6, allow_nan=False),
    samples=st.lists(cplx, min_size=1, max_size=12),
    pre=st.lists(cplx, max_size=3),
)
def test_csv_and_json_round_trip_exactly(base, samples, pre):
    x = GridSignal(base, samples, pre)
    for back in (signal_from_json(signal_to_json(x)), signal_from_csv(signal_to_csv(x))):
        assert back.base == x.base
        np.testing.assert_array_equal(back.samples, x.samples)
        np.testing.assert_array_equal(back.pre_samples, x.pre_samples)


def test_file_round_trip(tmp_path):
    x = GridSignal(3.0, [0.1, 1 / 3 + 2j], [7.0])
    for name in ("x.csv", "x.json"):
        write_signal(x, tmp_path / name)
        y = read_signal(tmp_path / name)
        np.testing.assert_array_equal(y.samples, x.samples)
        np.testing.assert_array_equal(y.pre_samples, x.pre_samples)


def test_csv_header_and_errors():
    text = signal_to_csv(GridSignal(0.0, [1.5]))
    assert text.splitlines()[1] == "k,re,im"
    with pytest.raises(ValueError):
        signal_from_csv("a,b,c\n1,2,3\n")
    with pytest.raises(ValueError):
        signal_from_csv("# base=0.0\nk,re,im\n1.5,2,3\n")
    with pytest.raises(ValueError):
        signal_to_json(unit_step())
