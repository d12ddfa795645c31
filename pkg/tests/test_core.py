"""Whole-signal convolution: frozen examples, oracle equivalence, algebra."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scatterconv import core
from scatterconv.core import (
    ConvOutput,
    Signal,
    commuted_convolve,
    direct_form,
    scatter_convolve,
    scatter_convolve_skip_zeros,
)


def sig(values, rate=44100):
    return Signal(np.asarray(values, dtype=np.float64), rate)


def full(out: ConvOutput) -> np.ndarray:
    return out.concatenated().samples


def assert_close(actual, expected, rtol):
    # tolerance scaled by the oracle's peak: element-wise relative bounds
    # are meaningless where cancellation drives a sample toward zero
    actual = np.asarray(actual)
    expected = np.asarray(expected)
    scale = max(1.0, float(np.max(np.abs(expected))) if expected.size else 0.0)
    np.testing.assert_allclose(actual, expected, rtol=0.0, atol=rtol * scale)


amplitudes = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False, width=64)
signal_values = st.lists(amplitudes, min_size=1, max_size=64)


# ---------------------------------------------------------------- signal type


def test_signal_coerces_to_float64():
    s = sig([1, 2, 3])
    assert s.samples.dtype == np.float64
    assert len(s) == 3
    assert s.duration_s == 3 / 44100


def test_signal_rejects_2d():
    with pytest.raises(ValueError, match="1-D"):
        Signal(np.zeros((2, 2)))


def test_signal_rejects_bad_rate():
    with pytest.raises(ValueError, match="sample_rate"):
        Signal(np.zeros(4), 0)
    with pytest.raises(ValueError, match="sample_rate"):
        Signal(np.zeros(4), -8000)


def test_signal_may_be_empty():
    assert len(sig([])) == 0


def test_conv_output_concatenated():
    out = ConvOutput(body=sig([1.0, 2.0]), tail=sig([3.0]))
    assert np.array_equal(out.concatenated().samples, [1.0, 2.0, 3.0])


# ------------------------------------------------------------- frozen values


def test_direct_form_unit_impulse():
    assert np.array_equal(direct_form(sig([1.0]), sig([5.0, 6.0, 7.0])).samples, [5.0, 6.0, 7.0])


def test_direct_form_hand_example():
    # 1*3; 1*4 + 2*3; 2*4
    assert np.array_equal(direct_form(sig([1.0, 2.0]), sig([3.0, 4.0])).samples, [3.0, 10.0, 8.0])


def test_direct_form_zero_input():
    assert np.array_equal(direct_form(sig([0.0, 0.0, 0.0]), sig([1.0, 1.0])).samples, np.zeros(4))


def test_scatter_convolve_hand_example():
    out = scatter_convolve(sig([1.0, 2.0]), sig([3.0, 4.0]))
    assert np.array_equal(out.body.samples, [3.0, 10.0])
    assert np.array_equal(out.tail.samples, [8.0])


def test_scatter_convolve_single_tap_has_empty_tail():
    out = scatter_convolve(sig([1.0, 0.0, 0.0, 0.0]), sig([9.0]))
    assert np.array_equal(out.body.samples, [9.0, 0.0, 0.0, 0.0])
    assert len(out.tail) == 0


def test_scatter_convolve_delayed_impulse_shifts_ir():
    h = sig([0.5, -0.25, 0.125])
    for k in (1, 3, 7):
        e = sig([0.0] * k + [1.0])
        got = full(scatter_convolve(e, h))
        assert np.array_equal(got[:k], np.zeros(k))
        assert np.array_equal(got[k:], h.samples)


def test_commuted_hand_example():
    out = commuted_convolve(sig([1.0, 2.0]), sig([3.0, 4.0]))
    assert np.array_equal(out.body.samples, [3.0, 10.0])
    assert np.array_equal(out.tail.samples, [8.0])


def test_commuted_short_signal_drives(monkeypatch):
    lengths = []
    original = core._scatter_full

    def spy(drive, kern):
        lengths.append(len(drive))
        return original(drive, kern)

    monkeypatch.setattr(core, "_scatter_full", spy)
    e = sig([1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
    h = sig([1.0, 2.0, 3.0])
    out = commuted_convolve(e, h)
    assert lengths == [3]  # three scatter iterations, not six
    assert len(out.body) == 6 and len(out.tail) == 2  # split keeps original roles
    lengths.clear()
    commuted_convolve(h, e)
    assert lengths == [3]


def test_commuted_symmetric_arguments():
    e = sig([0.5, -0.25, 0.75])
    same = commuted_convolve(e, e)
    assert np.array_equal(full(same), full(scatter_convolve(e, e)))


def test_skip_zeros_hand_example():
    out = scatter_convolve_skip_zeros(sig([1.0, 0.0, 2.0]), sig([1.0, 1.0]), threshold=0.0)
    assert np.array_equal(out.body.samples, [1.0, 1.0, 2.0])
    assert np.array_equal(out.tail.samples, [2.0])


def test_skip_zeros_all_zero_input():
    out = scatter_convolve_skip_zeros(sig([0.0, 0.0]), sig([4.0, 5.0, 6.0]), threshold=0.0)
    assert np.array_equal(full(out), np.zeros(4))


def test_skip_zeros_thresholded_input():
    out = scatter_convolve_skip_zeros(sig([1.0, 1e-9, 1.0]), sig([1.0]), threshold=1e-6)
    assert np.array_equal(out.body.samples, [1.0, 0.0, 1.0])


def test_skip_zeros_rejects_negative_threshold():
    with pytest.raises(ValueError, match="threshold"):
        scatter_convolve_skip_zeros(sig([1.0]), sig([1.0]), threshold=-1e-9)


# ---------------------------------------------------------------- error cases


@pytest.mark.parametrize("func", [direct_form, scatter_convolve, commuted_convolve])
def test_empty_signals_rejected(func):
    with pytest.raises(ValueError, match="empty"):
        func(sig([]), sig([1.0]))
    with pytest.raises(ValueError, match="empty"):
        func(sig([1.0]), sig([]))


@pytest.mark.parametrize("func", [direct_form, scatter_convolve, commuted_convolve])
def test_rate_mismatch_rejected(func):
    with pytest.raises(ValueError, match="sample rates differ"):
        func(sig([1.0], 44100), sig([1.0], 48000))


# ------------------------------------------------------------------ properties


@given(e=signal_values, h=signal_values)
@settings(max_examples=200)
def test_oracle_equivalence(e, h):
    got = full(scatter_convolve(sig(e), sig(h)))
    want = direct_form(sig(e), sig(h)).samples
    assert_close(got, want, rtol=1e-12)


@given(e=signal_values, h=signal_values)
@settings(max_examples=200)
def test_length_law(e, h):
    out = scatter_convolve(sig(e), sig(h))
    assert len(out.body) == len(e)
    assert len(out.tail) == len(h) - 1
    assert len(out.concatenated()) == len(e) + len(h) - 1


@given(e=signal_values, h=signal_values)
def test_commutativity(e, h):
    lhs = full(scatter_convolve(sig(e), sig(h)))
    rhs = full(scatter_convolve(sig(h), sig(e)))
    assert_close(lhs, rhs, rtol=1e-12)


@given(e=signal_values, h=signal_values)
def test_commuted_matches_scatter(e, h):
    lhs = full(commuted_convolve(sig(e), sig(h)))
    rhs = full(scatter_convolve(sig(e), sig(h)))
    assert_close(lhs, rhs, rtol=1e-12)


@given(
    e1=signal_values,
    e2=signal_values,
    h=signal_values,
    a=st.floats(min_value=-10, max_value=10, allow_nan=False, width=64),
    b=st.floats(min_value=-10, max_value=10, allow_nan=False, width=64),
)
def test_linearity(e1, e2, h, a, b):
    n = max(len(e1), len(e2))
    x1 = np.zeros(n)
    x1[: len(e1)] = e1
    x2 = np.zeros(n)
    x2[: len(e2)] = e2
    mixed = full(scatter_convolve(sig(a * x1 + b * x2), sig(h)))
    separate = a * full(scatter_convolve(sig(x1), sig(h))) + b * full(
        scatter_convolve(sig(x2), sig(h))
    )
    assert_close(mixed, separate, rtol=1e-10)


@given(e=signal_values, h=signal_values, k=st.integers(min_value=1, max_value=16))
def test_time_invariance(e, h, k):
    base = full(scatter_convolve(sig(e), sig(h)))
    shifted = full(scatter_convolve(sig([0.0] * k + e), sig(h)))
    assert np.array_equal(shifted[:k], np.zeros(k))
    assert np.array_equal(shifted[k:], base)


@given(h=signal_values)
def test_unit_impulse_identity_is_bit_exact(h):
    out = full(scatter_convolve(sig([1.0]), sig(h)))
    assert np.array_equal(out, np.asarray(h))


@given(
    e=st.lists(st.one_of(st.just(0.0), amplitudes), min_size=1, max_size=64),
    h=signal_values,
)
def test_skip_exact_zeros_is_bit_exact(e, h):
    skipped = full(scatter_convolve_skip_zeros(sig(e), sig(h), threshold=0.0))
    plain = full(scatter_convolve(sig(e), sig(h)))
    assert np.array_equal(skipped, plain)


@given(e=signal_values, h=signal_values, threshold=st.floats(min_value=0, max_value=0.5, width=64))
def test_skip_threshold_equals_thresholded_input(e, h, threshold):
    skipped = full(scatter_convolve_skip_zeros(sig(e), sig(h), threshold=threshold))
    gated = np.asarray(e)
    gated = np.where(np.abs(gated) <= threshold, 0.0, gated)
    plain = full(scatter_convolve(sig(gated), sig(h)))
    assert np.array_equal(skipped, plain)
