"""Whole-signal FIR convolution by scattering.

Gather form computes each output sample as a sum over past inputs:

    s[n] = sum_m e[m] * h[n-m]

Scatter form turns that around: every input sample e[n] adds a scaled,
delayed copy of the impulse response into the output buffer, and output
samples fall out the front as soon as all contributions that can reach
them have arrived.  Both views compute the same linear convolution; the
scatter view is the one the streaming engine builds on.

The full output is longer than the input: the last input sample launches
a copy of the impulse response that rings on for ``len(h) - 1`` further
samples.  Library convolutions often drop that ringing silently, so the
scatter functions here return it explicitly as ``ConvOutput.tail``.
"""

import math
from dataclasses import dataclass

import numpy as np


@dataclass(eq=False)
class Signal:
    """A finite run of samples at a fixed sample rate.

    ``samples`` is coerced to a 1-D float64 array.  Treat instances as
    immutable: every operation in this package returns new Signals and
    never writes into its arguments.
    """

    samples: np.ndarray
    sample_rate: int = 44100

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.ndim != 1:
            raise ValueError(f"samples must be 1-D, got shape {self.samples.shape}")
        if not isinstance(self.sample_rate, (int, np.integer)) or self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be a positive integer, got {self.sample_rate!r}")

    def __len__(self):
        return len(self.samples)

    @property
    def duration_s(self) -> float:
        return len(self.samples) / self.sample_rate


@dataclass(eq=False)
class ConvOutput:
    """Convolution result split into body (aligned with the input) and tail.

    ``body`` has the input's length; ``tail`` holds the ``len(h) - 1``
    samples that ring past the input's end.  ``concatenated()`` joins them
    into the full ``len(e) + len(h) - 1``-sample result.
    """

    body: Signal
    tail: Signal

    def concatenated(self) -> Signal:
        joined = np.concatenate([self.body.samples, self.tail.samples])
        return Signal(joined, self.body.sample_rate)


def _check_pair(e: Signal, h: Signal):
    if len(e) == 0:
        raise ValueError("input signal is empty")
    if len(h) == 0:
        raise ValueError("impulse response is empty")
    if e.sample_rate != h.sample_rate:
        raise ValueError(
            f"sample rates differ: input {e.sample_rate} Hz vs impulse response {h.sample_rate} Hz"
        )


def _scatter_full(drive: np.ndarray, kern: np.ndarray) -> np.ndarray:
    """Scatter `drive` through `kern` into a fresh linear buffer.

    Each drive sample adds its scaled copy of `kern` in increasing tap
    order, so every output slot accumulates contributions in increasing
    drive-index order.  The streaming engine follows the same order,
    which is what makes stream and batch outputs bit-identical.
    """
    nk = len(kern)
    out = np.zeros(len(drive) + nk - 1)
    for n, x in enumerate(drive):
        out[n : n + nk] += x * kern
    return out


def _split(full: np.ndarray, n_body: int, sample_rate: int) -> ConvOutput:
    return ConvOutput(
        body=Signal(full[:n_body].copy(), sample_rate),
        tail=Signal(full[n_body:].copy(), sample_rate),
    )


def direct_form(e: Signal, h: Signal) -> Signal:
    """Gather-form convolution, the reference every fast path is checked against.

    Each output sample is the exactly-rounded sum (math.fsum) of its
    products, i.e. an arbitrarily wide accumulator rounded once.  Returns
    the full result of length ``len(e) + len(h) - 1``.  Deliberately
    naive and O(len(e) * len(h)); use the scatter paths for real work.
    """
    _check_pair(e, h)
    es = e.samples.tolist()
    hs = h.samples.tolist()
    ne, nh = len(es), len(hs)
    out = np.empty(ne + nh - 1)
    for n in range(ne + nh - 1):
        lo = max(0, n - nh + 1)
        hi = min(n, ne - 1)
        out[n] = math.fsum(es[m] * hs[n - m] for m in range(lo, hi + 1))
    return Signal(out, e.sample_rate)


def scatter_convolve(e: Signal, h: Signal) -> ConvOutput:
    """Convolve by scattering one scaled, delayed copy of h per input sample.

    body[n] is complete once the first n+1 input samples have been read;
    nothing ever waits on a later input.  concat(body, tail) equals
    direct_form(e, h) up to float summation-order effects.
    """
    _check_pair(e, h)
    full = _scatter_full(e.samples, h.samples)
    return _split(full, len(e), e.sample_rate)


def commuted_convolve(e: Signal, h: Signal) -> ConvOutput:
    """Scatter with the shorter signal driving the loop.

    Convolution commutes, so when both signals are fully available the
    roles can be swapped: fewer (but longer) scaled copies get summed.
    Off-line only by nature — the driving signal must be known in full.
    The body/tail split still follows the original argument roles.
    """
    _check_pair(e, h)
    if len(h) <= len(e):
        full = _scatter_full(h.samples, e.samples)
    else:
        full = _scatter_full(e.samples, h.samples)
    return _split(full, len(e), e.sample_rate)


def scatter_convolve_skip_zeros(e: Signal, h: Signal, threshold: float = 0.0) -> ConvOutput:
    """Scatter convolution that skips input samples with |value| <= threshold.

    Silent stretches then cost nothing.  threshold=0 skips exact zeros
    only, which cannot change any sum; a positive threshold is equivalent
    to convolving the thresholded input.
    """
    if threshold < 0:
        raise ValueError(f"threshold must be non-negative, got {threshold}")
    _check_pair(e, h)
    hs = h.samples
    nh = len(hs)
    out = np.zeros(len(e) + nh - 1)
    for n, x in enumerate(e.samples):
        if abs(x) <= threshold:
            continue
        out[n : n + nh] += x * hs
    return _split(out, len(e), e.sample_rate)
