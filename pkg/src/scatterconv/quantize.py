"""Fixed-point requantization accounting and bit-true simulation.

Every output sample of an FIR convolution is a sum of products.  With
N-bit fixed-point data each product needs 2N bits, and summing len(h)
of them grows the worst-case accumulator to 2N + len(h) - 1 bits, so
the result has to be requantized back to the working word length.  Two
schemes bracket the design space:

  ideal  an accumulator wide enough for the exact sum, rounded once per
         output sample (removes N + len(h) - 1 bits in one go);
  mac    the accumulator is rounded back to word length after every
         multiply-accumulate (len(h) - 1 roundings of N bits each).

The closed-form functions report those bit budgets; the simulation runs
both schemes with exact integer arithmetic and measures the damage
against the double-precision result on the same quantized inputs.

Values live in the fractional two's-complement range [-1, 1): an N-bit
word is one sign bit plus N-1 fractional bits.  Requantization rounds to
that grid (nearest-even) without clamping the integer part — convolution
outputs legitimately exceed unity, and what is removed are low-order
bits, not headroom.  Saturation applies where samples are *stored* in
the format, i.e. when quantizing inputs.
"""

from dataclasses import dataclass

import numpy as np

from .core import Signal, direct_form

ROUNDING_MODES = ("nearest-even",)
OVERFLOW_MODES = ("saturate",)
SCHEMES = ("ideal", "mac")


@dataclass(frozen=True)
class FixedPointFormat:
    """Two's-complement fractional format: 1 sign bit + word_bits-1 fraction bits."""

    word_bits: int
    rounding: str = "nearest-even"
    overflow: str = "saturate"

    def __post_init__(self):
        if not isinstance(self.word_bits, (int, np.integer)) or self.word_bits < 2:
            raise ValueError(f"word_bits must be an integer >= 2, got {self.word_bits!r}")
        if self.rounding not in ROUNDING_MODES:
            raise ValueError(f"rounding must be one of {ROUNDING_MODES}, got {self.rounding!r}")
        if self.overflow not in OVERFLOW_MODES:
            raise ValueError(f"overflow must be one of {OVERFLOW_MODES}, got {self.overflow!r}")

    @property
    def fractional_bits(self) -> int:
        return self.word_bits - 1

    @property
    def scale(self) -> int:
        return 1 << self.fractional_bits

    @property
    def min_int(self) -> int:
        return -self.scale

    @property
    def max_int(self) -> int:
        return self.scale - 1

    @property
    def ulp(self) -> float:
        return 1.0 / self.scale


@dataclass
class RequantReport:
    """Error statistics of one simulated scheme.

    operations_count     rounding events per output sample as simulated
                         (1 for ideal; max(1, len(h)-1) for mac — a single
                         product still gets its store rounding)
    bits_removed_per_op  the closed-form bit budget per event
    rms_error/max_error  versus the double-precision reference on the
                         same quantized inputs
    """

    scheme: str
    operations_count: int
    bits_removed_per_op: int
    rms_error: float
    max_error: float

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.operations_count < 0 or self.bits_removed_per_op < 0:
            raise ValueError("counts must be non-negative")
        if self.rms_error > self.max_error:
            raise ValueError(f"rms_error {self.rms_error} exceeds max_error {self.max_error}")


def _check_bit_args(n_bits: int, ir_len: int):
    if not isinstance(n_bits, (int, np.integer)) or n_bits < 2:
        raise ValueError(f"word length must be an integer >= 2 bits, got {n_bits!r}")
    if not isinstance(ir_len, (int, np.integer)) or ir_len < 1:
        raise ValueError(f"impulse response length must be a positive integer, got {ir_len!r}")


def ideal_accumulator_bits(n_bits: int, ir_len: int) -> int:
    """Word length an overflow-proof accumulator needs: 2*n_bits + ir_len - 1.

    Worst case of one carry bit per added term; the count of distinct
    terms would only demand ceil(log2(ir_len)) extra bits, so this is a
    deliberately conservative budget.
    """
    _check_bit_args(n_bits, ir_len)
    return 2 * n_bits + ir_len - 1


def ideal_bits_removed(n_bits: int, ir_len: int) -> int:
    """Bits dropped by the single final requantization: n_bits + ir_len - 1."""
    _check_bit_args(n_bits, ir_len)
    return n_bits + ir_len - 1


def mac_requant_count(n_bits: int, ir_len: int) -> tuple[int, int]:
    """Rounding after every multiply-accumulate: (ir_len - 1 events, n_bits each)."""
    _check_bit_args(n_bits, ir_len)
    return ir_len - 1, n_bits


def _quantize_ints(values, fmt: FixedPointFormat) -> np.ndarray:
    x = np.asarray(values, dtype=np.float64)
    if np.any(x < -1.0) or np.any(x >= 1.0):
        raise ValueError("samples outside the representable range [-1, 1)")
    k = np.round(x * fmt.scale)  # np.round is round-half-even
    k = np.clip(k, fmt.min_int, fmt.max_int)  # values just under 1 can round up to +1
    return k.astype(np.int64)


def quantize(values, fmt: FixedPointFormat) -> np.ndarray:
    """Round values in [-1, 1) to the format's grid, returning exact floats."""
    return _quantize_ints(values, fmt) / fmt.scale


def _round_shift_half_even(t: int, shift: int) -> int:
    """Round the integer t / 2**shift to nearest, ties to even.  Exact."""
    if shift == 0:
        return t
    half = 1 << (shift - 1)
    q = t >> shift  # floor division, also for negatives
    r = t & ((1 << shift) - 1)
    if r > half or (r == half and (q & 1)):
        q += 1
    return q


def fixed_point_convolve(e: Signal, h: Signal, fmt: FixedPointFormat, scheme: str) -> Signal:
    """Convolve after quantizing both signals, under one requantization scheme.

    All intermediate arithmetic is exact (Python integers), so the only
    inexactness is the modeled rounding itself.  Outputs are returned as
    float64 values lying exactly on the format's grid.
    """
    if scheme not in SCHEMES:
        raise ValueError(f"scheme must be one of {SCHEMES}, got {scheme!r}")
    if len(e) == 0 or len(h) == 0:
        raise ValueError("empty signal")
    if e.sample_rate != h.sample_rate:
        raise ValueError("sample rates differ")
    ke = _quantize_ints(e.samples, fmt).tolist()
    kh = _quantize_ints(h.samples, fmt).tolist()
    ne, nh = len(ke), len(kh)
    frac = fmt.fractional_bits
    scale = fmt.scale
    out = np.empty(ne + nh - 1)
    for n in range(ne + nh - 1):
        lo = max(0, n - nh + 1)
        hi = min(n, ne - 1)
        if scheme == "ideal":
            acc = 0
            for m in range(lo, hi + 1):
                acc += ke[m] * kh[n - m]
            out[n] = _round_shift_half_even(acc, frac) / scale
        else:
            # First product stays exact until it takes part in a MAC; a
            # lone product is just store-rounded to the output grid.
            fine = ke[lo] * kh[n - lo]
            if lo == hi:
                c = _round_shift_half_even(fine, frac)
            else:
                c = _round_shift_half_even(fine + ke[lo + 1] * kh[n - lo - 1], frac)
                for m in range(lo + 2, hi + 1):
                    c = _round_shift_half_even((c << frac) + ke[m] * kh[n - m], frac)
            out[n] = c / scale
    return Signal(out, e.sample_rate)


def simulate_fixed_point_conv(
    e: Signal, h: Signal, fmt: FixedPointFormat, scheme: str
) -> RequantReport:
    """Run one scheme and report its error against the exact-product reference.

    The reference is direct_form on the *quantized* inputs, so the report
    isolates requantization damage from input quantization.
    """
    sim = fixed_point_convolve(e, h, fmt, scheme)
    eq = Signal(quantize(e.samples, fmt), e.sample_rate)
    hq = Signal(quantize(h.samples, fmt), h.sample_rate)
    ref = direct_form(eq, hq)
    err = sim.samples - ref.samples
    nh = len(h)
    if scheme == "ideal":
        ops, bits = 1, ideal_bits_removed(fmt.word_bits, nh)
    else:
        ops, bits = max(1, nh - 1), fmt.word_bits
    return RequantReport(
        scheme=scheme,
        operations_count=ops,
        bits_removed_per_op=bits,
        rms_error=float(np.sqrt(np.mean(err**2))),
        max_error=float(np.max(np.abs(err))),
    )
