"""Fixed-point word growth and the two requantization schemes.

A product of two N-bit words needs 2N bits; summing Nh of them adds
another Nh-1 carry bits.  Either keep one wide accumulator and round
once at the end (ideal), or round back to N bits after every addition
(mac).  This script prints the closed-form bit counts and then
measures the error of both schemes against an exact reference.

Run from the repository root:  python3 demos/04_quantization.py
"""

import numpy as np

from scatterconv import (
    FixedPointFormat,
    Signal,
    gen_white_noise,
    ideal_accumulator_bits,
    ideal_bits_removed,
    mac_requant_count,
    quantize,
    simulate_fixed_point_conv,
)

# ------------------------------------------------------------------
# 1. Closed forms for a few representative word lengths.
# ------------------------------------------------------------------

print(f"{'N':>4} {'Nh':>6} {'accumulator':>12} {'ideal cut':>10} {'mac cuts':>16}")
for word_bits, n_taps in [(16, 3), (16, 1000), (24, 44100), (8, 3)]:
    acc = ideal_accumulator_bits(word_bits, n_taps)
    cut = ideal_bits_removed(word_bits, n_taps)
    count, per_op = mac_requant_count(word_bits, n_taps)
    print(f"{word_bits:>4} {n_taps:>6} {acc:>12} {cut:>10} {count:>7} x {per_op:>2} bits")

# ------------------------------------------------------------------
# 2. Quantizing onto the grid: nearest value, ties to even.
# ------------------------------------------------------------------

fmt = FixedPointFormat(word_bits=12)
print(f"\n12-bit format: ulp = 2^-{fmt.fractional_bits} = {fmt.ulp}")
x = np.array([0.3, -0.7, fmt.ulp * 0.5, fmt.ulp * 1.5])
q = quantize(x, fmt)
print("input     ", x)
print("quantized ", q)
# Half-ulp ties round to the even grid point: 0.5 ulp -> 0, 1.5 ulp -> 2 ulp.
assert q[2] == 0.0 and q[3] == 2 * fmt.ulp

# ------------------------------------------------------------------
# 3. Simulate both schemes on the same random material.
# ------------------------------------------------------------------

e = Signal(gen_white_noise(256, seed=(7, 1)).samples * 0.999)
h = Signal(gen_white_noise(64, seed=(7, 2)).samples * 0.999)

print(f"\nhalf ulp bound for the ideal scheme: {fmt.ulp / 2:.3e}")
for scheme in ("ideal", "mac"):
    report = simulate_fixed_point_conv(e, h, fmt, scheme=scheme)
    print(
        f"{scheme:>5}: rms_error={report.rms_error:.3e} "
        f"max_error={report.max_error:.3e} "
        f"({report.operations_count} ops x {report.bits_removed_per_op} bits)"
    )

ideal = simulate_fixed_point_conv(e, h, fmt, scheme="ideal")
mac = simulate_fixed_point_conv(e, h, fmt, scheme="mac")
assert ideal.max_error <= fmt.ulp / 2
assert mac.rms_error >= ideal.rms_error
print("\nideal stays within half an output ulp; mac accumulates rounding noise.")
