"""Gather vs scatter: two routes to the same convolution.

The direct (gather) form computes each output sample by summing past
inputs against the impulse response.  The scatter form turns that
inside out: each input sample immediately stamps a scaled, delayed
copy of the impulse response onto the output.  Same arithmetic, very
different operational properties — scatter needs no future samples.

Run from the repository root:  python3 demos/01_scatter_basics.py
"""

import numpy as np

from scatterconv import Signal, commuted_convolve, direct_form, scatter_convolve

# ------------------------------------------------------------------
# 1. A two-sample input through a two-tap response, both ways.
# ------------------------------------------------------------------

e = Signal(np.array([1.0, 2.0]))
h = Signal(np.array([3.0, 4.0]))

gathered = direct_form(e, h)
scattered = scatter_convolve(e, h)

print("input          ", e.samples)
print("impulse response", h.samples)
print("gather form    ", gathered.samples)
print("scatter body   ", scattered.body.samples)
print("scatter tail   ", scattered.tail.samples)

# The tail is the part a plain "same-length" convolution would drop:
# the response still ringing after the input has ended.  Output length
# is always len(e) + len(h) - 1.
assert np.array_equal(scattered.concatenated().samples, gathered.samples)

# ------------------------------------------------------------------
# 2. Why scatter?  Each output sample is finished as soon as the
#    matching input sample has arrived.  Demo: a delayed impulse just
#    stamps the response at its own position.
# ------------------------------------------------------------------

delayed = Signal(np.array([0.0, 0.0, 0.0, 1.0]))
print("\ndelayed impulse ->", scatter_convolve(delayed, h).concatenated().samples)

# ------------------------------------------------------------------
# 3. Convolution commutes, so off-line the cheaper orientation can
#    drive the loop: fewer, longer stamped copies.
# ------------------------------------------------------------------

long_input = Signal(np.linspace(-1, 1, 6))
short_ir = Signal(np.array([0.5, 0.25, 0.125]))

a = scatter_convolve(long_input, short_ir).concatenated().samples
b = commuted_convolve(long_input, short_ir).concatenated().samples  # 3 iterations, not 6
print("\nscatter   ", np.round(a, 4))
print("commuted  ", np.round(b, 4))
print("max difference:", np.max(np.abs(a - b)))
