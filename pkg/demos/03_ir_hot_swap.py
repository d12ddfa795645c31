"""Swapping the impulse response mid-stream, sample-accurately.

Sound already scattered into the residue ring keeps ringing with the
OLD response; samples arriving after the swap use the NEW one.  That
is exactly the superposition a physical room change would produce, and
it holds even when the new response is longer or shorter than the old.

Run from the repository root:  python3 demos/03_ir_hot_swap.py
"""

import numpy as np

from scatterconv import ScatterEngine, Signal, scatter_convolve

# ------------------------------------------------------------------
# 1. The textbook scenario: two impulses, swap between them.
# ------------------------------------------------------------------

h1 = Signal(np.array([1.0, 1.0]))
h2 = Signal(np.array([5.0, 5.0]))

engine = ScatterEngine(h1)
stream = [engine.process_sample(1.0), engine.process_sample(0.0)]  # impulse under h1
engine.swap_ir(h2)
stream += [engine.process_sample(0.0), engine.process_sample(0.0),
           engine.process_sample(1.0)]  # impulse under h2
tail = engine.flush().samples

print("stream", stream)          # [1, 1, 0, 0, 5]
print("tail  ", tail)            # [5]

# ------------------------------------------------------------------
# 2. The same answer by superposition: convolve each segment with the
#    response that was active when it entered, and add.
# ------------------------------------------------------------------

part1 = scatter_convolve(Signal(np.array([1.0, 0.0])), h1).concatenated().samples
part2 = scatter_convolve(Signal(np.array([0.0, 0.0, 1.0])), h2).concatenated().samples
superposed = np.zeros(6)
superposed[: len(part1)] += part1
superposed[2 : 2 + len(part2)] += part2
print("superposed oracle:", superposed)
assert np.array_equal(np.concatenate([stream, tail]), superposed)

# ------------------------------------------------------------------
# 3. Growing and shrinking.  Swap from a long decay to a short one
#    right after an impulse: the long tail still drains in full.
# ------------------------------------------------------------------

long_h = Signal(np.array([1.0, 0.9, 0.8, 0.7, 0.6, 0.5]))
short_h = Signal(np.array([0.1, 0.1]))

engine = ScatterEngine(long_h)
print("\nimpulse under the long response:", engine.process_sample(1.0))
engine.swap_ir(short_h)
print("next sample (old tail continues):", engine.process_sample(0.0))
print("flush drains the rest of the old tail:", engine.flush().samples)

# ------------------------------------------------------------------
# 4. Swapping in the identical response is a guaranteed no-op.
# ------------------------------------------------------------------

rng = np.random.default_rng(1)
e = Signal(rng.uniform(-1, 1, 500))
h = Signal(rng.uniform(-1, 1, 32))

plain_engine = ScatterEngine(h)
plain = np.concatenate([plain_engine.process_block(e).samples,
                        plain_engine.flush().samples])

swap_engine = ScatterEngine(h)
first = swap_engine.process_block(Signal(e.samples[:250])).samples
swap_engine.swap_ir(Signal(h.samples.copy()))
second = swap_engine.process_block(Signal(e.samples[250:])).samples
swapped = np.concatenate([first, second, swap_engine.flush().samples])

print("\nidentical-swap stream bit-identical:", np.array_equal(plain, swapped))
