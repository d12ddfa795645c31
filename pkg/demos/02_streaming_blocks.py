"""Streaming convolution: feed blocks of any size, get identical output.

The engine keeps a circular residue buffer one impulse response long.
Every arriving sample scatters its scaled response copy into the ring
and immediately pops the finished output sample off the front — so
latency is zero, and how the input is chopped into blocks cannot
matter.

Run from the repository root:  python3 demos/02_streaming_blocks.py
"""

import numpy as np

from scatterconv import EngineConfig, ScatterEngine, Signal, scatter_convolve

rng = np.random.default_rng(0)
e = Signal(rng.uniform(-1, 1, 1000))
h = Signal(rng.uniform(-1, 1, 64))

# ------------------------------------------------------------------
# 1. Whole-signal reference.
# ------------------------------------------------------------------

batch = scatter_convolve(e, h)
reference = batch.concatenated().samples

# ------------------------------------------------------------------
# 2. Same input, streamed in odd-sized pieces.
# ------------------------------------------------------------------


def run_in_blocks(block_sizes):
    engine = ScatterEngine(h, EngineConfig(block_size_nb=max(block_sizes)))
    pieces = []
    pos = 0
    for size in block_sizes:
        chunk = Signal(e.samples[pos : pos + size], e.sample_rate)
        pieces.append(engine.process_block(chunk).samples)
        pos += size
    pieces.append(engine.flush().samples)  # the len(h)-1 tail
    return np.concatenate(pieces)


for sizes in ([1000], [1] * 1000, [7, 993], [333, 333, 334]):
    streamed = run_in_blocks(sizes)
    label = f"{len(sizes)} block(s)"
    print(f"{label:>14}: bit-identical to batch = {np.array_equal(streamed, reference)}")

# ------------------------------------------------------------------
# 3. Zero latency, shown sample by sample: output n is final once
#    input n has been consumed — no lookahead, no block delay.
# ------------------------------------------------------------------

engine = ScatterEngine(h)
for n in range(5):
    y = engine.process_sample(float(e.samples[n]))
    prefix = scatter_convolve(Signal(e.samples[: n + 1]), h).body.samples[n]
    print(f"sample {n}: engine {y:+.6f}  oracle-on-prefix {prefix:+.6f}")
engine.flush()

# ------------------------------------------------------------------
# 4. Silence is free: samples at or below the skip threshold scatter
#    nothing.  With threshold 0 the output stays bit-identical.
# ------------------------------------------------------------------

gappy = e.samples.copy()
gappy[100:600] = 0.0
sparse = Signal(gappy)
engine = ScatterEngine(h, EngineConfig(zero_skip_threshold=0.0))
out = np.concatenate([engine.process_block(sparse).samples, engine.flush().samples])
want = scatter_convolve(sparse, h).concatenated().samples
print("\nzero-skip output bit-identical:", np.array_equal(out, want))
