"""End-to-end WAV workflow: synthesize, store, convolve, store again.

Builds a short exponentially decaying reverb tail, writes it and a dry
test signal to disk, reads both back, convolves through the streaming
engine, and writes a 16-bit result while counting clipped samples.

Run from the repository root:  python3 demos/06_wav_pipeline.py
Writes its files to a temporary directory and removes them at the end.
"""

import tempfile
from pathlib import Path

import numpy as np

from scatterconv import EngineConfig, ScatterEngine, Signal, WavSpec, read_wav, write_wav

RATE = 44100
rng = np.random.default_rng(8)

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)

    # ------------------------------------------------------------------
    # 1. Synthesize a 200 ms reverb tail and a short dry signal.
    # ------------------------------------------------------------------
    n_ir = int(0.2 * RATE)
    t = np.arange(n_ir) / RATE
    ir = Signal(rng.standard_normal(n_ir) * np.exp(-t / 0.05) * 0.3, RATE)

    n_dry = RATE // 2
    dry = Signal(np.sin(2 * np.pi * 440 * np.arange(n_dry) / RATE) * 0.8, RATE)

    # ------------------------------------------------------------------
    # 2. Write both as float32 (lossless for this data path) and read back.
    # ------------------------------------------------------------------
    f32 = WavSpec(sample_rate=RATE, channels=1, encoding="float32")
    write_wav(tmp / "ir.wav", [ir], f32)
    write_wav(tmp / "dry.wav", [dry], f32)

    (ir_read,), spec_read = read_wav(tmp / "ir.wav")
    (dry_read,), _ = read_wav(tmp / "dry.wav")
    print(f"read back: {spec_read.encoding}, {spec_read.sample_rate} Hz, "
          f"{len(ir_read.samples)} tap impulse response")
    assert np.array_equal(
        ir_read.samples, ir.samples.astype(np.float32).astype(np.float64)
    )

    # ------------------------------------------------------------------
    # 3. Convolve the dry signal through the streaming engine.
    # ------------------------------------------------------------------
    engine = ScatterEngine(ir_read, EngineConfig(tail_policy="auto-append"))
    wet = engine.render(dry_read)
    print(f"wet signal: {len(wet.samples)} samples "
          f"(dry {len(dry_read.samples)} + tail {len(ir_read.samples) - 1})")

    # ------------------------------------------------------------------
    # 4. Store the result as 16-bit PCM, counting clipped samples.
    # ------------------------------------------------------------------
    peak = np.max(np.abs(wet.samples))
    pcm = WavSpec(sample_rate=RATE, channels=1, encoding="pcm16")
    clipped = write_wav(tmp / "wet.wav", [wet], pcm)
    print(f"peak {peak:.3f} -> {clipped} samples clipped at 16 bit")

    normalized = Signal(wet.samples / peak * 0.9, RATE)
    clipped = write_wav(tmp / "wet_norm.wav", [normalized], pcm)
    print(f"after normalizing to 0.9: {clipped} samples clipped")
    assert clipped == 0

    (wet_read,), _ = read_wav(tmp / "wet_norm.wav")
    err = np.max(np.abs(wet_read.samples - normalized.samples))
    print(f"16-bit storage error: {err:.2e} (half a 16-bit step is {0.5 / 32768:.2e})")
    assert err <= 0.5 / 32768
