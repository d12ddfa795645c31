"""Streaming convolution with a circular residue ring.

The engine keeps one accumulator slot per impulse-response tap.  Each
input sample scatters its scaled copy of the impulse response into the
ring, then the slot under the read index is emitted, zeroed, and the
index advances.  Every output sample is therefore available the moment
its input sample arrives — no block of input has to complete first —
and the block size only controls how many samples a single call chews
through, never the result.

Because the residue ring *is* the pending future output, the active
impulse response can be replaced between any two samples: residue
already scattered keeps its scheduled emission times, new inputs scatter
the new response.

Usage:
    eng = ScatterEngine(ir)
    body = eng.process_block(sig)     # one output sample per input sample
    tail = eng.flush()                # the len(ir)-1 samples ringing past the end
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import Signal

TAIL_POLICIES = ("emit-on-flush", "auto-append")

# Block size sweet spot: large enough to amortize per-block overhead,
# small enough to keep memory and latency pressure reasonable.
DEFAULT_BLOCK_SIZE = 8192


@dataclass
class EngineConfig:
    """Knobs for a ScatterEngine.

    block_size_nb        upper bound on samples per process_block call
    zero_skip_threshold  inputs with |x| <= threshold scatter nothing;
                         0 skips exact zeros only, which never changes a sum
    tail_policy          what render() does with the tail: "auto-append"
                         concatenates it, "emit-on-flush" leaves it for flush()
    """

    block_size_nb: int = DEFAULT_BLOCK_SIZE
    zero_skip_threshold: float = 0.0
    tail_policy: str = "emit-on-flush"

    def __post_init__(self):
        if not isinstance(self.block_size_nb, (int, np.integer)) or self.block_size_nb < 1:
            raise ValueError(f"block_size_nb must be >= 1, got {self.block_size_nb!r}")
        if self.zero_skip_threshold < 0:
            raise ValueError(f"zero_skip_threshold must be >= 0, got {self.zero_skip_threshold}")
        if self.tail_policy not in TAIL_POLICIES:
            raise ValueError(f"tail_policy must be one of {TAIL_POLICIES}, got {self.tail_policy!r}")


class ScatterEngine:
    """Stateful block- or sample-driven convolution processor.

    One instance is single-threaded; calls must be serialized externally.
    Instances are independent — run one engine per channel for
    multichannel work.
    """

    def __init__(self, h: Signal, config: EngineConfig | None = None):
        if len(h) == 0:
            raise ValueError("impulse response is empty")
        self.config = config if config is not None else EngineConfig()
        self._ir = np.array(h.samples, copy=True)
        self._ir_signal = Signal(self._ir, h.sample_rate)
        self._sample_rate = h.sample_rate
        self._ring = np.zeros(len(self._ir))
        self._read_index = 0
        # Schedule slots that may still hold residue.  Exceeds len(ir)-1
        # only while residue from a longer, swapped-out response drains.
        self._live = 0
        self._consumed = 0
        self._pending_ir = None

    @property
    def ring(self) -> np.ndarray:
        return self._ring

    @property
    def read_index(self) -> int:
        return self._read_index

    @property
    def current_ir(self) -> Signal:
        return self._ir_signal

    @property
    def samples_consumed(self) -> int:
        return self._consumed

    def process_sample(self, x: float) -> float:
        """Consume one input sample, return the output sample it completes.

        The returned value already includes x * h[0]; output sample n never
        waits on input sample n+1.
        """
        out = np.empty(1)
        self._read_index, self._live = _kernels.scatter_block(
            self._ring,
            self._ir,
            np.array([x], dtype=np.float64),
            out,
            self._read_index,
            self._live,
            self.config.zero_skip_threshold,
        )
        self._consumed += 1
        return float(out[0])

    def process_block(self, block: Signal) -> Signal:
        """Consume a block of at most block_size_nb samples, one output each.

        Internally just the per-sample step in a compiled loop, so any way
        of slicing the input into blocks yields the identical stream.
        """
        if self._pending_ir is not None:
            h_new, self._pending_ir = self._pending_ir, None
            self.swap_ir(h_new)
        if len(block) > self.config.block_size_nb:
            raise ValueError(
                f"block of {len(block)} samples exceeds block_size_nb={self.config.block_size_nb}"
            )
        if block.sample_rate != self._sample_rate:
            raise ValueError(
                f"sample rates differ: block {block.sample_rate} Hz vs engine {self._sample_rate} Hz"
            )
        out = np.empty(len(block))
        self._read_index, self._live = _kernels.scatter_block(
            self._ring,
            self._ir,
            block.samples,
            out,
            self._read_index,
            self._live,
            self.config.zero_skip_threshold,
        )
        self._consumed += len(block)
        return Signal(out, self._sample_rate)

    def flush(self) -> Signal:
        """Emit the pending residue and reset the engine.

        Returns len(ir)-1 samples in emission order — the ringing past the
        last input.  Mid-drain after a swap to a shorter response it can be
        longer, so that residue from the old response is never dropped.
        """
        n_tail = max(len(self._ir) - 1, self._live)
        tail = self._schedule_order()[:n_tail].copy()
        self._ring = np.zeros(len(self._ir))
        self._read_index = 0
        self._live = 0
        self._consumed = 0
        return Signal(tail, self._sample_rate)

    def swap_ir(self, h_new: Signal):
        """Replace the impulse response, effective for the very next sample.

        Residue already scattered is preserved verbatim and keeps its
        emission schedule: on growth the ring gains zeroed future slots, on
        shrink it stays long enough for old residue to drain before the
        shorter length takes over.
        """
        if len(h_new) == 0:
            raise ValueError("impulse response is empty")
        if h_new.sample_rate != self._sample_rate:
            raise ValueError(
                f"sample rates differ: new impulse response {h_new.sample_rate} Hz "
                f"vs engine {self._sample_rate} Hz"
            )
        sched = self._schedule_order()
        new_cap = max(len(h_new), self._live)
        ring = np.zeros(new_cap)
        keep = min(len(sched), new_cap)  # slots beyond _live are zero anyway
        ring[:keep] = sched[:keep]
        self._ring = ring
        self._read_index = 0
        self._ir = np.array(h_new.samples, copy=True)
        self._ir_signal = Signal(self._ir, h_new.sample_rate)

    def swap_ir_at_next_block(self, h_new: Signal):
        """Defer the swap to the start of the next process_block call."""
        if len(h_new) == 0:
            raise ValueError("impulse response is empty")
        self._pending_ir = h_new

    def render(self, e: Signal) -> Signal:
        """One-shot convenience: run a whole signal through in blocks.

        With tail_policy "auto-append" the tail is flushed and concatenated,
        giving the full len(e)+len(h)-1 result; with "emit-on-flush" only
        the body is returned and the residue stays pending.
        """
        nb = self.config.block_size_nb
        parts = []
        for start in range(0, len(e), nb):
            chunk = Signal(e.samples[start : start + nb], e.sample_rate)
            parts.append(self.process_block(chunk).samples)
        body = np.concatenate(parts) if parts else np.empty(0)
        if self.config.tail_policy == "auto-append":
            body = np.concatenate([body, self.flush().samples])
        return Signal(body, self._sample_rate)

    def _schedule_order(self) -> np.ndarray:
        """Ring contents reordered so index 0 is the next slot to emit."""
        ri = self._read_index
        return np.concatenate([self._ring[ri:], self._ring[:ri]])
