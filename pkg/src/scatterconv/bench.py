"""Runtime measurement harness for the streaming convolution engine.

Measures how wall time scales with impulse response length (the cost per
input sample is one multiply-add per IR tap, so the scaling should be
linear) and how insensitive it is to the processing block size.  From a
sweep the harness fits a line, and interpolates the longest IR that
still convolves a stimulus faster than the stimulus plays: the red line
for real-time use on this machine.

Methodology notes:
  - timing covers the convolution kernel only (block loop plus flush);
    signal generation, engine setup, and report assembly are excluded;
  - every (ir_length, nb) cell is repeated and aggregated by median to
    tame scheduler noise;
  - all signal content is seeded white noise, so reports are bitwise
    reproducible; a digest of the outputs is included to prove it;
  - sweeps run sequentially by default so cells do not contend for
    cores; `parallel=True` opts into one thread per cell.
"""

import hashlib
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from time import perf_counter

import numpy as np

from . import _kernels
from .core import Signal
from .engine import DEFAULT_BLOCK_SIZE, EngineConfig, ScatterEngine

CSV_HEADER = "ir_samples,nb,rep,wall_time_s,realtime_ratio"


def ms_to_samples(ms: float, sample_rate: int) -> int:
    """Duration in milliseconds to a sample count at the given rate."""
    if ms <= 0:
        raise ValueError(f"duration must be positive, got {ms} ms")
    return int(round(ms * sample_rate / 1000.0))


def gen_white_noise(duration: int, sample_rate: int = 44100, seed=0) -> Signal:
    """Uniform white noise in [-1, 1), `duration` samples, reproducible per seed.

    White noise is the worst case for this engine: no zero samples to
    skip, every tap busy.
    """
    if not isinstance(duration, (int, np.integer)) or duration < 1:
        raise ValueError(f"duration must be a positive sample count, got {duration!r}")
    rng = np.random.default_rng(seed)
    return Signal(rng.uniform(-1.0, 1.0, duration), sample_rate)


@dataclass
class SweepSpec:
    """Parameters of one sweep.

    ir_lengths are sample counts (use ms_to_samples for durations).
    run_ir_sweep varies ir_lengths at nb_values[0]; run_nb_sweep varies
    nb_values at ir_lengths[0].  IRs are white noise derived from
    rng_seed and the length, so a spec pins the outputs exactly.
    """

    ir_lengths: list
    input_signal: Signal
    nb_values: list = field(default_factory=lambda: [DEFAULT_BLOCK_SIZE])
    repetitions: int = 3
    rng_seed: int = 0

    def __post_init__(self):
        if not self.ir_lengths:
            raise ValueError("ir_lengths must be non-empty")
        for n in self.ir_lengths:
            if not isinstance(n, (int, np.integer)) or n < 1:
                raise ValueError(f"ir_lengths entries must be positive integers, got {n!r}")
        if not isinstance(self.input_signal, Signal) or len(self.input_signal) == 0:
            raise ValueError("input_signal must be a non-empty Signal")
        if not self.nb_values:
            raise ValueError("nb_values must be non-empty")
        for nb in self.nb_values:
            if not isinstance(nb, (int, np.integer)) or nb < 1:
                raise ValueError(f"nb_values entries must be positive integers, got {nb!r}")
        if not isinstance(self.repetitions, (int, np.integer)) or self.repetitions < 1:
            raise ValueError(f"repetitions must be >= 1, got {self.repetitions!r}")


@dataclass(frozen=True)
class BenchRow:
    ir_samples: int
    nb: int
    rep: int
    wall_time_s: float
    realtime_ratio: float


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    r_squared: float


@dataclass
class BenchReport:
    rows: list
    input_duration_s: float
    linear_fit: LinearFit | None = None
    limit_filter_length: float | None = None
    nb_spread_percent: float | None = None
    output_digest: str = ""

    def median_wall_times(self) -> dict:
        """Median wall time per ir_length, over all reps and nb values."""
        per_length = {}
        for row in self.rows:
            per_length.setdefault(row.ir_samples, []).append(row.wall_time_s)
        return {n: statistics.median(ts) for n, ts in sorted(per_length.items())}

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        for r in self.rows:
            lines.append(f"{r.ir_samples},{r.nb},{r.rep},{r.wall_time_s:.9e},{r.realtime_ratio:.9e}")
        return "\n".join(lines) + "\n"

    def write_csv(self, path):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv())

    def write_plot_data(self, path):
        """Median wall time per IR length as whitespace columns (gnuplot-ready)."""
        lines = ["# ir_samples  median_wall_time_s  realtime_ratio"]
        for n, t in self.median_wall_times().items():
            lines.append(f"{n}  {t:.9e}  {t / self.input_duration_s:.9e}")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")


def _time_once(ir: Signal, x: Signal, nb: int) -> tuple[float, np.ndarray]:
    """One timed end-to-end pass; returns (wall seconds, full output)."""
    engine = ScatterEngine(ir, EngineConfig(block_size_nb=nb))
    blocks = [Signal(x.samples[i : i + nb], x.sample_rate) for i in range(0, len(x), nb)]
    pieces = []
    t0 = perf_counter()
    for b in blocks:
        pieces.append(engine.process_block(b).samples)
    tail = engine.flush().samples
    wall = perf_counter() - t0
    pieces.append(tail)
    return wall, np.concatenate(pieces)


def _fit_line(lengths, times) -> LinearFit | None:
    if len(set(lengths)) < 2:
        return None
    x = np.asarray(lengths, dtype=np.float64)
    y = np.asarray(times, dtype=np.float64)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        r2 = 1.0 if ss_res == 0.0 else 0.0
    else:
        r2 = max(0.0, 1.0 - ss_res / ss_tot)
    return LinearFit(float(slope), float(intercept), r2)


def _sweep_cell(spec: SweepSpec, ir_len: int, nb: int) -> tuple[list, np.ndarray]:
    ir = gen_white_noise(ir_len, spec.input_signal.sample_rate, seed=(spec.rng_seed, ir_len))
    duration = spec.input_signal.duration_s
    rows = []
    first_out = None
    for rep in range(spec.repetitions):
        wall, out = _time_once(ir, spec.input_signal, nb)
        rows.append(BenchRow(ir_len, nb, rep, wall, wall / duration))
        if first_out is None:
            first_out = out
    return rows, first_out


def run_ir_sweep(spec: SweepSpec, parallel: bool = False) -> BenchReport:
    """Time the engine across IR lengths at a fixed block size.

    Returns one row per (ir_length, repetition), a slope/intercept/r^2
    fit of median wall time versus IR length, and the interpolated
    real-time limit length (None when every length ran faster than the
    input's duration).

    Sequential runs interleave repetitions round-robin across lengths,
    so a transient system slowdown lands on many lengths once rather
    than on every repetition of one length; parallel mode runs each
    length's cell on its own thread instead (faster, noisier timing).
    """
    _kernels.warm_up()
    nb = spec.nb_values[0]
    duration = spec.input_signal.duration_s
    rows = []
    outputs = {}
    if parallel:
        with ThreadPoolExecutor() as pool:
            cells = list(pool.map(lambda n: _sweep_cell(spec, n, nb), spec.ir_lengths))
        for n, (cell_rows, out) in zip(spec.ir_lengths, cells):
            rows.extend(cell_rows)
            outputs[n] = out
    else:
        irs = {
            n: gen_white_noise(n, spec.input_signal.sample_rate, seed=(spec.rng_seed, n))
            for n in spec.ir_lengths
        }
        for rep in range(spec.repetitions):
            for n in spec.ir_lengths:
                wall, out = _time_once(irs[n], spec.input_signal, nb)
                rows.append(BenchRow(n, nb, rep, wall, wall / duration))
                if rep == 0:
                    outputs[n] = out
    digest = hashlib.sha256()
    for n in spec.ir_lengths:
        digest.update(outputs[n].tobytes())
    report = BenchReport(rows, duration, output_digest=digest.hexdigest())
    medians = report.median_wall_times()
    report.linear_fit = _fit_line(list(medians.keys()), list(medians.values()))
    if len(medians) >= 2:
        report.limit_filter_length = find_realtime_limit(report, duration)
    return report


def run_nb_sweep(spec: SweepSpec) -> BenchReport:
    """Time the engine across block sizes at a fixed IR length.

    The streamed result must not depend on how the input is chopped, so
    outputs across all block sizes are checked for bit-identity
    (RuntimeError on any mismatch) and only the wall-time spread
    (max/min - 1, in percent, over per-nb medians) is reported.
    """
    _kernels.warm_up()
    ir_len = spec.ir_lengths[0]
    rows = []
    reference = None
    per_nb_median = []
    for nb in spec.nb_values:
        cell_rows, out = _sweep_cell(spec, ir_len, nb)
        rows.extend(cell_rows)
        per_nb_median.append(statistics.median(r.wall_time_s for r in cell_rows))
        if reference is None:
            reference = out
        elif out.shape != reference.shape or not np.array_equal(
            out.view(np.uint64), reference.view(np.uint64)
        ):
            raise RuntimeError(f"output at nb={nb} differs from nb={spec.nb_values[0]}")
    spread = (max(per_nb_median) / min(per_nb_median) - 1.0) * 100.0
    return BenchReport(
        rows,
        spec.input_signal.duration_s,
        nb_spread_percent=spread,
        output_digest=hashlib.sha256(reference.tobytes()).hexdigest(),
    )


def find_realtime_limit(report: BenchReport, input_duration: float) -> float | None:
    """Longest IR (in samples, interpolated) still convolving in real time.

    Works on per-length median wall times, sorted and de-duplicated.
    Returns None when every measured length beats real time, the
    shortest measured length when even it is too slow, and otherwise
    the linear interpolation of the first crossing of wall time with
    the input duration.
    """
    if input_duration <= 0:
        raise ValueError(f"input_duration must be positive, got {input_duration}")
    medians = report.median_wall_times()
    if len(medians) < 2:
        raise ValueError("need rows at two or more distinct ir_lengths")
    lengths = list(medians.keys())
    times = list(medians.values())
    if times[0] >= input_duration:
        return float(lengths[0])
    for i in range(len(lengths) - 1):
        lo, hi = times[i], times[i + 1]
        if lo <= input_duration <= hi:
            if hi == lo:
                return float(lengths[i + 1])
            frac = (input_duration - lo) / (hi - lo)
            return lengths[i] + frac * (lengths[i + 1] - lengths[i])
    return None
