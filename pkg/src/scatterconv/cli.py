"""Command-line front end: convolve WAV files, benchmark, report quantization.

Exit codes: 0 success, 1 I/O failure (missing/corrupt/unwritable file),
2 argument or domain error (bad flag syntax, mismatched rates, invalid
bit widths).  Error messages name the failing file or flag.
"""

import argparse
import sys

import numpy as np

from .bench import (
    CSV_HEADER,
    SweepSpec,
    gen_white_noise,
    ms_to_samples,
    run_ir_sweep,
    run_nb_sweep,
)
from .core import Signal
from .engine import DEFAULT_BLOCK_SIZE, EngineConfig, ScatterEngine
from .quantize import (
    FixedPointFormat,
    ideal_accumulator_bits,
    ideal_bits_removed,
    mac_requant_count,
    simulate_fixed_point_conv,
)
from .wavio import ENCODINGS, WavFormatError, WavSpec, read_wav, write_wav


def _swap_spec(text: str):
    """Parse PATH@SAMPLE for --swap-ir."""
    path, sep, at = text.rpartition("@")
    if not sep or not path:
        raise argparse.ArgumentTypeError(f"--swap-ir wants PATH@SAMPLE, got {text!r}")
    try:
        index = int(at)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--swap-ir sample index {at!r} is not an integer")
    if index < 0:
        raise argparse.ArgumentTypeError(f"--swap-ir sample index must be >= 0, got {index}")
    return path, index


def _sweep_range(text: str):
    """Parse A:B:STEP (milliseconds) for --ir-sweep."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"--ir-sweep wants A:B:STEP in ms, got {text!r}")
    try:
        a, b, step = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--ir-sweep has a non-numeric field in {text!r}")
    if a <= 0 or step <= 0 or b < a:
        raise argparse.ArgumentTypeError(f"--ir-sweep needs 0 < A <= B and STEP > 0, got {text!r}")
    values = []
    k = 0
    while True:
        v = a + k * step
        if v > b + 1e-9:
            break
        values.append(v)
        k += 1
    return values


def _int_list(text: str):
    """Parse comma-separated positive integers for --nb-sweep."""
    try:
        values = [int(p) for p in text.split(",") if p != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--nb-sweep wants comma-separated integers, got {text!r}")
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError(f"--nb-sweep values must be positive, got {text!r}")
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scatterconv",
        description="Streaming scatter-form FIR convolution: process, benchmark, quantify.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    conv = sub.add_parser("convolve", help="convolve a WAV input with a WAV impulse response")
    conv.add_argument("input", help="input WAV file")
    conv.add_argument("ir", help="impulse response WAV file")
    conv.add_argument("output", help="output WAV file")
    conv.add_argument("--nb", type=int, default=DEFAULT_BLOCK_SIZE,
                      help="processing block size in samples (default %(default)s)")
    conv.add_argument("--zero-skip", type=float, default=0.0, metavar="EPS",
                      help="skip scattering input samples with |x| <= EPS (default 0: exact zeros)")
    conv.add_argument("--swap-ir", action="append", type=_swap_spec, metavar="PATH@SAMPLE",
                      help="hot-swap to another IR at an absolute input sample index (repeatable)")
    conv.add_argument("--normalize", type=float, nargs="?", const=1.0, default=None, metavar="PEAK",
                      help="rescale output so its largest |sample| equals PEAK (default 1.0)")
    conv.add_argument("--no-tail", action="store_true",
                      help="truncate the output to the input's length, dropping the reverb tail")
    conv.add_argument("--encoding", choices=ENCODINGS, default="float32",
                      help="output sample encoding (default %(default)s)")
    conv.set_defaults(func=cmd_convolve)

    bench = sub.add_parser("bench", help="measure runtime scaling of the engine")
    bench.add_argument("--ir-sweep", type=_sweep_range, metavar="A:B:STEP",
                       help="sweep IR lengths from A to B ms in STEP ms increments")
    bench.add_argument("--nb-sweep", type=_int_list, metavar="N1,N2,...",
                       help="sweep block sizes at a fixed IR length")
    bench.add_argument("--input", default="noise:10", metavar="PATH|noise:SECONDS",
                       help="stimulus: a WAV file or seeded noise of a given duration (default %(default)s)")
    bench.add_argument("--seed", type=int, default=0, help="RNG seed (default %(default)s)")
    bench.add_argument("--reps", type=int, default=3,
                       help="repetitions per cell, median-aggregated (default %(default)s)")
    bench.add_argument("--rate", type=int, default=44100,
                       help="sample rate for generated noise (default %(default)s)")
    bench.add_argument("--nb", type=int, default=DEFAULT_BLOCK_SIZE,
                       help="block size for the IR sweep (default %(default)s)")
    bench.add_argument("--ir-ms", type=float, default=100.0,
                       help="IR length for the nb sweep, in ms (default %(default)s)")
    bench.add_argument("--csv", metavar="PATH", help="write all measurement rows as CSV")
    bench.add_argument("--plot-data", metavar="PATH",
                       help="write gnuplot-ready median wall times (IR sweep only)")
    bench.set_defaults(func=cmd_bench)

    quant = sub.add_parser("quant", help="fixed-point requantization budgets and simulation")
    quant.add_argument("--bits", type=int, required=True, help="data word length in bits")
    quant.add_argument("--ir-len", type=int, required=True, help="impulse response length in taps")
    quant.add_argument("--simulate", action="store_true",
                       help="run both rounding schemes on seeded noise and report errors")
    quant.add_argument("--seed", type=int, default=0, help="RNG seed for --simulate")
    quant.add_argument("--len", type=int, default=256, dest="sim_len",
                       help="input length in samples for --simulate (default %(default)s)")
    quant.set_defaults(func=cmd_quant)
    return parser


def _feed(engine: ScatterEngine, x: Signal, pos: int, stop: int, nb: int, pieces: list) -> int:
    while pos < stop:
        n = min(nb, stop - pos)
        block = Signal(x.samples[pos : pos + n], x.sample_rate)
        pieces.append(engine.process_block(block).samples)
        pos += n
    return pos


def _broadcast_irs(ir_channels, n_input_channels, ir_path):
    if len(ir_channels) == 1:
        return list(ir_channels) * n_input_channels
    if len(ir_channels) == n_input_channels:
        return list(ir_channels)
    raise ValueError(
        f"{ir_path}: {len(ir_channels)} IR channels cannot map onto "
        f"{n_input_channels} input channels (must be 1 or equal)"
    )


def cmd_convolve(args) -> int:
    in_channels, in_spec = read_wav(args.input)
    ir_channels, ir_spec = read_wav(args.ir)
    if in_spec.sample_rate != ir_spec.sample_rate:
        raise ValueError(
            f"sample rates differ: {args.input} is {in_spec.sample_rate} Hz, "
            f"{args.ir} is {ir_spec.sample_rate} Hz"
        )
    n_in = len(in_channels[0])
    if n_in == 0:
        raise ValueError(f"{args.input}: no samples")
    if len(ir_channels[0]) == 0:
        raise ValueError(f"{args.ir}: no samples")
    irs = _broadcast_irs(ir_channels, in_spec.channels, args.ir)

    swaps = []
    for path, at in args.swap_ir or []:
        sw_channels, sw_spec = read_wav(path)
        if sw_spec.sample_rate != in_spec.sample_rate:
            raise ValueError(
                f"sample rates differ: {args.input} is {in_spec.sample_rate} Hz, "
                f"{path} is {sw_spec.sample_rate} Hz"
            )
        if at > n_in:
            raise ValueError(f"--swap-ir {path}@{at}: index past the input's {n_in} samples")
        swaps.append((at, _broadcast_irs(sw_channels, in_spec.channels, path)))
    swaps.sort(key=lambda pair: pair[0])

    config = EngineConfig(block_size_nb=args.nb, zero_skip_threshold=args.zero_skip)
    outs = []
    for c, (x, h0) in enumerate(zip(in_channels, irs)):
        engine = ScatterEngine(h0, config)
        pieces = []
        pos = 0
        # feed up to each swap point so the IR changes on the exact sample
        for at, sw_irs in swaps:
            pos = _feed(engine, x, pos, at, args.nb, pieces)
            engine.swap_ir(sw_irs[c])
        _feed(engine, x, pos, n_in, args.nb, pieces)
        body = np.concatenate(pieces) if pieces else np.zeros(0)
        if args.no_tail:
            full = body
        else:
            full = np.concatenate([body, engine.flush().samples])
        outs.append(Signal(full, in_spec.sample_rate))

    if args.normalize is not None:
        peak = max(float(np.max(np.abs(sig.samples))) for sig in outs)
        if peak > 0.0:
            gain = args.normalize / peak
            outs = [Signal(sig.samples * gain, sig.sample_rate) for sig in outs]
        else:
            print("output is all zeros; --normalize left it unchanged", file=sys.stderr)

    out_spec = WavSpec(in_spec.sample_rate, in_spec.channels, args.encoding)
    clipped = write_wav(args.output, outs, out_spec)
    frames = len(outs[0])
    print(f"wrote {args.output}: {frames} frames x {out_spec.channels} ch, {args.encoding}")
    if clipped:
        print(f"warning: {clipped} samples clipped to full scale; consider --normalize",
              file=sys.stderr)
    return 0


def _bench_input(args) -> Signal:
    if args.input.startswith("noise:"):
        try:
            seconds = float(args.input.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"--input {args.input!r}: seconds field is not a number")
        if seconds <= 0:
            raise ValueError(f"--input {args.input!r}: duration must be positive")
        return gen_white_noise(int(round(seconds * args.rate)), args.rate, seed=(args.seed, 1))
    channels, spec = read_wav(args.input)
    if spec.channels > 1:
        print(f"{args.input} has {spec.channels} channels; benchmarking channel 0", file=sys.stderr)
    return channels[0]


def cmd_bench(args) -> int:
    if args.ir_sweep is None and args.nb_sweep is None:
        raise ValueError("nothing to do: pass --ir-sweep and/or --nb-sweep")
    stimulus = _bench_input(args)
    rate = stimulus.sample_rate
    all_rows = []
    plot_report = None
    if args.ir_sweep is not None:
        lengths = sorted({ms_to_samples(ms, rate) for ms in args.ir_sweep})
        spec = SweepSpec(lengths, stimulus, nb_values=[args.nb],
                         repetitions=args.reps, rng_seed=args.seed)
        report = run_ir_sweep(spec)
        all_rows.extend(report.rows)
        plot_report = report
        fit = report.linear_fit
        if fit is None:
            print("linear fit: n/a (single IR length)")
        else:
            print(f"linear fit: slope={fit.slope:.6e} s/sample, "
                  f"intercept={fit.intercept:.6e} s, r_squared={fit.r_squared:.4f}")
        if report.limit_filter_length is None:
            print("real-time limit: none (every measured length runs faster than real time)")
        else:
            ms = report.limit_filter_length / rate * 1000.0
            print(f"real-time limit: {report.limit_filter_length:.0f} samples ({ms:.1f} ms)")
        print(f"ir sweep output sha256: {report.output_digest}")
    if args.nb_sweep is not None:
        ir_len = ms_to_samples(args.ir_ms, rate)
        spec = SweepSpec([ir_len], stimulus, nb_values=args.nb_sweep,
                         repetitions=args.reps, rng_seed=args.seed)
        report = run_nb_sweep(spec)
        all_rows.extend(report.rows)
        print(f"nb sweep at {ir_len} taps: wall-time spread {report.nb_spread_percent:.2f}% "
              f"across nb={','.join(str(n) for n in args.nb_sweep)}")
        print(f"nb sweep output sha256: {report.output_digest}")
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(CSV_HEADER + "\n")
            for r in all_rows:
                fh.write(f"{r.ir_samples},{r.nb},{r.rep},{r.wall_time_s:.9e},{r.realtime_ratio:.9e}\n")
        print(f"wrote {args.csv}: {len(all_rows)} rows")
    if args.plot_data:
        if plot_report is None:
            raise ValueError("--plot-data needs --ir-sweep")
        plot_report.write_plot_data(args.plot_data)
        print(f"wrote {args.plot_data}")
    return 0


def cmd_quant(args) -> int:
    acc = ideal_accumulator_bits(args.bits, args.ir_len)
    removed = ideal_bits_removed(args.bits, args.ir_len)
    count, per_op = mac_requant_count(args.bits, args.ir_len)
    print(f"word length {args.bits} bits, impulse response {args.ir_len} taps")
    print(f"overflow-proof accumulator: {acc} bits")
    print(f"ideal scheme: 1 requantization removing {removed} bits")
    print(f"mac scheme: {count} requantizations removing {per_op} bits each")
    if args.simulate:
        fmt = FixedPointFormat(args.bits)
        if args.sim_len < 1:
            raise ValueError(f"--len must be >= 1, got {args.sim_len}")
        e = gen_white_noise(args.sim_len, seed=(args.seed, 1))
        h = gen_white_noise(args.ir_len, seed=(args.seed, 2))
        print(f"simulation: {args.sim_len}-sample noise input, seed {args.seed}")
        for scheme in ("ideal", "mac"):
            rep = simulate_fixed_point_conv(e, h, fmt, scheme)
            print(f"  {rep.scheme}: rms_error={rep.rms_error:.6e} max_error={rep.max_error:.6e} "
                  f"({rep.operations_count} ops x {rep.bits_removed_per_op} bits)")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except WavFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
