"""Measuring how wall time scales with impulse response length.

Per input sample the engine touches every tap once, so cost should be
linear in the tap count.  This script times a small sweep, fits a
line, estimates where processing would stop keeping up with real
time, and writes the raw rows as CSV.

Run from the repository root:  python3 demos/05_runtime_sweep.py
Uses a reduced sample rate and short input so it finishes in seconds.
"""

from scatterconv import SweepSpec, find_realtime_limit, gen_white_noise, run_ir_sweep

RATE = 8000

x = gen_white_noise(2 * RATE, sample_rate=RATE, seed=42)
spec = SweepSpec(
    ir_lengths=list(range(200, 2001, 200)),
    input_signal=x,
    repetitions=3,
    rng_seed=42,
)
report = run_ir_sweep(spec)

fit = report.linear_fit
print(f"linear fit: t = {fit.slope:.3e} * taps + {fit.intercept:.3e}")
print(f"r_squared = {fit.r_squared:.4f}")

medians = report.median_wall_times()
print(f"\n{'taps':>6} {'median wall (s)':>16} {'x real time':>12}")
for n_taps, wall in medians.items():
    print(f"{n_taps:>6} {wall:>16.6f} {wall / report.input_duration_s:>12.4f}")

limit = find_realtime_limit(report, report.input_duration_s)
if limit is None:
    print("\nevery measured length still runs faster than real time")
else:
    print(f"\nestimated real-time limit: {limit:.0f} taps")

csv_text = report.to_csv()
print(f"\nCSV ({len(report.rows)} rows), first lines:")
print("\n".join(csv_text.splitlines()[:4]))

slope_predicts = fit.slope * spec.ir_lengths[-1] + fit.intercept
measured = medians[spec.ir_lengths[-1]]
print(f"\nfit predicts {slope_predicts:.4f} s at {spec.ir_lengths[-1]} taps, "
      f"measured {measured:.4f} s")
assert fit.r_squared > 0.9, "cost should be close to linear in tap count"
