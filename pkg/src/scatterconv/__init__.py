"""Streaming scatter-form FIR convolution with zero block latency.

Instead of gathering past inputs for each output sample (direct form),
every input sample scatters a scaled, delayed copy of the impulse
response into a circular residue buffer; finished samples are read off
the buffer front.  The first output sample is available as soon as the
first input sample arrives, the full length-(Ne+Nh-1) result including
the tail falls out naturally, and the impulse response can be swapped
mid-stream without disturbing sound already in flight.

Entry points:
  scatter_convolve / direct_form   whole-signal convolution, two forms
  ScatterEngine                    block-streaming engine with IR hot swap
  fixed_point_convolve             bit-true requantization simulation
  run_ir_sweep / run_nb_sweep      runtime scaling measurements
  read_wav / write_wav             pcm16 / pcm24 / float32 WAV files
"""

from .bench import (
    BenchReport,
    BenchRow,
    LinearFit,
    SweepSpec,
    find_realtime_limit,
    gen_white_noise,
    ms_to_samples,
    run_ir_sweep,
    run_nb_sweep,
)
from .core import (
    ConvOutput,
    Signal,
    commuted_convolve,
    direct_form,
    scatter_convolve,
    scatter_convolve_skip_zeros,
)
from .engine import DEFAULT_BLOCK_SIZE, EngineConfig, ScatterEngine
from .quantize import (
    FixedPointFormat,
    RequantReport,
    fixed_point_convolve,
    ideal_accumulator_bits,
    ideal_bits_removed,
    mac_requant_count,
    quantize,
    simulate_fixed_point_conv,
)
from .wavio import WavFormatError, WavSpec, read_wav, write_wav

__version__ = "0.1.0"

__all__ = [
    "BenchReport",
    "BenchRow",
    "ConvOutput",
    "DEFAULT_BLOCK_SIZE",
    "EngineConfig",
    "FixedPointFormat",
    "LinearFit",
    "RequantReport",
    "ScatterEngine",
    "Signal",
    "SweepSpec",
    "WavFormatError",
    "WavSpec",
    "commuted_convolve",
    "direct_form",
    "find_realtime_limit",
    "fixed_point_convolve",
    "gen_white_noise",
    "ideal_accumulator_bits",
    "ideal_bits_removed",
    "mac_requant_count",
    "ms_to_samples",
    "quantize",
    "read_wav",
    "run_ir_sweep",
    "run_nb_sweep",
    "scatter_convolve",
    "scatter_convolve_skip_zeros",
    "simulate_fixed_point_conv",
    "write_wav",
    "__version__",
]
