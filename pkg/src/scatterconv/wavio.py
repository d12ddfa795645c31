"""Minimal RIFF/WAVE reader and writer.

Supports the three encodings the tool chain needs: pcm16, pcm24 and
float32, canonical fmt+data chunk layout, little-endian only.  Integer
PCM maps to real samples in [-1, 1) by division by 2^(bits-1); writing
PCM rounds to nearest-even and saturates, counting clipped samples
instead of failing, because convolution output legitimately exceeds
full scale and the caller decides whether to normalize.

Unknown chunks are skipped (with the RIFF odd-size pad byte); anything
structurally wrong raises WavFormatError naming the offending chunk.
"""

import struct
from dataclasses import dataclass

import numpy as np

from .core import Signal

ENCODINGS = ("pcm16", "pcm24", "float32")

_FORMAT_PCM = 1
_FORMAT_IEEE_FLOAT = 3
_FORMAT_EXTENSIBLE = 0xFFFE


class WavFormatError(OSError):
    """Malformed or unsupported WAV structure."""


@dataclass(frozen=True)
class WavSpec:
    sample_rate: int
    channels: int
    encoding: str = "float32"

    def __post_init__(self):
        if not isinstance(self.sample_rate, (int, np.integer)) or self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be a positive integer, got {self.sample_rate!r}")
        if not isinstance(self.channels, (int, np.integer)) or self.channels < 1:
            raise ValueError(f"channels must be >= 1, got {self.channels!r}")
        if self.encoding not in ENCODINGS:
            raise ValueError(f"encoding must be one of {ENCODINGS}, got {self.encoding!r}")

    @property
    def bytes_per_sample(self) -> int:
        return {"pcm16": 2, "pcm24": 3, "float32": 4}[self.encoding]


def _need(data: bytes, count: int, what: str) -> bytes:
    if len(data) < count:
        raise WavFormatError(f"truncated {what}: wanted {count} bytes, file has {len(data)}")
    return data[:count]


def read_wav(path) -> tuple[list[Signal], WavSpec]:
    """Decode a WAV file into one float64 Signal per channel plus its spec."""
    with open(path, "rb") as fh:
        blob = fh.read()
    head = _need(blob, 12, "RIFF header")
    if head[0:4] != b"RIFF" or head[8:12] != b"WAVE":
        raise WavFormatError(f"{path}: not a RIFF/WAVE file (header {head[0:4]!r})")
    pos = 12
    fmt = None
    data = None
    while pos + 8 <= len(blob):
        cid, size = struct.unpack_from("<4sI", blob, pos)
        pos += 8
        body = blob[pos : pos + size]
        if len(body) < size:
            raise WavFormatError(f"{path}: chunk {cid!r} claims {size} bytes, file has {len(body)}")
        if cid == b"fmt ":
            fmt = _parse_fmt(body, path)
        elif cid == b"data":
            if fmt is None:
                raise WavFormatError(f"{path}: 'data' chunk before 'fmt ' chunk")
            data = body
            break
        pos += size + (size & 1)  # chunks are word-aligned
    if fmt is None:
        raise WavFormatError(f"{path}: no 'fmt ' chunk")
    if data is None:
        raise WavFormatError(f"{path}: no 'data' chunk")
    spec, decode = fmt
    frame_bytes = spec.bytes_per_sample * spec.channels
    usable = len(data) - (len(data) % frame_bytes)
    flat = decode(data[:usable])
    frames = flat.reshape(-1, spec.channels)
    channels = [Signal(np.ascontiguousarray(frames[:, c]), spec.sample_rate) for c in range(spec.channels)]
    return channels, spec


def _parse_fmt(body: bytes, path):
    if len(body) < 16:
        raise WavFormatError(f"{path}: 'fmt ' chunk too short ({len(body)} bytes)")
    tag, n_ch, rate, _brate, _balign, bits = struct.unpack_from("<HHIIHH", body, 0)
    if tag == _FORMAT_EXTENSIBLE:
        raise WavFormatError(f"{path}: WAVE_FORMAT_EXTENSIBLE in 'fmt ' chunk is not supported")
    if tag == _FORMAT_PCM and bits == 16:
        encoding, decode = "pcm16", _decode_pcm16
    elif tag == _FORMAT_PCM and bits == 24:
        encoding, decode = "pcm24", _decode_pcm24
    elif tag == _FORMAT_IEEE_FLOAT and bits == 32:
        encoding, decode = "float32", _decode_float32
    else:
        raise WavFormatError(
            f"{path}: unsupported 'fmt ' (format tag {tag}, {bits}-bit); "
            f"supported encodings: {', '.join(ENCODINGS)}"
        )
    try:
        spec = WavSpec(int(rate), int(n_ch), encoding)
    except ValueError as exc:
        raise WavFormatError(f"{path}: invalid 'fmt ' chunk: {exc}") from exc
    return spec, decode


def _decode_pcm16(raw: bytes) -> np.ndarray:
    return np.frombuffer(raw, dtype="<i2").astype(np.float64) / 32768.0


def _decode_pcm24(raw: bytes) -> np.ndarray:
    b = np.frombuffer(raw, dtype=np.uint8).reshape(-1, 3).astype(np.int32)
    v = b[:, 0] | (b[:, 1] << 8) | (b[:, 2] << 16)
    v -= (v & 0x800000) << 1  # sign-extend bit 23
    return v.astype(np.float64) / float(1 << 23)


def _decode_float32(raw: bytes) -> np.ndarray:
    return np.frombuffer(raw, dtype="<f4").astype(np.float64)


def write_wav(path, channels: list[Signal], spec: WavSpec) -> int:
    """Encode channels to a WAV file; returns how many samples saturated.

    float32 is written verbatim (no clamping, clip count is always 0).
    PCM values are rounded nearest-even to the integer grid, and values
    landing outside the representable range count as clipped and are
    pinned to the nearest rail.
    """
    if not channels:
        raise ValueError("channel list is empty")
    if len(channels) != spec.channels:
        raise ValueError(f"spec declares {spec.channels} channels, got {len(channels)} signals")
    n = len(channels[0])
    for c, sig in enumerate(channels):
        if len(sig) != n:
            raise ValueError(f"channel lengths differ: channel 0 has {n}, channel {c} has {len(sig)}")
        if sig.sample_rate != spec.sample_rate:
            raise ValueError(
                f"channel {c} sample rate {sig.sample_rate} != spec rate {spec.sample_rate}"
            )
    interleaved = np.stack([sig.samples for sig in channels], axis=1).reshape(-1)
    if spec.encoding == "float32":
        payload = interleaved.astype("<f4").tobytes()
        clipped = 0
        tag, bits = _FORMAT_IEEE_FLOAT, 32
    else:
        bits = 16 if spec.encoding == "pcm16" else 24
        scale = 1 << (bits - 1)
        q = np.round(interleaved * scale)
        clipped = int(np.count_nonzero((q < -scale) | (q > scale - 1)))
        q = np.clip(q, -scale, scale - 1).astype(np.int32)
        if bits == 16:
            payload = q.astype("<i2").tobytes()
        else:
            u = q.astype(np.uint32)
            b = np.empty((len(q), 3), dtype=np.uint8)
            b[:, 0] = u & 0xFF
            b[:, 1] = (u >> 8) & 0xFF
            b[:, 2] = (u >> 16) & 0xFF
            payload = b.tobytes()
        tag = _FORMAT_PCM
    block_align = spec.bytes_per_sample * spec.channels
    fmt_chunk = struct.pack(
        "<4sIHHIIHH",
        b"fmt ",
        16,
        tag,
        spec.channels,
        spec.sample_rate,
        spec.sample_rate * block_align,
        block_align,
        bits,
    )
    # non-PCM files canonically carry a fact chunk with the frame count
    fact_chunk = struct.pack("<4sII", b"fact", 4, n) if tag != _FORMAT_PCM else b""
    data_header = struct.pack("<4sI", b"data", len(payload))
    pad = b"\x00" if len(payload) & 1 else b""
    riff_size = 4 + len(fmt_chunk) + len(fact_chunk) + len(data_header) + len(payload) + len(pad)
    with open(path, "wb") as fh:
        fh.write(struct.pack("<4sI4s", b"RIFF", riff_size, b"WAVE"))
        fh.write(fmt_chunk)
        fh.write(fact_chunk)
        fh.write(data_header)
        fh.write(payload)
        fh.write(pad)
    return clipped
