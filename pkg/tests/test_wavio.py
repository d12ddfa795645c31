"""WAV reader/writer: mappings, round trips, malformed-file handling."""

import struct

import numpy as np
import pytest

from scatterconv.core import Signal
from scatterconv.wavio import WavFormatError, WavSpec, read_wav, write_wav


def sig(values, rate=44100):
    return Signal(np.asarray(values, dtype=np.float64), rate)


def wav_bytes(*chunks, riff_tag=b"RIFF", wave_tag=b"WAVE"):
    body = b"".join(chunks)
    return struct.pack("<4sI4s", riff_tag, 4 + len(body), wave_tag) + body


def fmt_chunk(tag=1, channels=1, rate=44100, bits=16):
    block = channels * (bits // 8)
    return struct.pack("<4sIHHIIHH", b"fmt ", 16, tag, channels, rate, rate * block, block, bits)


def data_chunk(payload: bytes):
    return struct.pack("<4sI", b"data", len(payload)) + payload


# ------------------------------------------------------------------ spec type


def test_wavspec_validation():
    with pytest.raises(ValueError, match="sample_rate"):
        WavSpec(0, 1, "pcm16")
    with pytest.raises(ValueError, match="channels"):
        WavSpec(44100, 0, "pcm16")
    with pytest.raises(ValueError, match="encoding"):
        WavSpec(44100, 1, "pcm8")
    assert WavSpec(44100, 2, "pcm24").bytes_per_sample == 3


# ----------------------------------------------------------------- round trips


def test_float32_roundtrip_is_bit_exact(tmp_path):
    rng = np.random.default_rng(5)
    x = sig(rng.uniform(-1, 1, 777).astype(np.float32).astype(np.float64))
    path = tmp_path / "f32.wav"
    clipped = write_wav(path, [x], WavSpec(44100, 1, "float32"))
    assert clipped == 0
    back, spec = read_wav(path)
    assert spec == WavSpec(44100, 1, "float32")
    assert np.array_equal(back[0].samples, x.samples)


def test_float32_is_not_clamped(tmp_path):
    x = sig([2.5, -3.0])
    path = tmp_path / "hot.wav"
    assert write_wav(path, [x], WavSpec(44100, 1, "float32")) == 0
    back, _ = read_wav(path)
    assert np.array_equal(back[0].samples, [2.5, -3.0])


def test_pcm16_full_scale_mappings(tmp_path):
    path = tmp_path / "p16.wav"
    payload = struct.pack("<4h", -32768, 16384, 0, -16384)
    path.write_bytes(wav_bytes(fmt_chunk(bits=16), data_chunk(payload)))
    back, spec = read_wav(path)
    assert spec.encoding == "pcm16"
    assert np.array_equal(back[0].samples, [-1.0, 0.5, 0.0, -0.5])


def test_pcm16_roundtrip_on_grid_values(tmp_path):
    rng = np.random.default_rng(6)
    x = sig(rng.integers(-32768, 32768, 500) / 32768.0)
    path = tmp_path / "p16rt.wav"
    assert write_wav(path, [x], WavSpec(44100, 1, "pcm16")) == 0
    back, _ = read_wav(path)
    assert np.array_equal(back[0].samples, x.samples)


def test_pcm16_clipping_saturates_and_counts(tmp_path):
    path = tmp_path / "clip.wav"
    clipped = write_wav(path, [sig([1.0, 0.25, -1.0])], WavSpec(44100, 1, "pcm16"))
    assert clipped == 1  # +1.0 rounds to 32768 and saturates; -1.0 is representable
    back, _ = read_wav(path)
    assert np.array_equal(back[0].samples, [32767 / 32768, 0.25, -1.0])


def test_pcm24_roundtrip_on_grid_values(tmp_path):
    rng = np.random.default_rng(7)
    x = sig(rng.integers(-(1 << 23), 1 << 23, 501) / float(1 << 23), rate=48000)
    path = tmp_path / "p24.wav"
    assert write_wav(path, [x], WavSpec(48000, 1, "pcm24")) == 0
    back, spec = read_wav(path)
    assert spec.encoding == "pcm24"
    assert spec.sample_rate == 48000
    assert np.array_equal(back[0].samples, x.samples)


def test_pcm_write_rounds_to_nearest_even(tmp_path):
    # 0.5/32768 sits exactly between 0 and 1; 1.5/32768 between 1 and 2
    path = tmp_path / "ties.wav"
    write_wav(path, [sig([0.5 / 32768, 1.5 / 32768])], WavSpec(44100, 1, "pcm16"))
    back, _ = read_wav(path)
    assert np.array_equal(back[0].samples, [0.0, 2 / 32768])


def test_multichannel_roundtrip_preserves_order(tmp_path):
    r = 22050
    chans = [sig([0.1, 0.2, 0.3], r), sig([-0.1, -0.2, -0.3], r), sig([0.0, 0.5, -0.5], r)]
    path = tmp_path / "3ch.wav"
    write_wav(path, chans, WavSpec(r, 3, "float32"))
    back, spec = read_wav(path)
    assert spec.channels == 3
    for got, want in zip(back, chans):
        np.testing.assert_allclose(got.samples, want.samples, atol=2**-24)


def test_unknown_chunks_are_skipped(tmp_path):
    path = tmp_path / "junk.wav"
    junk = struct.pack("<4sI", b"LIST", 5) + b"abcde" + b"\x00"  # odd size, padded
    payload = struct.pack("<2h", 16384, -16384)
    path.write_bytes(wav_bytes(fmt_chunk(), junk, data_chunk(payload)))
    back, _ = read_wav(path)
    assert np.array_equal(back[0].samples, [0.5, -0.5])


def test_partial_trailing_frame_is_dropped(tmp_path):
    path = tmp_path / "ragged.wav"
    payload = struct.pack("<3h", 16384, 16384, 16384) + b"\x01"  # 1 stray byte
    path.write_bytes(wav_bytes(fmt_chunk(channels=1), data_chunk(payload)))
    back, _ = read_wav(path)
    assert len(back[0]) == 3


# --------------------------------------------------------------- writer errors


def test_write_rejects_empty_channel_list(tmp_path):
    with pytest.raises(ValueError, match="empty"):
        write_wav(tmp_path / "x.wav", [], WavSpec(44100, 1, "pcm16"))


def test_write_rejects_length_mismatch(tmp_path):
    with pytest.raises(ValueError, match="lengths differ"):
        write_wav(tmp_path / "x.wav", [sig([1.0]), sig([1.0, 2.0])], WavSpec(44100, 2, "pcm16"))


def test_write_rejects_channel_count_mismatch(tmp_path):
    with pytest.raises(ValueError, match="channels"):
        write_wav(tmp_path / "x.wav", [sig([1.0])], WavSpec(44100, 2, "pcm16"))


def test_write_rejects_rate_mismatch(tmp_path):
    with pytest.raises(ValueError, match="rate"):
        write_wav(tmp_path / "x.wav", [sig([1.0], 48000)], WavSpec(44100, 1, "pcm16"))


# --------------------------------------------------------------- reader errors


def test_read_rejects_non_riff(tmp_path):
    path = tmp_path / "bad.wav"
    path.write_bytes(b"OggS" + b"\x00" * 40)
    with pytest.raises(WavFormatError, match="RIFF"):
        read_wav(path)


def test_read_rejects_truncated_header(tmp_path):
    path = tmp_path / "short.wav"
    path.write_bytes(b"RIFF\x04\x00")
    with pytest.raises(WavFormatError, match="truncated"):
        read_wav(path)


def test_read_rejects_missing_fmt(tmp_path):
    path = tmp_path / "nofmt.wav"
    path.write_bytes(wav_bytes(data_chunk(b"\x00\x00")))
    with pytest.raises(WavFormatError, match="fmt"):
        read_wav(path)


def test_read_rejects_missing_data(tmp_path):
    path = tmp_path / "nodata.wav"
    path.write_bytes(wav_bytes(fmt_chunk()))
    with pytest.raises(WavFormatError, match="data"):
        read_wav(path)


def test_read_rejects_truncated_chunk(tmp_path):
    path = tmp_path / "trunc.wav"
    blob = wav_bytes(fmt_chunk(), struct.pack("<4sI", b"data", 100) + b"\x00" * 10)
    path.write_bytes(blob)
    with pytest.raises(WavFormatError, match="data"):
        read_wav(path)


def test_read_rejects_unsupported_bit_depth(tmp_path):
    path = tmp_path / "pcm8.wav"
    path.write_bytes(wav_bytes(fmt_chunk(bits=8), data_chunk(b"\x00\x00")))
    with pytest.raises(WavFormatError, match="8-bit"):
        read_wav(path)


def test_read_rejects_extensible_format(tmp_path):
    path = tmp_path / "ext.wav"
    path.write_bytes(wav_bytes(fmt_chunk(tag=0xFFFE), data_chunk(b"\x00\x00")))
    with pytest.raises(WavFormatError, match="EXTENSIBLE"):
        read_wav(path)


def test_read_rejects_zero_rate(tmp_path):
    path = tmp_path / "rate0.wav"
    path.write_bytes(wav_bytes(fmt_chunk(rate=0), data_chunk(b"\x00\x00")))
    with pytest.raises(WavFormatError, match="fmt"):
        read_wav(path)


def test_missing_file_raises_oserror(tmp_path):
    with pytest.raises(OSError):
        read_wav(tmp_path / "nope.wav")


# -------------------------------------------------------------- file structure


def test_float32_file_carries_fact_chunk(tmp_path):
    path = tmp_path / "fact.wav"
    write_wav(path, [sig([0.5])], WavSpec(44100, 1, "float32"))
    assert b"fact" in path.read_bytes()


def test_odd_sized_data_chunk_gets_pad_byte(tmp_path):
    path = tmp_path / "odd.wav"
    write_wav(path, [sig([0.5])], WavSpec(44100, 1, "pcm24"))  # 3-byte payload
    blob = path.read_bytes()
    assert len(blob) % 2 == 0
    back, _ = read_wav(path)
    assert np.array_equal(back[0].samples, [0.5])
