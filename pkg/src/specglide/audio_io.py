"""RIFF/WAVE reading and writing.

Supports PCM 8/16/32-bit and 32/64-bit float, mono or multichannel.
Samples cross the boundary as float64 in [-1, 1]; no resampling is
performed anywhere, so sample-rate agreement is the caller's problem.
"""
from __future__ import annotations

import numpy as np
from scipy.io import wavfile

_INT_SCALES = {
    np.dtype(np.int16): 32768.0,
    np.dtype(np.int32): 2147483648.0,
}


def read_wav(path: str) -> tuple[np.ndarray, int]:
    """Read a WAV file -> (samples as float64 in [-1, 1], sample_rate).

    Mono files come back as (n,), multichannel as (n, channels).
    """
    rate, data = wavfile.read(path)
    if data.dtype == np.uint8:
        samples = (data.astype(np.float64) - 128.0) / 128.0
    elif data.dtype in _INT_SCALES:
        samples = data.astype(np.float64) / _INT_SCALES[data.dtype]
    elif data.dtype in (np.float32, np.float64):
        samples = data.astype(np.float64)
    else:
        raise ValueError(f"{path}: unsupported WAV sample format {data.dtype}")
    return samples, int(rate)


def write_wav(
    path: str, samples: np.ndarray, sample_rate: int, encoding: str = "float32"
) -> None:
    """Write samples (float, [-1, 1]-ish) as 32-bit float or 16-bit PCM."""
    samples = np.asarray(samples, dtype=np.float64)
    if encoding == "float32":
        wavfile.write(path, sample_rate, samples.astype(np.float32))
    elif encoding == "pcm16":
        clipped = np.clip(samples, -1.0, 1.0)
        wavfile.write(path, sample_rate, np.round(clipped * 32767.0).astype(np.int16))
    else:
        raise ValueError(f"unsupported encoding {encoding!r} (use float32 or pcm16)")


def to_mono(samples: np.ndarray) -> np.ndarray:
    """Average channels down to mono; mono passes through."""
    samples = np.asarray(samples, dtype=np.float64)
    return samples if samples.ndim == 1 else samples.mean(axis=1)
