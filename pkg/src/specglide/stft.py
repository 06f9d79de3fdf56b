"""Windowing, forward/inverse FFT framing, and constant-overlap-add reconstruction.

All frequencies are in Hz, all times in seconds, all lengths in samples.
The analysis window is a periodic Hann so that two windows offset by half
a window length sum to exactly 1; resynthesis applies no synthesis window
and divides by that overlap-add constant.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

DEFAULT_SAMPLE_RATE = 44100
DEFAULT_WINDOW_LENGTH = 2206  # 0.05 s at 44.1 kHz
DEFAULT_FFT_LENGTH = 8192     # 44100/8192 = 5.38 Hz bin spacing


@dataclass(frozen=True)
class AnalysisConfig:
    """Frame geometry shared by every stage of the engine.

    The hop is locked to half the window length (50% overlap). The FFT
    length must be at least the window length; the window is zero-padded
    up to it.
    """

    sample_rate: int = DEFAULT_SAMPLE_RATE
    window_length: int = DEFAULT_WINDOW_LENGTH
    fft_length: int = DEFAULT_FFT_LENGTH
    hop_length: int | None = None

    def __post_init__(self) -> None:
        if self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        if self.window_length < 2:
            raise ValueError(f"window_length must be >= 2, got {self.window_length}")
        if self.fft_length < self.window_length:
            raise ValueError(
                f"fft_length {self.fft_length} < window_length {self.window_length}"
            )
        hop = self.window_length // 2
        if self.hop_length is None:
            object.__setattr__(self, "hop_length", hop)
        elif self.hop_length != hop:
            raise ValueError(
                f"hop_length must be window_length // 2 = {hop}, got {self.hop_length}"
            )

    @property
    def bins(self) -> int:
        return self.fft_length // 2 + 1

    @property
    def bin_spacing(self) -> float:
        return self.sample_rate / self.fft_length

    @property
    def nyquist(self) -> float:
        return self.sample_rate / 2.0

    @property
    def hop_duration(self) -> float:
        return self.hop_length / self.sample_rate

    @cached_property
    def bin_frequencies(self) -> np.ndarray:
        freqs = np.arange(self.bins) * self.bin_spacing
        freqs.flags.writeable = False
        return freqs


@dataclass
class Frame:
    """One window worth of time-domain samples."""

    samples: np.ndarray
    start_time: int = 0  # samples since stream start


@dataclass
class Spectrum:
    """One-sided complex spectrum with per-bin frequency labels."""

    bins: np.ndarray       # complex, length fft_length // 2 + 1
    bin_freq: np.ndarray   # Hz, strictly increasing from 0 to Nyquist

    def magnitudes(self) -> np.ndarray:
        return np.abs(self.bins)

    def total_magnitude(self) -> float:
        return float(np.abs(self.bins).sum())


def make_hann_window(length: int) -> np.ndarray:
    """Periodic (DFT-even) Hann window: w[n] = 0.5*(1 - cos(2*pi*n/length)).

    The periodic form makes windows offset by length//2 sum to a constant,
    which the overlap-add resynthesis relies on.
    """
    if length < 2:
        raise ValueError(f"window length must be >= 2, got {length}")
    n = np.arange(length)
    return 0.5 * (1.0 - np.cos(2.0 * np.pi * n / length))


def make_time_weighted_window(window: np.ndarray, sample_rate: int) -> np.ndarray:
    """Multiply a window by time in seconds measured from its center."""
    window = np.asarray(window, dtype=float)
    if window.size == 0:
        raise ValueError("window must be non-empty")
    n = np.arange(window.size)
    t = (n - (window.size - 1) / 2.0) / sample_rate
    return t * window


def make_derivative_window(length: int, sample_rate: int) -> np.ndarray:
    """Sampled time derivative of the periodic Hann window, in 1/seconds.

    d/dt [0.5*(1 - cos(2*pi*n/L))] = sample_rate * (pi/L) * sin(2*pi*n/L)
    """
    if length < 2:
        raise ValueError(f"window length must be >= 2, got {length}")
    n = np.arange(length)
    return sample_rate * (np.pi / length) * np.sin(2.0 * np.pi * n / length)


def cola_profile(window: np.ndarray, hop_length: int) -> np.ndarray:
    """Sum of overlapped window copies at each output phase.

    Returns an array of hop_length values; for a COLA-compliant window all
    values equal the same constant.
    """
    window = np.asarray(window, dtype=float)
    if len(window) % hop_length != 0:
        raise ValueError("window length must be a multiple of hop length")
    return window.reshape(-1, hop_length).sum(axis=0)


def cola_constant(window: np.ndarray, hop_length: int) -> float:
    return float(cola_profile(window, hop_length).mean())


def analyze(frame: Frame, window: np.ndarray, config: AnalysisConfig) -> Spectrum:
    """Window a frame, zero-pad to the FFT length and take the real FFT."""
    samples = np.asarray(frame.samples, dtype=float)
    if samples.shape != (config.window_length,) or len(window) != config.window_length:
        raise ValueError(
            f"frame ({samples.shape}) and window ({len(window)}) must both have "
            f"length {config.window_length}"
        )
    buf = np.zeros(config.fft_length)
    buf[: config.window_length] = samples * window
    return Spectrum(bins=np.fft.rfft(buf), bin_freq=config.bin_frequencies)


def synthesize(spectrum: Spectrum, config: AnalysisConfig) -> Frame:
    """Inverse real FFT truncated to the window length.

    The caller overlap-adds the result at hop_length with no synthesis
    window and divides by the overlap-add constant.
    """
    samples = np.fft.irfft(spectrum.bins, n=config.fft_length)[: config.window_length]
    return Frame(samples=samples)
