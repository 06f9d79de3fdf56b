"""Shared signal builders and analysis helpers for the test suite."""
from __future__ import annotations

import numpy as np

from specglide import (
    AnalysisConfig,
    Frame,
    analyze,
    analyze_stream,
    make_derivative_window,
    make_hann_window,
    reassign,
    segment,
)

DEFAULT = AnalysisConfig()

# Equal-temperament frequencies of the four chord notes used throughout.
A4 = 440.0
CS5 = 554.37
E5 = 659.26
A5 = 880.0


def tone(freq: float, n_samples: int, rate: int = 44100, amp: float = 1.0,
         phase: float = 0.0) -> np.ndarray:
    t = np.arange(n_samples) / rate
    return amp * np.sin(2.0 * np.pi * freq * t + phase)


def chord(freqs, n_samples: int, rate: int = 44100, amp: float = 1.0) -> np.ndarray:
    out = np.zeros(n_samples)
    for f in freqs:
        out += tone(f, n_samples, rate, amp)
    return out


def saw(freq: float, n_samples: int, rate: int = 44100, amp: float = 0.5) -> np.ndarray:
    """Band-limited sawtooth: harmonics up to 90% of Nyquist."""
    n_harmonics = max(int(0.45 * rate / freq), 1)
    t = np.arange(n_samples) / rate
    out = np.zeros(n_samples)
    for h in range(1, n_harmonics + 1):
        out += ((-1.0) ** (h + 1)) * np.sin(2.0 * np.pi * h * freq * t) / h
    return amp * (2.0 / np.pi) * out


def harmonic_tone(f0: float, n_samples: int, rate: int = 44100, n_harmonics: int = 5,
                  amp: float = 0.4) -> np.ndarray:
    """Steady transient-free harmonic material with 1/h partial amplitudes."""
    t = np.arange(n_samples) / rate
    out = np.zeros(n_samples)
    for h in range(1, n_harmonics + 1):
        out += np.sin(2.0 * np.pi * h * f0 * t + 0.7 * h) / h
    return amp * out


def analysis_frame(samples: np.ndarray, config: AnalysisConfig = DEFAULT,
                   start: int = 0) -> Frame:
    return Frame(samples=samples[start:start + config.window_length], start_time=start)


def reassigned_frame(samples: np.ndarray, config: AnalysisConfig = DEFAULT,
                     start: int = 0):
    """(plain Spectrum, ReassignedSpectrum) of one analysis window."""
    frame = analysis_frame(samples, config, start)
    window = make_hann_window(config.window_length)
    dwindow = make_derivative_window(config.window_length, config.sample_rate)
    spec = analyze(frame, window, config)
    return spec, reassign(spec, analyze(frame, dwindow, config))


def segmented_frame(samples: np.ndarray, config: AnalysisConfig = DEFAULT,
                    start: int = 0, min_region_fraction: float | None = None):
    """(Spectrum, ReassignedSpectrum, regions) of one analysis window."""
    spec, reassigned = reassigned_frame(samples, config, start)
    if min_region_fraction is None:
        regions = segment(reassigned)
    else:
        regions = segment(reassigned, min_region_fraction)
    return spec, reassigned, regions


def dominant_track(samples: np.ndarray, config: AnalysisConfig = DEFAULT):
    """Per-hop (center_time, center_freq, mass) of the loudest region."""
    track = []
    for _, center_time, regions in analyze_stream(samples, config):
        loudest = max(regions, key=lambda r: r.mass)
        track.append((center_time, loudest.center_freq, loudest.mass))
    return track


def magnitude_spectrogram(samples: np.ndarray, config: AnalysisConfig = DEFAULT):
    """Per-hop magnitude spectra over all full analysis windows."""
    window = make_hann_window(config.window_length)
    hop, length = config.hop_length, config.window_length
    n_frames = (len(samples) - length) // hop + 1
    frames = []
    for t in range(n_frames):
        frame = Frame(samples=samples[t * hop:t * hop + length], start_time=t * hop)
        frames.append(np.abs(analyze(frame, window, config).bins))
    return np.array(frames)


def db(ratio: float) -> float:
    return 20.0 * np.log10(ratio)


def correlation(a: np.ndarray, b: np.ndarray) -> float:
    a = a - a.mean()
    b = b - b.mean()
    denom = np.linalg.norm(a) * np.linalg.norm(b)
    return float(a @ b / denom) if denom > 0 else 1.0
