"""End-to-end streaming engine.

Per hop: analyze both inputs (plain + derivative-window STFT), reassign
and segment each spectrum, solve the 1-D transport problem between the
region masses, place every entry's mass at its displaced frequency,
assign phases by accumulation + region locking, then inverse-FFT and
overlap-add. The interpolation position k is sampled once per hop.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .interpolate import PlacedSpectrum, place
from .phase import PhaseState, accumulate, wrap_phase
from .reassign import (
    DEFAULT_MIN_REGION_FRACTION,
    ReassignedSpectrum,
    SpectralRegion,
    reassign,
    segment,
)
from .stft import (
    AnalysisConfig,
    Frame,
    Spectrum,
    analyze,
    cola_constant,
    make_derivative_window,
    make_hann_window,
    synthesize,
)
from .transport import SILENT_TOTAL, mass_points, normalize, optimal_plan


class EngineFault(RuntimeError):
    """Unrecoverable numeric failure (non-finite output) at a known hop."""

    def __init__(self, hop_index: int, message: str):
        super().__init__(f"hop {hop_index}: {message}")
        self.hop_index = hop_index


@dataclass
class InterpolationEnvelope:
    """Piecewise-linear k(t) curve driving offline renders.

    Evaluation clamps to the first/last breakpoint outside the range;
    k values are clamped to [0, 1] on construction.
    """

    breakpoints: list[tuple[float, float]]

    def __post_init__(self) -> None:
        if not self.breakpoints:
            raise ValueError("envelope needs at least one breakpoint")
        times = [t for t, _ in self.breakpoints]
        if any(b <= a for a, b in zip(times[:-1], times[1:])):
            raise ValueError("breakpoint times must be strictly increasing")
        self.breakpoints = [
            (float(t), min(max(float(k), 0.0), 1.0)) for t, k in self.breakpoints
        ]

    @classmethod
    def constant(cls, k: float) -> "InterpolationEnvelope":
        return cls(breakpoints=[(0.0, k)])

    @classmethod
    def from_file(cls, path: str) -> "InterpolationEnvelope":
        """Parse a text file of `time_seconds,k` lines; `#` starts a comment."""
        breakpoints = []
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                parts = line.split(",")
                if len(parts) != 2:
                    raise ValueError(f"{path}:{lineno}: expected `time,k`, got {raw!r}")
                breakpoints.append((float(parts[0]), float(parts[1])))
        return cls(breakpoints=breakpoints)

    def value(self, t: float) -> float:
        times = [b[0] for b in self.breakpoints]
        ks = [b[1] for b in self.breakpoints]
        return float(np.interp(t, times, ks))


class Engine:
    """One streaming morph instance (one output channel).

    Owns the input window buffers, the overlap-add tail and the phase
    memory; not safe to share across streams. Feed hop-sized blocks of
    both inputs and read hop-sized output blocks (one window of latency).
    """

    def __init__(
        self,
        config: AnalysisConfig | None = None,
        min_region_fraction: float = DEFAULT_MIN_REGION_FRACTION,
    ):
        self.config = config or AnalysisConfig()
        self.min_region_fraction = min_region_fraction
        w = self.config.window_length
        self._window = make_hann_window(w)
        self._dwindow = make_derivative_window(w, self.config.sample_rate)
        self._cola = cola_constant(self._window, self.config.hop_length)
        self._buf_a = np.zeros(w)
        self._buf_b = np.zeros(w)
        self._ola = np.zeros(w)
        self._phase = PhaseState.initial(self.config)
        self._hop_index = 0

    @property
    def hop_index(self) -> int:
        return self._hop_index

    def process_hop(
        self, hop_a: np.ndarray, hop_b: np.ndarray, k: float
    ) -> np.ndarray:
        """Consume one hop of each input and emit one hop of output."""
        cfg = self.config
        hop = cfg.hop_length
        hop_a = np.asarray(hop_a, dtype=float)
        hop_b = np.asarray(hop_b, dtype=float)
        if hop_a.shape != (hop,) or hop_b.shape != (hop,):
            raise ValueError(f"input blocks must have shape ({hop},)")
        if not 0.0 <= k <= 1.0:
            raise ValueError(f"k must be in [0, 1], got {k}")

        self._buf_a = np.concatenate([self._buf_a[hop:], hop_a])
        self._buf_b = np.concatenate([self._buf_b[hop:], hop_b])

        spec_a, re_a, regs_a = self._analyze_input(self._buf_a)
        spec_b, re_b, regs_b = self._analyze_input(self._buf_b)

        points_a, total_a = normalize(mass_points(regs_a))
        points_b, total_b = normalize(mass_points(regs_b))

        if total_a < SILENT_TOTAL or total_b < SILENT_TOTAL:
            out_bins = self._crossfade(spec_a, re_a, spec_b, re_b, k)
        else:
            plan = optimal_plan(points_a, points_b)
            placed = place(
                plan, regs_a, regs_b, (spec_a, spec_b), k, (total_a, total_b)
            )
            phases = self._assign_phases(placed)
            out_bins = placed.magnitudes * np.exp(1j * phases)

        frame = synthesize(Spectrum(bins=out_bins, bin_freq=cfg.bin_frequencies), cfg)
        if not np.all(np.isfinite(frame.samples)):
            raise EngineFault(self._hop_index, "non-finite samples in output frame")
        self._ola += frame.samples
        out = self._ola[:hop] / self._cola
        self._ola = np.concatenate([self._ola[hop:], np.zeros(hop)])
        self._hop_index += 1
        return out

    def _analyze_input(
        self, buf: np.ndarray
    ) -> tuple[Spectrum, ReassignedSpectrum, list[SpectralRegion]]:
        frame = Frame(samples=buf)
        spec = analyze(frame, self._window, self.config)
        spec_d = analyze(frame, self._dwindow, self.config)
        reassigned = reassign(spec, spec_d)
        regions = segment(reassigned, self.min_region_fraction)
        return spec, reassigned, regions

    def _crossfade(
        self,
        spec_a: Spectrum,
        re_a: ReassignedSpectrum,
        spec_b: Spectrum,
        re_b: ReassignedSpectrum,
        k: float,
    ) -> np.ndarray:
        """Fallback when either input is silent: no transport is defined
        against an empty spectrum, so amplitude crossfades linearly."""
        out_bins = (1.0 - k) * spec_a.bins + k * spec_b.bins
        weight_a = (1.0 - k) * np.abs(spec_a.bins)
        weight_b = k * np.abs(spec_b.bins)
        freqs = np.where(weight_a >= weight_b, re_a.reassigned_freq, re_b.reassigned_freq)
        silent = (weight_a + weight_b) == 0.0
        freqs[silent] = self.config.bin_frequencies[silent]
        self._phase.prev_phase = np.where(silent, 0.0, np.angle(out_bins))
        self._phase.prev_reassigned = freqs
        self._phase.initialized = True
        return out_bins

    def _assign_phases(self, placed: PlacedSpectrum) -> np.ndarray:
        """Per-bin output phases: accumulated at region centers, locked
        to donor-relative offsets elsewhere, loudest contributor winning
        contested bins."""
        cfg = self.config
        state = self._phase
        winner_freqs = placed.winner_frequencies(cfg.bin_frequencies)
        phases = np.zeros(cfg.bins)

        if not state.initialized:
            # First window: donor phases pass through verbatim.
            for index, p in enumerate(placed.placements):
                won = placed.winner[p.start_bin : p.end_bin] == index
                phases[p.start_bin : p.end_bin][won] = np.angle(p.profile)[won]
        else:
            accumulated = accumulate(state, winner_freqs, cfg.hop_duration)
            for index, p in enumerate(placed.placements):
                won = placed.winner[p.start_bin : p.end_bin] == index
                if not won.any():
                    continue
                center_phase = accumulated[p.center_bin]
                donor_center_phase = np.angle(p.profile[p.center_bin - p.start_bin])
                locked = wrap_phase(
                    center_phase + np.angle(p.profile) - donor_center_phase
                )
                phases[p.start_bin : p.end_bin][won] = locked[won]

        contributed = placed.winner >= 0
        state.prev_phase = np.where(contributed, phases, 0.0)
        state.prev_reassigned = winner_freqs
        state.initialized = True
        return phases


def render(
    a: np.ndarray,
    b: np.ndarray,
    envelope: InterpolationEnvelope,
    config: AnalysisConfig | None = None,
    min_region_fraction: float = DEFAULT_MIN_REGION_FRACTION,
) -> np.ndarray:
    """Offline driver over Engine.process_hop.

    Inputs are mono (n,) or multichannel (n, channels) at the config's
    sample rate; a mono input is duplicated to match a multichannel one.
    Channels are processed by independent engines. k is the envelope
    evaluated at each output hop's center time. The output length equals
    the longer input's length.
    """
    cfg = config or AnalysisConfig()
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    a2 = a[:, None] if a.ndim == 1 else a
    b2 = b[:, None] if b.ndim == 1 else b
    channels = max(a2.shape[1], b2.shape[1])
    if a2.shape[1] not in (1, channels) or b2.shape[1] not in (1, channels):
        raise ValueError(
            f"channel counts {a2.shape[1]} and {b2.shape[1]} are incompatible"
        )
    if a2.shape[1] == 1 and channels > 1:
        a2 = np.tile(a2, (1, channels))
    if b2.shape[1] == 1 and channels > 1:
        b2 = np.tile(b2, (1, channels))

    n_out = max(a2.shape[0], b2.shape[0])
    hop = cfg.hop_length
    n_hops = -(-n_out // hop)  # ceil
    padded = n_hops * hop

    def pad(x: np.ndarray) -> np.ndarray:
        out = np.zeros((padded, channels))
        out[: x.shape[0]] = x
        return out

    a2, b2 = pad(a2), pad(b2)
    output = np.zeros((padded, channels))
    zeros = np.zeros(hop)
    for ch in range(channels):
        engine = Engine(cfg, min_region_fraction)
        # Step t emits the output hop t-1, so the first emission (the
        # zero-primed warmup) is discarded and one flush step runs last.
        for t in range(n_hops + 1):
            hop_a = a2[t * hop : (t + 1) * hop, ch] if t < n_hops else zeros
            hop_b = b2[t * hop : (t + 1) * hop, ch] if t < n_hops else zeros
            k = envelope.value((t - 0.5) * hop / cfg.sample_rate)
            emitted = engine.process_hop(hop_a, hop_b, k)
            if t >= 1:
                output[(t - 1) * hop : t * hop, ch] = emitted
    output = output[:n_out]
    return output[:, 0] if (a.ndim == 1 and b.ndim == 1) else output


def analyze_stream(
    samples: np.ndarray,
    config: AnalysisConfig | None = None,
    min_region_fraction: float = DEFAULT_MIN_REGION_FRACTION,
):
    """Segment every full analysis window of a mono stream.

    Yields (hop_index, window_center_time_seconds, regions) per hop; used
    by the analysis report and by tests that track component frequencies.
    """
    cfg = config or AnalysisConfig()
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 1:
        raise ValueError("analyze_stream expects a mono signal")
    window = make_hann_window(cfg.window_length)
    dwindow = make_derivative_window(cfg.window_length, cfg.sample_rate)
    n_frames = (len(samples) - cfg.window_length) // cfg.hop_length + 1
    for t in range(max(n_frames, 0)):
        start = t * cfg.hop_length
        frame = Frame(samples=samples[start : start + cfg.window_length], start_time=start)
        spec = analyze(frame, window, cfg)
        spec_d = analyze(frame, dwindow, cfg)
        regions = segment(reassign(spec, spec_d), min_region_fraction)
        center_time = (start + cfg.window_length / 2.0) / cfg.sample_rate
        yield t, center_time, regions
