"""Build the output spectrum for one interpolation position k.

Each transport-plan entry slides its mass from the source region's center
frequency toward the target region's center as k goes 0 -> 1. The donor
region's complex bin profile travels as a single unit: it is translated by
an integer number of bins (so the smeared shape and its internal phase
relations survive) and rescaled so the placed magnitude equals the
entry's share of the linearly interpolated total magnitude.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .reassign import SpectralRegion
from .stft import Spectrum
from .transport import TransportPlan


def displaced_frequency(fx: float, fy: float, k: float) -> float:
    """Convex combination (1-k)*fx + k*fy of the two matched frequencies."""
    if not 0.0 <= k <= 1.0:
        raise ValueError(f"interpolation parameter k must be in [0, 1], got {k}")
    return (1.0 - k) * fx + k * fy


@dataclass
class Placement:
    """One plan entry realized on the output bin grid."""

    source: int          # region index in the source list
    target: int          # region index in the target list
    mass: float          # magnitude placed (after total-scale interpolation)
    target_freq: float   # Hz, the displaced center frequency
    start_bin: int       # half-open output range after translation + clipping
    end_bin: int
    center_bin: int      # output bin anchoring the phase of this placement
    profile: np.ndarray  # complex donor bins covering [start_bin, end_bin), scaled


@dataclass
class PlacedSpectrum:
    """Accumulated output magnitudes plus per-bin donor bookkeeping."""

    magnitudes: np.ndarray      # (bins,)
    placements: list[Placement]
    winner: np.ndarray          # (bins,) int32 index into placements, -1 = none

    def winner_frequencies(self, bin_freq: np.ndarray) -> np.ndarray:
        """Per-bin frequency of the loudest contributor (nominal where none)."""
        freqs = np.array(bin_freq, dtype=float)
        if self.placements:
            table = np.array([p.target_freq for p in self.placements])
            contributed = self.winner >= 0
            freqs[contributed] = table[self.winner[contributed]]
        return freqs


def place(
    plan: TransportPlan,
    regions_x: Sequence[SpectralRegion],
    regions_y: Sequence[SpectralRegion],
    spectra: tuple[Spectrum, Spectrum],
    k: float,
    totals: tuple[float, float],
) -> PlacedSpectrum:
    """Place every plan entry's mass at its displaced frequency.

    The donor profile is the source region's bins for k < 0.5 and the
    target region's bins from there on; both carry the same placed mass,
    so the switch is magnitude-continuous. Overlapping placements add
    their magnitudes per bin; the loudest contributor per bin is recorded
    for the phase stage. Profile bins translated beyond DC or Nyquist are
    dropped.
    """
    if not 0.0 <= k <= 1.0:
        raise ValueError(f"interpolation parameter k must be in [0, 1], got {k}")
    spectrum_x, spectrum_y = spectra
    total_x, total_y = totals
    n_bins = len(spectrum_x.bins)
    bin_spacing = spectrum_x.bin_freq[1] - spectrum_x.bin_freq[0]
    out_scale = (1.0 - k) * total_x + k * total_y

    magnitudes = np.zeros(n_bins)
    best = np.zeros(n_bins)
    winner = np.full(n_bins, -1, dtype=np.int32)
    placements: list[Placement] = []

    for entry in plan.entries:
        rx = regions_x[entry.source]
        ry = regions_y[entry.target]
        target_freq = displaced_frequency(rx.center_freq, ry.center_freq, k)
        donor, donor_spectrum = (rx, spectrum_x) if k < 0.5 else (ry, spectrum_y)
        if donor.mass <= 0.0:
            continue

        shift = int(np.floor(target_freq / bin_spacing + 0.5)) - donor.center_bin
        out_start = max(donor.start_bin + shift, 0)
        out_end = min(donor.end_bin + shift, n_bins)
        if out_end <= out_start:
            continue

        placed_mass = entry.mass * out_scale
        profile = donor_spectrum.bins[out_start - shift : out_end - shift] * (
            placed_mass / donor.mass
        )
        contributed = np.abs(profile)

        center_bin = donor.center_bin + shift
        if not out_start <= center_bin < out_end:
            center_bin = out_start + int(np.argmax(contributed))

        index = len(placements)
        placements.append(
            Placement(
                source=entry.source,
                target=entry.target,
                mass=placed_mass,
                target_freq=target_freq,
                start_bin=out_start,
                end_bin=out_end,
                center_bin=center_bin,
                profile=profile,
            )
        )
        magnitudes[out_start:out_end] += contributed
        louder = contributed > best[out_start:out_end]
        best[out_start:out_end][louder] = contributed[louder]
        winner[out_start:out_end][louder] = index

    return PlacedSpectrum(magnitudes=magnitudes, placements=placements, winner=winner)
