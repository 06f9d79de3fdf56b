"""Per-bin frequency reassignment and zero-crossing segmentation.

A bin's reassigned frequency is where its energy actually sits, computed
from the cross-spectrum of the plain STFT and an STFT taken with the
window's time derivative. Smeared bins belonging to one sinusoid all map
to the same frequency, so the sign of (reassigned - nominal) slices the
spectrum into sinusoidal regions: falling zero crossings sit on region
centers, rising ones on region boundaries.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .stft import Spectrum

# Bins quieter than this fraction of the loudest bin are treated as
# massless: the reassignment quotient divides by |X|^2 and would blow up.
SILENCE_REL_THRESHOLD = 1e-8

# Regions carrying less than this fraction of the frame's total magnitude
# are interference dust between real components; they are merged into a
# neighbour so one sinusoid yields one region.
DEFAULT_MIN_REGION_FRACTION = 0.01


@dataclass
class ReassignedSpectrum:
    """A spectrum plus its per-bin reassigned-frequency offsets (Hz)."""

    spectrum: Spectrum
    offset: np.ndarray           # Hz per bin, 0 where the bin is silent
    reassigned_freq: np.ndarray  # Hz per bin, clamped to [0, Nyquist]


@dataclass
class SpectralRegion:
    """Contiguous bin range carrying one (smeared) sinusoidal component."""

    start_bin: int
    end_bin: int     # half-open
    center_bin: int
    center_freq: float  # reassigned frequency at center_bin, Hz
    mass: float         # sum of bin magnitudes over [start_bin, end_bin)

    def __post_init__(self) -> None:
        if not self.start_bin <= self.center_bin < self.end_bin:
            raise ValueError(
                f"center bin {self.center_bin} outside region "
                f"[{self.start_bin}, {self.end_bin})"
            )


def reassigned_offsets(x: Spectrum, x_dweighted: Spectrum) -> np.ndarray:
    """Per-bin frequency offsets (Hz) from the derivative-window cross-spectrum.

    offset_i = -Im{ Xd_i * conj(X_i) / |X_i|^2 } / (2*pi)

    where Xd is the STFT taken with the derivative window (1/s units), so
    the quotient comes out in rad/s. Bins below the silence threshold get
    offset 0.
    """
    if x.bins.shape != x_dweighted.bins.shape:
        raise ValueError(
            f"spectra must have equal length, got {x.bins.shape} and "
            f"{x_dweighted.bins.shape}"
        )
    mag2 = np.abs(x.bins) ** 2
    offsets = np.zeros(len(mag2))
    if mag2.size == 0:
        return offsets
    floor = (SILENCE_REL_THRESHOLD ** 2) * mag2.max()
    live = mag2 > floor
    if floor > 0.0 and live.any():
        quotient = x_dweighted.bins[live] * np.conj(x.bins[live]) / mag2[live]
        offsets[live] = -np.imag(quotient) / (2.0 * np.pi)
    return offsets


def reassign(x: Spectrum, x_dweighted: Spectrum) -> ReassignedSpectrum:
    offsets = reassigned_offsets(x, x_dweighted)
    nyquist = x.bin_freq[-1]
    freqs = np.clip(x.bin_freq + offsets, 0.0, nyquist)
    return ReassignedSpectrum(spectrum=x, offset=offsets, reassigned_freq=freqs)


def _scan_crossings(d: np.ndarray) -> tuple[list[int], list[int]]:
    """Locate region boundaries (rising crossings) and centers (falling).

    Zero-valued bins never carry a sign; when a run of zeros separates
    opposite signs, the first zero bin is taken as the crossing point.
    """
    sign = np.sign(d)
    nonzero = np.flatnonzero(sign)
    boundaries: list[int] = []
    centers: list[int] = []
    for a, b in zip(nonzero[:-1], nonzero[1:]):
        if sign[a] < 0 < sign[b]:  # rising: boundary at first bin after the change
            boundaries.append(int(a) + 1)
        elif sign[a] > 0 > sign[b]:  # falling: center
            if b == a + 1:
                center = a if abs(d[a]) <= abs(d[b]) else b
            else:
                center = a + 1  # first bin of the zero run
            centers.append(int(center))
    return boundaries, centers


def _merge_small_regions(
    regions: list[SpectralRegion], min_fraction: float
) -> list[SpectralRegion]:
    """Fold regions below the mass floor into their heavier neighbour."""
    total = sum(r.mass for r in regions)
    if total <= 0.0 or min_fraction <= 0.0:
        return regions
    floor = min_fraction * total
    regions = list(regions)
    while len(regions) > 1:
        idx = min(range(len(regions)), key=lambda i: regions[i].mass)
        if regions[idx].mass >= floor:
            break
        left = regions[idx - 1] if idx > 0 else None
        right = regions[idx + 1] if idx + 1 < len(regions) else None
        into = left if (right is None or (left is not None and left.mass >= right.mass)) else right
        merged = SpectralRegion(
            start_bin=min(into.start_bin, regions[idx].start_bin),
            end_bin=max(into.end_bin, regions[idx].end_bin),
            center_bin=into.center_bin,
            center_freq=into.center_freq,
            mass=into.mass + regions[idx].mass,
        )
        keep = idx - 1 if into is left else idx + 1
        regions[keep] = merged
        del regions[idx]
    return regions


def segment(
    r: ReassignedSpectrum,
    min_region_fraction: float = DEFAULT_MIN_REGION_FRACTION,
) -> list[SpectralRegion]:
    """Slice a reassigned spectrum into sinusoidal regions.

    Regions tile the whole bin range. Each region's center bin is its
    falling zero crossing of (reassigned - nominal) when it has one, its
    loudest bin otherwise; its mass is the sum of bin magnitudes. Regions
    below min_region_fraction of the total magnitude are merged into a
    neighbour (pass 0 to keep the raw crossings).
    """
    mags = r.spectrum.magnitudes()
    n_bins = len(mags)
    total = float(mags.sum())
    if total <= 0.0:
        return [SpectralRegion(0, n_bins, 0, float(r.reassigned_freq[0]), 0.0)]

    boundaries, centers = _scan_crossings(r.offset)
    edges = [0] + boundaries + [n_bins]
    cum = np.concatenate([[0.0], np.cumsum(mags)])

    regions: list[SpectralRegion] = []
    center_iter = iter(centers)
    pending = next(center_iter, None)
    for start, end in zip(edges[:-1], edges[1:]):
        center = None
        while pending is not None and pending < end:
            if pending >= start and center is None:
                center = pending
            pending = next(center_iter, None)
        if center is None:
            center = start + int(np.argmax(mags[start:end]))
        regions.append(
            SpectralRegion(
                start_bin=start,
                end_bin=end,
                center_bin=center,
                center_freq=float(r.reassigned_freq[center]),
                mass=float(cum[end] - cum[start]),
            )
        )
    return _merge_small_regions(regions, min_region_fraction)
