"""Report figures for the analysis CLI.

Figures render headlessly (Agg) straight to files next to the CSV output:
a component-track scatter across hops, and a single-hop view of the
reassigned-frequency offsets with the detected region boundaries.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .reassign import ReassignedSpectrum, SpectralRegion


def save_region_tracks(
    rows: list[tuple[int, float, int, SpectralRegion]],
    path: str,
    title: str = "component tracks",
) -> None:
    """Scatter of region center frequencies over time, dot area ~ mass.

    rows: (hop_index, center_time_seconds, region_index, region) tuples
    as produced for the analysis CSV.
    """
    fig, ax = plt.subplots(figsize=(8, 4.5))
    if rows:
        times = np.array([t for _, t, _, _ in rows])
        freqs = np.array([r.center_freq for _, _, _, r in rows])
        masses = np.array([r.mass for _, _, _, r in rows])
        top = masses.max() if masses.max() > 0 else 1.0
        ax.scatter(times, freqs, s=4 + 60 * masses / top, alpha=0.6, linewidths=0)
    ax.set_xlabel("time (s)")
    ax.set_ylabel("region center frequency (Hz)")
    ax.set_title(title)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_segmentation_view(
    reassigned: ReassignedSpectrum,
    regions: list[SpectralRegion],
    path: str,
    max_freq: float | None = None,
) -> None:
    """One hop's magnitudes and reassigned frequencies with region marks."""
    bin_freq = reassigned.spectrum.bin_freq
    mags = reassigned.spectrum.magnitudes()
    if max_freq is None:
        loud = np.flatnonzero(mags > 1e-4 * max(mags.max(), 1e-30))
        max_freq = bin_freq[min(int(loud[-1]) + 50, len(bin_freq) - 1)] if loud.size else bin_freq[-1]
    view = bin_freq <= max_freq

    fig, (ax_mag, ax_freq) = plt.subplots(2, 1, sharex=True, figsize=(8, 6))
    ax_mag.plot(bin_freq[view], mags[view], lw=0.8)
    ax_mag.set_ylabel("magnitude")
    ax_freq.plot(bin_freq[view], reassigned.reassigned_freq[view], lw=0.8, label="reassigned")
    ax_freq.plot(bin_freq[view], bin_freq[view], "--", lw=0.8, label="nominal")
    for region in regions:
        edge = bin_freq[region.start_bin]
        if edge <= max_freq and region.start_bin > 0:
            for ax in (ax_mag, ax_freq):
                ax.axvline(edge, color="gray", lw=0.6, alpha=0.6)
        if region.center_freq <= max_freq and region.mass > 0:
            ax_freq.plot([bin_freq[region.center_bin]], [region.center_freq], "o", ms=4)
    ax_freq.set_xlabel("bin frequency (Hz)")
    ax_freq.set_ylabel("frequency (Hz)")
    ax_freq.legend(loc="upper left", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
