"""Output phase assignment across consecutive windows.

Every placed region gets its center phase by accumulating the average of
its current and previous reassigned frequencies over the hop interval;
the rest of the region's bins keep their phase offsets relative to the
center exactly as in the donor profile (region phase locking). Where
placements overlap, the loudest contributor at each bin wins.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .stft import AnalysisConfig


def wrap_phase(x: np.ndarray | float) -> np.ndarray | float:
    """Wrap angles to (-pi, pi]."""
    wrapped = np.mod(x, 2.0 * np.pi)
    if np.isscalar(wrapped) or wrapped.ndim == 0:
        return float(wrapped - 2.0 * np.pi) if wrapped > np.pi else float(wrapped)
    out = np.asarray(wrapped)
    out[out > np.pi] -= 2.0 * np.pi
    return out


@dataclass
class PhaseState:
    """Per-output-bin phase and reassigned-frequency memory between hops."""

    prev_phase: np.ndarray       # radians, in (-pi, pi]
    prev_reassigned: np.ndarray  # Hz, in [0, Nyquist]
    initialized: bool = False

    @classmethod
    def initial(cls, config: AnalysisConfig) -> "PhaseState":
        # Bins that never had a contributor default to zero phase at their
        # nominal frequency.
        return cls(
            prev_phase=np.zeros(config.bins),
            prev_reassigned=np.array(config.bin_frequencies),
            initialized=False,
        )


def accumulate(
    state: PhaseState, current_freq: np.ndarray, delta: float
) -> np.ndarray:
    """Advance the remembered phases by the trapezoid of reassigned frequency.

    phi_t = wrap(phi_{t-1} + 2*pi * (f_t + f_{t-1}) / 2 * delta)

    Returns the accumulated phase for every bin; the pipeline applies it
    at region center bins. Averaging the two frequencies keeps fast
    glides coherent across the hop.
    """
    advance = 2.0 * np.pi * 0.5 * (np.asarray(current_freq) + state.prev_reassigned) * delta
    return wrap_phase(state.prev_phase + advance)


def lock_region_phases(
    center_phase: float, donor_profile: np.ndarray, donor_center_phase: float
) -> np.ndarray:
    """Phases for a whole region keeping donor-relative offsets intact.

    Each bin's phase is the new center phase plus that bin's phase
    distance from the donor's center, so intra-region phase differences
    are preserved exactly (mod 2*pi).
    """
    if len(donor_profile) == 0:
        raise ValueError("donor profile must be non-empty")
    return wrap_phase(center_phase + np.angle(donor_profile) - donor_center_phase)
