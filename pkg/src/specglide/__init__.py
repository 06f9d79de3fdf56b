"""specglide: spectral portamento between two audio streams.

Each analysis window, the short-time spectra of both inputs are sliced
into sinusoidal regions (via frequency reassignment), the region masses
are matched by a 1-D optimal transport plan, and every matched mass is
placed at a frequency that slides between its two endpoints as the
interpolation parameter k moves from 0 to 1.
"""

__version__ = "0.1.0"

from .engine import Engine, EngineFault, InterpolationEnvelope, analyze_stream, render
from .interpolate import PlacedSpectrum, Placement, displaced_frequency, place
from .phase import PhaseState, accumulate, lock_region_phases, wrap_phase
from .reassign import (
    ReassignedSpectrum,
    SpectralRegion,
    reassign,
    reassigned_offsets,
    segment,
)
from .stft import (
    AnalysisConfig,
    Frame,
    Spectrum,
    analyze,
    cola_constant,
    cola_profile,
    make_derivative_window,
    make_hann_window,
    make_time_weighted_window,
    synthesize,
)
from .transport import (
    MassPoint,
    PlanEntry,
    TransportPlan,
    mass_points,
    normalize,
    optimal_plan,
    plan_cost,
)

__all__ = [
    "AnalysisConfig",
    "Engine",
    "EngineFault",
    "Frame",
    "InterpolationEnvelope",
    "MassPoint",
    "PhaseState",
    "PlacedSpectrum",
    "Placement",
    "PlanEntry",
    "ReassignedSpectrum",
    "SpectralRegion",
    "Spectrum",
    "TransportPlan",
    "accumulate",
    "analyze",
    "analyze_stream",
    "cola_constant",
    "cola_profile",
    "displaced_frequency",
    "lock_region_phases",
    "make_derivative_window",
    "make_hann_window",
    "make_time_weighted_window",
    "mass_points",
    "normalize",
    "optimal_plan",
    "place",
    "plan_cost",
    "reassign",
    "reassigned_offsets",
    "render",
    "segment",
    "synthesize",
    "wrap_phase",
]
