"""Discrete 1-D optimal transport between the region masses of two spectra.

On the real line the squared-distance-optimal plan is monotone: no mass
crosses over any other mass. That makes it solvable by a single greedy
sweep over the two mass lists, in O(|X| + |Y|).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .reassign import SpectralRegion

# Totals below this are treated as silence: no transport is defined
# against the zero measure and the pipeline falls back to a crossfade.
SILENT_TOTAL = 1e-12

_NORMALIZATION_TOL = 1e-6


@dataclass
class MassPoint:
    """One transportable mass: a region's collective magnitude at its center."""

    freq: float   # Hz
    mass: float   # nonnegative
    region_index: int


@dataclass
class PlanEntry:
    source: int
    target: int
    mass: float


@dataclass
class TransportPlan:
    """Sparse monotone assignment of source masses to target masses."""

    entries: list[PlanEntry]

    def source_marginals(self, n_sources: int) -> np.ndarray:
        out = np.zeros(n_sources)
        for e in self.entries:
            out[e.source] += e.mass
        return out

    def target_marginals(self, n_targets: int) -> np.ndarray:
        out = np.zeros(n_targets)
        for e in self.entries:
            out[e.target] += e.mass
        return out


def mass_points(regions: Sequence[SpectralRegion]) -> list[MassPoint]:
    """Region list -> sorted mass points (regions are already in bin order)."""
    return [
        MassPoint(freq=r.center_freq, mass=r.mass, region_index=i)
        for i, r in enumerate(regions)
    ]


def normalize(points: Sequence[MassPoint]) -> tuple[list[MassPoint], float]:
    """Scale masses to unit sum; returns (scaled points, original total).

    A total below SILENT_TOTAL flags silence: the points are returned
    unscaled and the caller must not attempt transport.
    """
    total = 0.0
    for p in points:
        if p.mass < 0:
            raise ValueError(f"negative mass {p.mass} at region {p.region_index}")
        total += p.mass
    if total < SILENT_TOTAL:
        return [MassPoint(p.freq, p.mass, p.region_index) for p in points], total
    scaled = [MassPoint(p.freq, p.mass / total, p.region_index) for p in points]
    return scaled, total


def optimal_plan(x: Sequence[MassPoint], y: Sequence[MassPoint]) -> TransportPlan:
    """Greedy monotone sweep: repeatedly move min(remaining_x, remaining_y)
    from the current source point to the current target point, advancing
    whichever side emptied (both on a tie, which avoids zero-mass entries).

    Points with zero mass receive no entries. Inputs must be unit-sum.
    """
    for name, pts in (("x", x), ("y", y)):
        total = sum(p.mass for p in pts)
        if abs(total - 1.0) > _NORMALIZATION_TOL:
            raise ValueError(f"{name} masses must sum to 1, got {total!r}")

    xs = [(i, p.mass) for i, p in enumerate(x) if p.mass > 0.0]
    ys = [(j, p.mass) for j, p in enumerate(y) if p.mass > 0.0]
    entries: list[PlanEntry] = []
    if not xs or not ys:
        return TransportPlan(entries=entries)

    a = b = 0
    remaining_x = xs[0][1]
    remaining_y = ys[0][1]
    while True:
        moved = min(remaining_x, remaining_y)
        entries.append(PlanEntry(source=xs[a][0], target=ys[b][0], mass=moved))
        remaining_x -= moved
        remaining_y -= moved
        x_empty = remaining_x == 0.0
        y_empty = remaining_y == 0.0
        if x_empty:
            a += 1
            if a >= len(xs):
                break
            remaining_x = xs[a][1]
        if y_empty:
            b += 1
            if b >= len(ys):
                break
            remaining_y = ys[b][1]
    return TransportPlan(entries=entries)


def plan_cost(
    plan: TransportPlan, x: Sequence[MassPoint], y: Sequence[MassPoint]
) -> float:
    """Total squared frequency displacement; its square root is the
    2-Wasserstein distance between the two normalized spectra."""
    return float(
        sum(e.mass * (x[e.source].freq - y[e.target].freq) ** 2 for e in plan.entries)
    )
