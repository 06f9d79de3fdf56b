"""Acceptance suite: one test per release criterion, at fixed tolerances.

Run with `pytest tests/test_acceptance.py -v -s` to see one PASS/FAIL
line per criterion. Perceptual listening judgments are out of scope;
each criterion here is the quantitative proxy measured on rendered audio
or solver output.
"""
import time

import numpy as np
import pytest

from specglide import (
    AnalysisConfig,
    Engine,
    InterpolationEnvelope,
    MassPoint,
    optimal_plan,
    plan_cost,
    render,
)
from specglide.live import LiveEngine

from oracles import lp_min_transport_cost, random_transport_instance
from util import (
    A4,
    A5,
    CS5,
    E5,
    DEFAULT,
    chord,
    correlation,
    dominant_track,
    harmonic_tone,
    magnitude_spectrogram,
    reassigned_frame,
    saw,
    segmented_frame,
    tone,
)

BIN_HZ = DEFAULT.bin_spacing  # 5.3833 Hz


def report(name: str, ok: bool, detail: str) -> None:
    print(f"\n[ACCEPTANCE] {name}: {'PASS' if ok else 'FAIL'} — {detail}", flush=True)
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="module")
def sweep():
    """A4 -> C#5 over a 2 s linear envelope, 2.2 s of audio at 0.5 amp."""
    n = int(2.2 * 44100)
    a = tone(A4, n, amp=0.5)
    b = tone(CS5, n, amp=0.5)
    envelope = InterpolationEnvelope([(0.0, 0.0), (2.0, 1.0)])
    out = render(a, b, envelope)
    return a, b, envelope, out


def test_sine_sweep_fidelity(sweep):
    """Dominant reassigned frequency within one bin of (1-k)*440 + k*554.37
    at every hop, and per-hop RMS within 1.5 dB of the inputs'."""
    a, _, envelope, out = sweep
    track = dominant_track(out)
    worst_hz = 0.0
    for center_time, freq, _ in track:
        k = envelope.value(center_time)
        target = (1.0 - k) * A4 + k * CS5
        worst_hz = max(worst_hz, abs(freq - target))

    in_rms = float(np.sqrt(np.mean(a**2)))
    hop = DEFAULT.hop_length
    worst_db = 0.0
    for i in range(len(out) // hop):
        block = out[i * hop : (i + 1) * hop]
        level = 20.0 * np.log10(np.sqrt(np.mean(block**2)) / in_rms)
        worst_db = max(worst_db, abs(level))

    ok = worst_hz <= 5.4 and worst_db <= 1.5
    report(
        "sine-sweep fidelity",
        ok,
        f"worst tracking error {worst_hz:.2f} Hz (limit 5.4), "
        f"worst RMS deviation {worst_db:.2f} dB (limit 1.5) over {len(track)} hops",
    )


def test_greedy_plan_matches_lp_oracle():
    """1000 random instances (<= 10 points/side): greedy cost equals the
    LP optimum within 1e-9 relative; marginals within 1e-9; monotone."""
    rng = np.random.default_rng(77)
    worst_gap = 0.0
    worst_marginal = 0.0
    for _ in range(1000):
        xm, ym, xf, yf = random_transport_instance(rng, max_points=10)
        x = [MassPoint(f, m, i) for i, (f, m) in enumerate(zip(xf, xm))]
        y = [MassPoint(f, m, i) for i, (f, m) in enumerate(zip(yf, ym))]
        plan = optimal_plan(x, y)
        greedy = plan_cost(plan, x, y)
        oracle = lp_min_transport_cost(xm, ym, xf, yf)
        worst_gap = max(worst_gap, abs(greedy - oracle) / max(abs(oracle), 1e-30))
        worst_marginal = max(
            worst_marginal,
            np.abs(plan.source_marginals(len(x)) - xm).max(),
            np.abs(plan.target_marginals(len(y)) - ym).max(),
        )
        for earlier, later in zip(plan.entries[:-1], plan.entries[1:]):
            assert later.source >= earlier.source and later.target >= earlier.target
        assert len(plan.entries) <= len(x) + len(y) - 1
    ok = worst_gap <= 1e-9 and worst_marginal <= 1e-9
    report(
        "greedy vs LP optimality",
        ok,
        f"1000 instances: worst relative cost gap {worst_gap:.2e} (limit 1e-9), "
        f"worst marginal error {worst_marginal:.2e} (limit 1e-9), all plans monotone",
    )


def test_chord_segmentation():
    """The four-note chord segments into exactly 4 regions centered within
    1 Hz of equal temperament, conserving total magnitude to 1e-9."""
    expected = (A4, CS5, E5, A5)
    spec, _, regions = segmented_frame(chord(expected, 2206, amp=0.25))
    total = float(np.abs(spec.bins).sum())
    mass_err = abs(sum(r.mass for r in regions) - total) / total
    center_err = (
        max(abs(r.center_freq - f) for r, f in zip(regions, expected))
        if len(regions) == 4
        else float("inf")
    )
    ok = len(regions) == 4 and center_err <= 1.0 and mass_err <= 1e-9
    report(
        "chord segmentation",
        ok,
        f"{len(regions)} regions (want 4), worst center error {center_err:.3f} Hz "
        f"(limit 1.0), mass error {mass_err:.1e} (limit 1e-9)",
    )


def test_endpoint_identity():
    """k = 0 render of steady harmonic material: per-hop magnitude
    spectrogram correlation with the input > 0.999."""
    n = int(1.5 * 44100)
    a = harmonic_tone(220.0, n, n_harmonics=5)
    b = harmonic_tone(331.0, n, n_harmonics=4)
    out = render(a, b, InterpolationEnvelope.constant(0.0))
    worst = 1.0
    for in_spec, out_spec in zip(magnitude_spectrogram(a), magnitude_spectrogram(out)):
        worst = min(worst, correlation(in_spec, out_spec))
    ok = worst > 0.999
    report(
        "endpoint identity",
        ok,
        f"worst per-hop spectrogram correlation {worst:.6f} (limit 0.999)",
    )


def test_stair_stepping_bound(sweep):
    """Per-hop dominant-frequency jumps never exceed the commanded change
    by more than one bin spacing (~5.4 Hz)."""
    _, _, envelope, out = sweep
    track = dominant_track(out)
    worst = 0.0
    prev = None
    for center_time, freq, _ in track:
        k = envelope.value(center_time)
        commanded = (1.0 - k) * A4 + k * CS5
        if prev is not None:
            prev_freq, prev_cmd = prev
            worst = max(worst, abs((freq - prev_freq) - (commanded - prev_cmd)))
        prev = (freq, commanded)
    ok = worst <= 5.4
    report(
        "stair-stepping bound",
        ok,
        f"worst per-hop jump beyond commanded {worst:.2f} Hz (limit 5.4)",
    )


def test_phase_coherence():
    """Steady 440 Hz passthrough: inter-hop phase advance at the peak bin
    within 0.05 rad of 2*pi*f*delta."""
    n = 44100
    a = tone(A4, n, amp=0.5)
    out = render(a, tone(CS5, n, amp=0.5), InterpolationEnvelope.constant(0.0))
    peak = round(A4 / BIN_HZ)
    phases = []
    hop, length = DEFAULT.hop_length, DEFAULT.window_length
    for t in range((len(out) - length) // hop + 1):
        spec, _ = reassigned_frame(out, start=t * hop)
        phases.append(np.angle(spec.bins[peak]))
    expected = 2.0 * np.pi * A4 * DEFAULT.hop_duration
    errors = np.abs(np.angle(np.exp(1j * (np.diff(phases) - expected))))
    worst = float(errors.max())
    ok = worst < 0.05
    report(
        "phase coherence",
        ok,
        f"worst per-hop phase advance error {worst:.4f} rad (limit 0.05) "
        f"over {len(errors)} hops",
    )


def test_real_time_budget():
    """Mean hop compute below the 25 ms hop duration, and the paced live
    loop sustains the 40 hop/s cadence."""
    engine = Engine()
    hop = DEFAULT.hop_length
    rng = np.random.default_rng(3)
    blocks_a = tone(A4, hop * 90, amp=0.5) + 0.01 * rng.standard_normal(hop * 90)
    blocks_b = saw(300.0, hop * 90, amp=0.4)
    for t in range(5):  # warm-up: FFT plan caches, allocator
        engine.process_hop(blocks_a[t * hop : (t + 1) * hop],
                           blocks_b[t * hop : (t + 1) * hop], 0.3)
    start = time.perf_counter()
    n_timed = 80
    for t in range(5, 5 + n_timed):
        k = (t % 40) / 40.0
        engine.process_hop(blocks_a[t * hop : (t + 1) * hop],
                           blocks_b[t * hop : (t + 1) * hop], k)
    mean_ms = (time.perf_counter() - start) / n_timed * 1000.0

    live = LiveEngine(tone(A4, 44100, amp=0.5), saw(300.0, 44100, amp=0.4))
    live.start()
    time.sleep(1.0)
    live.shutdown()
    hops_per_second = live.status().hop / 1.0

    ok = mean_ms < 25.0 and hops_per_second >= 30
    report(
        "real-time budget",
        ok,
        f"mean hop compute {mean_ms:.2f} ms (limit 25), paced loop ran "
        f"{hops_per_second:.0f} hops in 1 s (cadence 40/s)",
    )


def test_volume_dip_artifact_reproduces():
    """Documented artifact: morphing a sine toward a saw dips in RMS for
    small k > 0, because the single peak splits into interfering copies.
    The dip is expected behavior, not a defect; this test pins it down."""
    n = int(0.8 * 44100)
    a = tone(A4, n, amp=0.5)
    b = saw(A4, n, amp=0.5)

    def steady_rms(k: float) -> float:
        out = render(a, b, InterpolationEnvelope.constant(k))
        inner = out[4 * DEFAULT.hop_length : -4 * DEFAULT.hop_length]
        return float(np.sqrt(np.mean(inner**2)))

    base = steady_rms(0.0)
    dips = {k: 20.0 * np.log10(steady_rms(k) / base) for k in (0.02, 0.05, 0.08, 0.12)}
    deepest = min(dips.values())
    ok = deepest <= -0.5
    report(
        "volume-dip artifact (sine->saw)",
        ok,
        "RMS vs k=0: "
        + ", ".join(f"k={k}: {v:+.2f} dB" for k, v in dips.items())
        + f" — deepest {deepest:.2f} dB (must dip at least 0.5 dB)",
    )
