"""Reassigned-frequency offsets and zero-crossing segmentation."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specglide import Spectrum, reassign, reassigned_offsets, segment

from util import A4, A5, CS5, E5, DEFAULT, chord, reassigned_frame, segmented_frame, tone


class TestReassignedOffsets:
    def test_pure_tone_plateau_around_peak(self):
        spec, rs = reassigned_frame(tone(440.0, 2206, phase=0.4))
        peak = int(np.argmax(np.abs(spec.bins)))
        for b in range(peak - 2, peak + 3):
            assert rs.reassigned_freq[b] == pytest.approx(440.0, abs=0.5)

    def test_zero_spectrum_offsets_are_zero(self):
        _, rs = reassigned_frame(np.zeros(4000))
        assert np.all(rs.offset == 0)

    def test_two_tone_plateaus(self):
        spec, rs = reassigned_frame(tone(440.0, 2206) + tone(880.0, 2206, phase=1.1))
        mags = np.abs(spec.bins)
        for f in (440.0, 880.0):
            nearest = int(round(f / DEFAULT.bin_spacing))
            window = slice(nearest - 3, nearest + 4)
            peak = nearest - 3 + int(np.argmax(mags[window]))
            for b in range(peak - 2, peak + 3):
                assert rs.reassigned_freq[b] == pytest.approx(f, abs=0.5)

    def test_mismatched_lengths_rejected(self):
        a = Spectrum(bins=np.zeros(10, dtype=complex), bin_freq=np.arange(10.0))
        b = Spectrum(bins=np.zeros(9, dtype=complex), bin_freq=np.arange(9.0))
        with pytest.raises(ValueError):
            reassigned_offsets(a, b)

    def test_reassigned_freq_clamped_to_band(self):
        _, rs = reassigned_frame(tone(80.0, 2206) + 0.2 * tone(21900.0, 2206))
        assert np.all(rs.reassigned_freq >= 0.0)
        assert np.all(rs.reassigned_freq <= DEFAULT.nyquist)


class TestSegmentation:
    def test_chord_gives_exactly_four_regions(self):
        spec, _, regions = segmented_frame(chord([A4, CS5, E5, A5], 2206))
        assert len(regions) == 4
        for region, expected in zip(regions, (A4, CS5, E5, A5)):
            assert region.center_freq == pytest.approx(expected, abs=1.0)
        total = np.abs(spec.bins).sum()
        assert sum(r.mass for r in regions) == pytest.approx(total, rel=1e-9)

    def test_silent_spectrum_single_zero_region(self):
        _, _, regions = segmented_frame(np.zeros(4000))
        assert len(regions) == 1
        assert regions[0].start_bin == 0
        assert regions[0].end_bin == DEFAULT.bins
        assert regions[0].mass == 0.0

    def test_single_tone_one_dominant_region(self):
        spec, _, regions = segmented_frame(tone(440.0, 2206))
        total = np.abs(spec.bins).sum()
        assert max(r.mass for r in regions) >= 0.99 * total
        assert len(regions) == 1

    @pytest.mark.parametrize("min_fraction", [0.0, 0.01])
    def test_regions_tile_the_bin_range(self, min_fraction):
        spec, _, regions = segmented_frame(
            chord([300.0, 1234.5, 2500.0], 2206), min_region_fraction=min_fraction
        )
        assert regions[0].start_bin == 0
        assert regions[-1].end_bin == DEFAULT.bins
        for left, right in zip(regions[:-1], regions[1:]):
            assert left.end_bin == right.start_bin
        for r in regions:
            assert r.start_bin <= r.center_bin < r.end_bin
        total = np.abs(spec.bins).sum()
        assert sum(r.mass for r in regions) == pytest.approx(total, rel=1e-9)

    @settings(max_examples=20, deadline=None)
    @given(freq=st.floats(min_value=100.0, max_value=10000.0))
    def test_reassignment_beats_the_bin_grid(self, freq):
        _, _, regions = segmented_frame(tone(freq, 2206, phase=0.123))
        best = min(abs(r.center_freq - freq) for r in regions)
        assert best < 0.5

    @settings(max_examples=15, deadline=None)
    @given(scale=st.floats(min_value=1e-6, max_value=1e6))
    def test_scale_invariance(self, scale):
        base = chord([A4, CS5, E5, A5], 2206)
        _, _, ref = segmented_frame(base)
        _, _, scaled = segmented_frame(base * scale)
        assert [(r.start_bin, r.end_bin, r.center_bin) for r in ref] == [
            (r.start_bin, r.end_bin, r.center_bin) for r in scaled
        ]

    def test_region_center_freq_is_reassigned_freq_at_center(self):
        _, rs, regions = segmented_frame(chord([A4, A5], 2206))
        for r in regions:
            assert r.center_freq == pytest.approx(rs.reassigned_freq[r.center_bin])


class TestMassFloorMerging:
    def test_raw_crossings_preserved_with_zero_floor(self):
        # The off-bin tone produces interference dust around the main lobe;
        # the raw scan must keep it, the default floor must fold it away.
        _, _, raw = segmented_frame(tone(345.17, 2206), min_region_fraction=0.0)
        _, _, merged = segmented_frame(tone(345.17, 2206))
        assert len(merged) <= len(raw)
        assert len(merged) == 1

    def test_merged_masses_conserved(self):
        spec, _, merged = segmented_frame(chord([A4, CS5, E5, A5], 2206))
        total = np.abs(spec.bins).sum()
        assert sum(r.mass for r in merged) == pytest.approx(total, rel=1e-12)
