import numpy as np
import pytest

from classifier_distance_probes.imaging import Image
from classifier_distance_probes.numerics import RngStream
from classifier_distance_probes.spectral import (FilterSpec, make_mask, filter_batch, apply_filter, band_energy,
                                                 parse_filter, radius, max_radius)
from classifier_distance_probes.shared.errors import DimensionError, SpecError


class TestMasks:

    @pytest.mark.parametrize('threshold', range(9))
    def test_rectangular_lowpass_count(self, threshold):
        mask = make_mask(FilterSpec('lowpass', threshold=threshold), 64, 64)
        assert mask.passed == (2 * threshold + 1) ** 2

    def test_low_and_high_are_complementary(self):
        for shape in ('rectangular', 'circular'):
            low = make_mask(FilterSpec('lowpass', shape, threshold=10), 32, 32)
            high = make_mask(FilterSpec('highpass', shape, threshold=10), 32, 32)
            assert np.array_equal(low.values + high.values, np.ones((32, 32)))

    def test_bandpass_from_zero_equals_lowpass(self):
        band = make_mask(FilterSpec('bandpass', band_low=0, band_high=5), 16, 16)
        low = make_mask(FilterSpec('lowpass', threshold=5), 16, 16)
        assert np.array_equal(band.values, low.values)

    def test_masks_are_cached_read_only(self):
        first = make_mask(FilterSpec('lowpass', threshold=3), 16, 16)
        second = make_mask(FilterSpec('lowpass', threshold=3), 16, 16)
        assert first.values is second.values
        assert not first.values.flags.writeable

    def test_circular_all_pass_at_ceiled_max_radius(self):
        limit = int(np.ceil(max_radius(8, 8, 'circular')))
        assert make_mask(FilterSpec('lowpass', 'circular', threshold=limit), 8, 8).passed == 64

    def test_threshold_beyond_grid(self):
        with pytest.raises(SpecError) as exc_info:
            make_mask(FilterSpec('lowpass', threshold=9), 16, 16)
        assert 'exceeds' in str(exc_info.value)

    def test_radius_centre(self):
        assert radius(4, 4, 8, 8) == 0.0
        assert radius(0, 1, 8, 8) == 4.0
        assert radius(1, 1, 8, 8, 'circular') == pytest.approx(np.hypot(3, 3))

    def test_invalid_specs(self):
        with pytest.raises(SpecError):
            FilterSpec('notch', threshold=1)
        with pytest.raises(SpecError):
            FilterSpec('bandpass', band_low=5, band_high=2)
        with pytest.raises(SpecError):
            FilterSpec('lowpass')


class TestFiltering:

    def setup_class(self):
        self.batch = RngStream(21).random((4, 3, 16, 16))

    def test_linearity(self):
        spec = FilterSpec('bandpass', band_low=2, band_high=5)
        a, b = self.batch[0], self.batch[1]
        combined = filter_batch(2.0 * a - 3.0 * b, spec)
        assert np.max(np.abs(combined - (2.0 * filter_batch(a, spec) - 3.0 * filter_batch(b, spec)))) < 1e-9

    def test_idempotence(self):
        spec = FilterSpec('highpass', 'circular', threshold=4)
        once = filter_batch(self.batch, spec)
        assert np.max(np.abs(filter_batch(once, spec) - once)) < 1e-9

    def test_low_plus_high_reconstructs(self):
        low = filter_batch(self.batch, FilterSpec('lowpass', threshold=3))
        high = filter_batch(self.batch, FilterSpec('highpass', threshold=3))
        assert np.max(np.abs(low + high - self.batch)) < 1e-9

    def test_all_pass_reproduces_input(self):
        image = Image(self.batch[0])
        filtered = apply_filter(image, FilterSpec('lowpass', threshold=8))
        assert not filtered.clamped
        assert np.max(np.abs(filtered.pixels - image.pixels)) < 1e-12

    def test_lowpass_zero_keeps_the_mean(self):
        filtered = filter_batch(self.batch[0], FilterSpec('lowpass', threshold=0))
        means = self.batch[0].mean(axis=(1, 2))
        assert np.allclose(filtered, means[:, None, None])

    def test_energy_ordering(self):
        image = Image(self.batch[2])
        energies = [band_energy(image, FilterSpec('lowpass', threshold=t)) for t in (1, 3, 8)]
        assert energies[0] <= energies[1] <= energies[2]
        assert energies[2] == pytest.approx(float(np.sum(self.batch[2] ** 2)))

    def test_non_power_of_two_image(self):
        with pytest.raises(DimensionError):
            apply_filter(Image(np.zeros((1, 12, 16))), FilterSpec('lowpass', threshold=2))


class TestFilterGrammar:

    def test_absolute_filters(self):
        assert parse_filter('low:10') == FilterSpec('lowpass', threshold=10)
        assert parse_filter('high:30', 'circle') == FilterSpec('highpass', 'circular', threshold=30)
        assert parse_filter('band:10-30') == FilterSpec('bandpass', band_low=10, band_high=30)

    def test_fractional_filters_resolve(self):
        spec = parse_filter('low:frac:0.04')
        assert spec.is_fractional
        assert spec.describe() == 'low:frac:0.04@rect'
        assert spec.resolve(256, 256).threshold == 5
        band = parse_filter('band:frac:0.1-0.2').resolve(64, 64)
        assert (band.band_low, band.band_high) == (3, 6)

    def test_describe(self):
        assert parse_filter('band:8-12', 'circle').describe() == 'band:8-12@circle'

    @pytest.mark.parametrize('text', ['low', 'low:', 'mid:3', 'low:3-4', 'band:3', 'low:2.5'])
    def test_malformed(self, text):
        with pytest.raises(SpecError) as exc_info:
            parse_filter(text)
        assert text in str(exc_info.value)

    def test_unknown_shape(self):
        with pytest.raises(SpecError):
            parse_filter('low:3', 'hexagon')
