"""Spectral estimator sanity, power conservation, and OOB metrics."""

import numpy as np
import pytest

from croqam.psd import (
    PsdEstimate,
    active_subcarrier_set,
    allocation_band_edges,
    estimate_psd,
    gfdm_block_stream,
    integrated_power,
    oob_ratio,
)
from croqam.ser import build_reference_modem


@pytest.fixture(scope="module")
def oqam_modem():
    return build_reference_modem("oqam-mf")


@pytest.fixture(scope="module")
def croqam_modem():
    return build_reference_modem("croqam-mf")


class TestEstimatePsd:
    def test_tone_peaks_at_its_bin(self):
        n = 64 * 100
        tone = np.exp(2j * np.pi * 3.0 * np.arange(n) / 64.0)
        est = estimate_psd(tone, segment_len=64, sample_rate=64.0)
        assert est.freq_axis[np.argmax(est.psd_db)] == pytest.approx(3.0)
        assert est.psd_db.max() == 0.0
        assert 0.0 - np.median(est.psd_db) > 40.0

    def test_white_noise_is_flat(self):
        rng = np.random.default_rng(60)
        n = 128 * 201 + 128
        x = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)
        est = estimate_psd(x, segment_len=256)
        assert est.psd_db.max() - est.psd_db.min() < 3.0

    def test_integrated_power_matches_tone(self):
        tone = np.exp(2j * np.pi * 5.0 * np.arange(6400) / 64.0)
        est = estimate_psd(tone, segment_len=256, sample_rate=64.0)
        assert integrated_power(est) == pytest.approx(1.0, rel=1e-6)

    def test_integrated_power_matches_noise(self):
        rng = np.random.default_rng(61)
        x = np.sqrt(2.0) * (
            rng.standard_normal(40000) + 1j * rng.standard_normal(40000)
        ) / np.sqrt(2)
        est = estimate_psd(x, segment_len=200, sample_rate=7.5)
        assert integrated_power(est) == pytest.approx(np.mean(np.abs(x) ** 2), rel=0.01)

    def test_accepts_factory(self):
        est = estimate_psd(lambda: np.ones(512) + 0j, segment_len=128)
        assert isinstance(est, PsdEstimate)

    def test_axis_is_centered(self):
        est = estimate_psd(np.ones(512) + 0j, segment_len=128, sample_rate=64.0)
        assert len(est.freq_axis) == 128
        assert est.freq_axis[0] == -32.0
        np.testing.assert_allclose(np.diff(est.freq_axis), 0.5)

    def test_too_short_rejected(self):
        with pytest.raises(ValueError):
            estimate_psd(np.ones(100), segment_len=128)

    def test_silent_signal_rejected(self):
        with pytest.raises(ValueError):
            estimate_psd(np.zeros(512), segment_len=128)


class TestOobRatio:
    def flat(self):
        rng = np.random.default_rng(62)
        x = rng.standard_normal(60000) + 1j * rng.standard_normal(60000)
        return estimate_psd(x, segment_len=250, sample_rate=10.0)

    def test_white_noise_near_zero(self):
        assert abs(oob_ratio(self.flat(), (-2.0, 2.0))) < 0.5

    def test_tone_strongly_positive(self):
        tone = np.exp(2j * np.pi * 0.5 * np.arange(40000) / 10.0)
        est = estimate_psd(tone, segment_len=250, sample_rate=10.0)
        assert oob_ratio(est, (-2.0, 2.0)) > 20.0

    def test_all_in_band_rejected(self):
        with pytest.raises(ValueError):
            oob_ratio(self.flat(), (-5.0, 5.0))

    def test_edges_outside_axis_rejected(self):
        with pytest.raises(ValueError):
            oob_ratio(self.flat(), (-20.0, 2.0))

    def test_exclusion_shrinks_oob_region(self):
        est = self.flat()
        with pytest.raises(ValueError):
            oob_ratio(est, (-4.0, 4.0), exclusion=2.0)


class TestAllocation:
    def test_active_set_with_eight_guards(self):
        active = active_subcarrier_set(64, 8)
        assert set(active) == set(range(0, 24)) | set(range(40, 64))
        assert len(active) == 48

    def test_no_guards_keeps_all(self):
        assert set(active_subcarrier_set(64, 0)) == set(range(64))

    def test_band_edges(self):
        assert allocation_band_edges(64, 8) == (-24.5, 23.5)

    def test_too_many_guards_rejected(self):
        with pytest.raises(ValueError):
            active_subcarrier_set(64, 32)


class TestBlockStream:
    def test_length_and_determinism(self, oqam_modem):
        a = gfdm_block_stream(oqam_modem, 3, np.random.default_rng(63))
        b = gfdm_block_stream(oqam_modem, 3, np.random.default_rng(63))
        assert len(a) == 3 * 448
        np.testing.assert_array_equal(a, b)

    def test_empty_active_set_gives_silence(self, oqam_modem):
        stream = gfdm_block_stream(
            oqam_modem, 2, np.random.default_rng(64), active_subcarriers=()
        )
        assert np.abs(stream).max() == 0.0

    def test_out_of_range_subcarrier_rejected(self, oqam_modem):
        with pytest.raises(ValueError):
            gfdm_block_stream(
                oqam_modem, 1, np.random.default_rng(0), active_subcarriers=(64,)
            )

    def test_guarded_band_is_suppressed(self, oqam_modem):
        """Deactivated edge subcarriers carve a visible notch: power beyond
        the allocation sits well below the in-band level."""
        stream = gfdm_block_stream(
            oqam_modem,
            40,
            np.random.default_rng(65),
            active_subcarriers=active_subcarrier_set(64, 8),
            guard_subsymbols=1,
        )
        est = estimate_psd(stream, segment_len=448, sample_rate=64.0)
        ratio = oob_ratio(est, allocation_band_edges(64, 8), exclusion=2.0)
        assert ratio > 10.0

    def test_conjugate_root_lowers_oob_floor(self, oqam_modem, croqam_modem):
        """Reduced-size preview of the acceptance comparison."""
        kwargs = dict(
            active_subcarriers=active_subcarrier_set(64, 8), guard_subsymbols=1
        )
        ratios = {}
        for name, modem in (("oqam", oqam_modem), ("croqam", croqam_modem)):
            stream = gfdm_block_stream(modem, 60, np.random.default_rng(66), **kwargs)
            est = estimate_psd(stream, segment_len=448, sample_rate=64.0)
            ratios[name] = oob_ratio(est, allocation_band_edges(64, 8), exclusion=2.0)
        assert ratios["croqam"] > ratios["oqam"] + 3.0
