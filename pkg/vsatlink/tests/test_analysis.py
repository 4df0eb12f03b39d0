import numpy as np
from django.test import SimpleTestCase
from scipy.special import erfc

from vsatlink.analysis import (
    constellation_snapshot,
    estimate_delay_bits,
    estimate_psd,
    measure_ber,
    rotation_averaged_ber,
    rotation_oracle_ber,
    theoretical_qam_ber,
)
from vsatlink.exceptions import InsufficientDataError, ParameterError
from vsatlink.frames import BitFrame, ComplexFrame
from vsatlink.modem import ModemConfig, generate_bits, qam_modulate, tx_shape

FS = 50000.0


def q_function(x):
    return 0.5 * erfc(x / np.sqrt(2))


def exact_16qam_ber(es_n0_db):
    a = np.sqrt(10 ** (es_n0_db / 10) / 5)
    return (3 * q_function(a) + 2 * q_function(3 * a) - q_function(5 * a)) / 4


def bin_at(spectrum, freq_hz):
    return spectrum.psd_w_per_hz[np.argmin(np.abs(spectrum.frequencies_hz - freq_hz))]


class MeasureBerTests(SimpleTestCase):
    def test_identical_streams(self):
        bits = generate_bits(1000, 0.5, seed=1)
        report = measure_ber(bits, bits, 0)
        self.assertEqual(report.bit_errors, 0)
        self.assertEqual(report.bits_compared, 1000)
        self.assertEqual(report.ber, 0.0)

    def test_counts_flipped_bits(self):
        bits = generate_bits(1000, 0.5, seed=2)
        flipped = bits.bits.copy()
        flipped[[3, 500, 999]] ^= 1
        report = measure_ber(bits, BitFrame(flipped), 0)
        self.assertEqual(report.bit_errors, 3)
        self.assertAlmostEqual(report.ber, 3e-3)

    def test_delayed_stream(self):
        bits = generate_bits(1000, 0.5, seed=3)
        rx = BitFrame(np.r_[np.ones(40, dtype=np.uint8), bits.bits[:960]])
        report = measure_ber(bits, rx, 40)
        self.assertEqual(report.bit_errors, 0)
        self.assertEqual(report.bits_compared, 960)
        self.assertEqual(report.alignment_delay_bits, 40)
        self.assertEqual(report.to_dict()["bits_compared"], 960)

    def test_swapping_streams_gives_the_same_report(self):
        tx = generate_bits(2000, 0.5, seed=9)
        rx = generate_bits(2000, 0.5, seed=10)
        self.assertEqual(measure_ber(tx, rx, 0), measure_ber(rx, tx, 0))
        self.assertGreater(measure_ber(tx, rx, 0).bit_errors, 0)

    def test_invalid_delay(self):
        bits = generate_bits(100, 0.5, seed=4)
        with self.assertRaises(ParameterError):
            measure_ber(bits, bits, -1)
        with self.assertRaises(InsufficientDataError):
            measure_ber(bits, bits, 100)


class EstimateDelayTests(SimpleTestCase):
    def test_finds_known_lag(self):
        bits = generate_bits(5000, 0.5, seed=5)
        prefix = generate_bits(40, 0.5, seed=6).bits
        rx = BitFrame(np.r_[prefix, bits.bits])
        self.assertEqual(estimate_delay_bits(bits, rx, 64), 40)

    def test_zero_lag(self):
        bits = generate_bits(5000, 0.5, seed=7)
        self.assertEqual(estimate_delay_bits(bits, bits, 64), 0)

    def test_too_short(self):
        bits = generate_bits(32, 0.5, seed=8)
        with self.assertRaises(InsufficientDataError):
            estimate_delay_bits(bits, bits, 64)


class EstimatePsdTests(SimpleTestCase):
    def test_white_noise_is_flat_and_keeps_power(self):
        rng = np.random.default_rng(11)
        n = 2 ** 19
        x = ComplexFrame((rng.normal(size=n) + 1j * rng.normal(size=n)) / np.sqrt(2), FS)
        spectrum = estimate_psd(x, segment_len=256)
        self.assertEqual(spectrum.psd_w_per_hz.size, 256)
        self.assertAlmostEqual(spectrum.resolution_bw_hz, FS / 256)
        self.assertAlmostEqual(spectrum.total_power() / x.mean_power(), 1.0, delta=0.01)
        expected = x.mean_power() / FS
        self.assertTrue(np.all(np.abs(spectrum.psd_w_per_hz / expected - 1) < 0.2))

    def test_frequency_axis_is_centred(self):
        x = ComplexFrame(np.ones(4096), FS)
        spectrum = estimate_psd(x, segment_len=1024)
        self.assertEqual(spectrum.frequencies_hz[0], -FS / 2)
        self.assertTrue(np.all(np.diff(spectrum.frequencies_hz) > 0))
        self.assertEqual(spectrum.frequencies_hz[np.argmax(spectrum.psd_w_per_hz)], 0.0)

    def test_tone_peaks_at_its_frequency(self):
        n = np.arange(8192)
        for f0 in (100 * FS / 1024, -200 * FS / 1024):
            with self.subTest(f0=f0):
                spectrum = estimate_psd(ComplexFrame(np.exp(2j * np.pi * f0 * n / FS), FS), segment_len=1024)
                self.assertEqual(spectrum.frequencies_hz[np.argmax(spectrum.psd_w_per_hz)], f0)

    def test_shaped_qam_occupies_the_rrc_band(self):
        cfg = ModemConfig()
        waveform = tx_shape(qam_modulate(generate_bits(400_000, 0.5, seed=12), cfg), cfg)
        spectrum = estimate_psd(waveform, segment_len=1024)
        peak = spectrum.psd_w_per_hz.max()
        self.assertGreater(bin_at(spectrum, 2000.0), peak / 2)
        self.assertLess(bin_at(spectrum, 4200.0), peak / 2)
        # (1 + rolloff) * Rs / 2
        outside = np.abs(spectrum.frequencies_hz) > 3750.0
        self.assertLessEqual(10 * np.log10(spectrum.psd_w_per_hz[outside].mean() / peak), -40.0)

    def test_invalid_arguments(self):
        x = ComplexFrame(np.ones(512), FS)
        with self.assertRaises(ParameterError):
            estimate_psd(x, segment_len=1024)
        with self.assertRaises(ParameterError):
            estimate_psd(x, segment_len=0)
        with self.assertRaises(ParameterError):
            estimate_psd(x, segment_len=256, overlap_fraction=1.0)


class ConstellationSnapshotTests(SimpleTestCase):
    def test_rows(self):
        x = ComplexFrame(np.arange(100) + 1j * np.arange(100), 6250.0)
        rows = constellation_snapshot(x, 10, skip_symbols=20)
        self.assertEqual(rows.shape, (10, 2))
        np.testing.assert_array_equal(rows[0], [20.0, 20.0])

    def test_fewer_symbols_than_requested(self):
        x = ComplexFrame(np.ones(5), 6250.0)
        self.assertEqual(constellation_snapshot(x, 2000).shape, (5, 2))

    def test_negative_counts(self):
        x = ComplexFrame(np.ones(5), 6250.0)
        with self.assertRaises(ParameterError):
            constellation_snapshot(x, -1)


class TheoreticalBerTests(SimpleTestCase):
    def test_matches_exact_gray_16qam(self):
        for es_n0_db in np.arange(10.0, 20.0, 0.5):
            exact = exact_16qam_ber(es_n0_db)
            if exact > 1e-2:
                continue
            with self.subTest(es_n0_db=es_n0_db):
                self.assertAlmostEqual(theoretical_qam_ber(es_n0_db, 16) / exact, 1.0, delta=0.1)

    def test_decreases_with_snr(self):
        curve = theoretical_qam_ber(np.arange(0.0, 20.0, 2.0), 16)
        self.assertTrue(np.all(np.diff(curve) < 0))

    def test_unsupported_size(self):
        with self.assertRaises(ParameterError):
            theoretical_qam_ber(10.0, 8)


class RotationOracleTests(SimpleTestCase):
    def test_small_rotation_is_error_free(self):
        self.assertEqual(rotation_oracle_ber(0.0), 0.0)
        self.assertEqual(rotation_oracle_ber(15.0), 0.0)

    def test_rotation_past_the_outer_boundary(self):
        self.assertAlmostEqual(rotation_oracle_ber(25.0), 0.1875)

    def test_averaged_over_uniform_rotation(self):
        ber = rotation_averaged_ber(steps=720)
        self.assertGreater(ber, 0.35)
        self.assertLess(ber, 0.47)

    def test_invalid_steps(self):
        with self.assertRaises(ParameterError):
            rotation_averaged_ber(steps=0)
