import itertools

import numpy as np
from django.test import SimpleTestCase

from vsatlink.exceptions import FramingError, InsufficientDataError, ParameterError
from vsatlink.frames import BitFrame, ComplexFrame
from vsatlink.modem import (
    ModemConfig,
    constellation,
    generate_bits,
    qam_demodulate,
    qam_modulate,
    rrc_taps,
    rx_match,
    tx_shape,
)


def bits_of(text):
    return BitFrame(np.array([int(c) for c in text]))


def cascade_isi(span, rolloff=0.2, sps=8):
    """Largest |response| at nonzero symbol lags of the Tx*Rx cascade, relative to the peak."""
    h = rrc_taps(rolloff, sps, span)
    c = np.convolve(h, h)
    peak = span * sps
    lags = [peak + k * sps for k in range(-span, span + 1) if k]
    return np.max(np.abs(c[lags])) / abs(c[peak])


class ModemConfigTests(SimpleTestCase):
    def test_defaults(self):
        cfg = ModemConfig()
        self.assertEqual(cfg.bits_per_symbol, 4)
        self.assertEqual(cfg.levels_per_axis, 4)
        self.assertEqual(cfg.symbol_rate_hz, 6250.0)
        self.assertEqual(cfg.sample_rate_hz, 50000.0)
        self.assertEqual(cfg.mean_symbol_energy, 10)
        self.assertEqual(cfg.delay_bits, 40)

    def test_rejects_non_square_qam(self):
        for m in (2, 8, 32, 12):
            with self.assertRaises(ParameterError):
                ModemConfig(m_ary=m)

    def test_rejects_bad_filter_parameters(self):
        with self.assertRaises(ParameterError):
            ModemConfig(rolloff=0)
        with self.assertRaises(ParameterError):
            ModemConfig(samples_per_symbol=1)
        with self.assertRaises(ParameterError):
            ModemConfig(filter_span_symbols=9)


class GenerateBitsTests(SimpleTestCase):
    def test_degenerate_probabilities(self):
        self.assertFalse(generate_bits(512, 0.0, seed=7).bits.any())
        self.assertTrue(generate_bits(512, 1.0, seed=7).bits.all())

    def test_fair_source_mean(self):
        bits = generate_bits(10**6, 0.5, seed=42)
        self.assertGreaterEqual(bits.bits.mean(), 0.498)
        self.assertLessEqual(bits.bits.mean(), 0.502)

    def test_deterministic_per_seed(self):
        a = generate_bits(4096, 0.5, seed=3)
        b = generate_bits(4096, 0.5, seed=3)
        c = generate_bits(4096, 0.5, seed=4)
        np.testing.assert_array_equal(a.bits, b.bits)
        self.assertFalse(np.array_equal(a.bits, c.bits))

    def test_invalid_arguments(self):
        with self.assertRaises(ParameterError):
            generate_bits(512, 1.5, seed=0)
        with self.assertRaises(ParameterError):
            generate_bits(0, 0.5, seed=0)


class QamMappingTests(SimpleTestCase):
    cfg = ModemConfig()

    def test_mapping_table(self):
        self.assertEqual(qam_modulate(bits_of("0000"), self.cfg).samples[0], -3 - 3j)
        self.assertEqual(qam_modulate(bits_of("1010"), self.cfg).samples[0], 3 + 3j)
        self.assertEqual(qam_modulate(bits_of("0111"), self.cfg).samples[0], -1 + 1j)

    def test_lattice(self):
        points, _ = constellation(self.cfg)
        self.assertEqual(sorted(set(points.real)), [-3, -1, 1, 3])
        self.assertEqual(sorted(set(points.imag)), [-3, -1, 1, 3])
        self.assertEqual(len(set(points.tolist())), 16)

    def test_mean_energy_is_ten(self):
        points, _ = constellation(self.cfg)
        self.assertAlmostEqual(np.mean(np.abs(points) ** 2), 10.0, places=12)

    def test_gray_neighbours_differ_in_one_bit(self):
        points, labels = constellation(self.cfg)
        for i, j in itertools.combinations(range(16), 2):
            if np.isclose(abs(points[i] - points[j]), self.cfg.min_distance):
                self.assertEqual(np.count_nonzero(labels[i] != labels[j]), 1)

    def test_round_trip_all_patterns(self):
        for pattern in itertools.product("01", repeat=4):
            bits = bits_of("".join(pattern))
            out = qam_demodulate(qam_modulate(bits, self.cfg), self.cfg)
            np.testing.assert_array_equal(out.bits, bits.bits)

    def test_round_trip_random_frame(self):
        bits = generate_bits(4096, 0.5, seed=1)
        out = qam_demodulate(qam_modulate(bits, self.cfg), self.cfg)
        np.testing.assert_array_equal(out.bits, bits.bits)

    def test_framing_error(self):
        with self.assertRaises(FramingError):
            qam_modulate(bits_of("010101"), self.cfg)

    def test_hard_decisions(self):
        rx = ComplexFrame([2.7 + 3.4j, 0j, 100 + 100j, -100 - 100j], self.cfg.symbol_rate_hz)
        decided = qam_demodulate(rx, self.cfg).bits.reshape(-1, 4)
        np.testing.assert_array_equal(decided[0], [1, 0, 1, 0])
        # Ties go to the lower level: (-1, -1).
        np.testing.assert_array_equal(decided[1], [0, 1, 0, 1])
        np.testing.assert_array_equal(decided[2], [1, 0, 1, 0])
        np.testing.assert_array_equal(decided[3], [0, 0, 0, 0])

    def test_64qam_round_trip(self):
        cfg = ModemConfig(m_ary=64)
        bits = generate_bits(6 * 500, 0.5, seed=5)
        out = qam_demodulate(qam_modulate(bits, cfg), cfg)
        np.testing.assert_array_equal(out.bits, bits.bits)


class RrcTapsTests(SimpleTestCase):
    def test_shape(self):
        taps = rrc_taps(0.2, 8, 10)
        self.assertEqual(taps.size, 81)
        np.testing.assert_allclose(taps, taps[::-1], atol=1e-15)
        self.assertAlmostEqual(np.sum(taps ** 2), 1.0, delta=1e-12)
        self.assertEqual(np.argmax(taps), 40)

    def test_singular_points_are_finite(self):
        # rolloff 0.25 at 8 sps puts taps exactly on t = +-T/(4 rolloff)
        taps = rrc_taps(0.25, 8, 10)
        self.assertTrue(np.all(np.isfinite(taps)))
        pole = 40 + 8
        self.assertLess(abs(taps[pole] - (taps[pole - 1] + taps[pole + 1]) / 2), 0.05)

    def test_rejects_invalid(self):
        with self.assertRaises(ParameterError):
            rrc_taps(0.0, 8, 10)
        with self.assertRaises(ParameterError):
            rrc_taps(0.2, 8, 11)

    def test_cascade_is_nearly_nyquist(self):
        self.assertLessEqual(cascade_isi(10), 5e-3)

    def test_cascade_isi_falls_with_span(self):
        self.assertLess(cascade_isi(40) * 4, cascade_isi(10))


class PulseShapingTests(SimpleTestCase):
    cfg = ModemConfig()

    def test_impulse_response(self):
        out = tx_shape(ComplexFrame([1.0], self.cfg.symbol_rate_hz), self.cfg)
        taps = rrc_taps(0.2, 8, 10)
        self.assertEqual(len(out), 8 + 80)
        np.testing.assert_allclose(out.samples[:81], taps, atol=1e-12)
        self.assertEqual(out.sample_rate_hz, 50000.0)

    def test_output_length_keeps_tail(self):
        symbols = qam_modulate(generate_bits(400, 0.5, seed=2), self.cfg)
        out = tx_shape(symbols, self.cfg)
        self.assertEqual(len(out), len(symbols) * 8 + 10 * 8)

    def test_loopback_recovers_symbols(self):
        cfg = ModemConfig(m_ary=4)
        bits = generate_bits(4000, 0.5, seed=9)
        symbols = qam_modulate(bits, cfg)
        recovered = rx_match(tx_shape(symbols, cfg), cfg)
        span = cfg.filter_span_symbols
        self.assertEqual(recovered.sample_rate_hz, cfg.symbol_rate_hz)
        aligned = recovered.samples[span:span + len(symbols)]
        rms = np.sqrt(np.mean(np.abs(aligned - symbols.samples) ** 2))
        self.assertLess(rms, 0.08)
        decided = qam_demodulate(ComplexFrame(aligned, cfg.symbol_rate_hz), cfg)
        np.testing.assert_array_equal(decided.bits, bits.bits)

    def test_dc_gain_is_tap_sum(self):
        out = rx_match(ComplexFrame(np.ones(400), 50000.0), self.cfg)
        taps = rrc_taps(0.2, 8, 10)
        self.assertAlmostEqual(out.samples[10].real, taps.sum(), delta=1e-12)

    def test_first_valid_symbol_index(self):
        symbols = ComplexFrame(np.r_[3 + 3j, np.zeros(30)], self.cfg.symbol_rate_hz)
        out = rx_match(tx_shape(symbols, self.cfg), self.cfg)
        self.assertEqual(np.argmax(np.abs(out.samples)), self.cfg.filter_span_symbols)

    def test_short_input(self):
        with self.assertRaises(InsufficientDataError):
            rx_match(ComplexFrame(np.ones(79), 50000.0), self.cfg)
