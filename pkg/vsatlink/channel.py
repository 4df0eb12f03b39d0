"""RF impairments between the modulator and the receiver front end.

Everything here works on ComplexFrame. Blocks that keep state across frames
(the frequency-ramp sample counter and the noise generator) are classes;
each has a single-frame function next to it.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.constants import Boltzmann

from .exceptions import ParameterError

logger = logging.getLogger(__name__)

PHYSICAL = "physical"
NORMALIZED = "normalized"
MODES = (PHYSICAL, NORMALIZED)


@dataclass(frozen=True)
class SalehParams:
    input_scale_db: float = -16.1821
    amam_alpha: float = 2.1587
    amam_beta: float = 1.1517
    ampm_alpha: float = 4.0033
    ampm_beta: float = 9.1040
    output_scale_db: float = 32.9118
    enabled: bool = True

    def __post_init__(self):
        if not self.amam_beta > 0 or not self.ampm_beta > 0:
            raise ParameterError("Saleh beta coefficients must be positive")

    def am_am(self, r):
        return self.amam_alpha * r / (1 + self.amam_beta * r ** 2)

    def am_pm(self, r):
        """Added phase in radians."""
        return self.ampm_alpha * r ** 2 / (1 + self.ampm_beta * r ** 2)


@dataclass(frozen=True)
class ImpairmentConfig:
    phase_offset_deg: float = 15.0
    freq_offset_hz: float = 2.0
    noise_temperature_k: float = 45.0
    iq_amplitude_imbalance_db: float = 0.0
    iq_phase_imbalance_deg: float = 0.0
    dc_offset_i: float = 0.0
    dc_offset_q: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.noise_temperature_k < 0:
            raise ParameterError("noise temperature cannot be negative")


@dataclass(frozen=True)
class LinkGains:
    tx_dish_gain_db: float = 52.48
    sat_rx_gain_db: float = 38.2
    # None closes the link automatically (see LinkChannel.calibrate).
    transponder_amp_gain_db: Optional[float] = None
    sat_tx_gain_db: float = 31.0
    rx_dish_gain_db: float = 36.85
    uplink_loss_db: float = 221.0
    downlink_loss_db: float = 217.0

    def __post_init__(self):
        if self.uplink_loss_db < 0 or self.downlink_loss_db < 0:
            raise ParameterError("path losses cannot be negative")

    @property
    def fixed_db(self):
        """Net of every dB term except the transponder amplifier."""
        return (self.tx_dish_gain_db - self.uplink_loss_db + self.sat_rx_gain_db
                + self.sat_tx_gain_db - self.downlink_loss_db + self.rx_dish_gain_db)


def db_to_amplitude(gain_db):
    return 10.0 ** (gain_db / 20.0)


def saleh_amplify(x, p):
    if not p.enabled:
        return x
    scaled = x.samples * db_to_amplitude(p.input_scale_db)
    r = np.abs(scaled)
    unit = np.divide(scaled, r, out=np.zeros_like(scaled), where=r > 0)
    out = unit * p.am_am(r) * np.exp(1j * p.am_pm(r)) * db_to_amplitude(p.output_scale_db)
    return x.replace(out)


def apply_gain_db(x, gain_db):
    return x.replace(x.samples * db_to_amplitude(gain_db))


def fspl_attenuate(x, loss_db):
    if loss_db < 0:
        raise ParameterError(f"path loss must be non-negative, got {loss_db} dB")
    return apply_gain_db(x, -loss_db)


def phase_freq_offset(x, phase_deg, freq_hz, start_sample=0):
    """Rotate sample n by 2*pi*freq*n/fs + phase; n counts from start_sample."""
    n = start_sample + np.arange(len(x))
    angle = 2 * np.pi * freq_hz * n / x.sample_rate_hz + np.deg2rad(phase_deg)
    return x.replace(x.samples * np.exp(1j * angle))


class PhaseFrequencyOffset:
    """Phase/Doppler rotation whose sample counter runs on across frames."""

    def __init__(self, phase_deg, freq_hz):
        self.phase_deg = phase_deg
        self.freq_hz = freq_hz
        self.sample_counter = 0

    def __call__(self, frame):
        out = phase_freq_offset(frame, self.phase_deg, self.freq_hz, self.sample_counter)
        self.sample_counter += len(frame)
        return out


class ThermalNoise:
    """Circularly symmetric complex Gaussian noise of fixed total variance."""

    def __init__(self, variance, seed):
        if variance < 0:
            raise ParameterError("noise variance cannot be negative")
        self.variance = float(variance)
        self.rng = np.random.default_rng(seed)

    @classmethod
    def from_temperature(cls, temperature_k, sample_rate_hz, seed):
        if temperature_k < 0:
            raise ParameterError("noise temperature cannot be negative")
        return cls(Boltzmann * temperature_k * sample_rate_hz, seed)

    def __call__(self, frame):
        if self.variance == 0:
            return frame
        sigma = math.sqrt(self.variance / 2)
        noise = self.rng.normal(0.0, sigma, len(frame)) + 1j * self.rng.normal(0.0, sigma, len(frame))
        return frame.replace(frame.samples + noise)


def thermal_noise(x, temperature_k, seed):
    return ThermalNoise.from_temperature(temperature_k, x.sample_rate_hz, seed)(x)


def iq_imbalance(x, cfg):
    g = db_to_amplitude(cfg.iq_amplitude_imbalance_db)
    half = np.deg2rad(cfg.iq_phase_imbalance_deg) / 2
    i, q = x.samples.real, x.samples.imag
    # Amplitude imbalance sits on the Q branch, phase error split between both.
    i_out = i * np.cos(half) + q * g * np.sin(half) + cfg.dc_offset_i
    q_out = i * np.sin(half) + q * g * np.cos(half) + cfg.dc_offset_q
    return x.replace(i_out + 1j * q_out)


class LinkChannel:
    """Transmit amplifier to receive front end, one frame at a time.

    Physical mode walks the full dB chain and adds kTB noise. Normalized mode
    replaces every dB term by one gain that restores the transmitted power and
    sets the noise from a target Es/N0 at the matched-filter output.
    calibrate() must see the whole transmit waveform before the first frame.
    """

    def __init__(self, gains, saleh, impairments, mode=PHYSICAL, target_es_n0_db=None,
                 samples_per_symbol=8):
        if mode not in MODES:
            raise ParameterError(f"unknown channel mode {mode!r}")
        if mode == NORMALIZED and target_es_n0_db is None:
            raise ParameterError("normalized mode needs target_es_n0_db")
        self.gains = gains
        self.saleh = saleh
        self.impairments = impairments
        self.mode = mode
        self.target_es_n0_db = target_es_n0_db
        self.samples_per_symbol = samples_per_symbol

        self.offset = PhaseFrequencyOffset(impairments.phase_offset_deg, impairments.freq_offset_hz)
        self.transponder_gain_db = gains.transponder_amp_gain_db
        self.normalization_gain = 1.0
        self.amplifier_phase_deg = 0.0
        self.noise = None

    def calibrate(self, waveform):
        """Fix every power-dependent setting from the full transmit waveform."""
        tx_power = waveform.mean_power()
        amplified = saleh_amplify(waveform, self.saleh)
        amplified_power = amplified.mean_power()
        if tx_power == 0 or amplified_power == 0:
            raise ParameterError("cannot set link levels from a silent waveform")
        # Energy-weighted mean AM/PM rotation of this waveform.
        self.amplifier_phase_deg = float(np.angle(np.vdot(waveform.samples, amplified.samples), deg=True))

        if self.mode == PHYSICAL:
            if self.transponder_gain_db is None:
                self.transponder_gain_db = (10 * math.log10(tx_power / amplified_power)
                                            - self.gains.fixed_db)
                logger.info("Auto-closure transponder gain: %.4f dB", self.transponder_gain_db)
            self.noise = ThermalNoise.from_temperature(
                self.impairments.noise_temperature_k, waveform.sample_rate_hz,
                self.impairments.seed)
        else:
            self.normalization_gain = math.sqrt(tx_power / amplified_power)
            es_n0 = 10 ** (self.target_es_n0_db / 10)
            self.noise = ThermalNoise(tx_power * self.samples_per_symbol / es_n0,
                                      self.impairments.seed)

        logger.debug("Channel calibrated: mode=%s tx_power=%.6g noise_variance=%.6g",
                     self.mode, tx_power, self.noise.variance)
        return self.effective_parameters()

    def effective_parameters(self):
        return {
            "mode": self.mode,
            "transponder_amp_gain_db": self.transponder_gain_db,
            "net_chain_gain_db": self.net_chain_gain_db(),
            "normalization_gain": self.normalization_gain,
            "amplifier_phase_deg": self.amplifier_phase_deg,
            "noise_variance": None if self.noise is None else self.noise.variance,
        }

    def net_chain_gain_db(self):
        if self.mode != PHYSICAL or self.transponder_gain_db is None:
            return None
        return self.gains.fixed_db + self.transponder_gain_db

    def process(self, frame):
        if self.noise is None:
            raise ParameterError("channel used before calibrate()")
        g = self.gains
        x = saleh_amplify(frame, self.saleh)
        if self.mode == PHYSICAL:
            x = apply_gain_db(x, g.tx_dish_gain_db)
            x = fspl_attenuate(x, g.uplink_loss_db)
            x = apply_gain_db(x, g.sat_rx_gain_db)
            x = apply_gain_db(x, self.transponder_gain_db)
            x = apply_gain_db(x, g.sat_tx_gain_db)
            x = fspl_attenuate(x, g.downlink_loss_db)
            x = self.offset(x)
            x = apply_gain_db(x, g.rx_dish_gain_db)
        else:
            x = x.replace(x.samples * self.normalization_gain)
            x = self.offset(x)
        x = self.noise(x)
        return iq_imbalance(x, self.impairments)


def run_channel(x, gains, saleh, imp, mode=PHYSICAL, target_es_n0_db=None, samples_per_symbol=8):
    channel = LinkChannel(gains, saleh, imp, mode, target_es_n0_db, samples_per_symbol)
    channel.calibrate(x)
    return channel.process(x)
