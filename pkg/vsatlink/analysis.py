"""BER counting, delay alignment, spectra and constellation snapshots."""

import logging
from dataclasses import asdict, dataclass

import numpy as np
from scipy import signal
from scipy.special import erfc

from .exceptions import InsufficientDataError, ParameterError
from .frames import ComplexFrame
from .modem import ModemConfig, constellation, qam_demodulate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BerReport:
    bit_errors: int
    bits_compared: int
    ber: float
    alignment_delay_bits: int

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True, eq=False)
class SpectrumEstimate:
    frequencies_hz: np.ndarray
    psd_w_per_hz: np.ndarray
    resolution_bw_hz: float

    def total_power(self):
        return float(np.sum(self.psd_w_per_hz) * self.resolution_bw_hz)


def measure_ber(tx_bits, rx_bits, delay_bits):
    """Compare tx bit i with rx bit i + delay_bits over the overlap."""
    if delay_bits < 0:
        raise ParameterError("delay cannot be negative")
    overlap = min(len(tx_bits), len(rx_bits) - delay_bits)
    if overlap <= 0:
        raise InsufficientDataError(
            f"no bits left to compare after a {delay_bits}-bit delay"
        )
    errors = int(np.count_nonzero(tx_bits.bits[:overlap] != rx_bits.bits[delay_bits:delay_bits + overlap]))
    return BerReport(
        bit_errors=errors,
        bits_compared=overlap,
        ber=errors / overlap,
        alignment_delay_bits=delay_bits,
    )


def estimate_delay_bits(tx_bits, rx_bits, max_delay_bits):
    """Lag in [0, max_delay_bits] maximising the antipodal cross-correlation."""
    n = min(len(tx_bits), len(rx_bits) - max_delay_bits)
    if n <= 0:
        raise InsufficientDataError("streams too short for the delay search")
    a = 2.0 * tx_bits.bits[:n] - 1
    b = 2.0 * rx_bits.bits[:n + max_delay_bits] - 1
    corr = signal.correlate(b, a, mode="valid")
    return int(np.argmax(corr))


def estimate_psd(x, segment_len=1024, overlap_fraction=0.5):
    """Two-sided Welch PSD (Hann window) over [-fs/2, fs/2).

    Density scaling, so the PSD summed over bins times the bin width is the
    mean sample power.
    """
    if segment_len <= 0:
        raise ParameterError("segment length must be positive")
    if segment_len > len(x):
        raise ParameterError(f"segment of {segment_len} samples is longer than the {len(x)}-sample frame")
    if not 0 <= overlap_fraction < 1:
        raise ParameterError("overlap_fraction must be in [0, 1)")

    _, psd = signal.welch(
        x.samples,
        fs=x.sample_rate_hz,
        window="hann",
        nperseg=segment_len,
        noverlap=int(segment_len * overlap_fraction),
        detrend=False,
        return_onesided=False,
        scaling="density",
    )
    return SpectrumEstimate(
        # Bin k of n sits at (k/n)*fs; exact for power-of-two segments.
        frequencies_hz=np.fft.fftshift(np.fft.fftfreq(segment_len)) * x.sample_rate_hz,
        psd_w_per_hz=np.fft.fftshift(psd),
        resolution_bw_hz=x.sample_rate_hz / segment_len,
    )


def constellation_snapshot(x, max_points, skip_symbols=0):
    """(re, im) rows for up to max_points symbols after the first skip_symbols."""
    if max_points < 0 or skip_symbols < 0:
        raise ParameterError("max_points and skip_symbols must be non-negative")
    symbols = x.samples[skip_symbols:skip_symbols + max_points]
    return np.column_stack([symbols.real, symbols.imag])


def theoretical_qam_ber(es_n0_db, m_ary):
    """Gray-coded square M-QAM bit error probability over AWGN (nearest-neighbour form)."""
    try:
        cfg = ModemConfig(m_ary=m_ary)
    except ParameterError as e:
        raise ParameterError(f"unsupported constellation size {m_ary}") from e
    es_n0 = 10 ** (np.asarray(es_n0_db, dtype=float) / 10)
    k = cfg.bits_per_symbol
    root_m = cfg.levels_per_axis
    return 2 / k * (1 - 1 / root_m) * erfc(np.sqrt(3 * es_n0 / (2 * (m_ary - 1))))


def rotation_oracle_ber(angle_deg, cfg=None):
    """Exact hard-decision BER of a noiseless constellation rotated by angle_deg.

    Every point is equally likely, so the BER is the bit-error count over the
    whole rotated constellation divided by M*log2(M).
    """
    cfg = cfg or ModemConfig()
    points, bits = constellation(cfg)
    rotated = ComplexFrame(points * np.exp(1j * np.deg2rad(angle_deg)), cfg.symbol_rate_hz)
    decided = qam_demodulate(rotated, cfg).bits.reshape(bits.shape)
    return np.count_nonzero(decided != bits) / bits.size


def rotation_averaged_ber(cfg=None, steps=3600):
    """rotation_oracle_ber averaged over a uniformly distributed rotation."""
    if steps <= 0:
        raise ParameterError("steps must be positive")
    cfg = cfg or ModemConfig()
    angles = np.arange(steps) * 360 / steps
    return float(np.mean([rotation_oracle_ber(a, cfg) for a in angles]))
