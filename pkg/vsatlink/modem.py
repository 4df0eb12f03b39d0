"""Bit source, Gray-coded square M-QAM mapping and root-raised-cosine shaping."""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import signal

from .exceptions import FramingError, InsufficientDataError, ParameterError
from .frames import BitFrame, ComplexFrame


@dataclass(frozen=True)
class ModemConfig:
    m_ary: int = 16
    min_distance: float = 2.0
    gray_coding: bool = True
    rolloff: float = 0.2
    samples_per_symbol: int = 8
    filter_span_symbols: int = 10
    bit_sample_time_s: float = 4 / 100000
    frame_len: int = 512

    def __post_init__(self):
        m = self.m_ary
        if m < 4 or m & (m - 1) or int(math.log2(m)) % 2:
            raise ParameterError(f"m_ary must be a power of 4, got {m}")
        if not self.min_distance > 0:
            raise ParameterError("min_distance must be positive")
        if not 0 < self.rolloff <= 1:
            raise ParameterError(f"rolloff must be in (0, 1], got {self.rolloff}")
        if self.samples_per_symbol < 2:
            raise ParameterError("samples_per_symbol must be at least 2")
        if self.filter_span_symbols <= 0 or self.filter_span_symbols % 2:
            raise ParameterError("filter_span_symbols must be a positive even integer")
        if not self.bit_sample_time_s > 0:
            raise ParameterError("bit_sample_time_s must be positive")
        if self.frame_len <= 0:
            raise ParameterError("frame_len must be positive")

    @property
    def bits_per_symbol(self):
        return int(math.log2(self.m_ary))

    @property
    def levels_per_axis(self):
        return math.isqrt(self.m_ary)

    @property
    def _symbol_rate(self):
        # 4e-05 s is not exact in binary; recover the intended ratio.
        bit_time = Fraction(self.bit_sample_time_s).limit_denominator(10 ** 12)
        return 1 / (bit_time * self.bits_per_symbol)

    @property
    def symbol_rate_hz(self):
        return float(self._symbol_rate)

    @property
    def sample_rate_hz(self):
        return float(self._symbol_rate * self.samples_per_symbol)

    @property
    def mean_symbol_energy(self):
        # 2(M-1)/3 for unit half-spacing
        return 2 * (self.m_ary - 1) / 3 * (self.min_distance / 2) ** 2

    @property
    def delay_bits(self):
        """Tx plus Rx filter group delay, expressed in bits."""
        return self.filter_span_symbols * self.bits_per_symbol


# Helper functions
def _axis_labels(levels, gray):
    index = np.arange(levels)
    return index ^ (index >> 1) if gray else index


def _label_to_index(levels, gray):
    labels = _axis_labels(levels, gray)
    inverse = np.empty(levels, dtype=np.int64)
    inverse[labels] = np.arange(levels)
    return inverse


def constellation(cfg):
    """All M points, ordered by symbol label (I label in the high bits)."""
    half_bits = cfg.bits_per_symbol // 2
    labels = np.arange(cfg.m_ary)
    bits = (labels[:, None] >> np.arange(cfg.bits_per_symbol - 1, -1, -1)) & 1
    return qam_modulate(BitFrame(bits.reshape(-1)), cfg).samples, bits.reshape(-1, 2 * half_bits)


def generate_bits(n, p_one, seed):
    if n <= 0:
        raise ParameterError(f"bit count must be positive, got {n}")
    if not 0 <= p_one <= 1:
        raise ParameterError(f"p_one must be a probability, got {p_one}")
    rng = np.random.default_rng(seed)
    return BitFrame((rng.random(n) < p_one).astype(np.uint8))


def qam_modulate(bits, cfg):
    k = cfg.bits_per_symbol
    if bits.frame_len % k:
        raise FramingError(f"{bits.frame_len} bits do not split into {k}-bit symbols")

    levels = cfg.levels_per_axis
    half = k // 2
    groups = bits.bits.reshape(-1, k).astype(np.int64)
    weights = 1 << np.arange(half - 1, -1, -1)
    to_index = _label_to_index(levels, cfg.gray_coding)

    i_index = to_index[groups[:, :half] @ weights]
    q_index = to_index[groups[:, half:] @ weights]
    scale = cfg.min_distance / 2
    symbols = ((2 * i_index - (levels - 1)) + 1j * (2 * q_index - (levels - 1))) * scale
    return ComplexFrame(symbols, cfg.symbol_rate_hz)


def _slice_axis(values, cfg):
    levels = cfg.levels_per_axis
    position = (values / (cfg.min_distance / 2) + (levels - 1)) / 2
    # Nearest level; exact ties go to the lower level.
    index = np.ceil(position - 0.5)
    return np.clip(index, 0, levels - 1).astype(np.int64)


def qam_demodulate(symbols, cfg):
    half = cfg.bits_per_symbol // 2
    labels = _axis_labels(cfg.levels_per_axis, cfg.gray_coding)
    shifts = np.arange(half - 1, -1, -1)

    i_label = labels[_slice_axis(symbols.samples.real, cfg)]
    q_label = labels[_slice_axis(symbols.samples.imag, cfg)]
    bits = np.hstack([(i_label[:, None] >> shifts) & 1, (q_label[:, None] >> shifts) & 1])
    return BitFrame(bits.reshape(-1))


@lru_cache(maxsize=32)
def _rrc_taps_cached(rolloff, samples_per_symbol, span_symbols):
    beta = rolloff
    n = np.arange(span_symbols * samples_per_symbol + 1) - span_symbols * samples_per_symbol / 2
    t = n / samples_per_symbol

    taps = np.empty(t.size)
    at_zero = t == 0
    at_pole = np.isclose(np.abs(t), 1 / (4 * beta))
    regular = ~(at_zero | at_pole)

    taps[at_zero] = 1 - beta + 4 * beta / np.pi
    taps[at_pole] = beta / np.sqrt(2) * (
        (1 + 2 / np.pi) * np.sin(np.pi / (4 * beta))
        + (1 - 2 / np.pi) * np.cos(np.pi / (4 * beta))
    )
    tr = t[regular]
    taps[regular] = (
        np.sin(np.pi * tr * (1 - beta)) + 4 * beta * tr * np.cos(np.pi * tr * (1 + beta))
    ) / (np.pi * tr * (1 - (4 * beta * tr) ** 2))

    taps /= np.sqrt(np.sum(taps ** 2))
    taps.setflags(write=False)
    return taps


def rrc_taps(rolloff, samples_per_symbol, span_symbols):
    """Unit-energy square-root raised-cosine taps, span*sps + 1 long."""
    if not 0 < rolloff <= 1:
        raise ParameterError(f"rolloff must be in (0, 1], got {rolloff}")
    if span_symbols <= 0 or span_symbols % 2:
        raise ParameterError(f"span must be a positive even number of symbols, got {span_symbols}")
    if samples_per_symbol < 1:
        raise ParameterError("samples_per_symbol must be positive")
    return _rrc_taps_cached(float(rolloff), int(samples_per_symbol), int(span_symbols))


def _modem_taps(cfg):
    return rrc_taps(cfg.rolloff, cfg.samples_per_symbol, cfg.filter_span_symbols)


def tx_shape(symbols, cfg):
    """Zero-stuff by samples_per_symbol and filter; the filter tail is kept.

    Both ends use the same unit-energy taps, which makes the Tx/Rx cascade
    gain exactly 1 at symbol instants. The shaped waveform's mean sample
    power is therefore Es / samples_per_symbol.
    """
    sps = cfg.samples_per_symbol
    upsampled = np.zeros(len(symbols) * sps, dtype=np.complex128)
    upsampled[::sps] = symbols.samples
    shaped = signal.convolve(upsampled, _modem_taps(cfg))
    return ComplexFrame(shaped, symbols.sample_rate_hz * sps)


def rx_match(waveform, cfg):
    """Matched-filter and decimate at the cascade peak.

    Output symbol k lines up with transmitted symbol k - filter_span_symbols;
    the head transient is left in place for the analysis stage to trim.
    """
    sps = cfg.samples_per_symbol
    group_delay = cfg.filter_span_symbols * sps
    if len(waveform) < group_delay:
        raise InsufficientDataError(
            f"matched filter needs at least {group_delay} samples, got {len(waveform)}"
        )
    filtered = signal.convolve(waveform.samples, _modem_taps(cfg))
    return ComplexFrame(filtered[::sps], waveform.sample_rate_hz / sps)
