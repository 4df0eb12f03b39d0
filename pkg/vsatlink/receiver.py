"""Receive-side compensation: DC offset removal, AGC and phase/frequency correction.

Order follows the receive chain: DC -> AGC -> phase/frequency; the matched
filter runs afterwards on the whole compensated waveform.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import signal

from .channel import PhaseFrequencyOffset, phase_freq_offset
from .exceptions import ParameterError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AgcConfig:
    # reference_power and step_size are per symbol; the loop itself runs per sample.
    reference_power: float = 10.0
    step_size: float = 0.01
    max_gain_db: float = 60.0
    samples_per_symbol: int = 1

    def __post_init__(self):
        if not self.reference_power > 0:
            raise ParameterError("AGC reference_power must be positive")
        if not 0 < self.step_size <= 1:
            raise ParameterError("AGC step_size must be in (0, 1]")
        if self.samples_per_symbol < 1:
            raise ParameterError("AGC samples_per_symbol must be positive")


@dataclass(frozen=True)
class CompensationConfig:
    dc: bool = True
    agc: bool = True
    phase_freq: bool = True
    dc_forgetting_factor: float = 0.999

    def __post_init__(self):
        if not 0 < self.dc_forgetting_factor < 1:
            raise ParameterError("dc_forgetting_factor must be in (0, 1)")

    @property
    def any_enabled(self):
        return self.dc or self.agc or self.phase_freq


class DcBlocker:
    """Exponentially weighted running mean, subtracted sample by sample.

    m[n] = a*m[n-1] + (1-a)*x[n], y[n] = x[n] - m[n], with m[-1] = 0.
    """

    def __init__(self, forgetting_factor=0.99):
        if not 0 < forgetting_factor < 1:
            raise ParameterError(f"forgetting factor must be in (0, 1), got {forgetting_factor}")
        self.forgetting_factor = forgetting_factor
        self._b = np.array([1 - forgetting_factor])
        self._a = np.array([1.0, -forgetting_factor])
        self._zi = np.zeros(1, dtype=np.complex128)

    @property
    def dc_estimate(self):
        """Current running mean."""
        return complex(self._zi[0] / self.forgetting_factor)

    def __call__(self, frame):
        if len(frame) == 0:
            raise ParameterError("cannot remove DC from an empty frame")
        mean, self._zi = signal.lfilter(self._b, self._a, frame.samples, zi=self._zi)
        return frame.replace(frame.samples - mean)


class Agc:
    """Multiplicative proportional gain loop; the gain carries over between frames."""

    # Lower bound on the per-sample gain factor, for inputs far above reference.
    MIN_STEP_FACTOR = 0.5

    def __init__(self, cfg):
        self.cfg = cfg
        self.target = cfg.reference_power / cfg.samples_per_symbol
        self.mu = cfg.step_size / cfg.samples_per_symbol
        self.max_gain = 10 ** (cfg.max_gain_db / 20)
        self.min_gain = 1 / self.max_gain
        self.gain = 1.0

    @property
    def gain_db(self):
        return 20 * math.log10(self.gain)

    def __call__(self, frame):
        g, mu, target = self.gain, self.mu, self.target
        lo, hi, floor = self.min_gain, self.max_gain, self.MIN_STEP_FACTOR
        out = np.empty(len(frame), dtype=np.complex128)
        for n, s in enumerate(frame.samples.tolist()):
            y = g * s
            out[n] = y
            factor = 1 + mu * (1 - (y.real * y.real + y.imag * y.imag) / target)
            g = min(max(g * max(factor, floor), lo), hi)
        self.gain = g
        return frame.replace(out)


class PhaseFrequencyCorrector(PhaseFrequencyOffset):
    """Removes a known phase/frequency offset; same sample counter convention."""

    def __init__(self, phase_deg, freq_hz):
        super().__init__(-phase_deg, -freq_hz)


def dc_offset_remove(x, forgetting_factor=0.99):
    return DcBlocker(forgetting_factor)(x)


def agc(x, cfg):
    return Agc(cfg)(x)


def phase_freq_correct(x, phase_deg, freq_hz, start_sample=0):
    return phase_freq_offset(x, -phase_deg, -freq_hz, start_sample)


class Receiver:
    """Compensation chain ahead of the matched filter, one frame at a time."""

    def __init__(self, compensation, agc_cfg, phase_deg, freq_hz):
        self.compensation = compensation
        self.dc_blocker = DcBlocker(compensation.dc_forgetting_factor) if compensation.dc else None
        self.agc = Agc(agc_cfg) if compensation.agc else None
        self.corrector = (PhaseFrequencyCorrector(phase_deg, freq_hz)
                          if compensation.phase_freq else None)
        if not compensation.any_enabled:
            logger.info("Receiver compensation disabled; frames pass through")

    def process(self, frame):
        if self.dc_blocker is not None:
            frame = self.dc_blocker(frame)
        if self.agc is not None:
            frame = self.agc(frame)
        if self.corrector is not None:
            frame = self.corrector(frame)
        return frame

    def state(self):
        return {
            "dc_estimate": None if self.dc_blocker is None else [
                self.dc_blocker.dc_estimate.real, self.dc_blocker.dc_estimate.imag],
            "agc_gain_db": None if self.agc is None else self.agc.gain_db,
            "phase_correction_deg": None if self.corrector is None else -self.corrector.phase_deg,
        }
