"""Value types passed between the modem, channel, receiver and analysis blocks."""

from dataclasses import dataclass

import numpy as np

from .exceptions import ParameterError


@dataclass(frozen=True, eq=False)
class BitFrame:
    bits: np.ndarray

    def __post_init__(self):
        bits = np.asarray(self.bits)
        if bits.ndim != 1 or bits.size == 0:
            raise ParameterError("bit frame must be a non-empty 1-D sequence")
        if not np.all((bits == 0) | (bits == 1)):
            raise ParameterError("bit frame values must be 0 or 1")
        object.__setattr__(self, "bits", bits.astype(np.uint8))

    @property
    def frame_len(self):
        return int(self.bits.size)

    def __len__(self):
        return self.frame_len


@dataclass(frozen=True, eq=False)
class ComplexFrame:
    """Block of complex baseband samples.

    Amplitudes are dimensionless; in physical mode they are read as volts
    across a 1-ohm reference, so |x|^2 is power in watts.
    """

    samples: np.ndarray
    sample_rate_hz: float

    def __post_init__(self):
        if not self.sample_rate_hz > 0:
            raise ParameterError(f"sample rate must be positive, got {self.sample_rate_hz}")
        samples = np.asarray(self.samples, dtype=np.complex128)
        if samples.ndim != 1:
            raise ParameterError("samples must be a 1-D sequence")
        if not np.all(np.isfinite(samples)):
            raise ParameterError("samples must be finite")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate_hz", float(self.sample_rate_hz))

    def __len__(self):
        return int(self.samples.size)

    def replace(self, samples):
        """Same sample rate, new samples."""
        return ComplexFrame(samples, self.sample_rate_hz)

    def mean_power(self):
        if self.samples.size == 0:
            return 0.0
        return float(np.mean(np.abs(self.samples) ** 2))
