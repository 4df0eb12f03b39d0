"""Decibel power balance for one satellite hop (uplink or downlink).

    P_r = P_t * G_t * G_r * (lambda / (4 pi R))^2
    G   = eta * (pi D / lambda)^2
    L_p = 20 log10(4 pi R / lambda)

Pointing losses are separate budget lines, never folded into G.
"""

import math
from dataclasses import asdict, dataclass
from typing import Optional

from scipy.constants import Boltzmann

from .exceptions import ParameterError

SPEED_OF_LIGHT_M_S = 3e8


@dataclass(frozen=True)
class AntennaSpec:
    diameter_m: float
    efficiency: float
    pointing_loss_db: float = 0.0

    def __post_init__(self):
        if not self.diameter_m > 0:
            raise ParameterError("antenna diameter must be positive")
        if not 0 < self.efficiency <= 1:
            raise ParameterError("antenna efficiency must be in (0, 1]")
        if self.pointing_loss_db < 0:
            raise ParameterError("pointing loss cannot be negative")


@dataclass(frozen=True)
class LinkGeometry:
    range_m: float
    frequency_hz: float
    c_m_s: float = SPEED_OF_LIGHT_M_S

    def __post_init__(self):
        if not self.range_m > 0:
            raise ParameterError("range must be positive")
        if not self.frequency_hz > 0:
            raise ParameterError("frequency must be positive")

    @property
    def wavelength_m(self):
        return self.c_m_s / self.frequency_hz


@dataclass(frozen=True)
class BudgetLeg:
    """One hop. Each antenna is given either as a dish spec or as a gain in dB."""

    name: str
    tx_power_w: float
    geometry: LinkGeometry
    bandwidth_hz: float
    system_noise_temperature_k: float
    tx_antenna: Optional[AntennaSpec] = None
    tx_antenna_gain_db: Optional[float] = None
    rx_antenna: Optional[AntennaSpec] = None
    rx_antenna_gain_db: Optional[float] = None
    loss_override_db: Optional[float] = None

    def __post_init__(self):
        if not self.tx_power_w > 0:
            raise ParameterError("tx power must be positive")
        if not self.bandwidth_hz > 0:
            raise ParameterError("bandwidth must be positive")
        if not self.system_noise_temperature_k > 0:
            raise ParameterError("system noise temperature must be positive")
        if (self.tx_antenna is None) == (self.tx_antenna_gain_db is None):
            raise ParameterError("give exactly one of tx_antenna or tx_antenna_gain_db")
        if (self.rx_antenna is None) == (self.rx_antenna_gain_db is None):
            raise ParameterError("give exactly one of rx_antenna or rx_antenna_gain_db")
        if self.loss_override_db is not None and self.loss_override_db < 0:
            raise ParameterError("path loss override cannot be negative")


@dataclass(frozen=True)
class LinkBudgetReport:
    leg: str
    tx_power_dbw: float
    tx_antenna_gain_db: float
    tx_pointing_loss_db: float
    eirp_dbw: float
    computed_path_loss_db: float
    override_path_loss_db: Optional[float]
    path_loss_db: float
    rx_antenna_gain_db: float
    rx_pointing_loss_db: float
    # Receive gain net of pointing loss; rx_power = eirp - path_loss + rx_gain.
    rx_gain_db: float
    rx_power_dbw: float
    noise_power_dbw: float
    cn_db: float
    g_over_t_db_k: float
    cn0_db_hz: float

    def to_dict(self):
        return asdict(self)


def to_db(value):
    if not value > 0:
        raise ParameterError(f"cannot take the dB of {value}")
    return 10 * math.log10(value)


def antenna_gain_db(spec, frequency_hz):
    if not frequency_hz > 0:
        raise ParameterError(f"frequency must be positive, got {frequency_hz}")
    wavelength = SPEED_OF_LIGHT_M_S / frequency_hz
    return to_db(spec.efficiency * (math.pi * spec.diameter_m / wavelength) ** 2)


def free_space_path_loss_db(geom):
    return 20 * math.log10(4 * math.pi * geom.range_m / geom.wavelength_m)


def noise_power_dbw(temperature_k, bandwidth_hz):
    if not temperature_k > 0 or not bandwidth_hz > 0:
        raise ParameterError("noise temperature and bandwidth must be positive")
    return to_db(Boltzmann * temperature_k * bandwidth_hz)


def _antenna_terms(spec, gain_db, frequency_hz):
    if spec is None:
        return gain_db, 0.0
    return antenna_gain_db(spec, frequency_hz), spec.pointing_loss_db


def compute_budget(leg):
    f = leg.geometry.frequency_hz
    tx_gain, tx_pointing = _antenna_terms(leg.tx_antenna, leg.tx_antenna_gain_db, f)
    rx_antenna_gain, rx_pointing = _antenna_terms(leg.rx_antenna, leg.rx_antenna_gain_db, f)
    rx_gain = rx_antenna_gain - rx_pointing

    tx_power = to_db(leg.tx_power_w)
    eirp = tx_power + tx_gain - tx_pointing
    computed_loss = free_space_path_loss_db(leg.geometry)
    path_loss = computed_loss if leg.loss_override_db is None else leg.loss_override_db
    rx_power = eirp - path_loss + rx_gain

    noise = noise_power_dbw(leg.system_noise_temperature_k, leg.bandwidth_hz)
    k_t = to_db(Boltzmann * leg.system_noise_temperature_k)
    return LinkBudgetReport(
        leg=leg.name,
        tx_power_dbw=tx_power,
        tx_antenna_gain_db=tx_gain,
        tx_pointing_loss_db=tx_pointing,
        eirp_dbw=eirp,
        computed_path_loss_db=computed_loss,
        override_path_loss_db=leg.loss_override_db,
        path_loss_db=path_loss,
        rx_antenna_gain_db=rx_antenna_gain,
        rx_pointing_loss_db=rx_pointing,
        rx_gain_db=rx_gain,
        rx_power_dbw=rx_power,
        noise_power_dbw=noise,
        cn_db=rx_power - noise,
        g_over_t_db_k=rx_gain - to_db(leg.system_noise_temperature_k),
        cn0_db_hz=rx_power - k_t,
    )


def received_power_w(leg):
    """Received power from the linear product form, for cross-checking the dB balance."""
    f = leg.geometry.frequency_hz
    tx_gain, tx_pointing = _antenna_terms(leg.tx_antenna, leg.tx_antenna_gain_db, f)
    rx_gain, rx_pointing = _antenna_terms(leg.rx_antenna, leg.rx_antenna_gain_db, f)
    g_t = 10 ** ((tx_gain - tx_pointing) / 10)
    g_r = 10 ** ((rx_gain - rx_pointing) / 10)
    if leg.loss_override_db is None:
        spreading = (leg.geometry.wavelength_m / (4 * math.pi * leg.geometry.range_m)) ** 2
    else:
        spreading = 10 ** (-leg.loss_override_db / 10)
    return leg.tx_power_w * g_t * g_r * spreading


def combined_cn_db(cn_db_values):
    """Overall C/N of cascaded hops: reciprocal sum of the linear ratios."""
    values = list(cn_db_values)
    if not values:
        raise ParameterError("no C/N values to combine")
    return -to_db(sum(10 ** (-cn / 10) for cn in values))
