"""Scenario files: JSON sections validated by forms, turned into the block configs."""

import copy
import dataclasses
import json
import logging
from dataclasses import dataclass, field
from typing import Optional

from .channel import ImpairmentConfig, LinkGains, SalehParams
from .exceptions import ConfigError, ParameterError
from .forms import (
    AgcForm,
    AntennaForm,
    BudgetLegForm,
    CompensationForm,
    GainsForm,
    ImpairmentsForm,
    ModemForm,
    RunForm,
    SalehForm,
)
from .linkbudget import AntennaSpec, BudgetLeg, LinkGeometry
from .modem import ModemConfig
from .receiver import AgcConfig, CompensationConfig

logger = logging.getLogger(__name__)

COMMENT_KEY = "comment"


@dataclass(frozen=True)
class RunDefaults:
    mode: str = "physical"
    target_es_n0_db: Optional[float] = None
    total_bits: int = 1_000_000
    seed: int = 0
    p_one: float = 0.5
    psd_segment_len: int = 1024
    psd_overlap: float = 0.5
    constellation_points: int = 2000


@dataclass(frozen=True)
class AgcDefaults:
    # None: the modem's mean symbol energy.
    reference_power: Optional[float] = None
    step_size: float = 0.01
    max_gain_db: float = 60.0


@dataclass(frozen=True)
class ScenarioConfig:
    modem: ModemConfig = field(default_factory=ModemConfig)
    saleh: SalehParams = field(default_factory=SalehParams)
    gains: LinkGains = field(default_factory=LinkGains)
    impairments: ImpairmentConfig = field(default_factory=ImpairmentConfig)
    compensation: CompensationConfig = field(default_factory=CompensationConfig)
    agc: AgcConfig = field(default_factory=AgcConfig)
    mode: str = "physical"
    target_es_n0_db: Optional[float] = None
    total_bits: int = 1_000_000
    seed: int = 0
    p_one: float = 0.5
    psd_segment_len: int = 1024
    psd_overlap: float = 0.5
    constellation_points: int = 2000
    budget_legs: tuple = ()

    def to_dict(self):
        return dataclasses.asdict(self)


# section name -> (form, dataclass holding the defaults)
SECTIONS = {
    "modem": (ModemForm, ModemConfig),
    "saleh": (SalehForm, SalehParams),
    "gains": (GainsForm, LinkGains),
    "impairments": (ImpairmentsForm, ImpairmentConfig),
    "compensation": (CompensationForm, CompensationConfig),
    "agc": (AgcForm, AgcDefaults),
    "run": (RunForm, RunDefaults),
}
TOP_LEVEL_KEYS = set(SECTIONS) | {"budget_legs", COMMENT_KEY}


def _defaults(cls):
    defaults = {}
    for f in dataclasses.fields(cls):
        if f.default is not dataclasses.MISSING:
            defaults[f.name] = f.default
    return defaults


def _unknown_keys(label, data, form_class, extra=()):
    allowed = set(form_class.base_fields) | {COMMENT_KEY} | set(extra)
    return [f"{label}.{key}: unknown key" for key in sorted(set(data) - allowed)]


def _form_errors(label, form):
    errors = []
    for name, messages in form.errors.items():
        prefix = label if name == "__all__" else f"{label}.{name}"
        errors.extend(f"{prefix}: {message}" for message in messages)
    return errors


def validate_section(label, data, form_class, defaults_class, extra=()):
    """Clean one section merged over its defaults; returns (cleaned, errors)."""
    if not isinstance(data, dict):
        return None, [f"{label}: must be an object"]
    errors = _unknown_keys(label, data, form_class, extra)
    merged = {**_defaults(defaults_class), **data} if defaults_class else dict(data)
    form = form_class(data=merged)
    if not form.is_valid():
        errors.extend(_form_errors(label, form))
        return None, errors
    return form.cleaned_data, errors


def _build(label, cls, cleaned, errors):
    try:
        return cls(**cleaned)
    except ParameterError as e:
        errors.append(f"{label}: {e}")
        return None


def _antenna(label, data, errors):
    cleaned, section_errors = validate_section(label, data, AntennaForm, None)
    errors.extend(section_errors)
    if cleaned is None:
        return None
    if cleaned["pointing_loss_db"] is None:
        cleaned["pointing_loss_db"] = 0.0
    return _build(label, AntennaSpec, cleaned, errors)


def _budget_leg(index, data, errors):
    label = f"budget_legs[{index}]"
    cleaned, section_errors = validate_section(
        label, data, BudgetLegForm, None, extra=("tx_antenna", "rx_antenna"))
    errors.extend(section_errors)
    if cleaned is None:
        return None

    antennas = {}
    for side in ("tx", "rx"):
        spec_key, gain_key = f"{side}_antenna", f"{side}_antenna_gain_db"
        has_spec, has_gain = spec_key in data, cleaned[gain_key] is not None
        if has_spec == has_gain:
            errors.append(f"{label}.{spec_key}: give exactly one of {spec_key} or {gain_key}")
            return None
        antennas[spec_key] = _antenna(f"{label}.{spec_key}", data[spec_key], errors) if has_spec else None
        if has_spec and antennas[spec_key] is None:
            return None

    try:
        geometry = LinkGeometry(range_m=cleaned.pop("range_m"), frequency_hz=cleaned.pop("frequency_hz"))
        return BudgetLeg(geometry=geometry, **antennas, **cleaned)
    except ParameterError as e:
        errors.append(f"{label}: {e}")
        return None


def build_scenario(raw):
    """Validate a parsed scenario document; every problem is collected before raising."""
    if not isinstance(raw, dict):
        raise ConfigError("scenario: top level must be an object")
    errors = [f"{key}: unknown section" for key in sorted(set(raw) - TOP_LEVEL_KEYS)]

    cleaned = {}
    for name, (form_class, defaults_class) in SECTIONS.items():
        cleaned[name], section_errors = validate_section(
            name, raw.get(name, {}), form_class, defaults_class)
        errors.extend(section_errors)

    legs = []
    raw_legs = raw.get("budget_legs", [])
    if not isinstance(raw_legs, list):
        errors.append("budget_legs: must be a list")
        raw_legs = []
    for index, leg in enumerate(raw_legs):
        legs.append(_budget_leg(index, leg, errors))

    if errors:
        raise ConfigError(errors)

    modem = _build("modem", ModemConfig, cleaned["modem"], errors)
    run = cleaned["run"]
    if modem is not None and run["total_bits"] % modem.bits_per_symbol:
        errors.append(f"run.total_bits: must be a multiple of {modem.bits_per_symbol} bits per symbol")
    agc = None
    if modem is not None:
        agc_kwargs = {**cleaned["agc"], "samples_per_symbol": modem.samples_per_symbol}
        if agc_kwargs["reference_power"] is None:
            agc_kwargs["reference_power"] = modem.mean_symbol_energy
        agc = _build("agc", AgcConfig, agc_kwargs, errors)
    scenario_kwargs = dict(
        modem=modem,
        saleh=_build("saleh", SalehParams, cleaned["saleh"], errors),
        gains=_build("gains", LinkGains, cleaned["gains"], errors),
        impairments=_build("impairments", ImpairmentConfig, cleaned["impairments"], errors),
        compensation=_build("compensation", CompensationConfig, cleaned["compensation"], errors),
        agc=agc,
        budget_legs=tuple(legs),
        **run,
    )
    if errors:
        raise ConfigError(errors)
    return ScenarioConfig(**scenario_kwargs)


def read_scenario_file(path):
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        raise ConfigError(f"scenario: file not found: {path}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"scenario: invalid JSON at line {e.lineno} column {e.colno}: {e.msg}")


def apply_overrides(raw, overrides):
    """Copy of raw with each dotted "section.key" set to its value."""
    raw = copy.deepcopy(raw)
    for dotted, value in overrides.items():
        section, _, key = dotted.partition(".")
        if not key:
            raise ConfigError(f"{dotted}: override key must be <section>.<key>")
        target = raw.setdefault(section, {})
        if not isinstance(target, dict):
            raise ConfigError(f"{section}: must be an object")
        target[key] = value
    return raw


def load_scenario(path, overrides=None):
    raw = read_scenario_file(path)
    if overrides:
        raw = apply_overrides(raw, overrides)
    scenario = build_scenario(raw)
    logger.debug("Loaded scenario %s", path)
    return scenario
