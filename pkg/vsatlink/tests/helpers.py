import csv
from pathlib import Path

from django.conf import settings

from vsatlink.artifacts import write_json
from vsatlink.scenario import apply_overrides, build_scenario, read_scenario_file

SHIPPED_SCENARIO = settings.VSATLINK["DEFAULT_SCENARIO"]

# Impairment-free link in normalized mode: ideal amplifier, no rotation, no compensation.
CLEAN_NORMALIZED = {
    "run.mode": "normalized",
    "run.target_es_n0_db": 300.0,
    "saleh.enabled": False,
    "impairments.phase_offset_deg": 0.0,
    "impairments.freq_offset_hz": 0.0,
    "compensation.dc": False,
    "compensation.agc": False,
    "compensation.phase_freq": False,
}

# Saleh amplifier driven far below compression, so it behaves as a linear gain.
BACKED_OFF_TWTA = {
    "saleh.input_scale_db": -60.0,
    "saleh.output_scale_db": 60.0,
}

COMPENSATION_OFF = {
    "compensation.dc": False,
    "compensation.agc": False,
    "compensation.phase_freq": False,
}


def shipped_raw():
    return read_scenario_file(SHIPPED_SCENARIO)


def _merged(override_sets, overrides):
    merged = {}
    for o in override_sets:
        merged.update(o)
    merged.update({k.replace("__", "."): v for k, v in overrides.items()})
    return merged


def scenario_with(*override_sets, **overrides):
    return build_scenario(apply_overrides(shipped_raw(), _merged(override_sets, overrides)))


def write_scenario(directory, *override_sets, raw=None, **overrides):
    """Shipped scenario (or raw) with overrides applied, saved as JSON; returns the path."""
    raw = shipped_raw() if raw is None else raw
    payload = apply_overrides(raw, _merged(override_sets, overrides))
    return str(write_json(Path(directory) / "scenario.json", payload))


def read_csv(path):
    """Header and rows of a CSV artifact, values as floats."""
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader)
        return header, [[float(v) for v in row] for row in reader]
