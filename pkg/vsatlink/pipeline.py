"""End-to-end runs: modem -> channel -> receiver -> analysis, and parameter sweeps."""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
from django import forms

from . import artifacts
from .analysis import (
    constellation_snapshot,
    estimate_delay_bits,
    estimate_psd,
    measure_ber,
    theoretical_qam_ber,
)
from .channel import NORMALIZED, LinkChannel
from .exceptions import ConfigError, PipelineError
from .frames import ComplexFrame
from .modem import generate_bits, qam_demodulate, qam_modulate, rx_match, tx_shape
from .receiver import Receiver
from .scenario import SECTIONS, apply_overrides, build_scenario

logger = logging.getLogger(__name__)

# Below this BER a disagreement between the analytic and the correlation delay is suspicious.
DELAY_CHECK_MAX_BER = 0.01


@dataclass(frozen=True)
class SimulationResult:
    ber: object
    run_log: dict
    output_dir: object = None


@contextmanager
def stage(name):
    logger.debug("Stage %s started", name)
    try:
        yield
    except PipelineError:
        raise
    except Exception as e:
        logger.error("Stage %s failed: %s", name, e)
        raise PipelineError(name, e) from e
    logger.debug("Stage %s finished", name)


def derive_seeds(master_seed):
    """Independent bit-source and noise seeds from the master seed (numpy SeedSequence)."""
    bit_seed, noise_seed = np.random.SeedSequence(master_seed).generate_state(2)
    return int(bit_seed), int(noise_seed)


def _frames(waveform, samples_per_frame):
    for start in range(0, len(waveform), samples_per_frame):
        yield waveform.replace(waveform.samples[start:start + samples_per_frame])


def _concat(frames, sample_rate_hz):
    return ComplexFrame(np.concatenate([f.samples for f in frames]), sample_rate_hz)


def run_simulation(scenario, output_dir=None, frame_log_every=500):
    cfg = scenario.modem
    bit_seed, noise_seed = derive_seeds(scenario.seed)
    impairments = replace(scenario.impairments, seed=noise_seed)

    with stage("modem"):
        bits = generate_bits(scenario.total_bits, scenario.p_one, bit_seed)
        symbols = qam_modulate(bits, cfg)
        tx = tx_shape(symbols, cfg)
    logger.info("Modulated %d bits into %d samples at %.0f Hz", len(bits), len(tx), tx.sample_rate_hz)

    samples_per_frame = cfg.frame_len // cfg.bits_per_symbol * cfg.samples_per_symbol
    with stage("channel"):
        channel = LinkChannel(scenario.gains, scenario.saleh, impairments, scenario.mode,
                              scenario.target_es_n0_db, cfg.samples_per_symbol)
        channel.calibrate(tx)
    # The corrector removes the injected offset plus the amplifier AM/PM rotation.
    correction_deg = scenario.impairments.phase_offset_deg + channel.amplifier_phase_deg
    logger.info("Phase correction %.4f deg (amplifier %.4f deg)", correction_deg, channel.amplifier_phase_deg)
    receiver = Receiver(scenario.compensation, scenario.agc,
                        correction_deg, scenario.impairments.freq_offset_hz)

    received, compensated = [], []
    for index, frame in enumerate(_frames(tx, samples_per_frame)):
        with stage("channel"):
            out = channel.process(frame)
        with stage("receiver"):
            received.append(out)
            compensated.append(receiver.process(out))
        if frame_log_every and (index + 1) % frame_log_every == 0:
            logger.info("Processed %d frames", index + 1)

    with stage("receiver"):
        rx = _concat(received, tx.sample_rate_hz)
        pre = rx_match(rx, cfg)
        post = rx_match(_concat(compensated, tx.sample_rate_hz), cfg)
        rx_bits = qam_demodulate(post, cfg)

    with stage("analysis"):
        delay = cfg.delay_bits
        report = measure_ber(bits, rx_bits, delay)
        measured_delay = estimate_delay_bits(bits, rx_bits, 2 * delay)
        if measured_delay != delay and report.ber < DELAY_CHECK_MAX_BER:
            logger.warning("Correlation delay %d bits disagrees with analytic delay %d bits",
                           measured_delay, delay)
        skip = 2 * cfg.filter_span_symbols
        points = scenario.constellation_points
        snapshots = {
            artifacts.CONSTELLATION_TX_FILE: constellation_snapshot(symbols, points),
            artifacts.CONSTELLATION_PRE_FILE: constellation_snapshot(pre, points, skip),
            artifacts.CONSTELLATION_POST_FILE: constellation_snapshot(post, points, skip),
        }
        spectra = {
            artifacts.SPECTRUM_TX_FILE: estimate_psd(tx, scenario.psd_segment_len, scenario.psd_overlap),
            artifacts.SPECTRUM_RX_FILE: estimate_psd(rx, scenario.psd_segment_len, scenario.psd_overlap),
        }
    logger.info("BER %.6g (%d errors in %d bits)", report.ber, report.bit_errors, report.bits_compared)

    ber_payload = report.to_dict()
    if scenario.mode == NORMALIZED:
        ber_payload["theoretical_ber"] = float(theoretical_qam_ber(scenario.target_es_n0_db, cfg.m_ary))

    effective = scenario.to_dict()
    effective["impairments"]["seed"] = noise_seed
    run_log = {
        "scenario": effective,
        "seeds": {"master": scenario.seed, "bits": bit_seed, "noise": noise_seed},
        "derived": {
            "symbol_rate_hz": cfg.symbol_rate_hz,
            "sample_rate_hz": cfg.sample_rate_hz,
            "samples_per_frame": samples_per_frame,
            "frames": len(received),
            "tx_mean_power": tx.mean_power(),
        },
        "channel": channel.effective_parameters(),
        "receiver": receiver.state(),
        "psd_power": {
            "tx": spectra[artifacts.SPECTRUM_TX_FILE].total_power(),
            "rx": spectra[artifacts.SPECTRUM_RX_FILE].total_power(),
        },
        "alignment": {"analytic_delay_bits": delay, "correlation_delay_bits": measured_delay},
        "ber": ber_payload,
    }

    if output_dir is not None:
        with stage("artifacts"):
            out = Path(output_dir)
            artifacts.write_json(out / artifacts.BER_FILE, ber_payload)
            for name, snapshot in snapshots.items():
                artifacts.write_constellation(out / name, snapshot)
            for name, spectrum in spectra.items():
                artifacts.write_spectrum(out / name, spectrum)
            artifacts.write_json(out / artifacts.RUN_LOG_FILE, run_log)
        logger.info("Artifacts written to %s", out)

    return SimulationResult(ber=report, run_log=run_log, output_dir=output_dir)


# Sweeps

def parse_range(spec):
    """"a:b:step" -> values from a to b inclusive."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError(f"sweep.values: expected start:stop:step, got {spec!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise ConfigError(f"sweep.values: non-numeric range {spec!r}")
    if not step > 0 or stop < start:
        raise ConfigError(f"sweep.values: {spec!r} is an empty range")
    count = math.floor((stop - start) / step + 1e-9) + 1
    return [start + i * step for i in range(count)]


def resolve_sweep_key(param):
    """Dotted section.key; a bare key means the run section."""
    section, _, key = param.rpartition(".")
    section = section or "run"
    form_class = SECTIONS.get(section, (None, None))[0]
    if form_class is None or key not in form_class.base_fields:
        raise ConfigError(f"sweep.param: {param!r} is not a scenario key")
    if key == "seed" and section == "run":
        raise ConfigError("sweep.param: the seed is derived per point and cannot be swept")
    if not isinstance(form_class.base_fields[key], forms.IntegerField):
        raise ConfigError(f"sweep.param: {param!r} is not a numeric scalar")
    return f"{section}.{key}"


def point_seeds(master_seed, count):
    return [int(child.generate_state(1)[0])
            for child in np.random.SeedSequence(master_seed).spawn(count)]


def _sweep_point(scenario):
    report = run_simulation(scenario, frame_log_every=0).ber
    return report.ber, report.bit_errors, report.bits_compared


def run_sweep(raw, param, values, output_csv=None, workers=1):
    if not values:
        raise ConfigError("sweep.values: zero-length sweep")
    key = resolve_sweep_key(param)
    master = build_scenario(raw).seed
    scenarios = [
        build_scenario(apply_overrides(raw, {key: value, "run.seed": seed}))
        for value, seed in zip(values, point_seeds(master, len(values)))
    ]
    logger.info("Sweeping %s over %d points with %d worker(s)", key, len(values), workers)

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_point, scenarios))
    else:
        results = [_sweep_point(s) for s in scenarios]

    rows = [(value, ber, errors, bits) for value, (ber, errors, bits) in zip(values, results)]
    if output_csv is not None:
        with stage("artifacts"):
            artifacts.write_sweep(output_csv, rows)
    return rows
