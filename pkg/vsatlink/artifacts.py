"""Output files. Each is written to a temporary sibling and renamed into place."""

import csv
import io
import json
import os
import tempfile
from pathlib import Path

CONSTELLATION_HEADER = ("re", "im")
SPECTRUM_HEADER = ("freq_hz", "psd_w_per_hz")
SWEEP_HEADER = ("swept_value", "ber", "errors", "bits")

BER_FILE = "ber.json"
RUN_LOG_FILE = "run_log.json"
CONSTELLATION_TX_FILE = "constellation_tx.csv"
CONSTELLATION_PRE_FILE = "constellation_rx_precorrection.csv"
CONSTELLATION_POST_FILE = "constellation_rx_postcorrection.csv"
SPECTRUM_TX_FILE = "spectrum_tx.csv"
SPECTRUM_RX_FILE = "spectrum_rx.csv"


def write_atomic(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def write_json(path, payload):
    return write_atomic(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def write_csv(path, header, rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([float(v) if not isinstance(v, int) else v for v in row])
    return write_atomic(path, buffer.getvalue())


def write_constellation(path, points):
    return write_csv(path, CONSTELLATION_HEADER, points.tolist())


def write_spectrum(path, spectrum):
    rows = zip(spectrum.frequencies_hz.tolist(), spectrum.psd_w_per_hz.tolist())
    return write_csv(path, SPECTRUM_HEADER, rows)


def write_sweep(path, rows):
    return write_csv(path, SWEEP_HEADER, rows)

