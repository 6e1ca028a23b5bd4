# services/storage/pulse_stream.py
"""
Pulse-stream files.

Binary layout (little-endian throughout):
    magic          4 bytes   b"SQZP"
    version        u16
    header_len     u32
    header         header_len bytes of UTF-8 JSON (sorted keys, compact)
    records        n_pulses × (phase <f8, value <f8), index implicit

The header holds the resolved run configuration, the RNG identifier, the
declared pulse count, the record layout and snl_raw when the stream is
calibrated. Nothing time-dependent goes in, so a fixed configuration
always produces the same bytes.

The CSV twin stores the same records as index,phase,value with the header
JSON beside it in <name>.header.json.
"""

from __future__ import annotations
import json
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import numpy as np
from pydantic import ValidationError

import squeeze_config
from services.homodyne import rng_identifier
from .csv_tables import CsvFormatError, read_table, write_table
from .files import atomic_write
from .run_config import RunConfig, parse_run_config

MAGIC = b"SQZP"
FORMAT_VERSION = 1
PREFIX = struct.Struct("<4sHI")
RECORD_DTYPE = np.dtype([("phase", "<f8"), ("value", "<f8")])
RECORD_LAYOUT = "phase:<f8,value:<f8"
STREAM_CSV_COLUMNS = ("index", "phase", "value")


class StreamFormatError(ValueError):
    """Malformed pulse-stream file."""


# ═══════════════════════════════════════════════════════════════════════════════
# MODEL
# ═══════════════════════════════════════════════════════════════════════════════

@dataclass
class PulseStream:
    header: Dict[str, Any]
    phases: np.ndarray
    values: np.ndarray

    @property
    def n_pulses(self) -> int:
        return int(self.values.size)

    @property
    def snl_raw(self) -> Optional[float]:
        value = self.header.get("snl_raw")
        return None if value is None else float(value)

    @property
    def run_config(self) -> RunConfig:
        return parse_run_config(self.header["run_config"])

    @property
    def header_text(self) -> str:
        return encode_header(self.header).decode("utf-8")


def build_header(config: RunConfig, n_pulses: int, snl_raw: Optional[float] = None) -> Dict[str, Any]:
    return {
        "format": "SQZP",
        "version": FORMAT_VERSION,
        "run_config": config.to_dict(),
        "rng": rng_identifier(),
        "n_pulses": int(n_pulses),
        "record_layout": RECORD_LAYOUT,
        "snl_raw": None if snl_raw is None else float(snl_raw),
    }


def encode_header(header: Dict[str, Any]) -> bytes:
    return json.dumps(header, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


def _check_run_config(path, header: Dict[str, Any]) -> None:
    """The header must echo a valid RunConfig."""
    if not isinstance(header.get("run_config"), dict):
        raise StreamFormatError(f"{path}: header carries no run_config echo")
    try:
        parse_run_config(header["run_config"])
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(part) for part in first["loc"])
        raise StreamFormatError(f"{path}: header run_config is invalid at {where or '<root>'}: {first['msg']}") from e


# ═══════════════════════════════════════════════════════════════════════════════
# BINARY
# ═══════════════════════════════════════════════════════════════════════════════

def _records(phases: np.ndarray, values: np.ndarray) -> np.ndarray:
    phases = np.asarray(phases, dtype=float)
    values = np.asarray(values, dtype=float)
    if phases.shape != values.shape or phases.ndim != 1:
        raise ValueError("phases and values must be 1-D arrays of equal length")
    records = np.empty(values.size, dtype=RECORD_DTYPE)
    records["phase"] = phases
    records["value"] = values
    return records


def write_stream(path: str | Path, header: Dict[str, Any], phases: np.ndarray, values: np.ndarray) -> Path:
    records = _records(phases, values)
    if header.get("n_pulses") != records.size:
        raise ValueError(f"header declares {header.get('n_pulses')} pulses, got {records.size}")
    header_bytes = encode_header(header)

    def writer(f):
        f.write(PREFIX.pack(MAGIC, FORMAT_VERSION, len(header_bytes)))
        f.write(header_bytes)
        f.write(records.tobytes())

    out = atomic_write(path, writer)
    if squeeze_config.VERBOSE:
        print(f"📁 wrote {records.size} pulses to {out}")
    return out


def read_stream(path: str | Path) -> PulseStream:
    data = Path(path).read_bytes()
    if len(data) < PREFIX.size:
        raise StreamFormatError(
            f"{path}: truncated at byte offset {len(data)}, prefix needs {PREFIX.size} bytes"
        )
    magic, version, header_len = PREFIX.unpack_from(data, 0)
    if magic != MAGIC:
        raise StreamFormatError(f"{path}: bad magic bytes {magic!r}, expected {MAGIC!r}")
    if version != FORMAT_VERSION:
        raise StreamFormatError(f"{path}: unsupported format version {version} (reader handles {FORMAT_VERSION})")

    header_end = PREFIX.size + header_len
    if len(data) < header_end:
        raise StreamFormatError(
            f"{path}: truncated at byte offset {len(data)} inside the header (ends at {header_end})"
        )
    try:
        header = json.loads(data[PREFIX.size:header_end].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise StreamFormatError(f"{path}: header is not valid UTF-8 JSON: {e}") from e
    if not isinstance(header, dict) or not isinstance(header.get("n_pulses"), int) or header["n_pulses"] < 0:
        raise StreamFormatError(f"{path}: header does not declare n_pulses")
    _check_run_config(path, header)

    n_pulses = header["n_pulses"]
    expected_end = header_end + n_pulses * RECORD_DTYPE.itemsize
    if len(data) < expected_end:
        complete = (len(data) - header_end) // RECORD_DTYPE.itemsize
        raise StreamFormatError(
            f"{path}: truncated at byte offset {len(data)}: {complete} of {n_pulses} records present, "
            f"expected {expected_end} bytes"
        )
    if len(data) > expected_end:
        raise StreamFormatError(
            f"{path}: {len(data) - expected_end} unexpected trailing bytes after offset {expected_end}"
        )

    records = np.frombuffer(data, dtype=RECORD_DTYPE, count=n_pulses, offset=header_end)
    return PulseStream(
        header=header,
        phases=records["phase"].astype(float),
        values=records["value"].astype(float),
    )


# ═══════════════════════════════════════════════════════════════════════════════
# CSV TWIN
# ═══════════════════════════════════════════════════════════════════════════════

def header_sidecar(path: str | Path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".header.json")


def write_stream_csv(path: str | Path, header: Dict[str, Any], phases: np.ndarray, values: np.ndarray) -> Path:
    records = _records(phases, values)
    if header.get("n_pulses") != records.size:
        raise ValueError(f"header declares {header.get('n_pulses')} pulses, got {records.size}")
    rows = (
        (i, p, v)
        for i, (p, v) in enumerate(zip(records["phase"].tolist(), records["value"].tolist()))
    )
    header_bytes = encode_header(header)
    atomic_write(header_sidecar(path), lambda f: f.write(header_bytes))
    return write_table(path, STREAM_CSV_COLUMNS, rows)


def read_stream_csv(path: str | Path) -> PulseStream:
    sidecar = header_sidecar(path)
    if not sidecar.exists():
        raise StreamFormatError(f"{path}: missing header file {sidecar.name}")
    try:
        header = json.loads(sidecar.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise StreamFormatError(f"{sidecar}: header is not valid JSON: {e}") from e
    if not isinstance(header, dict):
        raise StreamFormatError(f"{sidecar}: header must be a JSON object")
    _check_run_config(sidecar, header)

    rows = read_table(path, STREAM_CSV_COLUMNS)
    for k, row in enumerate(rows):
        if int(row[0]) != k:
            raise CsvFormatError(f"{path}:{k + 2}: index {int(row[0])} out of sequence, expected {k}")
    if header.get("n_pulses") != len(rows):
        raise StreamFormatError(
            f"{path}: header declares {header.get('n_pulses')} pulses, file holds {len(rows)}"
        )
    phases = np.array([row[1] for row in rows], dtype=float)
    values = np.array([row[2] for row in rows], dtype=float)
    return PulseStream(header=header, phases=phases, values=values)


# ═══════════════════════════════════════════════════════════════════════════════
# DISPATCH
# ═══════════════════════════════════════════════════════════════════════════════

def stream_format_for(path: str | Path) -> str:
    return "csv" if Path(path).suffix.lower() == ".csv" else "bin"


def save_pulse_stream(
    path: str | Path,
    header: Dict[str, Any],
    arrays: Tuple[np.ndarray, np.ndarray],
    fmt: str = "bin",
) -> Path:
    phases, values = arrays
    if fmt == "csv":
        return write_stream_csv(path, header, phases, values)
    if fmt == "bin":
        return write_stream(path, header, phases, values)
    raise ValueError(f"unknown stream format {fmt!r}")


def load_pulse_stream(path: str | Path) -> PulseStream:
    """Read either format, chosen by file suffix."""
    if stream_format_for(path) == "csv":
        return read_stream_csv(path)
    return read_stream(path)
