# services/storage/csv_tables.py
"""
Plot-ready and input CSV tables.

Every table is a header row plus numeric rows, comma-separated, "\\n"
line endings, floats written with 17 significant digits so they read back
to the same double. Readers are strict: the header must match, every row
must have the header's field count and every field must parse as a
finite number. Failures name the file and line.

Schemas:
    gain curve       p_pump_mw,g_amp,g_deamp[,weight]
    LO scan pairs    n_lo,variance
    noise trace      block_index,phase_mid,variance_snu,stderr_snu
    histogram        edge,count,model            (edge = left bin edge)
    model curve      p_pump_mw,g_amp_model,g_deamp_model,inv_g_deamp_model
    noise pulses     index,phase,value_snu
"""

from __future__ import annotations
import csv
import math
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from services.dopa import GainPoint
from services.estimators import Histogram, VarianceTrace
from .files import atomic_write

GAIN_COLUMNS = ("p_pump_mw", "g_amp", "g_deamp")
GAIN_OPTIONAL = ("weight",)
PAIR_COLUMNS = ("n_lo", "variance")
TRACE_COLUMNS = ("block_index", "phase_mid", "variance_snu", "stderr_snu")
HIST_COLUMNS = ("edge", "count", "model")
MODEL_CURVE_COLUMNS = ("p_pump_mw", "g_amp_model", "g_deamp_model", "inv_g_deamp_model")
PULSE_COLUMNS = ("index", "phase", "value_snu")


class CsvFormatError(ValueError):
    """Malformed CSV table."""


def format_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


# ═══════════════════════════════════════════════════════════════════════════════
# GENERIC
# ═══════════════════════════════════════════════════════════════════════════════

def write_table(path: str | Path, columns: Sequence[str], rows: Iterable[Sequence]) -> Path:
    def writer(f):
        out = csv.writer(f, lineterminator="\n")
        out.writerow(columns)
        for row in rows:
            out.writerow([format_value(v) for v in row])

    return atomic_write(path, writer, mode="w")


def _parse_number(path, line: int, column: str, text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise CsvFormatError(f"{path}:{line}: column {column!r} is not a number: {text!r}") from None
    if not math.isfinite(value):
        raise CsvFormatError(f"{path}:{line}: column {column!r} is not finite: {text!r}")
    return value


def read_table(
    path: str | Path,
    columns: Sequence[str],
    optional: Sequence[str] = (),
) -> List[Tuple[Optional[float], ...]]:
    """
    Rows as float tuples, one entry per required + optional column; optional
    columns absent from the header read as None.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise CsvFormatError(f"{path}: not UTF-8 text: {e}") from e

    reader = csv.reader(text.splitlines(), strict=True)
    try:
        header = next(reader)
    except StopIteration:
        raise CsvFormatError(f"{path}:1: empty file, expected header {','.join(columns)}") from None
    except csv.Error as e:
        raise CsvFormatError(f"{path}:1: {e}") from e

    header = [h.strip() for h in header]
    n_req = len(columns)
    if header[:n_req] != list(columns) or header[n_req:] != list(optional[: len(header) - n_req]):
        expected = ",".join(columns) + "".join(f"[,{c}]" for c in optional)
        raise CsvFormatError(f"{path}:1: header {','.join(header)!r} does not match {expected}")

    rows: List[Tuple[Optional[float], ...]] = []
    try:
        for fields in reader:
            line = reader.line_num
            if not fields:
                continue
            if len(fields) != len(header):
                raise CsvFormatError(
                    f"{path}:{line}: expected {len(header)} fields, got {len(fields)}"
                )
            values = [_parse_number(path, line, c, f.strip()) for c, f in zip(header, fields)]
            values += [None] * (n_req + len(optional) - len(values))
            rows.append(tuple(values))
    except csv.Error as e:
        raise CsvFormatError(f"{path}:{reader.line_num}: {e}") from e
    return rows


# ═══════════════════════════════════════════════════════════════════════════════
# INPUT TABLES
# ═══════════════════════════════════════════════════════════════════════════════

def read_gain_points(path: str | Path) -> List[GainPoint]:
    points = []
    for k, (p_pump, g_amp, g_deamp, weight) in enumerate(read_table(path, GAIN_COLUMNS, GAIN_OPTIONAL)):
        try:
            points.append(GainPoint(
                p_pump=p_pump,
                g_amp=g_amp,
                g_deamp=g_deamp,
                weight=1.0 if weight is None else weight,
            ))
        except ValueError as e:
            raise CsvFormatError(f"{path}:{k + 2}: {e}") from e
    if not points:
        raise CsvFormatError(f"{path}: no gain rows")
    return points


def write_gain_points(path: str | Path, points: Sequence[GainPoint]) -> Path:
    return write_table(
        path,
        GAIN_COLUMNS + GAIN_OPTIONAL,
        ((p.p_pump, p.g_amp, p.g_deamp, p.weight) for p in points),
    )


def read_calibration_pairs(path: str | Path) -> List[Tuple[float, float]]:
    pairs = []
    for k, (n_lo, variance) in enumerate(read_table(path, PAIR_COLUMNS)):
        if n_lo <= 0 or variance < 0:
            raise CsvFormatError(f"{path}:{k + 2}: n_lo must be > 0 and variance >= 0")
        pairs.append((n_lo, variance))
    if not pairs:
        raise CsvFormatError(f"{path}: no calibration rows")
    return pairs


def write_calibration_pairs(path: str | Path, pairs: Sequence[Tuple[float, float]]) -> Path:
    return write_table(path, PAIR_COLUMNS, pairs)


# ═══════════════════════════════════════════════════════════════════════════════
# PLOT TABLES
# ═══════════════════════════════════════════════════════════════════════════════

def write_trace_csv(path: str | Path, trace: Sequence[VarianceTrace]) -> Path:
    return write_table(
        path,
        TRACE_COLUMNS,
        ((t.block_index, t.phase_mid, t.variance_snu, t.stderr_snu) for t in trace),
    )


def write_histogram_csv(path: str | Path, hist: Histogram) -> Path:
    return write_table(
        path,
        HIST_COLUMNS,
        zip(hist.edges[:-1].tolist(), (int(c) for c in hist.counts), hist.model.tolist()),
    )


def write_model_curve_csv(path: str | Path, rows: Sequence[Dict[str, float]]) -> Path:
    return write_table(path, MODEL_CURVE_COLUMNS, ([row[c] for c in MODEL_CURVE_COLUMNS] for row in rows))


def write_pulses_csv(path: str | Path, indices: np.ndarray, phases: np.ndarray, values_snu: np.ndarray) -> Path:
    return write_table(
        path,
        PULSE_COLUMNS,
        zip((int(i) for i in indices), phases.tolist(), values_snu.tolist()),
    )
