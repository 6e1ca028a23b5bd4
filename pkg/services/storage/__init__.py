"""
Run configuration and file formats.

Usage:
    from services.storage import load_run_config, build_header, save_pulse_stream, load_pulse_stream

    config = load_run_config("configs/measured_operating_point.json")
    header = build_header(config, n_pulses=len(values), snl_raw=1.0)
    save_pulse_stream("out/stream.sqzp", header, (phases, values))
    stream = load_pulse_stream("out/stream.sqzp")
"""

from .run_config import (
    RunConfig,
    DopaSection,
    DetectionSection,
    ScanSection,
    MetaSection,
    OutputSection,
    parse_run_config,
    load_run_config,
    with_overrides,
)

from .files import (
    atomic_write,
    write_json,
)

from .csv_tables import (
    CsvFormatError,
    format_value,
    write_table,
    read_table,
    read_gain_points,
    write_gain_points,
    read_calibration_pairs,
    write_calibration_pairs,
    write_trace_csv,
    write_histogram_csv,
    write_model_curve_csv,
    write_pulses_csv,
)

from .pulse_stream import (
    MAGIC,
    FORMAT_VERSION,
    StreamFormatError,
    PulseStream,
    build_header,
    encode_header,
    write_stream,
    read_stream,
    write_stream_csv,
    read_stream_csv,
    header_sidecar,
    save_pulse_stream,
    load_pulse_stream,
)

__all__ = [
    # Config
    "RunConfig",
    "DopaSection",
    "DetectionSection",
    "ScanSection",
    "MetaSection",
    "OutputSection",
    "parse_run_config",
    "load_run_config",
    "with_overrides",

    # Files
    "atomic_write",
    "write_json",

    # CSV
    "CsvFormatError",
    "format_value",
    "write_table",
    "read_table",
    "read_gain_points",
    "write_gain_points",
    "read_calibration_pairs",
    "write_calibration_pairs",
    "write_trace_csv",
    "write_histogram_csv",
    "write_model_curve_csv",
    "write_pulses_csv",

    # Pulse streams
    "MAGIC",
    "FORMAT_VERSION",
    "StreamFormatError",
    "PulseStream",
    "build_header",
    "encode_header",
    "write_stream",
    "read_stream",
    "write_stream_csv",
    "read_stream_csv",
    "header_sidecar",
    "save_pulse_stream",
    "load_pulse_stream",
]
