#  tools/pipeline/analyze_run.py
"""
Analysis pipeline: pulse-stream file → squeezing report + plot tables.

Behavior:
- Read the stream (format chosen by suffix) and its resolved config
- Convert raw values to SNU with snl_raw from the header or the caller
- Block variances over fixed-size blocks → trace.csv
- Extremal variances (sinusoid fit, min/max fallback) → report.json
- Pulses within ±window of the squeezed and anti-squeezed LO phases
  (mod π) → Gaussian fit with KS distance and hist_min.csv / hist_max.csv
- Optionally every N-th pulse in SNU → pulses.csv

All outputs land in one directory and are byte-identical for the same
input stream and options.
"""

from __future__ import annotations
import math
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np

import squeeze_config
from squeeze_config import DEFAULT_HIST_BINS, DEFAULT_HIST_WINDOW_RAD, MIN_FIT_SAMPLES
from services.dopa import effective_gains
from services.estimators import (
    SqueezingReport,
    block_variances,
    extremal_variances,
    gaussian_fit,
    histogram,
    infer_squeezing_from_gains,
)
from services.storage import (
    load_pulse_stream,
    write_histogram_csv,
    write_json,
    write_pulses_csv,
    write_trace_csv,
)

HIST_HALF_RANGE_SIGMAS = 5.0


def phase_window_mask(phases: np.ndarray, center: float, half_width: float) -> np.ndarray:
    """Pulses whose LO phase lies within half_width of center, modulo π."""
    distance = np.abs((phases - center + math.pi / 2.0) % math.pi - math.pi / 2.0)
    return distance <= half_width


def squeezed_phase(report: SqueezingReport, trace) -> float:
    if report.fit_phase_rad is not None:
        return report.fit_phase_rad
    usable = [t for t in trace if not t.degenerate]
    return min(usable, key=lambda t: t.variance_snu).phase_mid


def _window_histogram(values_snu: np.ndarray, mask: np.ndarray, half_range: float, n_bins: int, label: str):
    selected = values_snu[mask]
    fit = None
    if selected.size >= MIN_FIT_SAMPLES and np.ptp(selected) > 0:
        fit = gaussian_fit(selected)
        if not fit.passes_ks:
            print(
                f"⚠️ {label} window: KS distance {fit.ks_statistic:.4f} exceeds "
                f"the 1 % critical value {fit.ks_critical:.4f}"
            )
    else:
        print(f"⚠️ {label} window holds {selected.size} pulse(s); no Gaussian fit")
    hist = histogram(selected, n_bins, (-half_range, half_range), fit=fit)
    return hist, fit, int(selected.size)


def run_analyze(
    stream_path: str | Path,
    out_dir: str | Path,
    snl_raw: Optional[float] = None,
    block_size: Optional[int] = None,
    correct_elec: bool = False,
    hist_bins: int = DEFAULT_HIST_BINS,
    hist_window_rad: float = DEFAULT_HIST_WINDOW_RAD,
    pulses_csv_every: Optional[int] = None,
) -> Dict[str, Any]:
    stream = load_pulse_stream(stream_path)
    config = stream.run_config

    snl = snl_raw if snl_raw is not None else stream.snl_raw
    if snl is None:
        raise ValueError(f"missing calibration: {stream_path} carries no snl_raw; pass --snl")
    if snl <= 0:
        raise ValueError(f"snl_raw must be positive, got {snl}")
    bs = block_size if block_size is not None else config.scan.block_size

    chain = config.detection.to_chain()
    g_amp, g_deamp = effective_gains(config.dopa.to_model())
    inferred = infer_squeezing_from_gains(g_amp, g_deamp, chain.eta)

    trace = block_variances((stream.phases, stream.values), bs, snl_raw=snl)
    report = extremal_variances(
        trace,
        eta=chain.eta,
        v_elec=chain.v_elec,
        correct_elec=correct_elec,
        inferred_from_gains=inferred,
    )
    if squeeze_config.VERBOSE:
        print(f"📊 {len(trace)} blocks of {bs} pulses, method {report.method}")

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    names = config.output
    write_trace_csv(out / names.trace_csv, trace)

    values_snu = stream.values / math.sqrt(snl)
    theta_min = squeezed_phase(report, trace)
    theta_max = (theta_min + math.pi / 2.0) % math.pi
    v_largest = max(max(t.variance_snu for t in trace), 1.0)
    half_range = HIST_HALF_RANGE_SIGMAS * math.sqrt(v_largest)

    distributions = {}
    for label, center, filename in (
        ("min", theta_min, names.hist_min_csv),
        ("max", theta_max, names.hist_max_csv),
    ):
        mask = phase_window_mask(stream.phases, center, hist_window_rad)
        hist, fit, count = _window_histogram(values_snu, mask, half_range, hist_bins, label)
        write_histogram_csv(out / filename, hist)
        distributions[label] = {
            "phase_rad": center,
            "n_samples": count,
            "fit": None if fit is None else fit.to_dict(),
        }

    outputs = [names.trace_csv, names.hist_min_csv, names.hist_max_csv, names.report_json]
    if pulses_csv_every is not None:
        if pulses_csv_every < 1:
            raise ValueError(f"pulse decimation must be >= 1, got {pulses_csv_every}")
        idx = np.arange(0, stream.n_pulses, pulses_csv_every)
        write_pulses_csv(out / "pulses.csv", idx, stream.phases[idx], values_snu[idx])
        outputs.append("pulses.csv")

    document = {
        "stream": Path(stream_path).name,
        "run_config": config.to_dict(),
        "rng": stream.header.get("rng"),
        "snl_raw": snl,
        "block_size": bs,
        "report": report.to_dict(),
        "distributions": distributions,
        "outputs": outputs,
    }
    write_json(out / names.report_json, document)

    return {"report": report, "trace": trace, "distributions": distributions, "out_dir": str(out)}
