#  tools/pipeline/calibrate_run.py
"""
Shot-noise calibration pipeline.

Behavior:
- Collect (n_lo, raw variance) pairs from one of three sources:
    a pairs CSV (n_lo,variance)
    vacuum pulse streams, one per LO level (n_lo from each header)
    a simulated LO scan of the configured detection chain (--levels)
- Fit variance against n_lo (with or without intercept)
- Report slope, intercept, R², snl_raw at the reference level and the
  shot-to-electronic ratio, passed when it reaches the threshold
- Warn for levels above the verified linearity ceiling
"""

from __future__ import annotations
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from squeeze_config import LO_LINEARITY_CEILING, SHOT_TO_ELEC_THRESHOLD_DB
from services.estimators import calibrate_from_pairs
from services.homodyne import shot_noise_scan
from services.storage import (
    RunConfig,
    load_pulse_stream,
    read_calibration_pairs,
    write_calibration_pairs,
    write_json,
)

DEFAULT_PULSES_PER_LEVEL = 100_000


def pairs_from_streams(paths: Sequence[str | Path]) -> List[Tuple[float, float]]:
    pairs = []
    for path in paths:
        stream = load_pulse_stream(path)
        if stream.n_pulses < 2:
            raise ValueError(f"{path}: need at least 2 pulses for a variance")
        n_lo = stream.run_config.detection.n_lo_photons
        pairs.append((float(n_lo), float(np.var(stream.values, ddof=1))))
    return pairs


def _warn_ceiling(pairs: Sequence[Tuple[float, float]]) -> List[float]:
    above = [n for n, _ in pairs if n > LO_LINEARITY_CEILING]
    if above:
        print(
            f"⚠️ {len(above)} LO level(s) above the verified linearity ceiling "
            f"of {LO_LINEARITY_CEILING:.3g} photons/pulse"
        )
    return above


def run_calibrate(
    config: RunConfig,
    out_dir: str | Path,
    pairs_csv: Optional[str | Path] = None,
    stream_paths: Sequence[str | Path] = (),
    levels: Optional[Sequence[float]] = None,
    pulses_per_level: int = DEFAULT_PULSES_PER_LEVEL,
    fit_intercept: bool = True,
    n_lo_ref: Optional[float] = None,
) -> Dict[str, Any]:
    sources = sum([pairs_csv is not None, bool(stream_paths), levels is not None])
    if sources != 1:
        raise ValueError("give exactly one of a pairs CSV, stream files or --levels")

    if pairs_csv is not None:
        source = "pairs_csv"
        pairs = read_calibration_pairs(pairs_csv)
        above = _warn_ceiling(pairs)
    elif stream_paths:
        source = "streams"
        pairs = pairs_from_streams(stream_paths)
        above = _warn_ceiling(pairs)
    else:
        source = "simulated_scan"
        pairs = shot_noise_scan(config.detection.to_chain(), list(levels), pulses_per_level, config.scan.seed)
        above = [n for n, _ in pairs if n > LO_LINEARITY_CEILING]

    reference = n_lo_ref if n_lo_ref is not None else config.detection.n_lo_photons
    calibration = calibrate_from_pairs(pairs, n_lo_ref=reference, fit_intercept=fit_intercept)

    ratio_db = calibration.shot_to_elec_db
    passed = bool(ratio_db >= SHOT_TO_ELEC_THRESHOLD_DB)

    out = Path(out_dir)
    write_calibration_pairs(out / "calibration_pairs.csv", pairs)
    write_json(out / "calibration.json", {
        "run_config": config.to_dict(),
        "source": source,
        "fit_intercept": fit_intercept,
        "calibration": calibration.to_dict(),
        "threshold_db": SHOT_TO_ELEC_THRESHOLD_DB,
        "passed": passed,
        "levels_above_ceiling": above,
        "pairs": [list(p) for p in pairs],
    })

    return {
        "calibration": calibration,
        "pairs": pairs,
        "source": source,
        "passed": passed,
        "levels_above_ceiling": above,
    }
