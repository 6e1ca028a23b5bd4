#  tools/pipeline/simulate_run.py
"""
Simulation pipeline: run configuration → pulse-stream file.

Behavior:
- Build the DOPA operating point from the dopa section (target gains
  already resolved into κ and μ_gid)
- Emit the squeezed vacuum state with the probe blocked
- Sample one homodyne value per pulse along the configured LO ramp
- Write the stream (binary or CSV twin) with the resolved config, the RNG
  identifier and snl_raw = gain_raw² in its header

Output bytes depend only on the configuration; the worker count changes
speed, not content.
"""

from __future__ import annotations
import hashlib
from pathlib import Path
from typing import Any, Dict, Optional

import squeeze_config
from services.dopa import dopa_output_state, effective_gains
from services.estimators import to_db
from services.homodyne import expected_measured_variances, sample_pulse_arrays
from services.storage import RunConfig, build_header, save_pulse_stream


def default_stream_path(config: RunConfig, fmt: str = "bin") -> Path:
    path = Path(config.output.out_dir) / config.output.stream_name
    return path.with_suffix(".csv") if fmt == "csv" else path


def file_sha256(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def run_simulate(
    config: RunConfig,
    out_path: Optional[str | Path] = None,
    fmt: str = "bin",
    workers: Optional[int] = None,
) -> Dict[str, Any]:
    model = config.dopa.to_model()
    chain = config.detection.to_chain()
    scan = config.scan.to_scan()

    g_amp, g_deamp = effective_gains(model)
    state = dopa_output_state(model)
    expected_min, expected_max = expected_measured_variances(state, chain, include_elec=True)

    if squeeze_config.VERBOSE:
        print(f"🔬 DOPA gains: amplification {g_amp:.4f}, deamplification {g_deamp:.4f}")
        print(f"🔬 η = {chain.eta:.4f}, v_elec = {chain.v_elec:.4g} SNU, {scan.n_pulses} pulses")

    phases, values = sample_pulse_arrays(
        state,
        chain,
        scan,
        workers=workers if workers is not None else squeeze_config.WORKERS,
    )

    path = Path(out_path) if out_path is not None else default_stream_path(config, fmt)
    header = build_header(config, n_pulses=scan.n_pulses, snl_raw=chain.gain_raw ** 2)
    save_pulse_stream(path, header, (phases, values), fmt=fmt)

    return {
        "path": str(path),
        "format": fmt,
        "n_pulses": scan.n_pulses,
        "seed": scan.seed,
        "g_amp": g_amp,
        "g_deamp": g_deamp,
        "eta": chain.eta,
        "expected_min_db": to_db(expected_min),
        "expected_max_db": to_db(expected_max),
        "sha256": file_sha256(path),
    }
