#  tools/pipeline/infer_run.py
"""
Squeezing inferred from classical gains and the detection efficiency,
with first-order uncertainties. Optionally compares a measured squeezing
level against the deamplification gain to back out the efficiency.
"""

from __future__ import annotations
from typing import Any, Dict, List, Optional

from squeeze_config import MEASURED_ETA_SIGMA, MEASURED_G_AMP_SIGMA, MEASURED_G_DEAMP_SIGMA
from services.estimators import (
    cross_check_efficiency,
    from_db,
    infer_squeezing_from_gains,
    propagate_inference_uncertainty,
)
from services.homodyne import DetectionChain


def plane_wave_warnings(g_amp: float, g_deamp: float) -> List[str]:
    warnings = []
    if g_deamp > 1.0:
        warnings.append(f"deamplification gain exceeds unity ({g_deamp:g})")
    if g_amp < 1.0:
        warnings.append(f"amplification gain below unity ({g_amp:g})")
    if g_amp * g_deamp > 1.0 + 1e-12:
        warnings.append(
            f"g_amp·g_deamp = {g_amp * g_deamp:.4f} > 1: excess noise beyond the plane-wave model"
        )
    return warnings


def run_infer(
    g_amp: float,
    g_deamp: float,
    eta_t: float,
    eta_h: float,
    eta_d: float,
    sigma_amp: float = MEASURED_G_AMP_SIGMA,
    sigma_deamp: float = MEASURED_G_DEAMP_SIGMA,
    sigma_eta: float = MEASURED_ETA_SIGMA,
    plane_wave_check: bool = False,
    measured_db: Optional[float] = None,
    v_elec: float = 0.0,
) -> Dict[str, Any]:
    eta = DetectionChain(eta_t=eta_t, eta_h=eta_h, eta_d=eta_d).eta

    warnings = plane_wave_warnings(g_amp, g_deamp) if plane_wave_check else []
    for warning in warnings:
        print(f"⚠️ {warning}")

    sq_db, anti_db = infer_squeezing_from_gains(g_amp, g_deamp, eta)
    sq_err, anti_err = propagate_inference_uncertainty(
        g_amp, sigma_amp, g_deamp, sigma_deamp, eta, sigma_eta
    )

    summary: Dict[str, Any] = {
        "eta": eta,
        "squeezed_db": sq_db,
        "squeezed_db_err": sq_err,
        "anti_squeezed_db": anti_db,
        "anti_squeezed_db_err": anti_err,
        "warnings": warnings,
    }
    if measured_db is not None:
        summary["measured_db"] = measured_db
        summary["eta_implied"] = cross_check_efficiency(g_deamp, from_db(measured_db), v_elec)
    return summary
