#  tools/pipeline/fit_gain_run.py
"""
Gain-curve fit pipeline: gain CSV → κ (and μ_gid) + model curve.

The model curve spans 0 to the largest measured pump power, so it can be
overlaid on all the data including the rows excluded by --max-pump-mw.
Above the fit range the measured points are expected to leave the
plane-wave curve; gain_product_at_max_pump shows how far the fitted
model itself departs from g_amp·g_deamp = 1.
"""

from __future__ import annotations
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np

from services.dopa import fit_gain_curve, model_curve
from services.storage import read_gain_points, write_json, write_model_curve_csv

DEFAULT_CURVE_POINTS = 101


def run_fit_gain(
    csv_path: str | Path,
    out_dir: str | Path,
    fit_mu: bool = False,
    max_pump_mw: Optional[float] = None,
    curve_points: int = DEFAULT_CURVE_POINTS,
) -> Dict[str, Any]:
    points = read_gain_points(csv_path)
    result = fit_gain_curve(points, fit_mu=fit_mu, max_pump_mw=max_pump_mw)

    p_top = max(p.p_pump for p in points)
    rows = model_curve(result.kappa, result.mu_gid, np.linspace(0.0, p_top, curve_points))
    top = rows[-1]

    out = Path(out_dir)
    write_model_curve_csv(out / "model_curve.csv", rows)
    summary = {
        "input": Path(csv_path).name,
        "fit": result.to_dict(),
        "gain_product_at_max_pump": top["g_amp_model"] * top["g_deamp_model"],
        "model_curve": "model_curve.csv",
    }
    write_json(out / "gain_fit.json", summary)
    return {"result": result, "curve": rows, **summary}
