# services/estimators/calibration.py
"""
Shot-noise calibration: raw detector units → shot-noise units.

Two inputs are accepted:
- (n_lo, raw variance) pairs from a LO scan: ordinary least squares of
  variance against n_lo; snl_raw = slope·n_lo_ref, v_elec_raw = intercept
- a single-level vacuum record: snl_raw = sample variance − v_elec_raw

Downstream, variances are divided by snl_raw and amplitudes by √snl_raw.
This is the only place raw values meet SNU.
"""

from __future__ import annotations
import math
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from .models import ShotNoiseCalibration


def _fit_through_origin(x: np.ndarray, y: np.ndarray) -> Tuple[float, float]:
    slope = float(x @ y / (x @ x))
    ss_res = float(np.sum((y - slope * x) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return slope, r_squared


def calibrate_from_pairs(
    pairs: Sequence[Tuple[float, float]],
    n_lo_ref: Optional[float] = None,
    fit_intercept: bool = True,
) -> ShotNoiseCalibration:
    """Linear calibration from (n_lo, raw variance) pairs."""
    if len(pairs) == 0:
        raise ValueError("no calibration pairs")
    x = np.array([p[0] for p in pairs], dtype=float)
    y = np.array([p[1] for p in pairs], dtype=float)
    if np.any(x <= 0):
        raise ValueError("LO levels must be positive")
    if n_lo_ref is None:
        n_lo_ref = float(x.max())

    if fit_intercept:
        if np.unique(x).size < 2:
            raise ValueError("degenerate design: at least 2 distinct LO levels are needed for an intercept")
        fit = stats.linregress(x, y)
        slope, intercept = float(fit.slope), float(fit.intercept)
        r_squared = float(fit.rvalue) ** 2 if np.ptp(y) > 0 else 1.0
    else:
        slope, r_squared = _fit_through_origin(x, y)
        intercept = 0.0

    snl_raw = slope * n_lo_ref
    if snl_raw <= 0:
        raise ValueError(f"calibration slope is not positive ({slope:.6g})")

    return ShotNoiseCalibration(
        snl_raw=snl_raw,
        v_elec_raw=intercept,
        slope=slope,
        intercept=intercept,
        r_squared=r_squared,
        n_lo_ref=float(n_lo_ref),
        n_levels=int(np.unique(x).size),
    )


def calibrate_from_vacuum(
    samples: Sequence[float] | np.ndarray,
    n_lo: float,
    v_elec_raw: Optional[float] = None,
) -> ShotNoiseCalibration:
    """Single-level calibration; the electronic floor must be supplied or is taken as 0."""
    data = np.asarray(samples, dtype=float)
    if data.size < 2:
        raise ValueError("need at least 2 vacuum samples")
    floor = 0.0 if v_elec_raw is None else float(v_elec_raw)
    snl_raw = float(np.var(data, ddof=1)) - floor
    if snl_raw <= 0:
        raise ValueError("electronic floor exceeds the measured vacuum variance")
    return ShotNoiseCalibration(
        snl_raw=snl_raw,
        v_elec_raw=floor,
        slope=snl_raw / n_lo,
        intercept=floor,
        r_squared=math.nan,
        n_lo_ref=float(n_lo),
        n_levels=1,
    )


def calibrate_shot_noise(
    pairs: Optional[Sequence[Tuple[float, float]]] = None,
    samples: Optional[Sequence[float] | np.ndarray] = None,
    n_lo_ref: Optional[float] = None,
    fit_intercept: bool = True,
    v_elec_raw: Optional[float] = None,
) -> ShotNoiseCalibration:
    """Dispatch to the LO-scan fit or the single-level vacuum calibration."""
    if (pairs is None) == (samples is None):
        raise ValueError("pass either LO-scan pairs or a vacuum sample record")
    if pairs is not None:
        return calibrate_from_pairs(pairs, n_lo_ref=n_lo_ref, fit_intercept=fit_intercept)
    if n_lo_ref is None:
        raise ValueError("a vacuum record needs its LO level")
    return calibrate_from_vacuum(samples, n_lo=n_lo_ref, v_elec_raw=v_elec_raw)
