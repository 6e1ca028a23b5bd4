# services/estimators/extremal.py
"""
Extremal quadrature variances from a block-variance trace.

Two estimates are produced:
- min/max block: what the trace shows directly, 1σ from the block stderr
- sinusoid fit: V(θ) = a + b·cos(2θ − c) by ordinary least squares on
  [1, cos 2θ, sin 2θ]; extremes a ∓ |b|. Parameter covariance uses the
  per-block standard errors (sandwich form), so the unweighted fit stays
  unbiased while its error bars follow the Gaussian block model.

The fit needs at least 3 blocks spanning more than π of LO phase.
"""

from __future__ import annotations
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .inference import db_uncertainty, to_db
from .models import SqueezingReport, VarianceTrace


def phase_coverage(trace: Sequence[VarianceTrace]) -> float:
    phases = [t.phase_mid for t in trace]
    return max(phases) - min(phases) if phases else 0.0


def fit_sinusoid(trace: Sequence[VarianceTrace]) -> Tuple[float, float, float, np.ndarray]:
    """(a, b, c, covariance of (a, B1, B2)) with B1 = b·cos c, B2 = b·sin c."""
    theta = np.array([t.phase_mid for t in trace])
    y = np.array([t.variance_snu for t in trace])
    sigma = np.array([t.stderr_snu for t in trace])

    x = np.column_stack([np.ones_like(theta), np.cos(2.0 * theta), np.sin(2.0 * theta)])
    xtx_inv = np.linalg.inv(x.T @ x)
    coef = xtx_inv @ (x.T @ y)
    meat = x.T @ (x * (sigma ** 2)[:, None])
    cov = xtx_inv @ meat @ xtx_inv

    a, b1, b2 = (float(v) for v in coef)
    return a, math.hypot(b1, b2), math.atan2(b2, b1), cov


def _extreme_stderr(cov: np.ndarray, b1: float, b2: float, sign: float) -> float:
    b = math.hypot(b1, b2)
    grad = np.array([1.0, sign * b1 / b, sign * b2 / b]) if b > 0 else np.array([1.0, 0.0, 0.0])
    return float(math.sqrt(max(grad @ cov @ grad, 0.0)))


def extremal_variances(
    trace: Sequence[VarianceTrace],
    eta: Optional[float] = None,
    v_elec: Optional[float] = None,
    correct_elec: bool = False,
    inferred_from_gains: Optional[Tuple[float, float]] = None,
) -> SqueezingReport:
    """
    Squeezed / anti-squeezed levels of a trace. Headline values are
    uncorrected unless correct_elec is set (requires v_elec).
    """
    usable: List[VarianceTrace] = [t for t in trace if not t.degenerate]
    if not usable:
        raise ValueError("trace has no usable (non-degenerate) blocks")
    if correct_elec and v_elec is None:
        raise ValueError("electronic-noise correction needs v_elec")

    notes = []
    lo = min(usable, key=lambda t: t.variance_snu)
    hi = max(usable, key=lambda t: t.variance_snu)
    minmax = (lo.variance_snu, hi.variance_snu)
    minmax_err = (lo.stderr_snu, hi.stderr_snu)

    coverage = phase_coverage(usable)
    fit_snu = fit_err = fit_phase = None
    if len(usable) >= 3 and coverage > math.pi:
        a, b, c, cov = fit_sinusoid(usable)
        b1, b2 = b * math.cos(c), b * math.sin(c)
        fit_snu = (a - b, a + b)
        fit_err = (_extreme_stderr(cov, b1, b2, -1.0), _extreme_stderr(cov, b1, b2, 1.0))
        fit_phase = ((c + math.pi) / 2.0) % math.pi
        if fit_snu[0] <= 0:
            notes.append("sinusoid fit minimum is not positive; using min/max blocks")
            fit_snu = fit_err = fit_phase = None
    else:
        notes.append(
            f"insufficient phase coverage for the sinusoid fit "
            f"({len(usable)} blocks over {coverage:.3f} rad, need ≥3 over > π)"
        )

    if fit_snu is not None:
        method, (v_min, v_max), (e_min, e_max) = "sinusoid_fit", fit_snu, fit_err
    else:
        method, (v_min, v_max), (e_min, e_max) = "min_max_block", minmax, minmax_err

    corrected_db = None
    if v_elec is not None:
        if v_min - v_elec > 0:
            corrected_db = (to_db(v_min - v_elec), to_db(v_max - v_elec))
        else:
            notes.append("electronic noise exceeds the minimum variance; no corrected values")
    if correct_elec:
        if corrected_db is None:
            raise ValueError("electronic-noise correction is not possible for this trace")
        v_min, v_max = v_min - v_elec, v_max - v_elec

    return SqueezingReport(
        v_min_db=to_db(v_min),
        v_min_db_err=db_uncertainty(v_min, e_min),
        v_max_db=to_db(v_max),
        v_max_db_err=db_uncertainty(v_max, e_max),
        method=method,
        minmax_snu=minmax,
        minmax_err_snu=minmax_err,
        fit_snu=fit_snu,
        fit_err_snu=fit_err,
        fit_phase_rad=fit_phase,
        coverage_rad=coverage,
        n_blocks=len(usable),
        eta_used=eta,
        elec_correction=correct_elec,
        electronic_noise_snu=v_elec,
        corrected_db=corrected_db,
        inferred_from_gains=inferred_from_gains,
        notes=notes,
    )
