# services/dopa/gain_model.py
"""
Plane-wave parametric gain law and the gain-induced-diffraction floor.

Plane wave, undepleted pump:
    r    = κ·√P
    G(θ) = cosh(2r) + sinh(2r)·cos(θ)      G(0) = e^{2r}, G(π) = e^{-2r}

Gain-induced diffraction leaves amplification plane-wave but lifts the
deamplification towards a floor μ:
    G_d  = (1 − μ)·e^{-2r} + μ
"""

from __future__ import annotations
import math
from typing import Dict, List, Sequence, Tuple

import numpy as np

from services.gaussian import GaussianState, SqueezeParams, apply_additive_noise, apply_squeeze, vacuum
from .models import DopaModel


def squeeze_param(model: DopaModel) -> float:
    return model.kappa * math.sqrt(model.p_pump)


def classical_gain(r: float, theta: float) -> float:
    """Intensity gain of a bright probe at relative pump phase theta."""
    if r < 0:
        raise ValueError(f"r must be >= 0, got {r}")
    return math.cosh(2.0 * r) + math.sinh(2.0 * r) * math.cos(theta)


def gid_deamp(r: float, mu_gid: float) -> float:
    if r < 0:
        raise ValueError(f"r must be >= 0, got {r}")
    if not (0.0 <= mu_gid < 1.0):
        raise ValueError(f"mu_gid must lie in [0, 1), got {mu_gid}")
    return (1.0 - mu_gid) * math.exp(-2.0 * r) + mu_gid


def effective_gains(model: DopaModel) -> Tuple[float, float]:
    """(g_amp, g_deamp); their product exceeds 1 whenever μ_gid > 0 and r > 0."""
    r = squeeze_param(model)
    return math.exp(2.0 * r), gid_deamp(r, model.mu_gid)


def infer_r_from_deamp(g_deamp: float) -> float:
    if not (0.0 < g_deamp <= 1.0):
        raise ValueError(f"deamplification gain must lie in (0, 1], got {g_deamp}")
    return -0.5 * math.log(g_deamp)


def solve_gid_operating_point(g_amp: float, g_deamp: float) -> Tuple[float, float]:
    """
    Solve {e^{2r} = g_amp, (1−μ)e^{-2r} + μ = g_deamp} for (r, μ).

    Requires g_amp > 1 and 1/g_amp ≤ g_deamp < 1, i.e. a deamplification at
    most as strong as plane-wave theory allows for that amplification.
    """
    if g_amp <= 1.0:
        raise ValueError(f"amplification gain must exceed 1, got {g_amp}")
    r = 0.5 * math.log(g_amp)
    floor = math.exp(-2.0 * r)
    if not (floor - 1e-12 <= g_deamp < 1.0):
        raise ValueError(
            f"deamplification gain {g_deamp} outside [{floor:.6g}, 1) for g_amp={g_amp}"
        )
    mu = max(0.0, (g_deamp - floor) / (1.0 - floor))
    return r, mu


def gain_to_db(g: float) -> float:
    if g <= 0:
        raise ValueError(f"gain must be positive, got {g}")
    return 10.0 * math.log10(g)


def model_curve(kappa: float, mu_gid: float, powers: Sequence[float]) -> List[Dict[str, float]]:
    """Plot rows (p_pump, g_amp, g_deamp, 1/g_deamp) of the fitted model."""
    rows = []
    for p in powers:
        g_amp, g_deamp = effective_gains(DopaModel(kappa=kappa, p_pump=float(p), mu_gid=mu_gid))
        rows.append({
            "p_pump_mw": float(p),
            "g_amp_model": g_amp,
            "g_deamp_model": g_deamp,
            "inv_g_deamp_model": 1.0 / g_deamp,
        })
    return rows


def dopa_output_state(model: DopaModel) -> GaussianState:
    """
    Squeezed vacuum emitted with the probe blocked.

    Symplectic squeeze by r along phi, then the GID excess noise on the
    deamplified quadrature, so the quadrature variances equal the
    effective gains (g_deamp along phi, g_amp orthogonal).
    """
    r = squeeze_param(model)
    state = apply_squeeze(vacuum(), SqueezeParams(r=r, phi=model.phi))
    _, g_deamp = effective_gains(model)
    excess = g_deamp - math.exp(-2.0 * r)
    if excess <= 0.0:
        return state
    u = np.array([math.cos(model.phi), math.sin(model.phi)])
    return apply_additive_noise(state, excess * np.outer(u, u))
