# services/estimators/inference.py
"""
dB conversion, squeezing inferred from classical gains, and first-order
error propagation.

Inference rule: a quadrature with intensity gain g, seen through the
detection efficiency η, is measured at η·g + 1 − η (SNU).
"""

from __future__ import annotations
import math
from typing import Tuple

DB_PER_NEPER = 10.0 / math.log(10.0)


def to_db(v: float) -> float:
    """10·log10(v / 1 SNU)."""
    if v <= 0:
        raise ValueError(f"variance must be positive to express in dB, got {v}")
    return 10.0 * math.log10(v)


def from_db(db: float) -> float:
    return 10.0 ** (db / 10.0)


def db_uncertainty(v: float, sigma_v: float) -> float:
    """σ_dB = (10/ln10)·σ_V/V."""
    if v <= 0:
        raise ValueError(f"variance must be positive, got {v}")
    return DB_PER_NEPER * sigma_v / v


def _check_inputs(g_amp: float, g_deamp: float, eta: float):
    if g_amp <= 0 or g_deamp <= 0:
        raise ValueError(f"gains must be positive, got g_amp={g_amp}, g_deamp={g_deamp}")
    if not (0.0 <= eta <= 1.0):
        raise ValueError(f"efficiency must lie in [0, 1], got {eta}")


def infer_squeezing_from_gains(g_amp: float, g_deamp: float, eta: float) -> Tuple[float, float]:
    """(squeezed dB, anti-squeezed dB) expected at detection efficiency eta."""
    _check_inputs(g_amp, g_deamp, eta)
    return (
        to_db(eta * g_deamp + 1.0 - eta),
        to_db(eta * g_amp + 1.0 - eta),
    )


def inference_jacobian(g: float, eta: float) -> Tuple[float, float]:
    """(∂dB/∂g, ∂dB/∂η) of to_db(η·g + 1 − η)."""
    v = eta * g + 1.0 - eta
    return DB_PER_NEPER * eta / v, DB_PER_NEPER * (g - 1.0) / v


def propagate_inference_uncertainty(
    g_amp: float,
    sigma_amp: float,
    g_deamp: float,
    sigma_deamp: float,
    eta: float,
    sigma_eta: float,
) -> Tuple[float, float]:
    """
    First-order Gaussian propagation through infer_squeezing_from_gains,
    gains and efficiency taken as independent. Returns (σ_dB squeezed,
    σ_dB anti-squeezed).
    """
    if min(sigma_amp, sigma_deamp, sigma_eta) < 0:
        raise ValueError("uncertainties must be non-negative")
    _check_inputs(g_amp, g_deamp, eta)

    d_g, d_eta = inference_jacobian(g_deamp, eta)
    sigma_sq = math.hypot(d_g * sigma_deamp, d_eta * sigma_eta)

    d_g, d_eta = inference_jacobian(g_amp, eta)
    sigma_anti = math.hypot(d_g * sigma_amp, d_eta * sigma_eta)
    return sigma_sq, sigma_anti


def cross_check_efficiency(g_deamp: float, v_measured: float, v_elec: float = 0.0) -> float:
    """
    Detection efficiency implied by a classical deamplification gain and the
    squeezed variance measured with that gain: η = (1 − V') / (1 − g_deamp),
    V' = v_measured − v_elec.
    """
    if not (0.0 < g_deamp < 1.0):
        raise ValueError(f"deamplification gain must lie in (0, 1), got {g_deamp}")
    v = v_measured - v_elec
    if v <= 0:
        raise ValueError("measured variance does not exceed the electronic noise")
    return (1.0 - v) / (1.0 - g_deamp)
