# services/dopa/gain_fitter.py
"""
Weighted least-squares fit of measured gain curves to the DOPA model.

Residuals are log-gain differences (photodiode power ratios carry
multiplicative noise):

    Σ w·[(ln g_amp − 2κ√P)² + (ln g_deamp − ln((1−μ)e^{−2κ√P} + μ))²]

Solver contract (deterministic):
- κ₀ from the lowest-power point with P > 0, μ₀ = 0
- Levenberg-Marquardt damping on diag(JᵀJ), λ₀ = 1e-3, ×10 / ÷10
- stop when ‖δ‖ ≤ tol·(‖x‖ + tol), tol = 1e-10
- at most 200 iterations, otherwise GainFitError
- μ is kept in [0, 1); when it sits on 0 and the step pushes it lower it
  is frozen for that iteration
"""

from __future__ import annotations
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

import squeeze_config
from squeeze_config import FIT_INITIAL_DAMPING, FIT_MAX_ITERATIONS, FIT_STEP_TOLERANCE
from .models import GainFitResult, GainPoint

MU_CEILING = 1.0 - 1e-9


class GainFitError(RuntimeError):
    """Fit could not be carried out or did not converge."""


def _arrays(points: Sequence[GainPoint]) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    sqrt_p = np.sqrt(np.array([p.p_pump for p in points], dtype=float))
    ln_amp = np.log(np.array([p.g_amp for p in points], dtype=float))
    ln_deamp = np.log(np.array([p.g_deamp for p in points], dtype=float))
    sqrt_w = np.sqrt(np.array([p.weight for p in points], dtype=float))
    return sqrt_p, ln_amp, ln_deamp, sqrt_w


def _residuals_and_jacobian(
    x: np.ndarray,
    sqrt_p: np.ndarray,
    ln_amp: np.ndarray,
    ln_deamp: np.ndarray,
    sqrt_w: np.ndarray,
) -> Tuple[np.ndarray, np.ndarray]:
    kappa, mu = x
    r = kappa * sqrt_p
    decay = np.exp(-2.0 * r)
    g_d = (1.0 - mu) * decay + mu

    res = np.concatenate([
        sqrt_w * (ln_amp - 2.0 * r),
        sqrt_w * (ln_deamp - np.log(g_d)),
    ])
    jac = np.zeros((res.size, 2))
    n = sqrt_p.size
    jac[:n, 0] = -sqrt_w * 2.0 * sqrt_p
    jac[n:, 0] = sqrt_w * (1.0 - mu) * 2.0 * sqrt_p * decay / g_d
    jac[n:, 1] = -sqrt_w * (1.0 - decay) / g_d
    return res, jac


def _initial_kappa(points: Sequence[GainPoint]) -> float:
    positive = [p for p in points if p.p_pump > 0]
    if not positive:
        raise GainFitError("no point with positive pump power; κ is undetermined")
    lowest = min(positive, key=lambda p: p.p_pump)
    k0 = math.log(lowest.g_amp / lowest.g_deamp) / (4.0 * math.sqrt(lowest.p_pump))
    return max(k0, 1e-6)


def _damped_step(jac: np.ndarray, res: np.ndarray, free: np.ndarray, lam: float) -> np.ndarray:
    j = jac[:, free]
    jtj = j.T @ j
    scale = np.diag(jtj).copy()
    scale[scale <= 0] = 1.0
    lhs = jtj + lam * np.diag(scale)
    try:
        sub = np.linalg.solve(lhs, -j.T @ res)
    except np.linalg.LinAlgError as e:
        raise GainFitError(f"singular normal equations: {e}") from e
    step = np.zeros(jac.shape[1])
    step[free] = sub
    return step


def filter_by_pump(points: Sequence[GainPoint], max_pump_mw: Optional[float]) -> Tuple[List[GainPoint], int]:
    """Keep points with P ≤ max_pump_mw; returns (kept, number dropped)."""
    if max_pump_mw is None:
        return list(points), 0
    kept = [p for p in points if p.p_pump <= max_pump_mw]
    return kept, len(points) - len(kept)


def fit_gain_curve(
    points: Sequence[GainPoint],
    fit_mu: bool = False,
    max_pump_mw: Optional[float] = None,
) -> GainFitResult:
    """
    Fit κ (and μ_gid when fit_mu) to measured gain points.

    Raises:
        ValueError: fewer than 2 points or all-zero weights
        GainFitError: singular system or no convergence within the cap
    """
    used, n_filtered = filter_by_pump(points, max_pump_mw)
    if len(used) < 2:
        raise ValueError(
            f"underdetermined: {len(used)} point(s) left for the fit, at least 2 required"
        )
    if all(p.weight == 0 for p in used):
        raise ValueError("all fit weights are zero")

    flagged = [i for i, p in enumerate(used) if p.flagged]
    if flagged:
        print(f"⚠️ {len(flagged)} gain point(s) violate g_amp ≥ 1 ≥ g_deamp: rows {flagged}")

    arrays = _arrays(used)
    x = np.array([_initial_kappa(used), 0.0])
    lam = FIT_INITIAL_DAMPING

    res, jac = _residuals_and_jacobian(x, *arrays)
    cost = float(res @ res)
    converged = False
    iterations = 0

    for iterations in range(1, FIT_MAX_ITERATIONS + 1):
        free = np.array([True, fit_mu])
        step = _damped_step(jac, res, free, lam)
        if fit_mu and x[1] <= 0.0 and step[1] < 0.0:
            free = np.array([True, False])
            step = _damped_step(jac, res, free, lam)

        trial = x + step
        trial[0] = max(trial[0], 0.0)
        trial[1] = min(max(trial[1], 0.0), MU_CEILING)
        taken = trial - x

        trial_res, trial_jac = _residuals_and_jacobian(trial, *arrays)
        trial_cost = float(trial_res @ trial_res)

        if trial_cost <= cost:
            x, res, jac, cost = trial, trial_res, trial_jac, trial_cost
            lam = max(lam / 10.0, 1e-12)
        else:
            lam = lam * 10.0

        if np.linalg.norm(taken) <= FIT_STEP_TOLERANCE * (np.linalg.norm(x) + FIT_STEP_TOLERANCE):
            converged = True
            break
        if cost == 0.0:
            converged = True
            break

    if not converged:
        raise GainFitError(
            f"gain fit did not converge within {FIT_MAX_ITERATIONS} iterations "
            f"(κ={x[0]:.6g}, μ={x[1]:.6g}, residual={cost:.3e})"
        )

    if squeeze_config.VERBOSE:
        print(f"✅ Gain fit converged in {iterations} iteration(s): κ={x[0]:.6g}, μ={x[1]:.6g}")

    return GainFitResult(
        kappa=float(x[0]),
        mu_gid=float(x[1]),
        residual=cost,
        iterations=iterations,
        converged=converged,
        fit_mu=fit_mu,
        n_points=len(used),
        n_filtered=n_filtered,
        max_pump_mw=max_pump_mw,
        flagged_points=flagged,
    )
