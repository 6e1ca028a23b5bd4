# services/homodyne/shot_noise.py
"""
Shot-noise calibration runs: vacuum input at several LO levels.

Raw variance model, with the chain's n_lo as the reference level:
    var_raw(n) = gain_raw²·(n / n_lo + v_elec)
so the slope times n_lo is the SNL in raw units (gain_raw², the scale the
pulse sampler uses) and the intercept is the electronic floor.
"""

from __future__ import annotations
from typing import List, Sequence, Tuple

import numpy as np
from scipy import constants

import squeeze_config
from squeeze_config import LO_LINEARITY_CEILING
from .models import DetectionChain
from .rng import level_generator


def lo_photons_per_pulse(power_w: float, wavelength_nm: float, rep_rate_hz: float) -> float:
    """Average LO photon number per pulse from average optical power."""
    if power_w < 0 or wavelength_nm <= 0 or rep_rate_hz <= 0:
        raise ValueError("power must be >= 0, wavelength and repetition rate > 0")
    energy_per_photon = constants.h * constants.c / (wavelength_nm * 1e-9)
    energy_per_pulse = power_w / rep_rate_hz
    return energy_per_pulse / energy_per_photon


def shot_noise_scan(
    chain: DetectionChain,
    n_lo_list: Sequence[float],
    pulses_per_level: int,
    seed: int,
) -> List[Tuple[float, float]]:
    """One unbiased raw-variance estimate per LO level, vacuum signal."""
    if len(n_lo_list) == 0:
        raise ValueError("LO level list is empty")
    if pulses_per_level < 2:
        raise ValueError(f"need at least 2 pulses per level, got {pulses_per_level}")
    if chain.n_lo <= 0:
        raise ValueError("reference LO photon number must be positive")

    above = [n for n in n_lo_list if n > LO_LINEARITY_CEILING]
    if above:
        print(
            f"⚠️ {len(above)} LO level(s) above the verified linearity ceiling "
            f"of {LO_LINEARITY_CEILING:.3g} photons/pulse"
        )

    results = []
    for k, n_lo in enumerate(n_lo_list):
        if n_lo <= 0:
            raise ValueError(f"LO level must be positive, got {n_lo}")
        sigma2 = chain.gain_raw ** 2 * (n_lo / chain.n_lo + chain.v_elec)
        samples = np.sqrt(sigma2) * level_generator(seed, k).standard_normal(pulses_per_level)
        variance = float(np.var(samples, ddof=1))
        results.append((float(n_lo), variance))
        if squeeze_config.VERBOSE:
            print(f"📊 LO {n_lo:.3g} photons/pulse → raw variance {variance:.6g}")
    return results
