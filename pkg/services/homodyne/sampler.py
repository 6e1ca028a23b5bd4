# services/homodyne/sampler.py
"""
Pulse-by-pulse time-domain homodyne simulator.

Each pulse i is measured at LO phase θ_i = phase_at(i) and yields one
Gaussian draw
    value ~ N(gain_raw·√η·x̄_θ, gain_raw²·[η·V_state(θ) + (1 − η) + v_elec])
i.e. the state passes the efficiency chain as a loss channel and the
electronics add v_elec. Draws are independent between pulses.
"""

from __future__ import annotations
from concurrent.futures import ThreadPoolExecutor
from typing import Iterator, Tuple

import numpy as np
from tqdm import tqdm

import squeeze_config
from squeeze_config import LO_LINEARITY_CEILING
from services.gaussian import GaussianState, quadrature_variance
from .models import DetectionChain, PulseRecord, ScanConfig
from .rng import chunk_bounds, chunk_generator


def overall_efficiency(chain: DetectionChain) -> float:
    return chain.eta


def measured_variance(v_signal: float, chain: DetectionChain, include_elec: bool = False) -> float:
    """Variance seen by the detector for a signal quadrature variance v_signal (SNU)."""
    if v_signal <= 0:
        raise ValueError(f"signal variance must be positive, got {v_signal}")
    eta = chain.eta
    value = eta * v_signal + (1.0 - eta)
    if include_elec:
        value += chain.v_elec
    return value


def expected_measured_variances(state: GaussianState, chain: DetectionChain, include_elec: bool = True) -> Tuple[float, float]:
    """(min, max) measured variance over all LO phases."""
    eig = np.linalg.eigvalsh(state.cov)
    return (
        measured_variance(float(eig[0]), chain, include_elec),
        measured_variance(float(eig[1]), chain, include_elec),
    )


# ═══════════════════════════════════════════════════════════════
# PHASE RAMP
# ═══════════════════════════════════════════════════════════════

def phase_at(i: int, cfg: ScanConfig) -> float:
    if not (0 <= i < cfg.n_pulses):
        raise IndexError(f"pulse index {i} outside [0, {cfg.n_pulses})")
    if cfg.n_pulses == 1:
        return cfg.phase_start
    t = i / (cfg.n_pulses - 1)
    return cfg.phase_start * (1.0 - t) + cfg.phase_end * t


def phases_between(cfg: ScanConfig, start: int, stop: int) -> np.ndarray:
    """Vectorised phase_at for indices [start, stop)."""
    idx = np.arange(start, stop, dtype=float)
    if cfg.n_pulses == 1:
        return np.full(idx.shape, cfg.phase_start)
    t = idx / (cfg.n_pulses - 1)
    return cfg.phase_start * (1.0 - t) + cfg.phase_end * t


# ═══════════════════════════════════════════════════════════════
# SAMPLING
# ═══════════════════════════════════════════════════════════════

def _check_lo(chain: DetectionChain):
    if chain.n_lo <= 0:
        raise ValueError("LO photon number must be positive to sample pulses")
    if chain.n_lo > LO_LINEARITY_CEILING:
        print(
            f"⚠️ LO at {chain.n_lo:.3g} photons/pulse exceeds the verified linearity "
            f"ceiling of {LO_LINEARITY_CEILING:.3g}"
        )


def _sample_chunk(state: GaussianState, chain: DetectionChain, cfg: ScanConfig, chunk_index: int) -> Tuple[np.ndarray, np.ndarray]:
    start, stop = chunk_bounds(cfg.n_pulses, cfg.chunk_size, chunk_index)
    theta = phases_between(cfg, start, stop)
    c, s = np.cos(theta), np.sin(theta)

    cov = state.cov
    v_state = c * c * cov[0, 0] + 2.0 * c * s * cov[0, 1] + s * s * cov[1, 1]
    mean_state = c * state.mean[0] + s * state.mean[1]

    eta = chain.eta
    variance = eta * v_state + (1.0 - eta) + chain.v_elec
    z = chunk_generator(cfg.seed, chunk_index).standard_normal(stop - start)
    values = chain.gain_raw * (np.sqrt(eta) * mean_state + np.sqrt(variance) * z)
    return theta, values


def sample_pulse_arrays(
    state: GaussianState,
    chain: DetectionChain,
    cfg: ScanConfig,
    workers: int = 1,
    show_progress: bool | None = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Generate the whole record as (phases, values) arrays.

    Chunks are independent, so workers > 1 fills them from a thread pool;
    the output is identical for any worker count.
    """
    _check_lo(chain)
    if show_progress is None:
        show_progress = squeeze_config.VERBOSE

    phases = np.empty(cfg.n_pulses)
    values = np.empty(cfg.n_pulses)

    def fill(k: int) -> int:
        start, stop = chunk_bounds(cfg.n_pulses, cfg.chunk_size, k)
        phases[start:stop], values[start:stop] = _sample_chunk(state, chain, cfg, k)
        return k

    chunks = range(cfg.n_chunks)
    progress = tqdm(total=cfg.n_chunks, desc="🔬 pulses", unit="chunk", disable=not show_progress)
    with progress:
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                for _ in pool.map(fill, chunks):
                    progress.update(1)
        else:
            for k in chunks:
                fill(k)
                progress.update(1)
    return phases, values


def sample_pulse_train(state: GaussianState, chain: DetectionChain, cfg: ScanConfig) -> Iterator[PulseRecord]:
    """Stream PulseRecords chunk by chunk; same values as sample_pulse_arrays."""
    _check_lo(chain)
    for k in range(cfg.n_chunks):
        start, _ = chunk_bounds(cfg.n_pulses, cfg.chunk_size, k)
        theta, values = _sample_chunk(state, chain, cfg, k)
        for offset, (phase, value) in enumerate(zip(theta.tolist(), values.tolist())):
            yield PulseRecord(index=start + offset, lo_phase=phase, value=value)
