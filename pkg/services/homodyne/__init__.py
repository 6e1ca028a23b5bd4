"""
Pulsed time-domain homodyne detection simulator.

Usage:
    from services.homodyne import DetectionChain, ScanConfig, sample_pulse_arrays

    chain = DetectionChain()                       # measured efficiency budget
    cfg = ScanConfig(n_pulses=1_000_000, seed=7)   # full 2π LO ramp
    phases, values = sample_pulse_arrays(state, chain, cfg, workers=4)
"""

from .models import (
    DetectionChain,
    ScanConfig,
    PulseRecord,
    MetaConfig,
)

from .rng import (
    chunk_generator,
    chunk_bounds,
    level_generator,
    rng_identifier,
)

from .sampler import (
    overall_efficiency,
    measured_variance,
    expected_measured_variances,
    phase_at,
    phases_between,
    sample_pulse_arrays,
    sample_pulse_train,
)

from .shot_noise import (
    shot_noise_scan,
    lo_photons_per_pulse,
)

__all__ = [
    # Models
    "DetectionChain",
    "ScanConfig",
    "PulseRecord",
    "MetaConfig",

    # RNG
    "chunk_generator",
    "chunk_bounds",
    "level_generator",
    "rng_identifier",

    # Detection
    "overall_efficiency",
    "measured_variance",
    "expected_measured_variances",
    "phase_at",
    "phases_between",
    "sample_pulse_arrays",
    "sample_pulse_train",

    # Calibration runs
    "shot_noise_scan",
    "lo_photons_per_pulse",
]
