# services/homodyne/models.py
"""
Data models for the pulsed homodyne detector and its phase scan.
"""

from __future__ import annotations
import math
from dataclasses import dataclass, asdict
from typing import Any, Dict, NamedTuple

from squeeze_config import (
    CHUNK_SIZE,
    DEFAULT_BLOCK_SIZE,
    DEFAULT_GAIN_RAW,
    DEFAULT_N_LO_PHOTONS,
    DEFAULT_PHASE_END,
    DEFAULT_PHASE_START,
    DEFAULT_REP_RATE_HZ,
    DEFAULT_SEED,
    DEFAULT_V_ELEC_SNU,
    META_CMRR,
    META_CRYSTAL_LEN_UM,
    META_CRYSTAL_TEMP_C,
    META_PULSE_ENERGY_NJ,
    META_PULSE_FWHM_FS,
    META_SHG_EFFICIENCY,
    META_WAIST_UM,
    META_WAVELENGTH_NM,
    MEASURED_ETA_D,
    MEASURED_ETA_H,
    MEASURED_ETA_T,
)


@dataclass(frozen=True)
class DetectionChain:
    """
    Homodyne imperfection budget.

    Overall efficiency η = eta_t·eta_h²·eta_d acts as a loss channel in
    front of an ideal detector; v_elec adds in SNU after detection.
    """

    # ═══════════════════════════════════════════════════════════════
    # EFFICIENCIES
    # ═══════════════════════════════════════════════════════════════
    eta_t: float = MEASURED_ETA_T             # optical transmission
    eta_h: float = MEASURED_ETA_H             # mode-match visibility
    eta_d: float = MEASURED_ETA_D             # photodiode quantum efficiency

    # ═══════════════════════════════════════════════════════════════
    # NOISE & SCALE
    # ═══════════════════════════════════════════════════════════════
    v_elec: float = DEFAULT_V_ELEC_SNU     # electronic noise variance, SNU
    n_lo: float = DEFAULT_N_LO_PHOTONS     # LO photons per pulse
    gain_raw: float = DEFAULT_GAIN_RAW     # raw units per SNU amplitude

    def __post_init__(self):
        for name in ("eta_t", "eta_h", "eta_d"):
            value = getattr(self, name)
            if not (0.0 <= value <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        if not (math.isfinite(self.v_elec) and self.v_elec >= 0):
            raise ValueError(f"v_elec must be >= 0, got {self.v_elec}")
        if not (math.isfinite(self.n_lo) and self.n_lo >= 0):
            raise ValueError(f"n_lo must be >= 0, got {self.n_lo}")
        if not (math.isfinite(self.gain_raw) and self.gain_raw > 0):
            raise ValueError(f"gain_raw must be > 0, got {self.gain_raw}")

    @property
    def eta(self) -> float:
        return self.eta_t * self.eta_h ** 2 * self.eta_d

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class ScanConfig:
    """Linear LO phase ramp over the record plus RNG seeding."""

    n_pulses: int
    block_size: int = DEFAULT_BLOCK_SIZE
    phase_start: float = DEFAULT_PHASE_START
    phase_end: float = DEFAULT_PHASE_END
    rep_rate_hz: float = DEFAULT_REP_RATE_HZ  # metadata
    seed: int = DEFAULT_SEED
    chunk_size: int = CHUNK_SIZE

    def __post_init__(self):
        if self.n_pulses < 1:
            raise ValueError(f"n_pulses must be >= 1, got {self.n_pulses}")
        if self.block_size < 2:
            raise ValueError(f"block_size must be >= 2, got {self.block_size}")
        if not (math.isfinite(self.phase_start) and math.isfinite(self.phase_end)):
            raise ValueError("phase ramp must be finite")
        if self.chunk_size < 1:
            raise ValueError(f"chunk_size must be >= 1, got {self.chunk_size}")
        if not (0 <= self.seed < 2 ** 64):
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    @property
    def n_chunks(self) -> int:
        return -(-self.n_pulses // self.chunk_size)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


class PulseRecord(NamedTuple):
    """One homodyne outcome."""
    index: int
    lo_phase: float                        # rad
    value: float                           # raw units


@dataclass(frozen=True)
class MetaConfig:
    """Setup description carried through file headers, never used in computation."""

    wavelength_nm: float = META_WAVELENGTH_NM
    pulse_fwhm_fs: float = META_PULSE_FWHM_FS
    crystal_len_um: float = META_CRYSTAL_LEN_UM
    crystal_temp_c: float = META_CRYSTAL_TEMP_C
    waist_um: float = META_WAIST_UM
    pulse_energy_nj: float = META_PULSE_ENERGY_NJ
    shg_efficiency: float = META_SHG_EFFICIENCY
    cmrr: float = META_CMRR

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
