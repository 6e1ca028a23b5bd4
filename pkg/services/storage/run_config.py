# services/storage/run_config.py
"""
Run configuration: one JSON document with dopa, detection, scan, meta and
output sections. Unknown keys are rejected, missing keys take the
defaults from squeeze_config, and the resolved document is what every
output header echoes.

Example (measured operating point):
    {
      "dopa": {"p_pump_mw": 1.0, "target_g_amp": 2.51, "target_g_deamp": 0.53},
      "scan": {"n_pulses": 1000000, "seed": 7}
    }
"""

from __future__ import annotations
import json
import math
from pathlib import Path
from typing import Any, Dict, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

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
    OUT_DIR,
    MEASURED_ETA_D,
    MEASURED_ETA_H,
    MEASURED_ETA_T,
)
from services.dopa import DopaModel, solve_gid_operating_point
from services.homodyne import DetectionChain, MetaConfig, ScanConfig


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)


# ═══════════════════════════════════════════════════════════════════════════════
# SECTIONS
# ═══════════════════════════════════════════════════════════════════════════════

class DopaSection(_Section):
    kappa_per_sqrt_mw: float = Field(0.5, ge=0)
    p_pump_mw: float = Field(1.0, ge=0)
    phi_rad: float = 0.0
    mu_gid: float = Field(0.0, ge=0, lt=1)
    target_g_amp: Optional[float] = Field(None, gt=1)
    target_g_deamp: Optional[float] = Field(None, gt=0, lt=1)

    @model_validator(mode="after")
    def _resolve_targets(self) -> "DopaSection":
        """Target gains, when given, fix κ and μ_gid at the configured pump power."""
        if (self.target_g_amp is None) != (self.target_g_deamp is None):
            raise ValueError("target_g_amp and target_g_deamp must be given together")
        if self.target_g_amp is not None:
            if self.p_pump_mw <= 0:
                raise ValueError("target gains need a positive p_pump_mw")
            r, mu = solve_gid_operating_point(self.target_g_amp, self.target_g_deamp)
            resolved = {"kappa_per_sqrt_mw": r / math.sqrt(self.p_pump_mw), "mu_gid": mu}
            # An explicit value is allowed only when it agrees, as in a header echo
            for name, value in resolved.items():
                given = getattr(self, name)
                if name in self.model_fields_set and not math.isclose(given, value, rel_tol=1e-9, abs_tol=1e-12):
                    raise ValueError(f"{name}={given} conflicts with target gains (resolve to {value:.6g})")
            self.kappa_per_sqrt_mw = resolved["kappa_per_sqrt_mw"]
            self.mu_gid = resolved["mu_gid"]
        return self

    def to_model(self) -> DopaModel:
        return DopaModel(
            kappa=self.kappa_per_sqrt_mw,
            p_pump=self.p_pump_mw,
            phi=self.phi_rad,
            mu_gid=self.mu_gid,
        )


class DetectionSection(_Section):
    eta_t: float = Field(MEASURED_ETA_T, ge=0, le=1)
    eta_h: float = Field(MEASURED_ETA_H, ge=0, le=1)
    eta_d: float = Field(MEASURED_ETA_D, ge=0, le=1)
    v_elec_snu: float = Field(DEFAULT_V_ELEC_SNU, ge=0)
    n_lo_photons: float = Field(DEFAULT_N_LO_PHOTONS, gt=0)
    gain_raw: float = Field(DEFAULT_GAIN_RAW, gt=0)

    def to_chain(self) -> DetectionChain:
        return DetectionChain(
            eta_t=self.eta_t,
            eta_h=self.eta_h,
            eta_d=self.eta_d,
            v_elec=self.v_elec_snu,
            n_lo=self.n_lo_photons,
            gain_raw=self.gain_raw,
        )


class ScanSection(_Section):
    n_pulses: int = Field(1_000_000, ge=1)
    block_size: int = Field(DEFAULT_BLOCK_SIZE, ge=2)
    phase_start_rad: float = DEFAULT_PHASE_START
    phase_end_rad: float = DEFAULT_PHASE_END
    rep_rate_hz: float = Field(DEFAULT_REP_RATE_HZ, gt=0)
    seed: int = Field(DEFAULT_SEED, ge=0, lt=2 ** 64)
    chunk_size: int = Field(CHUNK_SIZE, ge=1)

    def to_scan(self) -> ScanConfig:
        return ScanConfig(
            n_pulses=self.n_pulses,
            block_size=self.block_size,
            phase_start=self.phase_start_rad,
            phase_end=self.phase_end_rad,
            rep_rate_hz=self.rep_rate_hz,
            seed=self.seed,
            chunk_size=self.chunk_size,
        )


class MetaSection(_Section):
    wavelength_nm: float = META_WAVELENGTH_NM
    pulse_fwhm_fs: float = META_PULSE_FWHM_FS
    crystal_len_um: float = META_CRYSTAL_LEN_UM
    crystal_temp_c: float = META_CRYSTAL_TEMP_C
    waist_um: float = META_WAIST_UM
    pulse_energy_nj: float = META_PULSE_ENERGY_NJ
    shg_efficiency: float = META_SHG_EFFICIENCY
    cmrr: float = META_CMRR

    def to_meta(self) -> MetaConfig:
        return MetaConfig(**self.model_dump())


class OutputSection(_Section):
    out_dir: str = OUT_DIR
    stream_name: str = "stream.sqzp"
    trace_csv: str = "trace.csv"
    hist_min_csv: str = "hist_min.csv"
    hist_max_csv: str = "hist_max.csv"
    report_json: str = "report.json"


class RunConfig(_Section):
    dopa: DopaSection = Field(default_factory=DopaSection)
    detection: DetectionSection = Field(default_factory=DetectionSection)
    scan: ScanSection = Field(default_factory=ScanSection)
    meta: MetaSection = Field(default_factory=MetaSection)
    output: OutputSection = Field(default_factory=OutputSection)

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")


# ═══════════════════════════════════════════════════════════════════════════════
# LOADING
# ═══════════════════════════════════════════════════════════════════════════════

def parse_run_config(data: Dict[str, Any]) -> RunConfig:
    return RunConfig.model_validate(data)


def load_run_config(path: Optional[str | Path]) -> RunConfig:
    """Read and validate a JSON run configuration; None gives the defaults."""
    if path is None:
        return RunConfig()
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValueError(f"config {path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ValueError(f"config {path} must hold a JSON object")
    return parse_run_config(data)


def with_overrides(config: RunConfig, seed: Optional[int] = None, out_dir: Optional[str] = None) -> RunConfig:
    """Apply command-line overrides and re-validate."""
    data = config.to_dict()
    if seed is not None:
        data["scan"]["seed"] = seed
    if out_dir is not None:
        data["output"]["out_dir"] = out_dir
    return parse_run_config(data)
