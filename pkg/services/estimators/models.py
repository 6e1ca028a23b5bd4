# services/estimators/models.py
"""
Result models for the estimator pipeline.
"""

from __future__ import annotations
from dataclasses import dataclass, asdict, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np


@dataclass(frozen=True)
class VarianceTrace:
    """Variance of one block of pulses, in SNU."""
    block_index: int
    phase_mid: float                       # mean LO phase over the block, rad
    variance_snu: float
    stderr_snu: float
    degenerate: bool = False               # all samples equal

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class ShotNoiseCalibration:
    """Linear fit of raw variance against LO photon number."""
    snl_raw: float                         # raw variance per SNU at the reference level
    v_elec_raw: float                      # electronic floor, raw units
    slope: float
    intercept: float
    r_squared: float
    n_lo_ref: float
    n_levels: int

    @property
    def v_elec_snu(self) -> float:
        return self.v_elec_raw / self.snl_raw

    @property
    def shot_to_elec_db(self) -> float:
        """Shot-noise to electronic-noise ratio in dB (inf when no floor)."""
        if self.v_elec_raw <= 0:
            return float("inf")
        return 10.0 * np.log10(self.snl_raw / self.v_elec_raw)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["v_elec_snu"] = self.v_elec_snu
        ratio = self.shot_to_elec_db
        data["shot_to_elec_db"] = float(ratio) if np.isfinite(ratio) else None
        if not np.isfinite(self.r_squared):
            data["r_squared"] = None       # single-level calibration
        return data


@dataclass(frozen=True)
class GaussianFit:
    """Maximum-likelihood Gaussian with a Kolmogorov-Smirnov distance."""
    mean: float
    variance: float
    ks_statistic: float
    ks_critical: float                     # 1.63/√N, 1 % level
    n_samples: int

    @property
    def passes_ks(self) -> bool:
        return self.ks_statistic < self.ks_critical

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["passes_ks"] = self.passes_ks
        return data


@dataclass
class Histogram:
    edges: np.ndarray
    counts: np.ndarray
    model: np.ndarray                      # fitted density × N × bin width per bin

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])


@dataclass
class SqueezingReport:
    """
    Extremal quadrature variances in dB relative to the SNL.

    v_min_db / v_max_db are the headline values: the sinusoid fit when the
    trace covers more than π of phase, otherwise the raw min/max block.
    Both paths are kept so the reader can tell which one was used.
    """

    # ═══════════════════════════════════════════════════════════════
    # HEADLINE
    # ═══════════════════════════════════════════════════════════════
    v_min_db: float
    v_min_db_err: float
    v_max_db: float
    v_max_db_err: float
    method: str                            # "sinusoid_fit" or "min_max_block"

    # ═══════════════════════════════════════════════════════════════
    # ESTIMATION PATHS (SNU, with 1σ)
    # ═══════════════════════════════════════════════════════════════
    minmax_snu: Tuple[float, float] = (0.0, 0.0)
    minmax_err_snu: Tuple[float, float] = (0.0, 0.0)
    fit_snu: Optional[Tuple[float, float]] = None
    fit_err_snu: Optional[Tuple[float, float]] = None
    fit_phase_rad: Optional[float] = None  # phase of minimum variance
    coverage_rad: float = 0.0
    n_blocks: int = 0

    # ═══════════════════════════════════════════════════════════════
    # CORRECTIONS & CONTEXT
    # ═══════════════════════════════════════════════════════════════
    eta_used: Optional[float] = None
    elec_correction: bool = False
    electronic_noise_snu: Optional[float] = None
    corrected_db: Optional[Tuple[float, float]] = None
    inferred_from_gains: Optional[Tuple[float, float]] = None
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def to_display_string(self) -> str:
        lines = [
            f"📊 Squeezing report ({self.method}, {self.n_blocks} blocks):",
            f"  squeezed      {self.v_min_db:+.2f} ± {self.v_min_db_err:.2f} dB",
            f"  anti-squeezed {self.v_max_db:+.2f} ± {self.v_max_db_err:.2f} dB",
        ]
        if self.corrected_db is not None:
            lines.append(
                f"  elec-corrected {self.corrected_db[0]:+.2f} / {self.corrected_db[1]:+.2f} dB"
            )
        if self.inferred_from_gains is not None:
            lines.append(
                f"  inferred from gains {self.inferred_from_gains[0]:+.2f} / {self.inferred_from_gains[1]:+.2f} dB"
            )
        for note in self.notes:
            lines.append(f"  ⚠️ {note}")
        return "\n".join(lines)
