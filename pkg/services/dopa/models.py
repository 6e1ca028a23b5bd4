# services/dopa/models.py
"""
Data models for the degenerate optical parametric amplifier.
"""

from __future__ import annotations
import math
from dataclasses import dataclass, asdict, field
from typing import Any, Dict, List, Optional


@dataclass(frozen=True)
class DopaModel:
    """
    Plane-wave DOPA operating point.

    r = kappa·√p_pump is dimensionless, so kappa is in mW^(-1/2).
    """

    kappa: float                           # pump coupling, mW^(-1/2)
    p_pump: float                          # average blue pump power, mW
    phi: float = 0.0                       # squeeze orientation / pump phase, rad
    mu_gid: float = 0.0                    # gain-induced-diffraction floor, [0, 1)

    def __post_init__(self):
        for name in ("kappa", "p_pump", "phi", "mu_gid"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.kappa < 0:
            raise ValueError(f"kappa must be >= 0, got {self.kappa}")
        if self.p_pump < 0:
            raise ValueError(f"p_pump must be >= 0, got {self.p_pump}")
        if not (0.0 <= self.mu_gid < 1.0):
            raise ValueError(f"mu_gid must lie in [0, 1), got {self.mu_gid}")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class GainPoint:
    """One measured point of a classical gain curve."""

    p_pump: float                          # mW
    g_amp: float                           # amplification intensity gain
    g_deamp: float                         # deamplification intensity gain
    weight: float = 1.0

    def __post_init__(self):
        if self.g_amp <= 0 or self.g_deamp <= 0:
            raise ValueError(f"gains must be positive (p_pump={self.p_pump})")
        if self.weight < 0:
            raise ValueError(f"weight must be >= 0, got {self.weight}")
        if self.p_pump < 0:
            raise ValueError(f"p_pump must be >= 0, got {self.p_pump}")

    @property
    def inverse_deamp(self) -> float:
        return 1.0 / self.g_deamp

    @property
    def flagged(self) -> bool:
        """True when the point violates g_amp ≥ 1 ≥ g_deamp."""
        return self.g_amp < 1.0 or self.g_deamp > 1.0


@dataclass
class GainFitResult:
    """Outcome of a gain-curve fit."""

    kappa: float
    mu_gid: float
    residual: float
    iterations: int
    converged: bool
    fit_mu: bool
    n_points: int
    n_filtered: int = 0                    # rows dropped by the pump-power ceiling
    max_pump_mw: Optional[float] = None
    flagged_points: List[int] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def to_display_string(self) -> str:
        lines = [
            "📈 Gain-curve fit:",
            f"  κ      = {self.kappa:.6g} mW^-1/2",
            f"  μ_gid  = {self.mu_gid:.6g}" + ("" if self.fit_mu else " (fixed)"),
            f"  resid  = {self.residual:.3e}",
            f"  points = {self.n_points} used, {self.n_filtered} filtered",
            f"  iters  = {self.iterations}",
        ]
        if self.flagged_points:
            lines.append(f"  ⚠️ rows violating g_amp ≥ 1 ≥ g_deamp: {self.flagged_points}")
        return "\n".join(lines)
