# services/gaussian/state.py
"""
Single-mode Gaussian state algebra in shot-noise units (SNU).

Conventions:
- vacuum quadrature variance = 1 (the shot noise level)
- quadrature at angle theta is x·cos(theta) + p·sin(theta)
- a squeeze with orientation phi DEAMPLIFIES the quadrature along phi
  (variance factor e^{-2r}) and amplifies the orthogonal one

Every operation returns a new immutable state.
"""

from __future__ import annotations
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Sequence

import numpy as np

from squeeze_config import SYMPLECTIC_TOLERANCE

COV_RTOL = 1e-12                # eigenvalue floor relative to the largest one
TWO_PI = 2.0 * math.pi


def _frozen(values: Sequence[float] | np.ndarray, shape: tuple) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(shape)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class GaussianState:
    """Quadrature means (x̄, p̄) and 2×2 covariance matrix, both in SNU."""

    mean: np.ndarray = field(default_factory=lambda: np.zeros(2))
    cov: np.ndarray = field(default_factory=lambda: np.eye(2))

    def __post_init__(self):
        mean = _frozen(self.mean, (2,))
        cov = np.array(self.cov, dtype=float).reshape(2, 2)
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
            raise ValueError("state contains non-finite values")
        # Symmetric by construction
        cov = _frozen(0.5 * (cov + cov.T), (2, 2))
        # Rounding leaves the small eigenvalue of a strongly squeezed state at ~eps·max
        eig = np.linalg.eigvalsh(cov)
        if eig[-1] <= 0.0 or eig[0] < -COV_RTOL * eig[-1]:
            raise ValueError("covariance matrix must be positive definite")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    def to_dict(self) -> Dict[str, Any]:
        return {"mean": self.mean.tolist(), "cov": self.cov.tolist()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> GaussianState:
        return cls(mean=data.get("mean", [0.0, 0.0]), cov=data.get("cov", [[1.0, 0.0], [0.0, 1.0]]))


@dataclass(frozen=True)
class SqueezeParams:
    """Squeezing parameter r ≥ 0 and orientation phi wrapped into [0, 2π)."""

    r: float
    phi: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.r):
            raise ValueError(f"squeezing parameter must be finite, got {self.r}")
        if self.r < 0:
            raise ValueError(f"squeezing parameter must be >= 0, got {self.r}")
        if not math.isfinite(self.phi):
            raise ValueError(f"squeeze orientation must be finite, got {self.phi}")
        phi = self.phi % TWO_PI
        object.__setattr__(self, "phi", 0.0 if phi >= TWO_PI else phi)


# ═══════════════════════════════════════════════════════════════
# MATRICES
# ═══════════════════════════════════════════════════════════════

def rotation_matrix(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def squeeze_matrix(p: SqueezeParams) -> np.ndarray:
    """S = R(φ)·diag(e^{−r}, e^{+r})·R(φ)ᵀ, symplectic with det S = 1."""
    rot = rotation_matrix(p.phi)
    return rot @ np.diag([math.exp(-p.r), math.exp(p.r)]) @ rot.T


def _direction(theta: float) -> np.ndarray:
    return np.array([math.cos(theta), math.sin(theta)])


# ═══════════════════════════════════════════════════════════════
# STATES & CHANNELS
# ═══════════════════════════════════════════════════════════════

def vacuum() -> GaussianState:
    """Reference state defining the shot noise level."""
    return GaussianState(mean=np.zeros(2), cov=np.eye(2))


def apply_squeeze(state: GaussianState, p: SqueezeParams) -> GaussianState:
    s = squeeze_matrix(p)
    return GaussianState(mean=s @ state.mean, cov=s @ state.cov @ s.T)


def squeezed_vacuum(r: float, phi: float = 0.0) -> GaussianState:
    return apply_squeeze(vacuum(), SqueezeParams(r=r, phi=phi))


def apply_rotation(state: GaussianState, angle: float) -> GaussianState:
    """Rotate the phase-space frame by angle (a phase shift of the mode)."""
    rot = rotation_matrix(angle)
    return GaussianState(mean=rot @ state.mean, cov=rot @ state.cov @ rot.T)


def apply_loss(state: GaussianState, eta: float) -> GaussianState:
    """Beamsplitter of transmittance eta mixing the mode with vacuum."""
    if not (0.0 <= eta <= 1.0):
        raise ValueError(f"transmittance must lie in [0, 1], got {eta}")
    return GaussianState(
        mean=math.sqrt(eta) * state.mean,
        cov=eta * state.cov + (1.0 - eta) * np.eye(2),
    )


def apply_additive_noise(state: GaussianState, noise_cov: Sequence[Sequence[float]] | np.ndarray) -> GaussianState:
    """Classical Gaussian noise channel: cov ← cov + N with N symmetric PSD."""
    noise = np.array(noise_cov, dtype=float).reshape(2, 2)
    if not np.allclose(noise, noise.T, atol=1e-12):
        raise ValueError("noise covariance must be symmetric")
    if np.any(np.linalg.eigvalsh(noise) < -1e-12):
        raise ValueError("noise covariance must be positive semidefinite")
    return GaussianState(mean=state.mean, cov=state.cov + noise)


# ═══════════════════════════════════════════════════════════════
# OBSERVABLES
# ═══════════════════════════════════════════════════════════════

def quadrature_variance(state: GaussianState, theta: float) -> float:
    """uᵀ·cov·u with u = (cos θ, sin θ); π-periodic in θ."""
    u = _direction(theta)
    return float(u @ state.cov @ u)


def quadrature_mean(state: GaussianState, theta: float) -> float:
    return float(_direction(theta) @ state.mean)


def uncertainty_product(state: GaussianState) -> float:
    return float(np.linalg.det(state.cov))


def is_physical(state: GaussianState, tol: float = SYMPLECTIC_TOLERANCE) -> bool:
    """Heisenberg bound det(cov) ≥ 1 in SNU."""
    return uncertainty_product(state) >= 1.0 - tol
