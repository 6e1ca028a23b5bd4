"""
Gaussian state algebra (single mode, shot-noise units).

Usage:
    from services.gaussian import vacuum, apply_squeeze, apply_loss, SqueezeParams

    state = apply_squeeze(vacuum(), SqueezeParams(r=0.45815, phi=0.0))
    state = apply_loss(state, eta=0.76)
    quadrature_variance(state, 0.0)   # → 0.544
"""

from .state import (
    GaussianState,
    SqueezeParams,
    vacuum,
    squeezed_vacuum,
    apply_squeeze,
    apply_rotation,
    apply_loss,
    apply_additive_noise,
    quadrature_variance,
    quadrature_mean,
    uncertainty_product,
    is_physical,
    rotation_matrix,
    squeeze_matrix,
)

__all__ = [
    # Types
    "GaussianState",
    "SqueezeParams",

    # States & channels
    "vacuum",
    "squeezed_vacuum",
    "apply_squeeze",
    "apply_rotation",
    "apply_loss",
    "apply_additive_noise",

    # Observables
    "quadrature_variance",
    "quadrature_mean",
    "uncertainty_product",
    "is_physical",

    # Matrices
    "rotation_matrix",
    "squeeze_matrix",
]
