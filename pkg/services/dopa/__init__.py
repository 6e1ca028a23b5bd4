"""
Degenerate optical parametric amplifier (plane-wave model + GID floor).

Usage:
    from services.dopa import DopaModel, effective_gains, fit_gain_curve, GainPoint

    model = DopaModel(kappa=0.7, p_pump=1.0, mu_gid=0.03)
    g_amp, g_deamp = effective_gains(model)

    result = fit_gain_curve(points, fit_mu=True, max_pump_mw=0.5)
    print(result.to_display_string())
"""

from .models import (
    DopaModel,
    GainPoint,
    GainFitResult,
)

from .gain_model import (
    squeeze_param,
    classical_gain,
    gid_deamp,
    effective_gains,
    infer_r_from_deamp,
    solve_gid_operating_point,
    gain_to_db,
    model_curve,
    dopa_output_state,
)

from .gain_fitter import (
    fit_gain_curve,
    filter_by_pump,
    GainFitError,
)

__all__ = [
    # Models
    "DopaModel",
    "GainPoint",
    "GainFitResult",

    # Gain law
    "squeeze_param",
    "classical_gain",
    "gid_deamp",
    "effective_gains",
    "infer_r_from_deamp",
    "solve_gid_operating_point",
    "gain_to_db",
    "model_curve",
    "dopa_output_state",

    # Fitting
    "fit_gain_curve",
    "filter_by_pump",
    "GainFitError",
]
