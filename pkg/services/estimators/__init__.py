"""
Estimator pipeline: raw pulse records → squeezing figures in dB.

Usage:
    from services.estimators import (
        calibrate_shot_noise, block_variances, extremal_variances,
    )

    cal = calibrate_shot_noise(pairs=[(1e7, 0.04), (2.5e8, 1.0)], fit_intercept=False)
    trace = block_variances((phases, values), 2500, snl_raw=cal.snl_raw)
    report = extremal_variances(trace, eta=0.76, v_elec=0.0073)
    print(report.to_display_string())
"""

from .models import (
    VarianceTrace,
    ShotNoiseCalibration,
    GaussianFit,
    Histogram,
    SqueezingReport,
)

from .calibration import (
    calibrate_shot_noise,
    calibrate_from_pairs,
    calibrate_from_vacuum,
)

from .blocks import (
    variance_stderr,
    block_variances,
    block_layout,
    as_arrays,
)

from .inference import (
    to_db,
    from_db,
    db_uncertainty,
    infer_squeezing_from_gains,
    inference_jacobian,
    propagate_inference_uncertainty,
    cross_check_efficiency,
)

from .distribution import (
    gaussian_fit,
    histogram,
    ks_critical,
    chi_square_per_dof,
)

from .extremal import (
    extremal_variances,
    fit_sinusoid,
    phase_coverage,
)

__all__ = [
    # Models
    "VarianceTrace",
    "ShotNoiseCalibration",
    "GaussianFit",
    "Histogram",
    "SqueezingReport",

    # Calibration
    "calibrate_shot_noise",
    "calibrate_from_pairs",
    "calibrate_from_vacuum",

    # Blocks
    "variance_stderr",
    "block_variances",
    "block_layout",
    "as_arrays",

    # Inference
    "to_db",
    "from_db",
    "db_uncertainty",
    "infer_squeezing_from_gains",
    "inference_jacobian",
    "propagate_inference_uncertainty",
    "cross_check_efficiency",

    # Distributions
    "gaussian_fit",
    "histogram",
    "ks_critical",
    "chi_square_per_dof",

    # Extremes
    "extremal_variances",
    "fit_sinusoid",
    "phase_coverage",
]
