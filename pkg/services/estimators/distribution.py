# services/estimators/distribution.py
"""
Pulse distributions: Gaussian maximum-likelihood fit with a KS distance,
and histograms overlaid with the fitted density.
"""

from __future__ import annotations
import math
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from squeeze_config import KS_CRITICAL_COEFF_1PCT, MIN_FIT_SAMPLES
from .models import GaussianFit, Histogram


def ks_critical(n: int) -> float:
    """Asymptotic KS critical distance at the 1 % level."""
    return KS_CRITICAL_COEFF_1PCT / math.sqrt(n)


def gaussian_fit(samples: Sequence[float] | np.ndarray) -> GaussianFit:
    """
    Sample mean, unbiased variance and the KS distance between the samples
    and the fitted Gaussian.
    """
    data = np.asarray(samples, dtype=float)
    if data.size < MIN_FIT_SAMPLES:
        raise ValueError(f"too few samples for a Gaussian fit: {data.size} < {MIN_FIT_SAMPLES}")
    mean = float(np.mean(data))
    variance = float(np.var(data, ddof=1))
    if variance <= 0.0:
        raise ValueError("zero variance: samples are constant")
    result = stats.kstest(data, stats.norm(loc=mean, scale=math.sqrt(variance)).cdf)
    return GaussianFit(
        mean=mean,
        variance=variance,
        ks_statistic=float(result.statistic),
        ks_critical=ks_critical(data.size),
        n_samples=int(data.size),
    )


def histogram(
    samples: Sequence[float] | np.ndarray,
    n_bins: int,
    value_range: Tuple[float, float],
    fit: Optional[GaussianFit] = None,
) -> Histogram:
    """
    Counts over n_bins equal bins of value_range plus the fitted Gaussian
    density scaled to sample count × bin width.

    Samples outside the range are not counted; the overlay still uses the
    total sample count, so it matches the counts bin by bin.
    """
    if n_bins < 2:
        raise ValueError(f"need at least 2 bins, got {n_bins}")
    lo, hi = float(value_range[0]), float(value_range[1])
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
        raise ValueError(f"invalid histogram range ({lo}, {hi})")

    data = np.asarray(samples, dtype=float)
    counts, edges = np.histogram(data, bins=n_bins, range=(lo, hi))

    if fit is None and data.size >= MIN_FIT_SAMPLES and np.ptp(data) > 0:
        fit = gaussian_fit(data)
    if fit is None:
        model = np.zeros(n_bins)
    else:
        width = (hi - lo) / n_bins
        centers = 0.5 * (edges[:-1] + edges[1:])
        density = stats.norm.pdf(centers, loc=fit.mean, scale=math.sqrt(fit.variance))
        model = density * data.size * width

    return Histogram(edges=edges, counts=counts, model=model)


def chi_square_per_dof(hist: Histogram, min_expected: float = 5.0, n_fitted: int = 2) -> float:
    """Pearson χ² of counts against the overlay, over bins with enough expectation."""
    mask = hist.model >= min_expected
    dof = int(mask.sum()) - n_fitted
    if dof < 1:
        raise ValueError("not enough populated bins for a χ² test")
    chi2 = float(np.sum((hist.counts[mask] - hist.model[mask]) ** 2 / hist.model[mask]))
    return chi2 / dof
