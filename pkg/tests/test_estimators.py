"""
Estimator pipeline: calibration, block variances, inference, Gaussian
fits, histograms and extremal variances.
"""

import math

import numpy as np
import pytest

from services.estimators import (
    VarianceTrace,
    block_variances,
    calibrate_from_pairs,
    calibrate_from_vacuum,
    calibrate_shot_noise,
    chi_square_per_dof,
    cross_check_efficiency,
    db_uncertainty,
    extremal_variances,
    fit_sinusoid,
    from_db,
    gaussian_fit,
    histogram,
    infer_squeezing_from_gains,
    inference_jacobian,
    ks_critical,
    propagate_inference_uncertainty,
    to_db,
    variance_stderr,
)
from services.dopa import DopaModel, dopa_output_state, solve_gid_operating_point
from services.gaussian import quadrature_variance
from services.homodyne import (
    DetectionChain,
    PulseRecord,
    ScanConfig,
    expected_measured_variances,
    measured_variance,
    sample_pulse_arrays,
)


def measured_state():
    r, mu = solve_gid_operating_point(2.51, 0.53)
    return dopa_output_state(DopaModel(kappa=r, p_pump=1.0, mu_gid=mu))


def sinusoid_trace(a, b, theta0, n_blocks=40, span=2 * math.pi, stderr=0.01):
    """Exact trace V(θ) = a − b·cos 2(θ − θ0) sampled at block centres."""
    phases = np.linspace(0.0, span, n_blocks)
    return [
        VarianceTrace(
            block_index=k,
            phase_mid=float(theta),
            variance_snu=a - b * math.cos(2 * (theta - theta0)),
            stderr_snu=stderr,
        )
        for k, theta in enumerate(phases)
    ]


# ════════════════════════════════════════════════════════════════
# INFERENCE FROM GAINS
# ════════════════════════════════════════════════════════════════

def test_inferred_levels_at_measured_gains():
    sq, anti = infer_squeezing_from_gains(2.51, 0.53, 0.7601)
    assert sq == pytest.approx(-1.92, abs=0.005)
    assert anti == pytest.approx(3.32, abs=0.005)


def test_unit_gains_infer_shot_noise():
    assert infer_squeezing_from_gains(1.0, 1.0, 0.76) == pytest.approx((0.0, 0.0))


def test_inference_validation():
    with pytest.raises(ValueError):
        infer_squeezing_from_gains(2.5, 0.5, 1.2)
    with pytest.raises(ValueError):
        infer_squeezing_from_gains(2.5, 0.0, 0.7)


def test_propagated_uncertainties():
    sq_err, anti_err = propagate_inference_uncertainty(2.51, 0.05, 0.53, 0.01, 0.7601, 0.01)
    assert sq_err == pytest.approx(0.060, abs=0.005)
    # First-order propagation gives the anti-squeezed level a larger error than the quoted 0.06
    assert anti_err == pytest.approx(0.083, abs=0.003)


@pytest.mark.parametrize("eta", [0.0, 0.3, 0.7601, 1.0])
def test_inference_closes_on_the_loss_model(eta):
    sq, anti = infer_squeezing_from_gains(2.51, 0.53, eta)
    assert abs(from_db(sq) - (eta * 0.53 + 1 - eta)) < 1e-12
    assert abs(from_db(anti) - (eta * 2.51 + 1 - eta)) < 1e-12


@pytest.mark.parametrize("g,eta", [(0.53, 0.7601), (2.51, 0.7601)])
def test_jacobian_matches_finite_differences(g, eta):
    d_g, d_eta = inference_jacobian(g, eta)
    h = 1e-6
    f = lambda g_, e_: to_db(e_ * g_ + 1 - e_)
    fd_g = (f(g + h, eta) - f(g - h, eta)) / (2 * h)
    fd_eta = (f(g, eta + h) - f(g, eta - h)) / (2 * h)
    assert d_g == pytest.approx(fd_g, rel=1e-6)
    assert d_eta == pytest.approx(fd_eta, rel=1e-6)


def test_db_helpers():
    assert to_db(1.0) == 0.0
    assert from_db(-3.0) == pytest.approx(0.50119, abs=1e-5)
    assert db_uncertainty(1.0, 0.01) == pytest.approx(0.04343, abs=1e-5)
    with pytest.raises(ValueError):
        to_db(0.0)


def test_efficiency_cross_check():
    eta = cross_check_efficiency(0.53, from_db(-1.87), v_elec=0.0073)
    assert eta == pytest.approx(0.760, abs=0.002)
    with pytest.raises(ValueError):
        cross_check_efficiency(1.0, 0.6)


# ════════════════════════════════════════════════════════════════
# CALIBRATION
# ════════════════════════════════════════════════════════════════

def test_calibration_exact_line():
    pairs = [(n, 4e-9 * n + 0.05) for n in (5e7, 1e8, 1.5e8, 2e8)]
    cal = calibrate_from_pairs(pairs, n_lo_ref=2.5e8)
    assert cal.slope == pytest.approx(4e-9)
    assert cal.intercept == pytest.approx(0.05)
    assert cal.r_squared == pytest.approx(1.0)
    assert cal.snl_raw == pytest.approx(1.0)
    assert cal.v_elec_snu == pytest.approx(0.05)
    assert cal.shot_to_elec_db == pytest.approx(10 * math.log10(20.0))


def test_calibration_single_level_needs_no_intercept():
    with pytest.raises(ValueError, match="degenerate"):
        calibrate_from_pairs([(1e8, 0.4), (1e8, 0.41)])
    cal = calibrate_from_pairs([(1e8, 0.4)], n_lo_ref=2.5e8, fit_intercept=False)
    assert cal.snl_raw == pytest.approx(1.0)
    assert cal.intercept == 0.0


def test_calibration_from_vacuum_record():
    rng = np.random.default_rng(2)
    samples = rng.normal(0.0, 2.0, 100_000)
    cal = calibrate_from_vacuum(samples, n_lo=2.5e8)
    assert cal.snl_raw == pytest.approx(4.0, rel=0.02)
    assert math.isnan(cal.r_squared)
    assert cal.to_dict()["r_squared"] is None


def test_calibration_dispatch_requires_one_source():
    with pytest.raises(ValueError):
        calibrate_shot_noise()
    with pytest.raises(ValueError):
        calibrate_shot_noise(samples=[1.0, 2.0, 3.0])


# ════════════════════════════════════════════════════════════════
# BLOCK VARIANCES
# ════════════════════════════════════════════════════════════════

def test_variance_stderr():
    assert variance_stderr(1.0, 2501) == pytest.approx(math.sqrt(2.0 / 2500))
    with pytest.raises(ValueError):
        variance_stderr(1.0, 1)


def test_block_variances_are_unbiased_and_scaled():
    rng = np.random.default_rng(5)
    values = rng.standard_normal(10_000)
    phases = np.linspace(0.0, 1.0, 10_000)
    trace = block_variances((phases, 2.0 * values), 2_500, snl_raw=4.0)
    assert len(trace) == 4
    first = values[:2_500]
    assert trace[0].variance_snu == pytest.approx(float(np.var(first, ddof=1)))
    assert trace[0].phase_mid == pytest.approx(float(np.mean(phases[:2_500])))
    assert trace[0].stderr_snu == pytest.approx(variance_stderr(trace[0].variance_snu, 2_500))


def test_block_variances_accept_pulse_records():
    records = [PulseRecord(index=i, lo_phase=0.001 * i, value=float((-1) ** i)) for i in range(10)]
    trace = block_variances(records, 5, snl_raw=1.0)
    assert len(trace) == 2
    assert trace[0].variance_snu == pytest.approx(1.2)


def test_block_variances_drop_tail_with_warning(capsys):
    values = np.arange(25, dtype=float)
    trace = block_variances((np.zeros(25), values), 10, snl_raw=1.0)
    assert len(trace) == 2
    assert "dropped 5" in capsys.readouterr().out


def test_constant_block_is_degenerate():
    values = np.concatenate([np.zeros(10), np.arange(10, dtype=float)])
    trace = block_variances((np.zeros(20), values), 10, snl_raw=1.0)
    assert trace[0].degenerate
    assert not trace[1].degenerate


def test_error_bars_match_block_scatter():
    rng = np.random.default_rng(12)
    n_blocks, size = 400, 2_500
    values = rng.normal(0.0, math.sqrt(0.65), n_blocks * size)
    trace = block_variances((np.zeros(values.size), values), size, snl_raw=1.0)
    scatter = np.std([t.variance_snu for t in trace], ddof=1)
    assert np.mean([t.stderr_snu for t in trace]) == pytest.approx(scatter, rel=0.1)


def test_small_blocks_are_unbiased():
    rng = np.random.default_rng(19)
    n_blocks, size, v_true = 10_000, 10, 0.65
    values = rng.normal(0.0, math.sqrt(v_true), n_blocks * size)
    trace = block_variances((np.zeros(values.size), values), size, snl_raw=1.0)
    mean = np.mean([t.variance_snu for t in trace])
    tolerance = 3 * v_true * math.sqrt(2.0 / (size - 1)) / math.sqrt(n_blocks)
    assert abs(mean - v_true) < tolerance
    # The 1/n estimator sits a factor (n − 1)/n low
    assert abs(mean * (size - 1) / size - v_true) > tolerance


def test_block_means_match_the_detection_model():
    rng = np.random.default_rng(2024)
    for k in range(20):
        model = DopaModel(
            kappa=rng.uniform(0.1, 0.8),
            p_pump=1.0,
            phi=rng.uniform(0.0, 2 * math.pi),
            mu_gid=rng.uniform(0.0, 0.1),
        )
        chain = DetectionChain(eta_t=rng.uniform(0.5, 1.0), v_elec=rng.uniform(0.0, 0.05))
        theta = rng.uniform(0.0, math.pi)
        state = dopa_output_state(model)
        cfg = ScanConfig(n_pulses=50_000, seed=k, phase_start=theta, phase_end=theta)
        trace = block_variances(sample_pulse_arrays(state, chain, cfg), 2_500, snl_raw=chain.gain_raw ** 2)
        expected = measured_variance(quadrature_variance(state, theta), chain, include_elec=True)
        stderr = expected * math.sqrt(2.0 / 2_499) / math.sqrt(len(trace))
        assert np.mean([t.variance_snu for t in trace]) == pytest.approx(expected, abs=4 * stderr)


@pytest.mark.parametrize("n", [0, 5])
def test_block_variances_need_a_full_block(n):
    with pytest.raises(ValueError):
        block_variances((np.zeros(n), np.ones(n)), 10, snl_raw=1.0)


def test_block_variances_need_calibration():
    with pytest.raises(ValueError):
        block_variances((np.zeros(20), np.ones(20)), 10, snl_raw=0.0)


# ════════════════════════════════════════════════════════════════
# DISTRIBUTIONS
# ════════════════════════════════════════════════════════════════

def test_ks_critical_value():
    assert ks_critical(10_000) == pytest.approx(0.0163)


def test_gaussian_samples_fit():
    rng = np.random.default_rng(8)
    samples = rng.normal(0.5, math.sqrt(2.0), 20_000)
    fit = gaussian_fit(samples)
    assert fit.mean == pytest.approx(0.5, abs=0.05)
    assert fit.variance == pytest.approx(2.0, rel=0.05)
    assert fit.ks_statistic < 2 * fit.ks_critical


def test_uniform_samples_fail_ks():
    rng = np.random.default_rng(8)
    fit = gaussian_fit(rng.uniform(-1.0, 1.0, 20_000))
    assert not fit.passes_ks


def test_gaussian_fit_needs_samples():
    with pytest.raises(ValueError):
        gaussian_fit(np.ones(10))
    with pytest.raises(ValueError):
        gaussian_fit(np.ones(100))


def test_histogram_counts_and_overlay():
    rng = np.random.default_rng(1)
    samples = rng.standard_normal(50_000)
    hist = histogram(samples, 51, (-5.0, 5.0))
    assert hist.counts.sum() == np.count_nonzero(np.abs(samples) <= 5.0)
    assert hist.model.sum() == pytest.approx(50_000, rel=0.01)
    assert len(hist.centers) == 51


def test_chi_square_of_gaussian_samples_near_one():
    values = []
    for seed in range(10):
        samples = np.random.default_rng(seed).standard_normal(1_000_000)
        values.append(chi_square_per_dof(histogram(samples, 101, (-5.0, 5.0))))
    assert 0.8 <= np.mean(values) <= 1.25
    assert all(0.5 <= v <= 1.7 for v in values)


def test_overlay_width_ratio_matches_extremal_variances():
    state = measured_state()
    chain = DetectionChain(v_elec=0.0073)
    v_min, v_max = expected_measured_variances(state, chain)
    assert math.sqrt(v_min / v_max) == pytest.approx(0.549, abs=0.002)

    _, eigvecs = np.linalg.eigh(state.cov)
    theta_min = math.atan2(eigvecs[1, 0], eigvecs[0, 0])
    widths = []
    for k, theta in enumerate((theta_min, theta_min + math.pi / 2)):
        cfg = ScanConfig(n_pulses=100_000, seed=60 + k, phase_start=theta, phase_end=theta)
        _, values = sample_pulse_arrays(state, chain, cfg)
        widths.append(math.sqrt(gaussian_fit(values / chain.gain_raw).variance))
    assert widths[0] / widths[1] == pytest.approx(math.sqrt(v_min / v_max), abs=0.01)


def test_histogram_validation():
    with pytest.raises(ValueError):
        histogram(np.zeros(5), 1, (0.0, 1.0))
    with pytest.raises(ValueError):
        histogram(np.zeros(5), 10, (1.0, 1.0))


# ════════════════════════════════════════════════════════════════
# EXTREMAL VARIANCES
# ════════════════════════════════════════════════════════════════

def test_sinusoid_fit_recovers_exact_trace():
    report = extremal_variances(sinusoid_trace(1.4, 0.75, 0.3))
    assert report.method == "sinusoid_fit"
    assert report.fit_snu[0] == pytest.approx(0.65)
    assert report.fit_snu[1] == pytest.approx(2.15)
    assert report.fit_phase_rad == pytest.approx(0.3)
    assert report.v_min_db == pytest.approx(to_db(0.65))
    assert report.v_max_db == pytest.approx(to_db(2.15))


def test_fit_sinusoid_amplitude_is_positive():
    a, b, c, cov = fit_sinusoid(sinusoid_trace(1.0, 0.2, 1.0))
    assert a == pytest.approx(1.0)
    assert b == pytest.approx(0.2)
    assert cov.shape == (3, 3)


def test_short_coverage_falls_back_to_min_max():
    report = extremal_variances(sinusoid_trace(1.4, 0.75, 0.3, n_blocks=10, span=1.0))
    assert report.method == "min_max_block"
    assert report.fit_snu is None
    assert any("coverage" in note for note in report.notes)
    assert report.v_min_db == pytest.approx(to_db(report.minmax_snu[0]))


def test_electronic_noise_correction():
    trace = sinusoid_trace(1.4, 0.75, 0.0)
    plain = extremal_variances(trace, v_elec=0.0073)
    assert plain.v_min_db == pytest.approx(to_db(0.65))
    assert plain.corrected_db[0] == pytest.approx(to_db(0.65 - 0.0073))

    corrected = extremal_variances(trace, v_elec=0.0073, correct_elec=True)
    assert corrected.v_min_db == pytest.approx(to_db(0.65 - 0.0073))
    assert corrected.elec_correction


def test_correction_requires_electronic_level():
    with pytest.raises(ValueError):
        extremal_variances(sinusoid_trace(1.4, 0.75, 0.0), correct_elec=True)


def test_degenerate_trace_rejected():
    trace = [VarianceTrace(block_index=0, phase_mid=0.0, variance_snu=0.0, stderr_snu=0.0, degenerate=True)]
    with pytest.raises(ValueError):
        extremal_variances(trace)


def test_report_serialisation():
    report = extremal_variances(sinusoid_trace(1.4, 0.75, 0.3), eta=0.76, inferred_from_gains=(-1.92, 3.32))
    data = report.to_dict()
    assert data["method"] == "sinusoid_fit"
    assert data["eta_used"] == 0.76
    assert "squeezed" in report.to_display_string()


# ════════════════════════════════════════════════════════════════
# MEASURED OPERATING POINT ACROSS SEEDS
# ════════════════════════════════════════════════════════════════

def test_measured_levels_hold_across_seeds():
    state = measured_state()
    chain = DetectionChain(v_elec=0.0073)
    hits = 0
    for seed in range(50):
        cfg = ScanConfig(n_pulses=1_000_000, seed=seed)
        trace = block_variances(sample_pulse_arrays(state, chain, cfg), 2_500, snl_raw=chain.gain_raw ** 2)
        report = extremal_variances(trace, eta=chain.eta, v_elec=chain.v_elec)
        if abs(report.v_min_db + 1.87) <= 0.06 and abs(report.v_max_db - 3.32) <= 0.06:
            hits += 1
    assert hits >= 48
