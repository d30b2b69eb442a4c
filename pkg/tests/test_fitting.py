import math

import numpy as np
import pytest

from magictrap.dls import TrapCoefficients, dls, magic_depth
from magictrap.errors import (
    ConditioningError,
    ConventionViolationError,
    FitFailureError,
    FrequencyAmbiguityError,
    InvalidArgumentError,
    RankDeficiencyError,
)
from magictrap.fitting import (
    fit_damped_sinusoid,
    fit_dls_global,
    fit_envelope,
    magic_depth_sigma,
    make_dls_dataset,
    synth_dls,
)
from magictrap.ramsey import TrapFieldConfig, t2_star, visibility

MEASURED = TrapCoefficients(3.47e-4, -0.99e-4, 4.6e-12)
B_FIELDS = (2.8, 3.0, 3.115, 3.3)
DEPTHS = [-0.5e6 * k for k in range(1, 9)]
BETA1 = 3.47e-4


def clean_datasets():
    return [synth_dls(MEASURED, b, DEPTHS, 0.0, seed=0) for b in B_FIELDS]


def noisy_datasets(sigma, seed):
    return [synth_dls(MEASURED, b, DEPTHS, sigma, seed=seed + i)
            for i, b in enumerate(B_FIELDS)]


def sinusoid(t, v0=1.0, tau=0.206, delta=50.0, phi=0.0, offset=0.5):
    return offset + 0.5 * v0 * np.exp(-t / tau) * np.cos(
        2 * np.pi * delta * t + phi)


class TestDlsFit:
    def test_noiseless_recovery(self):
        fit = fit_dls_global(clean_datasets(), beta1_fixed=BETA1)
        assert fit.parameters["beta2"] == pytest.approx(-0.99e-4, rel=1e-9)
        assert fit.parameters["beta4"] == pytest.approx(4.6e-12, rel=1e-9)

    def test_free_beta1_mode(self):
        fit = fit_dls_global(clean_datasets(), beta1_fixed=0.0, free_beta1=True)
        assert fit.parameters["beta1"] == pytest.approx(BETA1, rel=1e-8)
        assert fit.parameters["beta2"] == pytest.approx(-0.99e-4, rel=1e-8)
        assert fit.parameters["beta4"] == pytest.approx(4.6e-12, rel=1e-8)

    def test_noisy_estimates_within_bounds(self):
        for seed in range(10):
            fit = fit_dls_global(noisy_datasets(2.0, 100 + 31 * seed),
                                 beta1_fixed=BETA1)
            assert abs(fit.parameters["beta2"] + 0.99e-4) < 5 * fit.stderr("beta2")
            assert abs(fit.parameters["beta4"] - 4.6e-12) < 5 * fit.stderr("beta4")

    def test_single_field_degeneracy(self):
        datasets = [synth_dls(MEASURED, 3.115, DEPTHS, 0.0, seed=s)
                    for s in range(2)]
        with pytest.raises(RankDeficiencyError):
            fit_dls_global(datasets, beta1_fixed=BETA1)

    def test_near_singular_design(self):
        # freeing beta1 with two almost identical fields makes the U and
        # B*U columns collinear
        datasets = [synth_dls(MEASURED, 3.0, DEPTHS, 0.0, seed=0),
                    synth_dls(MEASURED, 3.0 + 1e-10, DEPTHS, 0.0, seed=1)]
        with pytest.raises(ConditioningError) as info:
            fit_dls_global(datasets, beta1_fixed=0.0, free_beta1=True)
        assert info.value.condition_number > 1e12

    def test_covariance_scales_with_noise(self):
        # with known per-point sigmas the covariance is (A' W A)^-1, so
        # doubling sigma exactly quadruples every variance
        a = fit_dls_global(noisy_datasets(2.0, 5), beta1_fixed=BETA1)
        b = fit_dls_global(noisy_datasets(4.0, 5), beta1_fixed=BETA1)
        np.testing.assert_allclose(b.covariance, 4.0 * a.covariance, rtol=1e-9)

    def test_chi2_per_dof_concentration(self):
        depths = list(np.linspace(-0.4e6, -5e6, 32))
        good = 0
        for seed in range(20):
            datasets = [synth_dls(MEASURED, b, depths, 2.0, seed=700 + 13 * seed + i)
                        for i, b in enumerate(B_FIELDS)]
            fit = fit_dls_global(datasets, beta1_fixed=BETA1)
            good += 0.5 <= fit.chi_square / fit.dof <= 1.5
        assert good >= 18

    def test_magic_depth_uncertainty_scaling(self):
        # clean shifts with a declared sigma column: the fitted values are
        # identical, so the propagated vertex uncertainty scales exactly
        def declared(sigma):
            return [make_dls_dataset(
                b, DEPTHS, [dls(MEASURED, b, d) for d in DEPTHS],
                [sigma] * len(DEPTHS)) for b in B_FIELDS]

        a = fit_dls_global(declared(2.0), beta1_fixed=BETA1)
        b = fit_dls_global(declared(4.0), beta1_fixed=BETA1)
        sigma_a = magic_depth_sigma(a, BETA1, 3.115)
        sigma_b = magic_depth_sigma(b, BETA1, 3.115)
        assert sigma_a > 0
        assert sigma_b == pytest.approx(2.0 * sigma_a, rel=1e-9)
        assert sigma_a < 0.2 * abs(magic_depth(MEASURED, 3.115))


class TestDampedSinusoidFit:
    def test_noiseless_recovery(self):
        t = np.linspace(0.0, 0.4, 100)
        fit = fit_damped_sinusoid(list(zip(t, sinusoid(t))))
        assert fit.parameters["v0"] == pytest.approx(1.0, rel=1e-6)
        assert fit.parameters["tau"] == pytest.approx(0.206, rel=1e-6)
        assert fit.parameters["delta"] == pytest.approx(50.0, rel=1e-6)
        assert abs(fit.parameters["phi"]) < 1e-6
        assert fit.parameters["offset"] == pytest.approx(0.5, rel=1e-6)

    def test_noiseless_recovery_general_phase(self):
        t = np.linspace(0.0, 0.42, 120)
        clean = sinusoid(t, v0=0.9, tau=0.205, delta=37.0, phi=0.7, offset=0.48)
        fit = fit_damped_sinusoid(list(zip(t, clean)))
        assert fit.parameters["tau"] == pytest.approx(0.205, rel=1e-6)
        assert fit.parameters["delta"] == pytest.approx(37.0, rel=1e-6)
        assert fit.parameters["phi"] == pytest.approx(0.7, abs=1e-6)

    def test_noisy_tau_within_three_sigma_mostly(self):
        hits = 0
        t = np.linspace(0.0, 0.4, 100)
        for seed in range(20):
            rng = np.random.default_rng(4000 + seed)
            noisy = sinusoid(t) + rng.normal(0.0, 0.05, t.size)
            fit = fit_damped_sinusoid([(ti, pi, 0.05)
                                       for ti, pi in zip(t, noisy)])
            hits += abs(fit.parameters["tau"] - 0.206) <= 3 * fit.stderr("tau")
        assert hits >= 18

    def test_time_origin_shift_invariance(self):
        # both runs land in the same minimum: chi^2 matches to 1e-12 and the
        # residual vectors to well under the noise scale; tau itself is only
        # pinned to ~1e-9 relative because the cost surface is flat there
        t = np.linspace(0.0, 0.4, 100)
        rng = np.random.default_rng(8)
        data = sinusoid(t) + rng.normal(0.0, 0.02, t.size)
        base = fit_damped_sinusoid([(ti, pi, 0.02) for ti, pi in zip(t, data)])
        shift = 0.05
        moved = fit_damped_sinusoid([(ti - shift, pi, 0.02)
                                     for ti, pi in zip(t, data)])
        assert moved.chi_square == pytest.approx(base.chi_square, rel=1e-12)
        assert moved.parameters["tau"] == pytest.approx(
            base.parameters["tau"], rel=1e-7)
        assert moved.parameters["delta"] == pytest.approx(
            base.parameters["delta"], rel=1e-9)

        def weighted_residuals(fit, times):
            p = fit.parameters
            model = (p["offset"] + 0.5 * p["v0"] * np.exp(-times / p["tau"])
                     * np.cos(2 * np.pi * p["delta"] * times + p["phi"]))
            return (model - data) / 0.02

        delta_r = weighted_residuals(base, t) - weighted_residuals(moved, t - shift)
        assert np.max(np.abs(delta_r)) < 1e-5
        # amplitude and phase transform with the shift: the moved model is
        # M(t' + shift), so v0 picks up exp(-shift/tau) and phi gains
        # 2*pi*delta*shift
        expected_v0 = base.parameters["v0"] * math.exp(
            -shift / base.parameters["tau"])
        assert moved.parameters["v0"] == pytest.approx(expected_v0, rel=1e-7)
        expected_phi = math.remainder(
            base.parameters["phi"] + 2 * math.pi * base.parameters["delta"] * shift,
            2 * math.pi)
        assert moved.parameters["phi"] == pytest.approx(expected_phi, abs=1e-7)

    def test_too_few_samples(self):
        t = np.linspace(0.0, 0.4, 9)
        with pytest.raises(InvalidArgumentError):
            fit_damped_sinusoid(list(zip(t, sinusoid(t))))

    def test_underresolved_period(self):
        t = np.linspace(0.0, 0.4, 50)
        slow = 0.5 + 0.4 * np.cos(2 * np.pi * 1.0 * t)  # 0.4 of a period
        with pytest.raises(FrequencyAmbiguityError):
            fit_damped_sinusoid(list(zip(t, slow)))


class TestEnvelopeFit:
    def test_exact_exponential(self):
        t = np.linspace(0.0, 1.0, 6)
        v = np.exp(-t / 0.225)
        fit = fit_envelope(list(zip(t, v)))
        assert fit.parameters["tau"] == pytest.approx(0.225, rel=1e-9)

    def test_unit_start_is_consistent(self):
        # v(0) = 1 contributes nothing in log space
        t = [0.0, 0.1, 0.2, 0.3]
        v = [1.0] + [math.exp(-x / 0.5) for x in t[1:]]
        fit = fit_envelope(list(zip(t, v)))
        assert fit.parameters["tau"] == pytest.approx(0.5, rel=1e-9)

    def test_nonpositive_rejected(self):
        with pytest.raises(InvalidArgumentError):
            fit_envelope([(0.0, 1.0), (0.1, 0.5), (0.2, 0.0), (0.3, 0.1)])

    def test_no_decay_rejected(self):
        # v stuck at 1 gives a zero slope, which has no decay time
        with pytest.raises(FitFailureError):
            fit_envelope([(0.0, 1.0), (0.1, 1.0), (0.2, 1.0), (0.3, 1.0)])

    def test_above_unity_rejected(self):
        with pytest.raises(InvalidArgumentError):
            fit_envelope([(0.0, 1.0), (0.1, 1.2), (0.2, 0.7), (0.3, 0.5)])

    def test_against_thermal_envelope(self):
        # the true envelope is not exponential; the log fit lands within
        # 35% of the 1/e crossing
        cfg = TrapFieldConfig(MEASURED, 3.115, magic_depth(MEASURED, 3.115),
                              17e-6)
        times = np.linspace(0.0, 2.0, 9)
        values = [visibility(cfg, float(t)) for t in times]
        fit = fit_envelope(list(zip(times, values)))
        assert fit.parameters["tau"] == pytest.approx(t2_star(cfg), rel=0.35)


class TestSynthDls:
    def test_zero_noise_reproduces_model(self):
        ds = synth_dls(MEASURED, 3.115, DEPTHS, 0.0, seed=5)
        for depth, shift, _ in ds.points:
            assert shift == dls(MEASURED, 3.115, depth)

    def test_seed_determinism(self):
        a = synth_dls(MEASURED, 3.115, DEPTHS, 2.0, seed=5)
        b = synth_dls(MEASURED, 3.115, DEPTHS, 2.0, seed=5)
        assert a.points == b.points
        c = synth_dls(MEASURED, 3.115, DEPTHS, 2.0, seed=6)
        assert a.points != c.points

    def test_residual_variance_matches_noise(self):
        depths = [-1e6 - 5e3 * k for k in range(1000)]
        ds = synth_dls(MEASURED, 3.115, depths, 2.0, seed=7)
        residuals = [shift - dls(MEASURED, 3.115, depth)
                     for depth, shift, _ in ds.points]
        assert np.var(residuals) == pytest.approx(4.0, rel=0.2)

    def test_positive_depth_rejected(self):
        with pytest.raises(ConventionViolationError):
            synth_dls(MEASURED, 3.115, [1e6, -1e6, -2e6], 0.0, seed=1)


class TestDatasetValidation:
    def test_minimum_points(self):
        with pytest.raises(InvalidArgumentError):
            make_dls_dataset(3.115, [-1e6, -2e6], [-100.0, -200.0])

    def test_bad_sigma(self):
        with pytest.raises(InvalidArgumentError):
            make_dls_dataset(3.115, [-1e6, -2e6, -3e6],
                             [-100.0, -200.0, -300.0], [1.0, 0.0, 1.0])
