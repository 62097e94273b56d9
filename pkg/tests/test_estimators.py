import math

import numpy as np
import pytest

from hurstlab import (
    FgnSpec,
    LevelRange,
    Method,
    PairSamplePlan,
    estimate_hurst,
    fgn_to_fbm,
    generate_fgn,
    get_filter,
    medl_level_stat,
    medla_level_stat,
    ndwt,
    regress_spectrum,
    sample_admissible_pairs,
    soltani_level_stat,
    traditional_level_stat,
)
from hurstlab.estimators import SpectrumPoint
from hurstlab.exceptions import (
    DegenerateLevelError,
    InvalidParameterError,
    LevelRangeError,
    PairSamplingError,
    RegressionError,
)
from hurstlab.transform import NdwtDecomposition

LN2 = math.log(2.0)


class TestLevelRange:
    def test_count(self):
        assert LevelRange(4, 9).m == 6

    def test_parse_absolute_and_relative(self):
        assert LevelRange.parse("4:9", J=11) == LevelRange(4, 9)
        assert LevelRange.parse("Jm7:Jm2", J=11) == LevelRange(4, 9)
        assert LevelRange.parse("jm5:jm2", J=8) == LevelRange(3, 6)

    @pytest.mark.parametrize("text", ["9:4", "4", "a:b", "Jm2:Jm7"])
    def test_parse_rejects(self, text):
        with pytest.raises(InvalidParameterError):
            LevelRange.parse(text, J=11)

    def test_too_few_levels(self):
        with pytest.raises(InvalidParameterError):
            LevelRange(4, 5)


class TestMedlStat:
    def test_exact_arithmetic(self):
        point = medl_level_stat(np.array([1.0, math.e, math.e**2]), j=3)
        assert point.y == pytest.approx(2.0, abs=1e-15)
        assert point.n_j == 3
        assert point.statistic_kind == "median_log_energy"

    def test_scaling_shifts_by_two_log_lambda(self):
        rng = np.random.default_rng(0)
        coeffs = rng.standard_normal(501)
        base = medl_level_stat(coeffs, j=0).y
        scaled = medl_level_stat(2.0 * coeffs, j=0).y
        assert scaled - base == pytest.approx(2 * LN2, abs=1e-12)

    def test_permutation_invariant(self):
        rng = np.random.default_rng(1)
        coeffs = rng.standard_normal(400)
        shuffled = rng.permutation(coeffs)
        assert medl_level_stat(coeffs, 0).y == medl_level_stat(shuffled, 0).y

    def test_even_length_midpoint_convention(self):
        point = medl_level_stat(np.array([1.0, math.e, math.e**2, math.e**3]), j=0)
        assert point.y == pytest.approx(3.0, abs=1e-15)

    def test_gaussian_population_median(self):
        # median of ln chi2_1 is ln((Phi^-1(3/4))^2) = -0.78760 (frozen from
        # the published normal quantile)
        z = np.random.default_rng(2).standard_normal(10**6)
        point = medl_level_stat(z, j=0)
        assert point.y == pytest.approx(-0.7875975992017823, abs=0.005)

    def test_all_zero_level_rejected(self):
        with pytest.raises(DegenerateLevelError) as err:
            medl_level_stat(np.zeros(32), j=0)
        assert err.value.category == "all-zero-level"

    def test_mostly_zero_level_rejected(self):
        coeffs = np.concatenate([np.zeros(20), np.ones(80)])
        with pytest.raises(DegenerateLevelError) as err:
            medl_level_stat(coeffs, j=0)
        assert err.value.category == "degenerate-level"

    def test_few_zeros_excluded(self):
        coeffs = np.concatenate([np.zeros(5), np.full(95, math.e)])
        point = medl_level_stat(coeffs, j=0)
        assert point.y == pytest.approx(2.0, abs=1e-15)
        assert point.n_j == 95


class TestMedlaStat:
    def test_constant_coefficients(self):
        plan = PairSamplePlan(j=5, min_distance=4, count=64, seed=9)
        point = medla_level_stat(np.full(64, 3.0), plan)
        assert point.y == pytest.approx(2 * math.log(3.0), abs=1e-15)

    def test_deterministic_given_seed(self):
        coeffs = np.random.default_rng(3).standard_normal(256)
        plan = PairSamplePlan(j=4, min_distance=8, count=256, seed=77)
        assert medla_level_stat(coeffs, plan).y == medla_level_stat(coeffs, plan).y

    def test_pair_distance_constraint(self):
        k1, k2 = sample_admissible_pairs(64, 16, 5000, np.random.default_rng(4))
        assert np.all(np.abs(k1 - k2) >= 16)
        assert k1.size == 5000

    def test_pairs_cover_admissible_set(self):
        k1, k2 = sample_admissible_pairs(32, 16, 20000, np.random.default_rng(5))
        # both orientations drawn, minimum gap realized
        assert (k1 > k2).any() and (k1 < k2).any()
        assert np.abs(k1 - k2).min() == 16

    def test_no_admissible_pair(self):
        with pytest.raises(PairSamplingError):
            sample_admissible_pairs(8, 8, 10, np.random.default_rng(6))

    def test_pair_average_population_median(self):
        # median of ln(chi2_2 / 2) = ln(ln 2)
        z = np.random.default_rng(7).standard_normal(2 * 10**6)
        plan = PairSamplePlan(j=0, min_distance=1, count=10**6, seed=8)
        point = medla_level_stat(z, plan)
        assert point.y == pytest.approx(-0.36651292058166435, abs=0.005)


class TestSoltaniStat:
    def test_constant(self):
        point = soltani_level_stat(np.array([2.0, 2.0, 2.0, 2.0]), j=0)
        assert point.y == pytest.approx(2.0, abs=1e-15)

    def test_hand_computed(self):
        point = soltani_level_stat(np.array([1.0, 1.0, math.sqrt(3), math.sqrt(3)]), j=0)
        assert point.y == pytest.approx(1.0, abs=1e-12)

    def test_gaussian_population_mean(self):
        # mean of log2(chi2_2 / 2) = -euler_gamma / ln 2
        z = np.random.default_rng(8).standard_normal(2 * 10**6)
        point = soltani_level_stat(z, j=0)
        assert point.y == pytest.approx(-0.8327461772768672, abs=0.005)

    def test_odd_length_rejected(self):
        with pytest.raises(InvalidParameterError):
            soltani_level_stat(np.ones(5), j=0)


class TestTraditionalStat:
    def test_unit_energy(self):
        assert traditional_level_stat(np.ones(4), j=0).y == 0.0

    def test_mean_of_mixed(self):
        assert traditional_level_stat(np.array([0.0, 2.0]), j=0).y == pytest.approx(1.0)

    def test_large_sample_anchors_to_log_variance(self):
        sigma = 3.0
        z = sigma * np.random.default_rng(9).standard_normal(2**16)
        point = traditional_level_stat(z, j=0)
        assert point.y == pytest.approx(2 * math.log2(sigma), abs=0.02)

    def test_all_zero_rejected(self):
        with pytest.raises(DegenerateLevelError):
            traditional_level_stat(np.zeros(8), j=0)


def _points(js, ys):
    return [SpectrumPoint(j, y, 1, "median_log_energy") for j, y in zip(js, ys)]


class TestRegression:
    def test_flat_spectrum(self):
        slope, _ = regress_spectrum(_points(range(4, 10), [1.25] * 6))
        assert slope == pytest.approx(0.0, abs=1e-15)

    def test_exact_line_through_hurst_mapping(self):
        js = range(4, 10)
        slope, intercept = regress_spectrum(_points(js, [-3 * LN2 * j + 1 for j in js]))
        assert slope == pytest.approx(-3 * LN2, abs=1e-12)
        assert intercept == pytest.approx(1.0, abs=1e-12)
        assert -slope / (2 * LN2) - 0.5 == pytest.approx(1.0, abs=1e-12)

    def test_matches_generic_least_squares(self):
        js = np.arange(2, 8)
        ys = -2.0 * js + 0.5
        slope, intercept = regress_spectrum(_points(js, ys))
        oracle = np.polyfit(js, ys, 1)
        assert slope == pytest.approx(oracle[0], abs=1e-12)
        assert intercept == pytest.approx(oracle[1], abs=1e-12)

    def test_noisy_case_against_polyfit(self):
        rng = np.random.default_rng(10)
        js = np.arange(3, 11)
        ys = -1.7 * js + rng.standard_normal(js.size)
        slope, intercept = regress_spectrum(_points(js, ys))
        oracle = np.polyfit(js, ys, 1)
        assert slope == pytest.approx(oracle[0], abs=1e-12)
        assert intercept == pytest.approx(oracle[1], abs=1e-12)

    def test_non_consecutive_rejected(self):
        with pytest.raises(RegressionError):
            regress_spectrum(_points([1, 2, 4, 5], [0.0] * 4))

    def test_too_few_levels_rejected(self):
        with pytest.raises(RegressionError):
            regress_spectrum(_points([1, 2], [0.0, 0.0]))


def synthetic_decomposition(hurst, sigma=1.0, n=2**20, depth=7, seed=0):
    """Independent Gaussian levels obeying the coefficient variance law,
    bypassing any transform: isolates the regression arithmetic."""
    rng = np.random.default_rng(seed)
    J = 20
    details = {}
    for s in range(2, depth + 1):
        j = J - s
        sd = sigma * 2.0 ** (-(2 * hurst + 1) * j / 2)
        details[s] = sd * rng.standard_normal(n)
    return NdwtDecomposition(
        details=details, coarse=np.zeros(n), n=n, depth=depth, filter=get_filter("haar")
    )


class TestEstimateHurst:
    @pytest.mark.parametrize("hurst", [0.3, 0.7])
    def test_population_anchor_medl(self, hurst):
        decomp = synthetic_decomposition(hurst, seed=11)
        est = estimate_hurst(decomp, Method.MEDL, LevelRange(13, 18))
        assert est.hurst == pytest.approx(hurst, abs=0.01)

    def test_population_anchor_medla(self):
        decomp = synthetic_decomposition(0.5, seed=12)
        est = estimate_hurst(decomp, Method.MEDLA, LevelRange(13, 18), seed=1)
        assert est.hurst == pytest.approx(0.5, abs=0.01)

    def test_scale_equivariance(self):
        path = fgn_to_fbm(generate_fgn(FgnSpec(hurst=0.6, length=1024, seed=13)))
        lam = 7.5
        levels = LevelRange(4, 8)
        for method in Method:
            base = estimate_hurst(ndwt(path, "haar", 6), method, levels, seed=3)
            scaled = estimate_hurst(
                ndwt(lam * path.samples, "haar", 6), method, levels, seed=3
            )
            assert scaled.hurst == pytest.approx(base.hurst, abs=1e-12), method
            if method in (Method.MEDL, Method.MEDLA):
                expected_shift = 2 * math.log(lam)
            else:
                expected_shift = 2 * math.log2(lam)
            for p_base, p_scaled in zip(base.points, scaled.points):
                assert p_scaled.y - p_base.y == pytest.approx(expected_shift, abs=1e-10)

    def test_shift_invariance_medl(self):
        path = fgn_to_fbm(generate_fgn(FgnSpec(hurst=0.4, length=1024, seed=14)))
        levels = LevelRange(4, 8)
        base = estimate_hurst(ndwt(path, "haar", 6), Method.MEDL, levels)
        moved = estimate_hurst(ndwt(np.roll(path.samples, 100), "haar", 6), Method.MEDL, levels)
        assert moved.hurst == base.hurst  # multiset of coefficients is identical

    def test_seed_required_for_medla(self):
        decomp = ndwt(np.random.default_rng(15).standard_normal(256), "haar", 6)
        with pytest.raises(InvalidParameterError):
            estimate_hurst(decomp, Method.MEDLA, LevelRange(3, 6))

    def test_range_must_exist(self):
        decomp = ndwt(np.random.default_rng(16).standard_normal(256), "haar", 3)
        with pytest.raises(LevelRangeError):
            estimate_hurst(decomp, Method.MEDL, LevelRange(1, 7))

    def test_theoretical_variance_attached(self):
        decomp = ndwt(np.random.default_rng(17).standard_normal(2048), "haar", 7)
        medl = estimate_hurst(decomp, Method.MEDL, LevelRange(4, 9))
        medla = estimate_hurst(decomp, Method.MEDLA, LevelRange(4, 9), seed=0)
        trad = estimate_hurst(decomp, Method.TRADITIONAL, LevelRange(4, 9))
        assert medl.theoretical_variance == pytest.approx(7.900719296638874e-05, rel=1e-12)
        assert medla.theoretical_variance == pytest.approx(3.021830939657033e-05, rel=1e-12)
        assert trad.theoretical_variance is None

    def test_hurst_slope_consistency(self):
        decomp = ndwt(np.random.default_rng(18).standard_normal(1024), "haar", 6)
        est = estimate_hurst(decomp, Method.MEDL, LevelRange(4, 8))
        assert est.hurst == pytest.approx(-est.slope / (2 * LN2) - 0.5, abs=1e-15)
        trad = estimate_hurst(decomp, Method.TRADITIONAL, LevelRange(4, 8))
        assert trad.hurst == pytest.approx(-(trad.slope + 1) / 2, abs=1e-15)
