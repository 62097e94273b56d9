import numpy as np
import pytest

import hurstlab.simharness as sh
from hurstlab import (
    ExperimentConfig,
    LevelRange,
    Method,
    MethodSummary,
    SimulationReport,
    compare_methods,
    run_experiment,
)
from hurstlab.exceptions import ExperimentError, HurstLabError, InvalidParameterError


def small_config(**overrides):
    kwargs = dict(
        hursts=(0.5,),
        n=256,
        reps=6,
        levels=LevelRange(2, 6),
        depth=6,
        base_seed=17,
    )
    kwargs.update(overrides)
    return ExperimentConfig(**kwargs)


class TestConfigValidation:
    def test_bad_hurst(self):
        with pytest.raises(InvalidParameterError):
            small_config(hursts=(1.2,))

    def test_too_few_reps(self):
        with pytest.raises(InvalidParameterError):
            small_config(reps=1)

    def test_levels_must_fit_depth(self):
        with pytest.raises(InvalidParameterError):
            small_config(depth=3, levels=LevelRange(2, 6))

    def test_soltani_needs_dyadic_length(self):
        with pytest.raises(InvalidParameterError):
            small_config(n=250, levels=LevelRange(2, 5), depth=6)

    def test_non_dyadic_fine_without_soltani(self):
        config = small_config(
            n=250, levels=LevelRange(2, 5), depth=6,
            methods=(Method.MEDL, Method.TRADITIONAL),
        )
        report = run_experiment(config)
        assert set(report.summaries[0.5]) == {Method.MEDL, Method.TRADITIONAL}


class TestRunExperiment:
    def test_aggregation_identity_two_reps(self):
        report = run_experiment(small_config(reps=2))
        for method, summary in report.summaries[0.5].items():
            values = report.estimates[0.5][method]
            assert summary.mean == values.mean()
            assert summary.mse == pytest.approx(
                summary.variance + summary.bias_squared, abs=1e-15
            )

    def test_mse_identity_every_cell(self):
        report = run_experiment(small_config(hursts=(0.3, 0.7)))
        for cells in report.summaries.values():
            for summary in cells.values():
                assert summary.mse == pytest.approx(
                    summary.variance + summary.bias_squared, abs=1e-12
                )

    def test_bit_identical_reruns(self):
        a = run_experiment(small_config())
        b = run_experiment(small_config())
        for method in a.estimates[0.5]:
            np.testing.assert_array_equal(a.estimates[0.5][method], b.estimates[0.5][method])

    def test_parallel_matches_serial(self):
        serial = run_experiment(small_config(), workers=1)
        parallel = run_experiment(small_config(), workers=2)
        for method in serial.estimates[0.5]:
            np.testing.assert_array_equal(
                serial.estimates[0.5][method], parallel.estimates[0.5][method]
            )

    def test_workers_from_environment(self, monkeypatch):
        monkeypatch.setenv(sh.THREADS_ENV, "2")
        report = run_experiment(small_config())
        assert report.threads == 2
        monkeypatch.setenv(sh.THREADS_ENV, "0")
        assert sh._resolve_workers(None) >= 1

    def test_estimates_plausible(self):
        report = run_experiment(small_config(reps=12))
        for method, values in report.estimates[0.5].items():
            assert np.all(np.isfinite(values))
            assert 0.2 < values.mean() < 0.8, method

    def test_doubling_reps_moves_mean_within_three_standard_errors(self):
        half = run_experiment(small_config(reps=20))
        full = run_experiment(small_config(reps=40))
        for method in half.summaries[0.5]:
            a, b = half.summaries[0.5][method], full.summaries[0.5][method]
            stderr = np.sqrt(a.variance / 20)
            assert abs(b.mean - a.mean) < 3 * stderr, method

    def test_failed_replicates_counted_and_abort(self, monkeypatch):
        calls = {"n": 0}
        original = sh._run_replicate

        def flaky(config, hurst, replicate):
            calls["n"] += 1
            if replicate % 2 == 0:
                raise HurstLabError("boom", category="all-zero-level")
            return original(config, hurst, replicate)

        monkeypatch.setattr(sh, "_run_replicate", flaky)
        with pytest.raises(ExperimentError):
            run_experiment(small_config())
        assert calls["n"] == 6


class TestCompareMethods:
    def fake_report(self, mses: dict) -> SimulationReport:
        config = small_config(methods=tuple(Method))
        summaries = {
            0.7: {
                Method(m): MethodSummary(mean=0.7, variance=v, bias_squared=0.0, mse=v)
                for m, v in mses.items()
            }
        }
        return SimulationReport(
            config=config, summaries=summaries, estimates={}, failures={}
        )

    def test_reference_ordering(self):
        # the published H=0.7 comparison: medla < medl < soltani < traditional
        report = self.fake_report(
            {"traditional": 0.0256, "soltani": 0.0036, "medl": 0.0033, "medla": 0.0024}
        )
        ranked = compare_methods(report)[0.7]
        assert [row["method"] for row in ranked] == ["medla", "medl", "soltani", "traditional"]
        assert ranked[0]["mse_delta_to_best"] == 0.0
        assert ranked[3]["mse_delta_to_best"] == pytest.approx(0.0232)

    def test_ties_stable_by_name(self):
        report = self.fake_report(
            {"traditional": 0.002, "soltani": 0.002, "medl": 0.002, "medla": 0.002}
        )
        ranked = compare_methods(report)[0.7]
        assert [row["method"] for row in ranked] == ["medl", "medla", "soltani", "traditional"]

    def test_single_method_rejected(self):
        config = small_config(methods=(Method.MEDL,))
        report = SimulationReport(
            config=config,
            summaries={0.5: {Method.MEDL: MethodSummary(0.5, 1e-3, 0.0, 1e-3)}},
            estimates={},
            failures={},
        )
        with pytest.raises(HurstLabError) as err:
            compare_methods(report)
        assert err.value.category == "single-method-report"
