import random

import numpy as np
import pytest
import scipy.stats

from convo_miner.correlate import (
    CorrelationReport,
    DegenerateSeriesError,
    correlation_suite,
    kendall_tau_b,
    midranks,
    pearson,
    spearman,
)


class TestCoefficients:
    def test_exact_linear_relation(self):
        assert pearson([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0, abs=1e-12)

    def test_fully_reversed_order(self):
        assert kendall_tau_b([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0, abs=1e-12)

    def test_spearman_with_one_swap(self):
        # 1 - 6 * sum(d^2) / (n(n^2-1)) = 1 - 12/60
        assert spearman([1, 2, 3, 4], [1, 3, 2, 4]) == pytest.approx(0.8, abs=1e-12)

    def test_midranks_average_ties(self):
        assert list(midranks(np.array([10.0, 20.0, 20.0, 30.0]))) == [1.0, 2.5, 2.5, 4.0]

    def test_against_scipy_with_ties(self):
        rng = random.Random(17)
        for _ in range(50):
            n = rng.randint(4, 40)
            xs = [rng.choice([0.0, 0.25, 0.5, rng.random()]) for _ in range(n)]
            ys = [rng.choice([0.0, 0.5, 1.0]) for _ in range(n)]
            if len(set(xs)) < 2 or len(set(ys)) < 2:
                continue
            assert pearson(xs, ys) == pytest.approx(scipy.stats.pearsonr(xs, ys)[0], abs=1e-10)
            assert spearman(xs, ys) == pytest.approx(scipy.stats.spearmanr(xs, ys)[0], abs=1e-10)
            assert kendall_tau_b(xs, ys) == pytest.approx(scipy.stats.kendalltau(xs, ys)[0], abs=1e-10)


class TestSuite:
    def test_self_correlation_is_all_ones(self):
        report = correlation_suite([0.3, 0.1, 0.8, 0.5], [0.3, 0.1, 0.8, 0.5], n_permutations=500)
        assert report.pearson == pytest.approx(1.0, abs=1e-12)
        assert report.spearman == pytest.approx(1.0, abs=1e-12)
        assert report.kendall == pytest.approx(1.0, abs=1e-12)

    def test_pvalues_within_unit_interval(self):
        report = correlation_suite([1, 2, 3, 4, 5], [1, 3, 2, 5, 4], n_permutations=1000)
        assert all(0.0 < p <= 1.0 for p in report.p_values)

    def test_strong_correlation_has_small_pvalues(self):
        rng = random.Random(3)
        xs = [i + rng.random() * 0.1 for i in range(30)]
        ys = [x * 2 + 1 for x in xs]
        report = correlation_suite(xs, ys, n_permutations=2000)
        assert all(p < 0.01 for p in report.p_values)

    def test_deterministic_given_seed(self):
        rng = random.Random(1)
        xs = [rng.random() for _ in range(20)]
        ys = [rng.random() for _ in range(20)]
        a = correlation_suite(xs, ys, n_permutations=500, seed=42)
        b = correlation_suite(xs, ys, n_permutations=500, seed=42)
        assert a == b

    def test_affine_invariance_of_pearson_and_rank_invariance(self):
        rng = random.Random(11)
        xs = [rng.random() for _ in range(25)]
        ys = [rng.choice([0.0, 0.5, 1.0]) for _ in range(25)]
        base = correlation_suite(xs, ys, n_permutations=200, seed=7)
        affine = correlation_suite([3.5 * x + 2 for x in xs], ys, n_permutations=200, seed=7)
        assert affine.pearson == pytest.approx(base.pearson, abs=1e-10)
        assert affine.spearman == pytest.approx(base.spearman, abs=1e-10)
        assert affine.kendall == pytest.approx(base.kendall, abs=1e-10)
        # any strictly increasing transform preserves the rank coefficients
        import math
        monotone = correlation_suite([math.exp(x) for x in xs], ys, n_permutations=200, seed=7)
        assert monotone.spearman == pytest.approx(base.spearman, abs=1e-10)
        assert monotone.kendall == pytest.approx(base.kendall, abs=1e-10)

    @pytest.mark.parametrize(
        "xs,ys",
        [
            ([1, 2], [1, 2]),
            ([1, 1, 1], [1, 2, 3]),
            ([1, 2, 3], [4, 4, 4]),
            ([1, 2, 3], [1, 2]),
        ],
    )
    def test_degenerate_inputs_rejected(self, xs, ys):
        with pytest.raises(DegenerateSeriesError):
            correlation_suite(xs, ys, n_permutations=10)

    def test_report_serializes(self):
        report = correlation_suite([1, 2, 3], [2, 4, 6], n_permutations=100)
        doc = report.to_dict()
        assert set(doc) == {"pearson", "spearman", "kendall", "p_values"}
