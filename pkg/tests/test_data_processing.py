"""
Unit tests for the data_processing module.
"""

import math

import pytest

from meshsim.data_processing import (
    calculate_stats,
    correlation,
    empirical_cdf,
    fraction_at_most,
    percentile,
)


@pytest.mark.unit
class TestEmpiricalCdf:
    """Tests for empirical CDF construction."""

    def test_distinct_values(self):
        points = empirical_cdf([3000, 1000, 2000])

        assert [v for v, _ in points] == [1000, 2000, 3000]
        assert [f for _, f in points] == pytest.approx([1 / 3, 2 / 3, 1.0])

    def test_ties_collapse_to_one_point(self):
        points = empirical_cdf([5, 5, 5, 9])

        assert points == [(5, 0.75), (9, 1.0)]

    def test_empty_sample(self):
        assert empirical_cdf([]) == []


@pytest.mark.unit
class TestPercentile:
    """Tests for nearest-rank percentiles."""

    def test_returns_observed_value(self):
        sample = list(range(1, 101))

        assert percentile(sample, 50) == 50
        assert percentile(sample, 80) == 80
        assert percentile(sample, 99) == 99

    def test_single_value(self):
        assert percentile([42], 99) == 42

    def test_empty_is_nan(self):
        assert math.isnan(percentile([], 50))


@pytest.mark.unit
class TestFractionAtMost:
    """Tests for threshold fractions."""

    def test_inclusive_limit(self):
        assert fraction_at_most([1, 2, 3, 4], 2) == 0.5

    def test_empty(self):
        assert fraction_at_most([], 10) == 0.0


@pytest.mark.unit
class TestCalculateStats:
    """Tests for calculate_stats function."""

    def test_basic_stats(self):
        stats = calculate_stats([1, 2, 3, 4, 5])

        assert stats['count'] == 5
        assert stats['mean'] == 3.0
        assert stats['median'] == 3.0
        assert stats['min'] == 1.0
        assert stats['max'] == 5.0
        assert stats['std_dev'] == pytest.approx(1.5811, rel=1e-3)

    def test_single_value(self):
        assert calculate_stats([7])['std_dev'] == 0.0

    def test_empty_list(self):
        assert calculate_stats([]) == {}


@pytest.mark.unit
class TestCorrelation:
    """Tests for Pearson correlation."""

    def test_perfect_linear(self):
        assert correlation([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0)

    def test_constant_sample_is_nan(self):
        assert math.isnan(correlation([1, 1, 1], [1, 2, 3]))

    def test_too_few_points(self):
        assert math.isnan(correlation([1], [2]))

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            correlation([1, 2], [1])
