"""
Data Processing Module

Numeric helpers for experiment outputs: empirical CDFs, percentiles,
summary statistics and correlation.
"""

from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

Number = Union[int, float]


def empirical_cdf(values: Sequence[Number]) -> List[Tuple[Number, float]]:
    """
    Build the sorted empirical CDF of a sample.

    One point per distinct value, carrying the fraction of the sample that
    is less than or equal to it. The last point is always 1.0.

    Args:
        values: Sample values

    Returns:
        List of (value, cumulative fraction); empty for an empty sample
    """
    if len(values) == 0:
        return []

    distinct, counts = np.unique(np.asarray(values), return_counts=True)
    cumulative = np.cumsum(counts)
    total = int(cumulative[-1])

    points = []
    for value, running in zip(distinct.tolist(), cumulative.tolist()):
        points.append((value, running / total))
    return points


def percentile(values: Sequence[Number], q: float) -> float:
    """
    Percentile of a sample (nearest-rank, so the result is an observed value).

    Args:
        values: Sample values
        q: Percentile in [0, 100]

    Returns:
        The percentile, or NaN for an empty sample
    """
    if len(values) == 0:
        return float('nan')
    return float(np.percentile(np.asarray(values), q, method='inverted_cdf'))


def fraction_at_most(values: Sequence[Number], limit: Number) -> float:
    """
    Fraction of the sample that is <= limit.

    Args:
        values: Sample values
        limit: Threshold

    Returns:
        Fraction in [0, 1]; 0.0 for an empty sample
    """
    if len(values) == 0:
        return 0.0
    return float(np.mean(np.asarray(values) <= limit))


def calculate_stats(values: Sequence[Number]) -> Dict[str, float]:
    """
    Calculate basic statistics for a list of numbers.

    Args:
        values: List of numeric values

    Returns:
        Dictionary with statistical measures (empty for an empty list)
    """
    if len(values) == 0:
        return {}

    array = np.asarray(values, dtype=float)

    return {
        'count': int(array.size),
        'mean': float(np.mean(array)),
        'median': float(np.median(array)),
        'min': float(np.min(array)),
        'max': float(np.max(array)),
        'std_dev': float(np.std(array, ddof=1)) if array.size > 1 else 0.0,
    }


def correlation(x: Sequence[Number], y: Sequence[Number]) -> float:
    """
    Pearson correlation coefficient of two equally long samples.

    Args:
        x: First sample
        y: Second sample

    Returns:
        Coefficient in [-1, 1]; NaN if fewer than two points or a sample is constant
    """
    if len(x) != len(y):
        raise ValueError("samples must have equal length")
    if len(x) < 2:
        return float('nan')

    xs = np.asarray(x, dtype=float)
    ys = np.asarray(y, dtype=float)
    if np.ptp(xs) == 0 or np.ptp(ys) == 0:
        return float('nan')
    return float(np.corrcoef(xs, ys)[0, 1])


# Export main functions
__all__ = [
    'empirical_cdf',
    'percentile',
    'fraction_at_most',
    'calculate_stats',
    'correlation',
]
