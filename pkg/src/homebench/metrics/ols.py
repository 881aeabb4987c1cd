"""Ordinary least squares slope of a sequence against its index."""

from __future__ import annotations

from collections.abc import Sequence


class TooShortError(ValueError):
    pass


def ols_slope(x: Sequence[float]) -> float:
    """Slope of the least-squares line through (i, x_i).

    Exactly 0.0 for constant input: the analytic covariance is zero there,
    and returning it directly avoids float residue from the running sums.
    """
    m = len(x)
    if m < 2:
        raise TooShortError(f"need at least 2 points, got {m}")
    first = x[0]
    if all(v == first for v in x):
        return 0.0
    mean_i = (m - 1) / 2.0
    mean_x = sum(x) / m
    cov = 0.0
    var = 0.0
    for i, v in enumerate(x):
        di = i - mean_i
        cov += di * (v - mean_x)
        var += di * di
    return cov / var
