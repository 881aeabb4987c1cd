from .ols import TooShortError, ols_slope
from .improvement import improvement_rate
from .powerlaw import OutOfRangeError, match_power_law_exponent, power_curve
from .scoring import MetricsReport, ScoreSeries, report, score_series

__all__ = [
    "TooShortError",
    "ols_slope",
    "improvement_rate",
    "OutOfRangeError",
    "match_power_law_exponent",
    "power_curve",
    "MetricsReport",
    "ScoreSeries",
    "report",
    "score_series",
]
