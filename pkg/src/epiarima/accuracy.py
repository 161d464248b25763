"""Forecast-accuracy metrics, Lewis MAPE bands, adjusted R-squared, and
predicted-vs-actual deviation reports.

MASE scales the mean absolute error by the in-sample mean absolute first
difference of the training series (the naive one-step forecast error), so
values below 1 beat the naive method.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import _as_float_array
from .errors import DegenerateSeriesError, ValidationError


@dataclass(frozen=True)
class AccuracyReport:
    """The four error measures plus derived readings for one actual/forecast pair."""

    mae: float
    mape_pct: float
    mase: float
    rmse: float
    forecast_accuracy_pct: float
    lewis_class: str
    adj_r2: float | None
    n: int


@dataclass(frozen=True)
class DeviationReport:
    """Aggregate predicted-minus-actual deviation over a future window."""

    label: str
    overall_deviation: float
    overall_pct_deviation: float
    mape_pct: float
    mae: float
    n_days: int


def _paired(actual, predicted) -> tuple[np.ndarray, np.ndarray]:
    a = _as_float_array(actual)
    f = _as_float_array(predicted)
    if len(a) != len(f):
        raise ValidationError(f"length mismatch: actual {len(a)} vs predicted {len(f)}")
    if len(a) == 0:
        raise ValidationError("need at least one actual/predicted pair")
    return a, f


def mae(actual, predicted) -> float:
    """Mean absolute error."""
    a, f = _paired(actual, predicted)
    return float(np.mean(np.abs(a - f)))


def mape(actual, predicted) -> float:
    """Mean absolute percentage error, in percent.

    Refuses zero actual values rather than skipping them: percentage errors
    at points near zero are meaningless and silent skipping would corrupt
    cross-model comparisons.
    """
    a, f = _paired(actual, predicted)
    zeros = np.flatnonzero(a == 0.0)
    if len(zeros):
        raise ValidationError(
            f"MAPE undefined: actual value is zero at index {int(zeros[0])}"
        )
    return float(np.mean(np.abs((a - f) / a))) * 100.0


def rmse(actual, predicted) -> float:
    """Root mean squared error."""
    a, f = _paired(actual, predicted)
    return float(np.sqrt(np.mean((a - f) ** 2)))


def mase(actual, predicted, training) -> float:
    """Mean absolute scaled error against the naive in-sample benchmark.

    The denominator is mean |y_t - y_{t-1}| over the training series; pass
    ``training=actual`` for in-sample scaling.
    """
    a, f = _paired(actual, predicted)
    train = _as_float_array(training)
    if len(train) < 2:
        raise ValidationError(f"training series needs >= 2 points, got {len(train)}")
    denom = float(np.mean(np.abs(np.diff(train))))
    if denom == 0.0:
        raise DegenerateSeriesError("constant training series: naive error is zero")
    return float(np.mean(np.abs(a - f))) / denom


def lewis_class(mape_pct: float) -> str:
    """Conventional MAPE interpretation bands; edges fall to the lower class."""
    if mape_pct < 0:
        raise ValidationError(f"MAPE must be >= 0, got {mape_pct}")
    if mape_pct <= 10.0:
        return "highly accurate"
    if mape_pct <= 20.0:
        return "good"
    if mape_pct <= 50.0:
        return "reasonable"
    return "inaccurate"


def adj_r2(actual, predicted, k: int) -> float:
    """Adjusted R-squared of predicted against actual on the original scale.

    R^2 = 1 - SSE/SST with SST about the actual mean; adjusted for k model
    parameters. A plausibility measure here, not a fit criterion.
    """
    a, f = _paired(actual, predicted)
    n = len(a)
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    if n <= k + 1:
        raise ValidationError(f"adjusted R^2 needs n > k+1; got n={n}, k={k}")
    sst = float(np.sum((a - a.mean()) ** 2))
    if sst <= 0.0:
        raise DegenerateSeriesError("actual series has zero variance")
    sse = float(np.sum((a - f) ** 2))
    r2 = 1.0 - sse / sst
    return 1.0 - (1.0 - r2) * (n - 1.0) / (n - k - 1.0)


def accuracy_report(actual, predicted, training, k: int | None = None) -> AccuracyReport:
    """Bundle the four error measures (plus 100-MAPE, Lewis class, adj R^2)."""
    a, f = _paired(actual, predicted)
    mape_val = mape(a, f)
    return AccuracyReport(
        mae=mae(a, f),
        mape_pct=mape_val,
        mase=mase(a, f, training),
        rmse=rmse(a, f),
        forecast_accuracy_pct=100.0 - mape_val,
        lewis_class=lewis_class(mape_val),
        adj_r2=adj_r2(a, f, k) if k is not None else None,
        n=len(a),
    )


def deviation_report(actual_future, predicted_future, label: str = "") -> DeviationReport:
    """Total predicted minus total actual over a forecast window.

    The percentage deviation is (sum(predicted)/sum(actual) - 1) * 100.
    """
    a, f = _paired(actual_future, predicted_future)
    total_actual = float(np.sum(a))
    if total_actual == 0.0:
        raise ValidationError("actual values sum to zero; percentage deviation undefined")
    total_predicted = float(np.sum(f))
    return DeviationReport(
        label=label,
        overall_deviation=total_predicted - total_actual,
        overall_pct_deviation=(total_predicted / total_actual - 1.0) * 100.0,
        mape_pct=mape(a, f),
        mae=mae(a, f),
        n_days=len(a),
    )
