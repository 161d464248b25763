"""Nonseasonal ARIMA forecasting for daily epidemic-incidence series.

The pipeline: KPSS-driven differencing, AICc order search, exact Gaussian
maximum likelihood, h-step interval forecasts, residual diagnostics, and
forecast-accuracy evaluation, plus a CLI that emits each artifact.
"""

from .accuracy import (
    AccuracyReport,
    DeviationReport,
    accuracy_report,
    adj_r2,
    deviation_report,
    lewis_class,
    mae,
    mape,
    mase,
    rmse,
)
from .core import Correlogram, TimeSeries, acf, difference, integrate, pacf, pivots_at
from .diagnostics import (
    ArchLmResult,
    LagSpec,
    PortmanteauResult,
    WhitenessReport,
    arch_lm,
    lag_schedule,
    ljung_box,
    whiteness_verdict,
)
from .errors import (
    ConvergenceError,
    CsvParseError,
    DataIntegrityError,
    DegenerateSeriesError,
    EpiArimaError,
    HorizonError,
    InsufficientDataError,
    SearchFailureError,
    ValidationError,
)
from .estimation import (
    ArimaModel,
    ArimaOrder,
    aicc,
    css_objective,
    fit,
    log_likelihood,
    model_from_params,
    simulate,
)
from .forecast import (
    FinalSizeEstimate,
    Forecast,
    final_size_estimate,
    fitted_values,
    forecast,
    near_zero_crossing,
    psi_weights,
)
from .ingest import (
    BUNDLED,
    DatasetWindow,
    bundled_actuals,
    bundled_series,
    bundled_window,
    cumulative_to_daily,
    load_csv,
    make_window,
    save_csv,
)
from .selection import (
    CandidateRow,
    GridResult,
    SearchConfig,
    StepwiseResult,
    grid_search,
    stepwise_search,
)
from .stationarity import KpssResult, choose_d, default_bandwidth, kpss_test

__version__ = "0.1.0"

__all__ = [
    "AccuracyReport",
    "ArchLmResult",
    "ArimaModel",
    "ArimaOrder",
    "BUNDLED",
    "CandidateRow",
    "ConvergenceError",
    "Correlogram",
    "CsvParseError",
    "DataIntegrityError",
    "DatasetWindow",
    "DegenerateSeriesError",
    "DeviationReport",
    "EpiArimaError",
    "FinalSizeEstimate",
    "Forecast",
    "GridResult",
    "HorizonError",
    "InsufficientDataError",
    "KpssResult",
    "LagSpec",
    "PortmanteauResult",
    "SearchConfig",
    "SearchFailureError",
    "StepwiseResult",
    "TimeSeries",
    "ValidationError",
    "WhitenessReport",
    "accuracy_report",
    "acf",
    "adj_r2",
    "aicc",
    "arch_lm",
    "bundled_actuals",
    "bundled_series",
    "bundled_window",
    "choose_d",
    "css_objective",
    "cumulative_to_daily",
    "default_bandwidth",
    "deviation_report",
    "difference",
    "final_size_estimate",
    "fit",
    "fitted_values",
    "forecast",
    "grid_search",
    "integrate",
    "kpss_test",
    "lag_schedule",
    "lewis_class",
    "ljung_box",
    "load_csv",
    "log_likelihood",
    "mae",
    "make_window",
    "mape",
    "mase",
    "model_from_params",
    "near_zero_crossing",
    "pacf",
    "pivots_at",
    "psi_weights",
    "rmse",
    "save_csv",
    "simulate",
    "stepwise_search",
    "whiteness_verdict",
]
