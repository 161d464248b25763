"""Residual adequacy tests: Ljung-Box, Engle's ARCH LM, and whiteness checks.

The portmanteau lag schedule follows the conventional five rules (T/4, 12,
sqrt(T)+10, 20, 10); non-integer rule values are reported as-is and rounded
half-up for computation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import chi2

from .core import Correlogram, _as_float_array, acf, pacf
from .errors import DegenerateSeriesError, InsufficientDataError, ValidationError

ARCH_LAG_SET = (1, 12, 24)


@dataclass(frozen=True)
class PortmanteauResult:
    """Ljung-Box outcome at a single maximum lag H."""

    lag: int
    statistic: float
    df: int
    p_value: float
    decision: str


@dataclass(frozen=True)
class ArchLmResult:
    """Engle LM outcome for ARCH effects up to lag m."""

    lag: int
    statistic: float
    p_value: float
    decision: str


@dataclass(frozen=True)
class LagSpec:
    """One portmanteau lag rule: its name, displayed value, and integer lag."""

    rule: str
    display: float
    lag: int


@dataclass(frozen=True)
class WhitenessReport:
    """Residual-correlogram verdict: spikes beyond the 95% band, if any."""

    passed: bool
    offending_acf: tuple[int, ...]
    offending_pacf: tuple[int, ...]
    band_halfwidth: float
    max_lag: int
    acf: Correlogram
    pacf: Correlogram


def ljung_box(residuals, H: int, fitdf: int = 0) -> PortmanteauResult:
    """Ljung-Box portmanteau test for residual serial correlation.

    Q = n (n+2) sum_{k=1..H} r_k^2 / (n-k), referred to chi-square with
    H - fitdf degrees of freedom. ``fitdf`` subtracts fitted ARMA parameters
    (p+q) when requested; 0 tests a raw series.
    """
    e = _as_float_array(residuals)
    n = len(e)
    if H < 1:
        raise ValidationError(f"H must be >= 1, got {H}")
    if H >= n:
        raise InsufficientDataError(f"H={H} must be smaller than the sample size {n}")
    if fitdf < 0:
        raise ValidationError(f"fitdf must be >= 0, got {fitdf}")
    df = H - fitdf
    if df <= 0:
        raise ValidationError(f"H={H} must exceed fitdf={fitdf} for a valid test")
    r = acf(e, H).coefficients
    k = np.arange(1, H + 1)
    Q = float(n * (n + 2.0) * np.sum(r * r / (n - k)))
    p = float(chi2.sf(Q, df))
    return PortmanteauResult(
        lag=H,
        statistic=Q,
        df=df,
        p_value=p,
        decision="no autocorrelation" if p > 0.05 else "autocorrelation",
    )


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def lag_schedule(n: int) -> list[LagSpec]:
    """The five conventional portmanteau lags for a sample of size n.

    Rules: T/4, 12, sqrt(T)+10, 20, and 10. Fractional rule values keep
    their exact display form; the computed lag rounds half-up.
    """
    if n < 24:
        raise InsufficientDataError(f"lag schedule needs n >= 24, got {n}")
    quarter = n / 4.0
    root10 = math.sqrt(n) + 10.0
    return [
        LagSpec(rule="T/4", display=quarter, lag=_round_half_up(quarter)),
        LagSpec(rule="12", display=12.0, lag=12),
        LagSpec(rule="sqrt(T)+10", display=root10, lag=_round_half_up(root10)),
        LagSpec(rule="20", display=20.0, lag=20),
        LagSpec(rule="10", display=10.0, lag=10),
    ]


def arch_lm(residuals, m: int) -> ArchLmResult:
    """Engle's Lagrange-multiplier test for ARCH effects up to lag m.

    Regresses e_t^2 on an intercept and e_{t-1}^2 .. e_{t-m}^2; the statistic
    is (number of regression observations) * R^2, chi-square(m) under the
    null of no conditional heteroskedasticity.
    """
    e = _as_float_array(residuals)
    n = len(e)
    if m < 1:
        raise ValidationError(f"m must be >= 1, got {m}")
    if n <= 2 * m + 1:
        raise InsufficientDataError(f"ARCH LM with m={m} needs n > {2 * m + 1}, got {n}")
    e2 = e * e
    y = e2[m:]
    X = np.column_stack([np.ones(n - m)] + [e2[m - j : n - j] for j in range(1, m + 1)])
    beta, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ beta
    sst = float(np.sum((y - y.mean()) ** 2))
    if sst <= 0.0:
        raise DegenerateSeriesError("squared residuals are constant; ARCH LM undefined")
    r2 = 1.0 - float(np.dot(resid, resid)) / sst
    stat = (n - m) * max(r2, 0.0)
    p = float(chi2.sf(stat, m))
    return ArchLmResult(
        lag=m,
        statistic=float(stat),
        p_value=p,
        decision="no arch effect" if p > 0.05 else "arch effect",
    )


def whiteness_verdict(residuals, max_lag: int) -> WhitenessReport:
    """Pass iff no ACF or PACF spike in lags 1..max_lag leaves the 95% band."""
    sample_acf = acf(residuals, max_lag)
    sample_pacf = pacf(residuals, max_lag)
    bad_acf = tuple(int(lag) for lag in sample_acf.exceeding())
    bad_pacf = tuple(int(lag) for lag in sample_pacf.exceeding())
    return WhitenessReport(
        passed=not bad_acf and not bad_pacf,
        offending_acf=bad_acf,
        offending_pacf=bad_pacf,
        band_halfwidth=sample_acf.band_halfwidth,
        max_lag=max_lag,
        acf=sample_acf,
        pacf=sample_pacf,
    )
