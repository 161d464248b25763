"""Daily time-series container, differencing/integration, and sample ACF/PACF.

Everything here is a pure function of immutable inputs; the container is a
frozen dataclass so fitted models and forecasts can share it safely.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSeriesError, InsufficientDataError, ValidationError

# Two-sided 95% normal quantile used for correlogram confidence bands.
Z_95 = 1.959963984540054

_ONE_DAY = dt.timedelta(days=1)


def _as_float_array(values) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValidationError(f"expected a 1-d sequence of values, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """A contiguous daily series of finite real observations.

    Parameters
    ----------
    dates : tuple of datetime.date
        Strictly increasing calendar days with step exactly one day.
    values : array-like of float
        Finite observations, one per date. Stored as a read-only float array.
    label : str
        Free-text label, e.g. a country name.
    """

    dates: tuple[dt.date, ...]
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        dates = tuple(self.dates)
        values = _as_float_array(self.values).copy()
        values.flags.writeable = False
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "values", values)
        if len(dates) == 0:
            raise InsufficientDataError("a TimeSeries needs at least one observation")
        if len(dates) != len(values):
            raise ValidationError(
                f"dates ({len(dates)}) and values ({len(values)}) differ in length"
            )
        if not np.all(np.isfinite(values)):
            bad = int(np.flatnonzero(~np.isfinite(values))[0])
            raise ValidationError(f"non-finite value at {dates[bad].isoformat()}")
        for prev, cur in zip(dates, dates[1:]):
            if cur - prev != _ONE_DAY:
                raise ValidationError(
                    f"dates must advance by exactly one day; gap or reversal after "
                    f"{prev.isoformat()} (next is {cur.isoformat()})"
                )

    @classmethod
    def from_start(cls, start: dt.date, values, label: str = "") -> "TimeSeries":
        """Build a series of consecutive days beginning at ``start``."""
        values = _as_float_array(values)
        dates = tuple(start + dt.timedelta(days=i) for i in range(len(values)))
        return cls(dates=dates, values=values, label=label)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def start(self) -> dt.date:
        return self.dates[0]

    @property
    def end(self) -> dt.date:
        return self.dates[-1]

    def slice_dates(self, start: dt.date, end: dt.date) -> "TimeSeries":
        """Inclusive date-window slice."""
        if start > end:
            raise ValidationError(f"window start {start} is after end {end}")
        if start < self.start or end > self.end:
            raise ValidationError(
                f"window {start}..{end} not covered by series "
                f"{self.start}..{self.end} ({self.label!r})"
            )
        i = (start - self.start).days
        j = (end - self.start).days + 1
        return TimeSeries(dates=self.dates[i:j], values=self.values[i:j], label=self.label)

    def differenced(self, d: int) -> "TimeSeries":
        """Return the d-times differenced series; the first d dates are dropped."""
        vals = difference(self.values, d)
        return TimeSeries(dates=self.dates[d:], values=vals, label=self.label)


@dataclass(frozen=True)
class Correlogram:
    """Sample ACF or PACF values at lags 1..max_lag with a 95% whiteness band.

    The lag-0 coefficient (always 1) is omitted; ``band_halfwidth`` is
    z_0.975 / sqrt(n).
    """

    lags: np.ndarray
    coefficients: np.ndarray
    band_halfwidth: float
    n: int

    def __post_init__(self):
        lags = np.asarray(self.lags, dtype=int)
        coefs = _as_float_array(self.coefficients)
        object.__setattr__(self, "lags", lags)
        object.__setattr__(self, "coefficients", coefs)
        if len(lags) != len(coefs):
            raise ValidationError("lags and coefficients differ in length")
        if np.any(np.abs(coefs) > 1.0 + 1e-9):
            raise ValidationError("correlation coefficient outside [-1, 1]")
        if not self.band_halfwidth > 0:
            raise ValidationError("band_halfwidth must be positive")

    def exceeding(self) -> np.ndarray:
        """Lags whose coefficient magnitude exceeds the 95% band."""
        return self.lags[np.abs(self.coefficients) > self.band_halfwidth]


def difference(values, d: int) -> np.ndarray:
    """Apply d-th order differencing: Delta^d y, length n - d.

    ``values`` may be a TimeSeries or any 1-d sequence. d=0 returns a copy.
    """
    if isinstance(values, TimeSeries):
        values = values.values
    x = _as_float_array(values)
    if d < 0:
        raise ValidationError(f"differencing order must be >= 0, got {d}")
    if len(x) <= d:
        raise InsufficientDataError(
            f"need more than d={d} observations to difference, got {len(x)}"
        )
    return np.diff(x, n=d) if d > 0 else x.copy()


def integrate(diff_values, pivot_values, d: int) -> np.ndarray:
    """Undo d-fold differencing for values that continue a known series.

    ``pivot_values[k]`` must be the last known value of Delta^k y, for
    k = 0..d-1 (see :func:`pivots_at`). Returns the continuation of y implied
    by ``diff_values`` on the Delta^d scale, so
    ``integrate(difference(y, d), pivots_at(y, d, d - 1), d)`` reproduces
    ``y[d:]`` exactly.
    """
    x = _as_float_array(diff_values)
    pivots = _as_float_array(pivot_values)
    if d < 0:
        raise ValidationError(f"integration order must be >= 0, got {d}")
    if len(pivots) != d:
        raise ValidationError(f"expected {d} pivot values, got {len(pivots)}")
    for k in reversed(range(d)):
        x = pivots[k] + np.cumsum(x)
    return x


def pivots_at(values, d: int, t: int) -> np.ndarray:
    """Pivot vector for :func:`integrate`: Delta^k y at original-time index t.

    t = d - 1 gives round-trip pivots; t = n - 1 gives the pivots needed to
    integrate forecasts appended after the series end.
    """
    if isinstance(values, TimeSeries):
        values = values.values
    x = _as_float_array(values)
    if not 0 <= t < len(x):
        raise ValidationError(f"pivot index {t} outside series of length {len(x)}")
    if t < d - 1:
        raise ValidationError(f"pivot index {t} too early for d={d}")
    out = np.empty(d)
    for k in range(d):
        out[k] = np.diff(x, n=k)[t - k] if k > 0 else x[t]
    return out


def _demeaned(values, max_lag: int) -> tuple[np.ndarray, float]:
    x = values.values if isinstance(values, TimeSeries) else _as_float_array(values)
    n = len(x)
    if max_lag < 1:
        raise ValidationError(f"max_lag must be >= 1, got {max_lag}")
    if n < max_lag + 1:
        raise InsufficientDataError(
            f"need at least max_lag + 1 = {max_lag + 1} observations, got {n}"
        )
    xc = x - x.mean()
    denom = float(np.dot(xc, xc))
    if denom <= 0.0:
        raise DegenerateSeriesError("series has zero sample variance")
    return xc, denom


def acf(values, max_lag: int) -> Correlogram:
    """Sample autocorrelation at lags 1..max_lag.

    Uses the mean-centered, lag-0-normalized (biased) estimator
    r_k = sum_t (y_t - ybar)(y_{t-k} - ybar) / sum_t (y_t - ybar)^2,
    which keeps the sample autocorrelation matrix positive semidefinite.
    """
    xc, denom = _demeaned(values, max_lag)
    n = len(xc)
    r = np.empty(max_lag)
    for k in range(1, max_lag + 1):
        r[k - 1] = np.dot(xc[k:], xc[:-k]) / denom
    return Correlogram(
        lags=np.arange(1, max_lag + 1), coefficients=r, band_halfwidth=Z_95 / np.sqrt(n), n=n
    )


def pacf_from_acf(rho: np.ndarray) -> np.ndarray:
    """Partial autocorrelations from autocorrelations via Durbin-Levinson.

    ``rho[k-1]`` is the (sample or theoretical) autocorrelation at lag k; the
    returned array has the same indexing.
    """
    rho = _as_float_array(rho)
    K = len(rho)
    out = np.empty(K)
    prev: list[float] = []
    for k in range(1, K + 1):
        if k == 1:
            phi_kk = rho[0]
        else:
            num = rho[k - 1] - sum(prev[j] * rho[k - 2 - j] for j in range(k - 1))
            den = 1.0 - sum(prev[j] * rho[j] for j in range(k - 1))
            if den <= 0.0:
                raise DegenerateSeriesError(
                    f"Durbin-Levinson recursion degenerate at lag {k} (singular prediction)"
                )
            phi_kk = num / den
        prev = [prev[j] - phi_kk * prev[k - 2 - j] for j in range(k - 1)] + [phi_kk]
        out[k - 1] = phi_kk
    return out


def pacf(values, max_lag: int) -> Correlogram:
    """Sample partial autocorrelation at lags 1..max_lag (Durbin-Levinson)."""
    sample = acf(values, max_lag)
    coefs = pacf_from_acf(sample.coefficients)
    return Correlogram(
        lags=sample.lags,
        coefficients=coefs,
        band_halfwidth=sample.band_halfwidth,
        n=sample.n,
    )
