"""KPSS stationarity test and the differencing-order chooser built on it.

The null hypothesis is stationarity (around a level or a linear trend);
rejection indicates a unit root and motivates another difference.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import TimeSeries, _as_float_array, difference
from .errors import DegenerateSeriesError, InsufficientDataError, ValidationError

# Asymptotic critical values from Kwiatkowski, Phillips, Schmidt & Shin (1992),
# Table 1, for the level (eta_mu) and trend (eta_tau) statistics.
KPSS_CRITICAL_VALUES: dict[str, dict[float, float]] = {
    "level": {0.10: 0.347, 0.05: 0.463, 0.025: 0.574, 0.01: 0.739},
    "trend": {0.10: 0.119, 0.05: 0.146, 0.025: 0.176, 0.01: 0.216},
}


@dataclass(frozen=True)
class KpssResult:
    """Outcome of a KPSS test.

    ``reject_at_5pct`` is True exactly when ``statistic`` exceeds the 5%
    critical value, i.e. when stationarity is rejected.
    """

    statistic: float
    null_kind: str
    bandwidth: int
    critical_values: dict[float, float]
    reject_at_5pct: bool

    def rejects_at(self, alpha: float) -> bool:
        if alpha not in self.critical_values:
            raise ValidationError(
                f"no KPSS critical value tabulated at alpha={alpha}; "
                f"choose one of {sorted(self.critical_values)}"
            )
        return self.statistic > self.critical_values[alpha]


def default_bandwidth(n: int) -> int:
    """Short-lag Newey-West bandwidth, floor(4 * (n/100)^(1/4))."""
    return int(np.floor(4.0 * (n / 100.0) ** 0.25))


def kpss_test(values, null_kind: str = "level", bandwidth: int | None = None) -> KpssResult:
    """KPSS test of the null that ``values`` is stationary.

    Parameters
    ----------
    values : array-like or TimeSeries
        Series under test; at least 10 finite observations.
    null_kind : {"level", "trend"}
        Stationarity around a constant, or around a constant plus linear trend.
    bandwidth : int, optional
        Bartlett-kernel lag truncation for the long-run variance; defaults to
        :func:`default_bandwidth`.

    Notes
    -----
    The statistic is n^-2 * sum_t S_t^2 / s^2(l), where S_t are partial sums
    of the regression residuals and s^2(l) is the Bartlett long-run variance.
    """
    if isinstance(values, TimeSeries):
        values = values.values
    y = _as_float_array(values)
    n = len(y)
    if n < 10:
        raise InsufficientDataError(f"KPSS needs at least 10 observations, got {n}")
    if not np.all(np.isfinite(y)):
        raise ValidationError("KPSS input contains non-finite values")
    if null_kind not in KPSS_CRITICAL_VALUES:
        raise ValidationError(f"null_kind must be 'level' or 'trend', got {null_kind!r}")

    if null_kind == "level":
        e = y - y.mean()
    else:
        X = np.column_stack([np.ones(n), np.arange(1.0, n + 1.0)])
        beta, *_ = np.linalg.lstsq(X, y, rcond=None)
        e = y - X @ beta

    ell = default_bandwidth(n) if bandwidth is None else int(bandwidth)
    if ell < 0:
        raise ValidationError(f"bandwidth must be >= 0, got {ell}")

    s2 = float(np.dot(e, e)) / n
    for j in range(1, ell + 1):
        w = 1.0 - j / (ell + 1.0)
        s2 += 2.0 * w * float(np.dot(e[j:], e[:-j])) / n
    if s2 <= 0.0:
        raise DegenerateSeriesError("zero long-run variance (constant or degenerate series)")

    S = np.cumsum(e)
    stat = float(np.dot(S, S)) / (n * n * s2)
    crit = KPSS_CRITICAL_VALUES[null_kind]
    return KpssResult(
        statistic=stat,
        null_kind=null_kind,
        bandwidth=ell,
        critical_values=dict(crit),
        reject_at_5pct=stat > crit[0.05],
    )


def choose_d(series, max_d: int = 2, alpha: float = 0.05) -> int:
    """Smallest d <= max_d whose d-th difference passes the KPSS level test.

    Returns max_d when no difference up to max_d is accepted. Differenced
    incidence has no deterministic trend by construction, so the level null
    is used at every d.
    """
    values = series.values if isinstance(series, TimeSeries) else _as_float_array(series)
    if max_d < 0:
        raise ValidationError(f"max_d must be >= 0, got {max_d}")
    if len(values) - max_d < 10:
        raise InsufficientDataError(
            f"need at least max_d + 10 = {max_d + 10} observations, got {len(values)}"
        )
    for d in range(max_d + 1):
        result = kpss_test(difference(values, d), null_kind="level")
        if not result.rejects_at(alpha):
            return d
    return max_d
