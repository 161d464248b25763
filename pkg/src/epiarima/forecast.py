"""h-step forecasts with Gaussian prediction intervals on the original scale.

Point forecasts iterate the fitted recursion with future shocks set to zero
and are integrated back through the d differences; interval widths come from
the psi-weights (infinite moving-average coefficients) of the full integrated
operator, so the variance at step j is sigma^2 * sum_{i<j} psi_i^2.
"""

from __future__ import annotations

import datetime as dt
import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .core import _as_float_array, difference, pivots_at
from .errors import HorizonError, ValidationError
from .estimation import ArimaModel

_ONE_DAY = dt.timedelta(days=1)

DEFAULT_LEVELS = (0.80, 0.95)


@dataclass(frozen=True)
class Forecast:
    """Forecast fan: means, per-level intervals, and the psi-weights used.

    ``intervals`` maps each confidence level to (lower, upper) arrays;
    ``psi_weights[0]`` is psi_0 = 1 of the integrated representation.
    """

    horizon: int
    dates: tuple[dt.date, ...]
    mean: np.ndarray
    intervals: dict[float, tuple[np.ndarray, np.ndarray]]
    psi_weights: np.ndarray
    sigma2: float

    def half_widths(self, level: float) -> np.ndarray:
        lower, upper = self.intervals[level]
        return (upper - lower) / 2.0


def psi_weights(ar, ma, d: int, h: int) -> np.ndarray:
    """First h psi-weights of the ARIMA operator theta(B) / (phi(B) (1-B)^d)."""
    ar = _as_float_array(ar)
    ma = _as_float_array(ma)
    if h < 1:
        raise ValidationError(f"h must be >= 1, got {h}")
    # coefficients of phi(B) (1-B)^d, ascending powers of B
    phi_poly = np.concatenate([[1.0], -ar])
    for _ in range(d):
        phi_poly = np.convolve(phi_poly, [1.0, -1.0])
    big_phi = -phi_poly[1:]  # recursion weights of the integrated AR side
    P = len(big_phi)
    psi = np.zeros(h)
    psi[0] = 1.0
    for j in range(1, h):
        acc = ma[j - 1] if j - 1 < len(ma) else 0.0
        for i in range(1, min(j, P) + 1):
            acc += big_phi[i - 1] * psi[j - i]
        psi[j] = acc
    return psi


def forecast(
    model: ArimaModel,
    h: int,
    levels=DEFAULT_LEVELS,
    *,
    clamp_zero: bool = False,
) -> Forecast:
    """Forecast h steps ahead with prediction intervals at each level.

    ``clamp_zero=True`` floors the means and interval bounds at zero for
    incidence semantics; off by default so the output stays faithful to the
    linear model.
    """
    if h < 1:
        raise ValidationError(f"horizon must be >= 1, got {h}")
    if h > 10 * model.n_effective:
        raise HorizonError(
            f"horizon {h} exceeds 10x the effective sample ({model.n_effective}); "
            "forecast errors accumulate with the horizon"
        )
    levels = tuple(levels)
    for level in levels:
        if not 0.0 < level < 1.0:
            raise ValidationError(f"confidence levels must lie in (0, 1), got {level}")

    p, d, q = model.order.p, model.order.d, model.order.q
    mu = model.mu
    w = difference(model.series.values, d)

    # iterate the recursion with future shocks zero
    w_ext = list(w)
    e_ext = list(model.residuals)
    mean_diff = np.empty(h)
    for j in range(h):
        acc = mu
        for i in range(1, p + 1):
            acc += model.ar[i - 1] * (w_ext[-i] - mu)
        for jj in range(1, q + 1):
            acc += model.ma[jj - 1] * e_ext[-jj]
        w_ext.append(acc)
        e_ext.append(0.0)
        mean_diff[j] = acc

    values = model.series.values
    if d > 0:
        pivots = pivots_at(values, d, len(values) - 1)
        mean = _integrate_forecast(mean_diff, pivots, d)
    else:
        mean = mean_diff

    psi = psi_weights(model.ar, model.ma, d, h)
    sd = np.sqrt(model.sigma2 * np.cumsum(psi * psi))
    intervals: dict[float, tuple[np.ndarray, np.ndarray]] = {}
    for level in levels:
        z = norm.ppf(0.5 + level / 2.0)
        lower = mean - z * sd
        upper = mean + z * sd
        if clamp_zero:
            lower = np.maximum(lower, 0.0)
            upper = np.maximum(upper, 0.0)
        intervals[level] = (lower, upper)
    if clamp_zero:
        mean = np.maximum(mean, 0.0)

    last = model.series.end
    dates = tuple(last + (j + 1) * _ONE_DAY for j in range(h))
    return Forecast(
        horizon=h,
        dates=dates,
        mean=mean,
        intervals=intervals,
        psi_weights=psi,
        sigma2=model.sigma2,
    )


def _integrate_forecast(diffs: np.ndarray, pivots: np.ndarray, d: int) -> np.ndarray:
    out = diffs
    for k in reversed(range(d)):
        out = pivots[k] + np.cumsum(out)
    return out


def fitted_values(model: ArimaModel) -> np.ndarray:
    """One-step in-sample predictions on the original scale (length n).

    The first d entries are NaN: no prediction exists before d observations.
    """
    y = model.series.values
    d = model.order.d
    n = len(y)
    out = np.full(n, np.nan)
    fitted_diff = model.fitted
    if d == 0:
        return fitted_diff.copy()
    # invert Delta^d: y_t = w_t - sum_{k=1..d} (-1)^k C(d,k) y_{t-k}
    comb = [math.comb(d, k) * (-1.0) ** k for k in range(1, d + 1)]
    for t in range(d, n):
        acc = fitted_diff[t - d]
        for k in range(1, d + 1):
            acc -= comb[k - 1] * y[t - k]
        out[t] = acc
    return out


@dataclass(frozen=True)
class FinalSizeEstimate:
    """Cumulative observed cases plus forecast means until near-zero.

    A reporting convention, not a model quantity: the forecast means are
    summed until the first day they drop below ``threshold`` (that day
    excluded) or ``horizon`` days elapse.
    """

    total: float
    crossing_date: dt.date | None
    threshold: float
    horizon: int


def near_zero_crossing(fc: Forecast, threshold: float = 1.0) -> dt.date | None:
    """First forecast date whose mean falls below ``threshold`` (None if never)."""
    below = np.flatnonzero(fc.mean < threshold)
    return fc.dates[int(below[0])] if len(below) else None


def final_size_estimate(
    model: ArimaModel, threshold: float = 1.0, horizon: int = 365
) -> FinalSizeEstimate:
    horizon = min(horizon, 10 * model.n_effective)
    fc = forecast(model, horizon, levels=())
    crossing = near_zero_crossing(fc, threshold)
    means = fc.mean if crossing is None else fc.mean[: fc.dates.index(crossing)]
    total = float(np.sum(model.series.values) + np.sum(means))
    return FinalSizeEstimate(
        total=total, crossing_date=crossing, threshold=threshold, horizon=horizon
    )
