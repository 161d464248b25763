"""ARIMA(p,d,q) Gaussian maximum-likelihood estimation.

The exact likelihood comes from a state-space prediction-error decomposition
(companion-form transition, stationary initial covariance), with the
innovation variance concentrated out during optimization. Optimization runs
in an unconstrained space: partial-autocorrelation coordinates mapped through
tanh keep every visited AR and MA polynomial's roots outside modulus
``ROOT_MARGIN``, avoiding pile-up at the unit circle.
"""

from __future__ import annotations

import datetime as dt
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_discrete_lyapunov
from scipy.optimize import minimize
from scipy.signal import lfilter

from ._filters import KF_OK, css_errors, kalman_filter
from .core import TimeSeries, _as_float_array, difference
from .errors import (
    ConvergenceError,
    DegenerateSeriesError,
    InsufficientDataError,
    ValidationError,
)

LOG_2PI = math.log(2.0 * math.pi)

# Fitted polynomial roots are kept strictly outside this modulus.
ROOT_MARGIN = 1.001

# Objective value returned where the likelihood is undefined; finite so the
# simplex can recover from excursions outside the feasible region.
_PENALTY = 1e10

_SIM_BURN_IN = 300
_SIM_START = dt.date(2020, 1, 1)


@dataclass(frozen=True)
class ArimaOrder:
    """Nonseasonal order triple: AR lags p, differences d, MA lags q."""

    p: int
    d: int
    q: int

    def __post_init__(self):
        for name, value in (("p", self.p), ("d", self.d), ("q", self.q)):
            if not isinstance(value, (int, np.integer)) or value < 0:
                raise ValidationError(f"order component {name} must be a nonnegative int, got {value!r}")

    @classmethod
    def parse(cls, text: str) -> "ArimaOrder":
        """Parse 'p,d,q' (e.g. '4,2,4')."""
        parts = text.split(",")
        if len(parts) != 3:
            raise ValidationError(f"order must be 'p,d,q', got {text!r}")
        try:
            p, d, q = (int(part.strip()) for part in parts)
        except ValueError as exc:
            raise ValidationError(f"order must be three integers, got {text!r}") from exc
        return cls(p, d, q)

    def __str__(self) -> str:
        return f"({self.p},{self.d},{self.q})"


@dataclass(frozen=True)
class ArimaModel:
    """A fitted (or explicitly parameterized) ARIMA model.

    Coefficients follow the additive moving-average convention
    w_t - mu = sum_i ar_i (w_{t-i} - mu) + e_t + sum_j ma_j e_{t-j}
    on the d-times differenced scale w. ``residuals`` are one-step
    prediction errors and ``fitted`` their complements (both on the
    differenced scale); ``stderr`` aligns with ar + ma + (constant,).
    """

    order: ArimaOrder
    ar: np.ndarray
    ma: np.ndarray
    constant: float | None
    sigma2: float
    loglik: float
    aic: float
    aicc: float
    n_effective: int
    residuals: np.ndarray
    fitted: np.ndarray
    stderr: np.ndarray
    series: TimeSeries

    def __post_init__(self):
        for name in ("ar", "ma", "residuals", "fitted", "stderr"):
            arr = _as_float_array(getattr(self, name)).copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if len(self.ar) != self.order.p or len(self.ma) != self.order.q:
            raise ValidationError("coefficient lengths do not match the order")
        if not self.sigma2 > 0:
            raise ValidationError(f"sigma2 must be positive, got {self.sigma2}")
        if len(self.residuals) != self.n_effective or len(self.fitted) != self.n_effective:
            raise ValidationError("residuals/fitted must have length n_effective")
        expected_se = self.order.p + self.order.q + (1 if self.constant is not None else 0)
        if len(self.stderr) != expected_se:
            raise ValidationError("stderr must align with ar + ma (+ constant)")

    @property
    def has_constant(self) -> bool:
        return self.constant is not None

    @property
    def mu(self) -> float:
        return self.constant if self.constant is not None else 0.0

    @property
    def k_params(self) -> int:
        """Parameter count for information criteria; sigma2 counts as one."""
        return self.order.p + self.order.q + 1 + (1 if self.has_constant else 0)

    @property
    def diff_values(self) -> np.ndarray:
        return difference(self.series.values, self.order.d)

    @property
    def coefficient_names(self) -> list[str]:
        names = [f"ar{i}" for i in range(1, self.order.p + 1)]
        names += [f"ma{j}" for j in range(1, self.order.q + 1)]
        if self.has_constant:
            names.append("constant")
        return names

    def coefficient_values(self) -> np.ndarray:
        vals = list(self.ar) + list(self.ma)
        if self.has_constant:
            vals.append(self.constant)
        return np.asarray(vals, dtype=float)


def ar_root_moduli(ar) -> np.ndarray:
    """Moduli of the roots of 1 - ar_1 z - ... - ar_p z^p (empty if p = 0)."""
    ar = _as_float_array(ar)
    if len(ar) == 0 or not np.any(ar):
        return np.array([])
    roots = np.roots(np.concatenate([-ar[::-1], [1.0]]))
    return np.abs(roots)


def ma_root_moduli(ma) -> np.ndarray:
    """Moduli of the roots of 1 + ma_1 z + ... + ma_q z^q (empty if q = 0)."""
    ma = _as_float_array(ma)
    if len(ma) == 0 or not np.any(ma):
        return np.array([])
    roots = np.roots(np.concatenate([ma[::-1], [1.0]]))
    return np.abs(roots)


def min_root_modulus(model: ArimaModel) -> float:
    """Smallest AR or MA root modulus; inf when there are no roots."""
    moduli = np.concatenate([ar_root_moduli(model.ar), ma_root_moduli(model.ma)])
    return float(moduli.min()) if len(moduli) else math.inf


def _is_stationary(ar) -> bool:
    moduli = ar_root_moduli(ar)
    return len(moduli) == 0 or bool(moduli.min() > 1.0)


def _is_invertible(ma) -> bool:
    moduli = ma_root_moduli(ma)
    return len(moduli) == 0 or bool(moduli.min() > 1.0)


# --- unconstrained parameterization -----------------------------------------
#
# tanh of the optimizer coordinates gives partial autocorrelations in (-1,1);
# the Levinson recursion maps those to a stationary coefficient vector, and a
# final geometric shrink by ROOT_MARGIN^-i pushes every root strictly outside
# modulus ROOT_MARGIN.


def _pacf_to_coef(partials: np.ndarray) -> np.ndarray:
    coefs: list[float] = []
    for k, r in enumerate(partials, start=1):
        coefs = [coefs[i] - r * coefs[k - 2 - i] for i in range(k - 1)] + [float(r)]
    return np.asarray(coefs, dtype=float)


def _coef_to_pacf(coefs: np.ndarray) -> np.ndarray:
    current = np.asarray(coefs, dtype=float).copy()
    partials = np.empty(len(current))
    for k in range(len(current), 0, -1):
        r = current[k - 1]
        if not abs(r) < 1.0:
            raise ValueError("coefficients outside the stationary region")
        partials[k - 1] = r
        if k > 1:
            head = current[: k - 1]
            current = (head + r * head[::-1]) / (1.0 - r * r)
    return partials


def _margin_scale(k: int) -> np.ndarray:
    return ROOT_MARGIN ** -np.arange(1.0, k + 1.0)


def _stationary_from_unconstrained(x: np.ndarray) -> np.ndarray:
    if len(x) == 0:
        return np.array([])
    return _pacf_to_coef(np.tanh(x)) * _margin_scale(len(x))


def _unconstrained_from_stationary(coefs: np.ndarray) -> np.ndarray:
    """Inverse of :func:`_stationary_from_unconstrained`, projecting inward
    (geometric shrink toward zero) when the input sits outside the margin."""
    coefs = _as_float_array(coefs)
    if len(coefs) == 0:
        return np.array([])
    scaled = coefs / _margin_scale(len(coefs))
    for _ in range(200):
        try:
            partials = _coef_to_pacf(scaled)
        except ValueError:
            scaled = scaled * 0.9
            continue
        if np.all(np.abs(partials) < 1.0 - 1e-12):
            return np.arctanh(np.clip(partials, -1.0 + 1e-12, 1.0 - 1e-12))
        scaled = scaled * 0.9
    return np.zeros(len(coefs))


# --- state-space machinery ---------------------------------------------------


def _state_space(ar: np.ndarray, ma: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    p, q = len(ar), len(ma)
    m = max(p, q + 1)
    phi_col = np.zeros(m)
    phi_col[:p] = ar
    r_vec = np.zeros(m)
    r_vec[0] = 1.0
    r_vec[1 : q + 1] = ma
    return phi_col, r_vec


def _stationary_covariance(phi_col: np.ndarray, r_vec: np.ndarray) -> np.ndarray | None:
    m = len(phi_col)
    T = np.zeros((m, m))
    T[:, 0] = phi_col
    T[: m - 1, 1:] = np.eye(m - 1)
    try:
        P0 = solve_discrete_lyapunov(T, np.outer(r_vec, r_vec))
    except Exception:
        return None
    if not np.all(np.isfinite(P0)):
        return None
    return 0.5 * (P0 + P0.T)


def _filter_stats(centered: np.ndarray, ar: np.ndarray, ma: np.ndarray):
    """Run the exact filter; returns (sum_log_F, ssq, v) or None if degenerate."""
    phi_col, r_vec = _state_space(ar, ma)
    P0 = _stationary_covariance(phi_col, r_vec)
    if P0 is None:
        return None
    status, sum_log_f, ssq, v = kalman_filter(
        np.ascontiguousarray(centered), phi_col, r_vec, P0
    )
    if status != KF_OK or not np.isfinite(sum_log_f) or not np.isfinite(ssq):
        return None
    return sum_log_f, ssq, v


def log_likelihood(order: ArimaOrder, ar, ma, constant, sigma2: float, diff_values) -> float:
    """Exact Gaussian log-likelihood of an ARMA(p,q) on the differenced scale.

    ``diff_values`` is the already d-times differenced series; ``constant``
    (None for zero) is its process mean. Coefficients must be stationary and
    invertible so the stationary initial state covariance exists.
    """
    ar = _as_float_array(ar)
    ma = _as_float_array(ma)
    x = _as_float_array(diff_values)
    if len(ar) != order.p or len(ma) != order.q:
        raise ValidationError("coefficient lengths do not match the order")
    if len(x) == 0:
        raise InsufficientDataError("diff_values must be nonempty")
    if not sigma2 > 0:
        raise ValidationError(f"sigma2 must be positive, got {sigma2}")
    if not _is_stationary(ar):
        raise ValidationError("AR coefficients are not stationary (root inside the unit circle)")
    if not _is_invertible(ma):
        raise ValidationError("MA coefficients are not invertible (root inside the unit circle)")
    mu = float(constant) if constant is not None else 0.0
    stats = _filter_stats(x - mu, ar, ma)
    if stats is None:
        raise ValidationError("state-space filter degenerate for these coefficients")
    sum_log_f, ssq, _ = stats
    n = len(x)
    return -0.5 * (n * LOG_2PI + n * math.log(sigma2) + sum_log_f + ssq / sigma2)


def css_objective(order: ArimaOrder, ar, ma, constant, diff_values) -> float:
    """Conditional sum of squared one-step errors (pre-sample errors zero).

    No stationarity or invertibility is required; used to initialize the
    exact-likelihood optimizer.
    """
    ar = _as_float_array(ar)
    ma = _as_float_array(ma)
    x = _as_float_array(diff_values)
    if len(ar) != order.p or len(ma) != order.q:
        raise ValidationError("coefficient lengths do not match the order")
    if len(x) <= order.p:
        raise InsufficientDataError(
            f"need more than p={order.p} observations for the CSS recursion, got {len(x)}"
        )
    mu = float(constant) if constant is not None else 0.0
    e = css_errors(x - mu, ar, ma)
    return float(np.dot(e[order.p :], e[order.p :]))


def aicc(loglik: float, k: int, n: int) -> float:
    """Small-sample corrected Akaike criterion: AIC + 2k(k+1)/(n-k-1)."""
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    if n <= k + 1:
        raise ValidationError(f"AICc undefined for n={n} <= k+1={k + 1}")
    return -2.0 * loglik + 2.0 * k + 2.0 * k * (k + 1.0) / (n - k - 1.0)


# --- fitting -----------------------------------------------------------------


def _hannan_rissanen(xc: np.ndarray, p: int, q: int) -> tuple[np.ndarray, np.ndarray]:
    """Two-stage regression start values; zeros when the sample is too short."""
    n = len(xc)
    zeros = (np.zeros(p), np.zeros(q))
    if p + q == 0:
        return zeros
    L = min(max(8, p + q + 4), (n - p - q - 2) // 2)
    if L < 1 or n - L - q <= p + q + 1:
        return zeros
    X = np.column_stack([xc[L - 1 - i : n - 1 - i] for i in range(L)])
    beta, *_ = np.linalg.lstsq(X, xc[L:], rcond=None)
    e_hat = np.zeros(n)
    e_hat[L:] = xc[L:] - X @ beta
    t0 = max(p, L + q)
    cols = [xc[t0 - 1 - i : n - 1 - i] for i in range(p)]
    cols += [e_hat[t0 - 1 - j : n - 1 - j] for j in range(q)]
    X2 = np.column_stack(cols)
    coef, *_ = np.linalg.lstsq(X2, xc[t0:], rcond=None)
    coef = np.where(np.isfinite(coef), coef, 0.0)
    return coef[:p], coef[p:]


def _fit_closed_form(series, order, include_constant, w):
    n = len(w)
    mu = float(np.mean(w)) if include_constant else None
    resid = w - (mu or 0.0)
    sigma2 = float(np.dot(resid, resid)) / n
    if not sigma2 > 0:
        raise DegenerateSeriesError("differenced series is constant; variance is zero")
    loglik = -0.5 * n * (LOG_2PI + 1.0 + math.log(sigma2))
    k = 1 + (1 if include_constant else 0)
    stderr = np.array([math.sqrt(sigma2 / n)]) if include_constant else np.array([])
    return ArimaModel(
        order=order,
        ar=np.array([]),
        ma=np.array([]),
        constant=mu,
        sigma2=sigma2,
        loglik=loglik,
        aic=-2.0 * loglik + 2.0 * k,
        aicc=aicc(loglik, k, n),
        n_effective=n,
        residuals=resid,
        fitted=w - resid,
        stderr=stderr,
        series=series,
    )


def _hessian_stderr(neg_loglik, theta: np.ndarray) -> np.ndarray:
    """Standard errors from the inverse central-difference Hessian.

    ``neg_loglik`` returns None where the likelihood is undefined; steps
    shrink toward the evaluation point until all stencil points are feasible,
    and entries that never become feasible turn into NaN.
    """
    k = len(theta)
    if k == 0:
        return np.array([])
    base = neg_loglik(theta)
    if base is None:
        return np.full(k, np.nan)
    steps = 1e-4 * np.maximum(1.0, np.abs(theta))
    H = np.full((k, k), np.nan)

    def eval_shrinking(i, j, si, sj):
        for _ in range(5):
            e_i = np.zeros(k)
            e_i[i] = si
            e_j = np.zeros(k)
            e_j[j] = sj
            if i == j:
                fp = neg_loglik(theta + e_i)
                fm = neg_loglik(theta - e_i)
                if fp is not None and fm is not None:
                    return (fp - 2.0 * base + fm) / (si * si)
            else:
                fpp = neg_loglik(theta + e_i + e_j)
                fpm = neg_loglik(theta + e_i - e_j)
                fmp = neg_loglik(theta - e_i + e_j)
                fmm = neg_loglik(theta - e_i - e_j)
                if None not in (fpp, fpm, fmp, fmm):
                    return (fpp - fpm - fmp + fmm) / (4.0 * si * sj)
            si *= 0.2
            sj *= 0.2
        return np.nan

    for i in range(k):
        H[i, i] = eval_shrinking(i, i, steps[i], steps[i])
        for j in range(i + 1, k):
            H[i, j] = H[j, i] = eval_shrinking(i, j, steps[i], steps[j])
    if not np.all(np.isfinite(H)):
        return np.full(k, np.nan)
    try:
        cov = np.linalg.inv(H)
    except np.linalg.LinAlgError:
        cov = np.linalg.pinv(H)
    var = np.diag(cov)
    return np.where(var > 0, np.sqrt(np.abs(var)), np.nan)


def fit(
    series: TimeSeries,
    order: ArimaOrder,
    include_constant: bool | None = None,
    *,
    seed: int = 0,
    max_restarts: int = 3,
    maxfev: int = 5000,
) -> ArimaModel:
    """Fit an ARIMA model by exact Gaussian maximum likelihood.

    Estimation runs conditional-sum-of-squares first, then refines the exact
    likelihood with an adaptive Nelder-Mead simplex in the unconstrained
    parameterization; the innovation variance is concentrated out. Up to
    ``max_restarts`` jittered restarts recover from non-convergence, after
    which a :class:`ConvergenceError` carrying the best model so far is
    raised.

    ``include_constant`` defaults to True only for d = 0: differenced models
    exclude the mean unless explicitly requested. The constant is the mean of
    the d-times differenced series.
    """
    if not isinstance(series, TimeSeries):
        series = TimeSeries.from_start(_SIM_START, series)
    p, d, q = order.p, order.d, order.q
    if include_constant is None:
        include_constant = d == 0
    w = difference(series.values, d)
    n = len(w)
    min_n = max(8, 3 * (p + q + 1))
    if n < min_n:
        raise InsufficientDataError(
            f"need at least {min_n} observations after differencing for order {order}, got {n}"
        )
    if np.ptp(w) == 0.0 and not include_constant and (p + q) > 0:
        raise DegenerateSeriesError("differenced series is constant")
    if p + q == 0:
        return _fit_closed_form(series, order, include_constant, w)

    n_coef = p + q
    dim = n_coef + (1 if include_constant else 0)
    w_mean = float(np.mean(w))

    def unpack(x):
        ar = _stationary_from_unconstrained(x[:p])
        ma = -_stationary_from_unconstrained(x[p:n_coef])
        mu = x[n_coef] if include_constant else 0.0
        return ar, ma, mu

    def css_at(x):
        ar, ma, mu = unpack(x)
        e = css_errors(w - mu, ar, ma)
        val = float(np.dot(e[p:], e[p:]))
        return val if np.isfinite(val) else _PENALTY

    def concentrated_nll(x):
        ar, ma, mu = unpack(x)
        stats = _filter_stats(w - mu, ar, ma)
        if stats is None:
            return _PENALTY
        sum_log_f, ssq, _ = stats
        if ssq <= 0.0:
            return _PENALTY
        val = 0.5 * (n * (LOG_2PI + 1.0 + math.log(ssq / n)) + sum_log_f)
        return val if np.isfinite(val) else _PENALTY

    # CSS start: Hannan-Rissanen regressions projected into the feasible
    # region, against a zero start as a fallback.
    hr_ar, hr_ma = _hannan_rissanen(w - w_mean if include_constant else w, p, q)
    starts = []
    for ar0, ma0 in ((hr_ar, hr_ma), (np.zeros(p), np.zeros(q))):
        x0 = np.concatenate(
            [
                _unconstrained_from_stationary(ar0),
                _unconstrained_from_stationary(-ma0),
                [w_mean] if include_constant else [],
            ]
        )
        starts.append(x0)
    x_css = min(starts, key=css_at)
    nm_options = dict(maxfev=maxfev, fatol=1e-8, xatol=1e-8, adaptive=dim > 2)
    stage1 = minimize(css_at, x_css, method="Nelder-Mead", options=nm_options)

    rng = np.random.default_rng((abs(seed), p, q, n))
    best_x = None
    best_val = math.inf
    converged = False
    start = stage1.x if np.isfinite(stage1.fun) else x_css
    for attempt in range(1 + max_restarts):
        res = minimize(concentrated_nll, start, method="Nelder-Mead", options=nm_options)
        # restart the simplex at its own solution; cheap insurance against
        # premature collapse on ridge-shaped likelihoods
        res2 = minimize(concentrated_nll, res.x, method="Nelder-Mead", options=nm_options)
        if res2.fun <= res.fun:
            res = res2
        if res.fun < best_val:
            best_val = res.fun
            best_x = res.x
        if res.success and res.fun < _PENALTY:
            converged = True
            break
        start = best_x + rng.normal(scale=0.5, size=dim)

    if best_x is None or best_val >= _PENALTY:
        raise ConvergenceError(f"likelihood optimization failed for order {order}")

    ar_hat, ma_hat, mu_hat = unpack(best_x)
    stats = _filter_stats(w - mu_hat, ar_hat, ma_hat)
    if stats is None:
        raise ConvergenceError(f"final filter evaluation degenerate for order {order}")
    sum_log_f, ssq, v = stats
    sigma2 = ssq / n
    if not sigma2 > 0:
        raise DegenerateSeriesError("estimated innovation variance is zero")
    loglik = -0.5 * (n * (LOG_2PI + 1.0 + math.log(sigma2)) + sum_log_f)
    k = p + q + 1 + (1 if include_constant else 0)

    def nll_at_coefs(theta):
        ar = theta[:p]
        ma = theta[p:n_coef]
        mu = theta[n_coef] if include_constant else 0.0
        if not (_is_stationary(ar) and _is_invertible(ma)):
            return None
        stats_local = _filter_stats(w - mu, ar, ma)
        if stats_local is None:
            return None
        slf, sq, _ = stats_local
        if sq <= 0.0:
            return None
        return 0.5 * (n * (LOG_2PI + 1.0 + math.log(sq / n)) + slf)

    theta_hat = np.concatenate([ar_hat, ma_hat, [mu_hat] if include_constant else []])
    stderr = _hessian_stderr(nll_at_coefs, theta_hat)

    model = ArimaModel(
        order=order,
        ar=ar_hat,
        ma=ma_hat,
        constant=mu_hat if include_constant else None,
        sigma2=float(sigma2),
        loglik=float(loglik),
        aic=-2.0 * loglik + 2.0 * k,
        aicc=aicc(loglik, k, n),
        n_effective=n,
        residuals=v,
        fitted=w - v,
        stderr=stderr,
        series=series,
    )
    if not converged:
        raise ConvergenceError(
            f"Nelder-Mead did not converge for order {order} after {max_restarts} restarts",
            best=model,
        )
    return model


def model_from_params(
    series: TimeSeries,
    order: ArimaOrder,
    ar,
    ma,
    constant: float | None = None,
    sigma2: float | None = None,
) -> ArimaModel:
    """Build a model with known coefficients (no estimation).

    ``sigma2=None`` plugs in its maximum-likelihood value given the other
    parameters. Standard errors are NaN since nothing was estimated from the
    curvature.
    """
    ar = _as_float_array(ar)
    ma = _as_float_array(ma)
    p, d, q = order.p, order.d, order.q
    if len(ar) != p or len(ma) != q:
        raise ValidationError("coefficient lengths do not match the order")
    if not (_is_stationary(ar) and _is_invertible(ma)):
        raise ValidationError("coefficients must be stationary and invertible")
    w = difference(series.values, d)
    n = len(w)
    mu = float(constant) if constant is not None else 0.0
    stats = _filter_stats(w - mu, ar, ma)
    if stats is None:
        raise ValidationError("state-space filter degenerate for these coefficients")
    sum_log_f, ssq, v = stats
    if sigma2 is None:
        sigma2 = ssq / n
        if not sigma2 > 0:
            raise DegenerateSeriesError("implied innovation variance is zero")
    elif not sigma2 > 0:
        raise ValidationError(f"sigma2 must be positive, got {sigma2}")
    loglik = -0.5 * (n * LOG_2PI + n * math.log(sigma2) + sum_log_f + ssq / sigma2)
    k = p + q + 1 + (1 if constant is not None else 0)
    return ArimaModel(
        order=order,
        ar=ar,
        ma=ma,
        constant=constant,
        sigma2=float(sigma2),
        loglik=float(loglik),
        aic=-2.0 * loglik + 2.0 * k,
        aicc=aicc(loglik, k, n),
        n_effective=n,
        residuals=v,
        fitted=w - v,
        stderr=np.full(p + q + (1 if constant is not None else 0), np.nan),
        series=series,
    )


def simulate(
    order: ArimaOrder,
    ar,
    ma,
    constant: float,
    sigma2: float,
    n: int,
    seed: int,
    *,
    label: str | None = None,
) -> TimeSeries:
    """Simulate an ARIMA path (deterministic per seed).

    The ARMA recursion runs with a burn-in of ``_SIM_BURN_IN`` points that is
    discarded before integrating d times (zero initial levels). Dates are
    synthetic consecutive days.
    """
    ar = _as_float_array(ar)
    ma = _as_float_array(ma)
    if len(ar) != order.p or len(ma) != order.q:
        raise ValidationError("coefficient lengths do not match the order")
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if sigma2 < 0:
        raise ValidationError(f"sigma2 must be >= 0, got {sigma2}")
    if not (_is_stationary(ar) and _is_invertible(ma)):
        raise ValidationError("simulation requires stationary, invertible coefficients")
    rng = np.random.default_rng(seed)
    eps = rng.normal(0.0, math.sqrt(sigma2), size=_SIM_BURN_IN + n)
    b = np.concatenate([[1.0], ma])
    a = np.concatenate([[1.0], -ar])
    w = lfilter(b, a, eps)[_SIM_BURN_IN:] + float(constant)
    for _ in range(order.d):
        w = np.cumsum(w)
    return TimeSeries.from_start(
        _SIM_START, w, label=label if label is not None else f"simulated ARIMA{order}"
    )
