"""Automatic ARIMA order search minimizing AICc.

Two strategies: a stepwise neighborhood walk from standard seed orders, and
an exhaustive grid over (p, q) at a fixed differencing order. Both produce
ranked candidate rows carrying in-sample accuracy metrics so results read
like a model-comparison table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .accuracy import adj_r2, mae, mape, mase, rmse
from .core import TimeSeries
from .errors import EpiArimaError, SearchFailureError, ValidationError
from .estimation import ArimaModel, ArimaOrder, fit, min_root_modulus
from .forecast import fitted_values
from .stationarity import choose_d

# Candidates whose smallest root modulus falls at the search boundary
# (ROOT_MARGIN = 1.001) are near-unit-root; they stay ranked but flagged.
_BOUNDARY_FLAG_MODULUS = 1.002


@dataclass(frozen=True)
class SearchConfig:
    """Order-search settings.

    ``fixed_d`` pins the differencing order; otherwise the KPSS chooser picks
    it. ``allow_constant`` lets candidates carry a mean (included by default
    only at d = 0) and lets the stepwise walk toggle it.
    """

    max_p: int = 8
    max_q: int = 8
    max_d: int = 2
    stepwise: bool = True
    allow_constant: bool = True
    fixed_d: int | None = None

    def __post_init__(self):
        if self.max_p < 1 or self.max_q < 1:
            raise ValidationError("max_p and max_q must be >= 1")
        if self.max_d < 0:
            raise ValidationError("max_d must be >= 0")
        if self.fixed_d is not None and not 0 <= self.fixed_d <= self.max_d:
            raise ValidationError(f"fixed_d must lie in [0, max_d={self.max_d}]")


@dataclass(frozen=True)
class CandidateRow:
    """One fitted candidate with its comparison metrics.

    Metrics are computed on the same in-sample fitted values stored in
    ``model``; metric fields are NaN where undefined (e.g. MAPE with a zero
    actual).
    """

    order: ArimaOrder
    aicc: float
    mae: float
    mape: float
    mase: float
    rmse: float
    adj_r2: float
    model: ArimaModel
    flagged: bool = False


@dataclass(frozen=True)
class StepwiseResult:
    best: CandidateRow
    visited: list[CandidateRow]
    failures: list[tuple[ArimaOrder, str]]
    d: int


@dataclass(frozen=True)
class GridResult:
    rows: list[CandidateRow]
    failures: list[tuple[ArimaOrder, str]]
    d: int


def candidate_row(model: ArimaModel) -> CandidateRow:
    """Build the comparison row for a fitted model."""
    d = model.order.d
    actual = model.series.values[d:]
    predicted = fitted_values(model)[d:]
    training = model.series.values
    k_model = model.order.p + model.order.q + (1 if model.has_constant else 0)

    def guarded(func, *args):
        try:
            return func(*args)
        except EpiArimaError:
            return math.nan

    return CandidateRow(
        order=model.order,
        aicc=model.aicc,
        mae=guarded(mae, actual, predicted),
        mape=guarded(mape, actual, predicted),
        mase=guarded(mase, actual, predicted, training),
        rmse=guarded(rmse, actual, predicted),
        adj_r2=guarded(adj_r2, actual, predicted, max(k_model, 1)),
        model=model,
        flagged=min_root_modulus(model) < _BOUNDARY_FLAG_MODULUS,
    )


def _rank_key(row: CandidateRow) -> tuple:
    return (row.aicc, row.order.p + row.order.q, row.order.p)


def _resolve_d(series: TimeSeries, config: SearchConfig) -> int:
    if config.fixed_d is not None:
        return config.fixed_d
    return choose_d(series, max_d=config.max_d)


def grid_search(
    series: TimeSeries,
    config: SearchConfig = SearchConfig(),
    *,
    orders: list[ArimaOrder] | None = None,
    seed: int = 0,
) -> GridResult:
    """Fit every (p, q) pair up to the configured maxima at one d.

    ``orders`` overrides the rectangular grid with an explicit candidate set
    (all sharing the same d). Rows come back sorted by ascending AICc with a
    deterministic (p+q, then p) tie-break; per-cell fit failures are recorded,
    not fatal.
    """
    if orders is None:
        d = _resolve_d(series, config)
        orders = [
            ArimaOrder(p, d, q)
            for p in range(config.max_p + 1)
            for q in range(config.max_q + 1)
        ]
    else:
        ds = {order.d for order in orders}
        if len(ds) != 1:
            raise ValidationError(f"explicit candidates must share one d, got {sorted(ds)}")
        d = ds.pop()
    include_constant = config.allow_constant and d == 0
    rows: list[CandidateRow] = []
    failures: list[tuple[ArimaOrder, str]] = []
    for order in orders:
        try:
            model = fit(series, order, include_constant=include_constant, seed=seed)
        except EpiArimaError as exc:
            failures.append((order, f"{type(exc).__name__}: {exc}"))
            continue
        rows.append(candidate_row(model))
    if not rows:
        raise SearchFailureError(
            f"every candidate failed to fit on {series.label!r}",
            causes={str(order): cause for order, cause in failures},
        )
    rows.sort(key=_rank_key)
    return GridResult(rows=rows, failures=failures, d=d)


def stepwise_search(
    series: TimeSeries,
    config: SearchConfig = SearchConfig(),
    *,
    seed: int = 0,
) -> StepwiseResult:
    """Neighborhood walk over (p, q) and the constant, minimizing AICc.

    Seeds with (2,d,2), (0,d,0), (1,d,0), (0,d,1); repeatedly moves p and/or
    q by one (toggling the constant where allowed) and accepts only strict
    AICc improvement, so it terminates at a local minimum. Deterministic for
    fixed inputs: ties break toward fewer parameters, then lower p.
    """
    d = _resolve_d(series, config)
    base_constant = config.allow_constant and d == 0
    visited: dict[tuple[int, int, bool], CandidateRow | None] = {}
    failures: list[tuple[ArimaOrder, str]] = []

    def evaluate(p: int, q: int, constant: bool) -> CandidateRow | None:
        key = (p, q, constant)
        if key in visited:
            return visited[key]
        order = ArimaOrder(p, d, q)
        try:
            model = fit(series, order, include_constant=constant, seed=seed)
        except EpiArimaError as exc:
            failures.append((order, f"{type(exc).__name__}: {exc}"))
            visited[key] = None
            return None
        row = candidate_row(model)
        visited[key] = row
        return row

    def better(challenger: CandidateRow | None, incumbent: CandidateRow | None) -> bool:
        if challenger is None:
            return False
        if incumbent is None:
            return True
        return _rank_key(challenger) < _rank_key(incumbent)

    seeds = [(2, 2), (0, 0), (1, 0), (0, 1)]
    best: CandidateRow | None = None
    for p, q in seeds:
        row = evaluate(min(p, config.max_p), min(q, config.max_q), base_constant)
        if better(row, best):
            best = row
    if best is None:
        raise SearchFailureError(
            f"every seed candidate failed to fit on {series.label!r}",
            causes={str(order): cause for order, cause in failures},
        )

    moves = [(-1, 0), (1, 0), (0, -1), (0, 1), (-1, -1), (1, 1), (-1, 1), (1, -1)]
    improved = True
    while improved:
        improved = False
        p0, q0 = best.order.p, best.order.q
        const0 = best.model.has_constant
        neighbors: list[tuple[int, int, bool]] = []
        for dp, dq in moves:
            p1, q1 = p0 + dp, q0 + dq
            if 0 <= p1 <= config.max_p and 0 <= q1 <= config.max_q:
                neighbors.append((p1, q1, const0))
        if config.allow_constant:
            neighbors.append((p0, q0, not const0))
        for p1, q1, c1 in neighbors:
            row = evaluate(p1, q1, c1)
            if row is not None and row.aicc < best.aicc:
                best = row
                improved = True
                break

    rows_seen = [row for row in visited.values() if row is not None]
    rows_seen.sort(key=_rank_key)
    return StepwiseResult(best=best, visited=rows_seen, failures=failures, d=d)
