"""CSV ingestion, cumulative-to-daily conversion, window slicing, and the
bundled country datasets.

The CSV carrier is deliberately minimal: header ``date,value``, ISO-8601
dates, UTF-8, one row per consecutive day. Loading validates the daily-series
contract and reports offending line numbers; see data/PROVENANCE.md for where
the bundled files come from.
"""

from __future__ import annotations

import csv
import datetime as dt
import warnings
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .core import TimeSeries
from .errors import (
    CsvParseError,
    DataIntegrityError,
    InsufficientDataError,
    ValidationError,
)

# A usable ARIMA window needs 40-50 observations at minimum: hard-fail below
# 40, warn below 50.
MIN_WINDOW_HARD = 40
MIN_WINDOW_SOFT = 50


@dataclass(frozen=True)
class BundledDataset:
    """Window bounds and evaluation end date for one bundled country."""

    country: str
    window_start: dt.date
    window_end: dt.date
    eval_end: dt.date


BUNDLED: dict[str, BundledDataset] = {
    "italy": BundledDataset("italy", dt.date(2020, 2, 22), dt.date(2020, 4, 14), dt.date(2020, 5, 26)),
    "usa": BundledDataset("usa", dt.date(2020, 3, 9), dt.date(2020, 5, 16), dt.date(2020, 6, 4)),
    "russia": BundledDataset("russia", dt.date(2020, 3, 22), dt.date(2020, 5, 22), dt.date(2020, 6, 2)),
}


@dataclass(frozen=True)
class DatasetWindow:
    """A validated modeling window cut from a longer series."""

    source: str
    country: str
    start: dt.date
    end: dt.date
    series: TimeSeries

    def __post_init__(self):
        n = len(self.series)
        if n < MIN_WINDOW_HARD:
            raise InsufficientDataError(
                f"window has {n} observations; at least {MIN_WINDOW_HARD} required"
            )
        if n < MIN_WINDOW_SOFT:
            warnings.warn(
                f"window has {n} observations; fewer than the recommended "
                f"{MIN_WINDOW_SOFT}",
                stacklevel=2,
            )


def load_csv(
    path,
    date_column: str = "date",
    value_column: str = "value",
    date_format: str = "%Y-%m-%d",
    label: str | None = None,
) -> TimeSeries:
    """Load a daily series from CSV, rejecting gaps and duplicates.

    Malformed rows raise :class:`CsvParseError` with the 1-based line number;
    date gaps, duplicates, and out-of-order rows raise
    :class:`DataIntegrityError` naming the offending date.
    """
    path = str(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvParseError(f"{path}: empty file", line=1) from None
        header = [h.strip() for h in header]
        try:
            date_idx = header.index(date_column)
            value_idx = header.index(value_column)
        except ValueError:
            raise CsvParseError(
                f"{path}: header {header!r} lacks required columns "
                f"{date_column!r} and {value_column!r}",
                line=1,
            ) from None
        dates: list[dt.date] = []
        values: list[float] = []
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) <= max(date_idx, value_idx):
                raise CsvParseError(f"{path}:{line_no}: too few columns", line=line_no)
            raw_date = row[date_idx].strip()
            raw_value = row[value_idx].strip()
            try:
                date = dt.datetime.strptime(raw_date, date_format).date()
            except ValueError:
                raise CsvParseError(
                    f"{path}:{line_no}: unparseable date {raw_date!r}", line=line_no
                ) from None
            try:
                value = float(raw_value)
            except ValueError:
                raise CsvParseError(
                    f"{path}:{line_no}: unparseable value {raw_value!r}", line=line_no
                ) from None
            if dates:
                step = (date - dates[-1]).days
                if step == 0:
                    raise DataIntegrityError(
                        f"{path}:{line_no}: duplicate date {date.isoformat()}"
                    )
                if step < 0:
                    raise DataIntegrityError(
                        f"{path}:{line_no}: dates out of order at {date.isoformat()}"
                    )
                if step > 1:
                    missing = dates[-1] + dt.timedelta(days=1)
                    raise DataIntegrityError(
                        f"{path}:{line_no}: missing day {missing.isoformat()} "
                        f"(gap before {date.isoformat()})"
                    )
            dates.append(date)
            values.append(value)
    if not dates:
        raise CsvParseError(f"{path}: no data rows", line=2)
    return TimeSeries(dates=tuple(dates), values=values, label=label if label is not None else path)


def save_csv(series: TimeSeries, path, date_column: str = "date", value_column: str = "value") -> None:
    """Serialize a series; round-trips losslessly through :func:`load_csv`."""
    with open(str(path), "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([date_column, value_column])
        for date, value in zip(series.dates, series.values):
            writer.writerow([date.isoformat(), repr(float(value))])


def cumulative_to_daily(series: TimeSeries) -> tuple[TimeSeries, list[dt.date]]:
    """First-difference a cumulative series, keeping day one as-is.

    Returns the daily series and the dates where it came out negative
    (cumulative decreases, i.e. upstream reporting corrections). Negative
    values are flagged, never clamped.
    """
    values = series.values
    daily = np.concatenate([[values[0]], np.diff(values)])
    anomalies = [series.dates[i] for i in np.flatnonzero(daily < 0)]
    if anomalies:
        warnings.warn(
            f"cumulative series {series.label!r} decreases on "
            f"{', '.join(d.isoformat() for d in anomalies)}",
            stacklevel=2,
        )
    return TimeSeries(dates=series.dates, values=daily, label=series.label), anomalies


def make_window(
    series: TimeSeries,
    start: dt.date,
    end: dt.date,
    country: str = "",
    source: str = "",
) -> DatasetWindow:
    """Slice a validated modeling window out of ``series``."""
    window = series.slice_dates(start, end)
    return DatasetWindow(
        source=source or series.label,
        country=country or series.label,
        start=start,
        end=end,
        series=window,
    )


def _bundled_path(country: str):
    if country not in BUNDLED:
        raise ValidationError(
            f"unknown bundled dataset {country!r}; choose from {sorted(BUNDLED)}"
        )
    return resources.files(__package__) / "data" / f"{country}.csv"


def bundled_series(country: str) -> TimeSeries:
    """Full bundled daily series (window plus the evaluation tail)."""
    with resources.as_file(_bundled_path(country)) as path:
        return load_csv(path, label=country)


def bundled_window(country: str) -> DatasetWindow:
    """The bundled country's modeling window."""
    series = bundled_series(country)
    spec = BUNDLED[country]
    return make_window(
        series, spec.window_start, spec.window_end, country=country, source=f"bundled:{country}"
    )


def bundled_actuals(country: str) -> TimeSeries:
    """Actual values after the modeling window, for forecast evaluation."""
    spec = BUNDLED[country]
    series = bundled_series(country)
    first = spec.window_end + dt.timedelta(days=1)
    return series.slice_dates(first, spec.eval_end)
